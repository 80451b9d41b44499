#pragma once

#include <stdexcept>
#include <string>

namespace riskpg {

/// Bad configuration or malformed input. CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// File could not be parsed (malformed JSON, missing fields, wrong shapes).
class ParseError : public ConfigError {
 public:
  explicit ParseError(const std::string& msg) : ConfigError(msg) {}
};

/// Input parsed but violates model invariants (e.g. non-stochastic rows).
class ValidationError : public ConfigError {
 public:
  explicit ValidationError(const std::string& msg) : ConfigError(msg) {}
};

/// Numerical failure (near-singular chain, variance below roundoff band).
/// CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A modelling assumption guard fired (variance floor, truncation storm).
/// CLI exit code 3.
class AssumptionError : public std::runtime_error {
 public:
  explicit AssumptionError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace riskpg
