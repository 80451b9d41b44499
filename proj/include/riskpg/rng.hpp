#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>

#include "riskpg/errors.hpp"

namespace riskpg {

/// Seeded random stream. All sampling goes through this wrapper so that
/// runs are bit-reproducible given (seed, call order) — the uniform draw
/// is built from raw engine output instead of std::uniform_real_distribution,
/// whose algorithm is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t raw() { return engine_(); }

  /// Bernoulli(p).
  bool bernoulli(double p) { return uniform() < p; }

  /// Draw an index from a probability vector by cumulative inversion.
  int sample_discrete(const Eigen::VectorXd& probs) {
    const double u = uniform();
    double cum = 0.0;
    const int n = static_cast<int>(probs.size());
    for (int i = 0; i < n; ++i) {
      cum += probs[i];
      if (u < cum) return i;
    }
    return n - 1;  // guard against the row summing to 1 - eps
  }

 private:
  std::mt19937_64 engine_;
};

/// Deterministic, collision-resistant seed for substream `stream` of a master
/// seed (splitmix64 mix). Lets multi-run pipelines give every run its own
/// independent stream without consuming draws from a shared engine.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace riskpg
