#pragma once

#include <Eigen/Core>
#include <limits>
#include <string>
#include <vector>

namespace riskpg {

enum class TraceStatus { Converged, MaxIterations, Error };

enum class ErrorKind { None, Numerical, Assumption };

/// One optimizer iterate. The exact algorithms fill every field; the
/// simulation algorithms fill j/v/objective/direction_norm from exact
/// evaluation at snapshot points when the environment is a finite MDP, and
/// leave them NaN otherwise.
struct TraceRecord {
  long k = 0;
  int round = 0;  // continuation outer round (0 for single runs)
  double j = std::numeric_limits<double>::quiet_NaN();
  double v = std::numeric_limits<double>::quiet_NaN();
  double objective = std::numeric_limits<double>::quiet_NaN();
  double direction_norm = std::numeric_limits<double>::quiet_NaN();
  double j_tilde = std::numeric_limits<double>::quiet_NaN();  // simulation only
  double v_tilde = std::numeric_limits<double>::quiet_NaN();  // simulation only
  Eigen::VectorXd theta;
};

struct OptTrace {
  std::vector<TraceRecord> records;
  TraceStatus status = TraceStatus::MaxIterations;
  ErrorKind error_kind = ErrorKind::None;
  std::string message;

  // simulation bookkeeping
  long truncated_episodes = 0;
  long clamp_events = 0;

  const TraceRecord& last() const { return records.back(); }
  const Eigen::VectorXd& final_theta() const { return records.back().theta; }
};

}  // namespace riskpg
