#include "riskpg/exact_optim.hpp"

#include <algorithm>
#include <cmath>

#include "riskpg/errors.hpp"

namespace riskpg {

double penalty_g(double x) {
  const double m = std::max(0.0, x);
  return m * m;
}

double penalty_g_prime(double x) { return 2.0 * std::max(0.0, x); }

void validate(const PenaltyConfig& cfg) {
  if (!(cfg.lambda > 0.0)) throw ConfigError("penalty lambda must be > 0");
  if (!(cfg.b >= 0.0)) throw ConfigError("variance bound b must be >= 0");
  if (!(cfg.continuation_factor > 1.0))
    throw ConfigError("continuation_factor must be > 1");
  if (cfg.outer_iterations < 1) throw ConfigError("outer_iterations must be >= 1");
}

void validate(const AscentConfig& cfg) {
  if (!(cfg.a0 > 0.0)) throw ConfigError("step size a0 must be > 0");
  if (!(cfg.a_exp > 0.5 && cfg.a_exp <= 1.0))
    throw ConfigError("step exponent a_exp must lie in (0.5, 1]");
  if (cfg.max_iterations < 0) throw ConfigError("max_iterations must be >= 0");
  if (cfg.clip_theta && !(cfg.clip_lo < cfg.clip_hi))
    throw ConfigError("clip bounds must satisfy lo < hi");
}

double AscentConfig::step(long k) const {
  return constant_step ? a0 : a0 / std::pow(static_cast<double>(k) + 1.0, a_exp);
}

double objective_constrained(const EvalResult& eval, const PenaltyConfig& cfg) {
  return eval.j_star() - cfg.lambda * penalty_g(eval.v_star() - cfg.b);
}

namespace {

void clip(Eigen::VectorXd& theta, const AscentConfig& cfg) {
  if (!cfg.clip_theta) return;
  theta = theta.cwiseMax(cfg.clip_lo).cwiseMin(cfg.clip_hi);
}

// Shared ascent loop. direction_fn maps an EvalResult to the ascent direction
// or throws AssumptionError (Sharpe floor guard). objective_fn fills the trace
// column.
template <typename DirectionFn, typename ObjectiveFn>
OptTrace ascend(const FiniteMdp& mdp, const StatePolicy& start, const AscentConfig& ascent,
                DirectionFn&& direction_fn, ObjectiveFn&& objective_fn, long k_offset = 0) {
  validate(ascent);
  OptTrace trace;
  auto policy = start.clone();
  Eigen::VectorXd theta = policy->params();
  clip(theta, ascent);
  policy->set_params(theta);

  for (long k = 0;; ++k) {
    EvalResult eval;
    try {
      eval = evaluate(mdp, *policy);
    } catch (const NumericalError& e) {
      trace.status = TraceStatus::Error;
      trace.error_kind = ErrorKind::Numerical;
      trace.message = e.what();
      return trace;
    }

    Eigen::VectorXd direction;
    try {
      direction = direction_fn(eval);
    } catch (const AssumptionError& e) {
      trace.status = TraceStatus::Error;
      trace.error_kind = ErrorKind::Assumption;
      trace.message = e.what();
      return trace;
    }

    TraceRecord rec;
    rec.k = k_offset + k;
    rec.j = eval.j_star();
    rec.v = eval.v_star();
    rec.objective = objective_fn(eval);
    rec.direction_norm = direction.norm();
    rec.theta = theta;
    trace.records.push_back(std::move(rec));

    if (direction.norm() <= ascent.gradient_tolerance) {
      trace.status = TraceStatus::Converged;
      return trace;
    }
    if (k >= ascent.max_iterations) {
      trace.status = TraceStatus::MaxIterations;
      return trace;
    }

    theta += ascent.step(k) * direction;
    clip(theta, ascent);
    policy->set_params(theta);
  }
}

}  // namespace

OptTrace exact_constrained_ascent(const FiniteMdp& mdp, const StatePolicy& start,
                                  const PenaltyConfig& penalty, const AscentConfig& ascent) {
  if (!(penalty.b >= 0.0)) throw ConfigError("variance bound b must be >= 0");
  if (penalty.lambda < 0.0) throw ConfigError("penalty lambda must be >= 0");
  auto direction = [&penalty](const EvalResult& eval) -> Eigen::VectorXd {
    const double gp = penalty_g_prime(eval.v_star() - penalty.b);
    return eval.grad_j_star - penalty.lambda * gp * eval.grad_v_star;
  };
  auto objective = [&penalty](const EvalResult& eval) {
    return objective_constrained(eval, penalty);
  };
  return ascend(mdp, start, ascent, direction, objective);
}

OptTrace exact_sharpe_ascent(const FiniteMdp& mdp, const StatePolicy& start,
                             const AscentConfig& ascent, double variance_floor) {
  if (!(variance_floor > 0.0)) throw ConfigError("variance_floor must be > 0");
  auto direction = [variance_floor](const EvalResult& eval) -> Eigen::VectorXd {
    const double v = eval.v_star();
    if (v < variance_floor)
      throw AssumptionError("V(x*) = " + std::to_string(v) + " fell below the variance floor " +
                            std::to_string(variance_floor));
    return (eval.grad_j_star - eval.j_star() / (2.0 * v) * eval.grad_v_star) / std::sqrt(v);
  };
  auto objective = [](const EvalResult& eval) {
    return eval.j_star() / std::sqrt(eval.v_star());
  };
  return ascend(mdp, start, ascent, direction, objective);
}

OptTrace penalty_continuation(const FiniteMdp& mdp, const StatePolicy& start,
                              PenaltyConfig penalty, const AscentConfig& ascent) {
  validate(penalty);
  OptTrace combined;
  auto policy = start.clone();
  long k_offset = 0;

  for (int round = 0; round < penalty.outer_iterations; ++round) {
    PenaltyConfig round_cfg = penalty;
    round_cfg.lambda = penalty.lambda * std::pow(penalty.continuation_factor, round);
    OptTrace trace = exact_constrained_ascent(mdp, *policy, round_cfg, ascent);

    // re-index iterates so the concatenated trace counts monotonically
    for (auto& rec : trace.records) {
      rec.k += k_offset;
      rec.round = round;
    }
    combined.records.insert(combined.records.end(), trace.records.begin(), trace.records.end());
    combined.status = trace.status;
    combined.error_kind = trace.error_kind;
    combined.message = trace.message;
    if (trace.status == TraceStatus::Error) return combined;

    k_offset += static_cast<long>(trace.records.size());
    policy->set_params(trace.final_theta());
  }
  return combined;
}

}  // namespace riskpg
