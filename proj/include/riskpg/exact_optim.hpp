#pragma once

#include <Eigen/Core>

#include "riskpg/exact_eval.hpp"
#include "riskpg/mdp.hpp"
#include "riskpg/policy.hpp"
#include "riskpg/trace.hpp"

namespace riskpg {

/// Quadratic penalty g(x) = max(0, x)^2 and its derivative. g is C^1 with
/// g'(0) = 0, so no subgradient selection is needed at the constraint
/// boundary.
double penalty_g(double x);
double penalty_g_prime(double x);

/// Penalized constrained objective f_lambda = J(x*) - lambda g(V(x*) - b).
struct PenaltyConfig {
  double lambda = 1.0;             // penalty coefficient, > 0
  double b = 0.0;                  // variance bound, >= 0
  double continuation_factor = 10.0;  // lambda multiplier between outer rounds
  int outer_iterations = 4;
};
void validate(const PenaltyConfig& cfg);

/// Diminishing-step rule alpha_k = a0 / (k+1)^a_exp. a_exp in (0.5, 1] keeps
/// the steps square-summable but not summable; constant_step pins alpha_k at
/// a0 (used by the monotone-ascent check).
struct AscentConfig {
  double a0 = 0.1;
  double a_exp = 0.6;
  bool constant_step = false;
  long max_iterations = 1000;
  double gradient_tolerance = 1e-6;
  // Box clipping for direct-probability parameterizations where theta must
  // stay a valid probability. Off by default (softmax needs no box).
  bool clip_theta = false;
  double clip_lo = 0.01;
  double clip_hi = 0.99;

  double step(long k) const;
};
void validate(const AscentConfig& cfg);

double objective_constrained(const EvalResult& eval, const PenaltyConfig& cfg);

/// Gradient ascent on f_lambda:
///   theta_{k+1} = theta_k + alpha_k (grad J(x*) - lambda g'(V(x*) - b) grad V(x*))
/// Stops when the direction norm falls below gradient_tolerance or the
/// iteration budget runs out. Evaluation failures abort with a partial trace.
OptTrace exact_constrained_ascent(const FiniteMdp& mdp, const StatePolicy& start,
                                  const PenaltyConfig& penalty, const AscentConfig& ascent);

/// Ascent on the Sharpe ratio S = J(x*) / sqrt(V(x*)):
///   theta_{k+1} = theta_k + alpha_k / sqrt(V) (grad J - J / (2V) grad V)
/// Aborts (status Error, ErrorKind::Assumption) if V(x*) drops below
/// variance_floor at any iterate.
OptTrace exact_sharpe_ascent(const FiniteMdp& mdp, const StatePolicy& start,
                             const AscentConfig& ascent, double variance_floor);

/// Penalty continuation: run the constrained ascent outer_iterations times,
/// multiplying lambda by continuation_factor between rounds and warm-starting
/// theta from the previous solution. Traces are concatenated with a running
/// iterate index.
OptTrace penalty_continuation(const FiniteMdp& mdp, const StatePolicy& start,
                              PenaltyConfig penalty, const AscentConfig& ascent);

}  // namespace riskpg
