#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>

#include "riskpg/episode.hpp"
#include "riskpg/exact_eval.hpp"
#include "riskpg/mdp.hpp"
#include "riskpg/policy.hpp"
#include "riskpg/rng.hpp"
#include "riskpg/trace.hpp"

namespace riskpg {

/// Power-law step schedules alpha_k = a0/(k+1)^a_exp (fast trackers) and
/// beta_k = b0/(k+1)^b_exp (slow parameter updates). The exponent constraints
/// encode the convergence conditions: both sequences sum to infinity, both
/// are square-summable, and beta_k/alpha_k -> 0.
struct ScheduleConfig {
  double a0 = 1.0;
  double a_exp = 0.6;
  double b0 = 0.1;
  double b_exp = 0.9;

  double alpha(long k) const;
  double beta(long k) const;
};

/// Rejects schedules violating a_exp in (0.5, 1], b_exp in (a_exp, 1],
/// a0 > 0, b0 > 0.
void validate(const ScheduleConfig& cfg);

/// Iterate of the simulation-based algorithms: fast mean/variance trackers
/// plus the slowly updated policy parameters.
struct TwoTimescaleState {
  double j_tilde = 0.0;
  double v_tilde = 1.0;  // must start positive for the Sharpe variant
  Eigen::VectorXd theta;
  long k = 0;
};

/// One constrained-variant update from an episode with return R and score z:
///   j'     = j + alpha_k (R - j)
///   v'     = v + alpha_k (R^2 - j^2 - v)
///   theta' = theta + beta_k (R - lambda g'(v - b) (R^2 - 2 j R)) z
/// using the pre-update trackers throughout. A truncated episode advances the
/// counter without updating anything else.
TwoTimescaleState constrained_update(const TwoTimescaleState& st, const Episode& ep,
                                     double lambda, double b, const ScheduleConfig& schedule);

/// Sharpe-variant update: trackers as above, and
///   theta' = theta + beta_k / sqrt(vc) (R - (j R^2 - 2 R j^2) / (2 vc)) z
/// where vc = max(v, v_floor). The stored tracker is clamped to the floor as
/// well, so the same value feeds the prefactor and the inner quotient.
/// clamped (out parameter, optional) reports whether the floor was hit.
TwoTimescaleState sharpe_update(const TwoTimescaleState& st, const Episode& ep,
                                const ScheduleConfig& schedule, double v_floor,
                                bool* clamped = nullptr);

enum class SimVariant { Constrained, Sharpe };

struct SimOptions {
  SimVariant variant = SimVariant::Constrained;
  double lambda = 1.0;  // constrained variant
  double b = 0.0;       // constrained variant
  double v_floor = 1e-3;  // Sharpe variant
  long episodes = 0;
  int max_steps = 10000;
  long log_interval = 1000;
  double j_tilde0 = 0.0;
  double v_tilde0 = 1.0;
  // Episodes during which only the fast trackers update and theta stays
  // frozen. Equivalent to zeroing the first beta_k, which leaves the
  // step-size conditions intact; it keeps the initial tracker bias from
  // kicking theta before the fast timescale has settled.
  long tracker_burn_in = 0;
  // Box clipping for direct-probability parameterizations (theta must remain
  // a probability). Off by default.
  bool clip_theta = false;
  double clip_lo = 0.01;
  double clip_hi = 0.99;
};

/// Samples one episode under the given parameters. Used to plug arbitrary
/// episodic environments (finite MDPs, the portfolio simulator) into the
/// two-timescale loop.
using EpisodeSampler = std::function<Episode(const Eigen::VectorXd& theta, Rng& rng)>;

/// Optional exact diagnostics recorded at snapshot points (finite MDPs):
/// must return the exact EvalResult at the given parameters.
using ExactProbe = std::function<EvalResult(const Eigen::VectorXd& theta)>;

/// Generic two-timescale driver: runs the selected update rule for the
/// episode budget, snapshotting (k, j_tilde, v_tilde, theta) every
/// log_interval episodes plus the initial and final iterates. When probe is
/// provided, snapshots also carry exact J(x*), V(x*), the penalized objective
/// and the exact ascent-direction norm.
OptTrace run_two_timescale(const EpisodeSampler& sampler, const Eigen::VectorXd& theta0,
                           const SimOptions& opts, const ScheduleConfig& schedule, Rng& rng,
                           const ExactProbe& probe = nullptr);

/// Finite-MDP convenience wrapper: episodes come from rollout() and exact
/// snapshot diagnostics are wired automatically.
OptTrace run_two_timescale(const FiniteMdp& mdp, const StatePolicy& policy,
                           const SimOptions& opts, const ScheduleConfig& schedule, Rng& rng);

}  // namespace riskpg
