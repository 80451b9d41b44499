#pragma once

#include <Eigen/Core>

#include "riskpg/episode.hpp"
#include "riskpg/policy.hpp"
#include "riskpg/rng.hpp"

namespace riskpg {

/// Two-asset laddering model: a liquid asset paying r_liquid every step and
/// non-liquid chunks that lock a fixed fraction of wealth for `maturity`
/// steps at the rate prevailing when they were bought, pay
/// (1 + rate)^maturity at maturity, and default (pay nothing) with
/// probability p_risk. The non-liquid rate flips between high and low with
/// probability p_switch per step. Episodes run a fixed horizon of T steps
/// from an all-liquid start.
struct PortfolioConfig {
  int horizon = 50;    // T, steps per episode
  int maturity = 4;    // N, steps until a chunk pays out
  double r_liquid = 0.005;
  // high rate chosen so the non-liquid asset beats the liquid one in
  // expectation even after defaults: 0.95 * (1.05^4 + 1.002^4)/2 > 1.005^4,
  // which is what makes maximizing the plain mean a risk-seeking strategy
  double r_nonliquid_high = 0.05;
  double r_nonliquid_low = 0.002;
  double p_switch = 0.1;
  double p_risk = 0.05;
  double alpha_fraction = 0.2;  // fraction of wealth per investment
  double epsilon = 0.05;        // policy probability floor

  double mean_rate() const { return 0.5 * (r_nonliquid_high + r_nonliquid_low); }
  int feature_count() const { return maturity + 2; }
};

void validate(const PortfolioConfig& cfg);

/// Portfolio bookkeeping in absolute amounts; the policy sees the fraction
/// vector via features(). chunk index i holds the principal maturing in
/// i + 1 steps together with its locked-in rate.
struct PortfolioState {
  double liquid = 1.0;
  Eigen::VectorXd chunk_principal;  // length maturity, by time-to-maturity
  Eigen::VectorXd chunk_rate;
  double rate = 0.0;  // current non-liquid rate

  double total() const { return liquid + chunk_principal.sum(); }

  /// The N+2 policy features: liquid fraction, non-liquid fractions by
  /// time-to-maturity, centered rate signal rate - mean_rate.
  Eigen::VectorXd features(const PortfolioConfig& cfg) const;
};

/// All-liquid start state. The initial non-liquid rate is pinned to the high
/// value so that x* is a single fixed state and episodes are i.i.d.
PortfolioState portfolio_initial_state(const PortfolioConfig& cfg);

struct PortfolioStepResult {
  PortfolioState state;
  double reward = 0.0;          // log of the one-step gross portfolio return
  bool invest_executed = false;
  bool invest_coerced = false;  // invest requested without enough liquidity
};

/// One step of the ladder dynamics:
///   1. liquid accrues r_liquid
///   2. the maturing chunk pays (1+rate)^N into liquid, or defaults
///   3. the ladder shifts one slot
///   4. an executed invest moves alpha * wealth into the fresh N-slot
///   5. the non-liquid rate switches with probability p_switch
/// An invest action without at least alpha of wealth in liquid is coerced to
/// hold and flagged.
PortfolioStepResult portfolio_step(const PortfolioState& state, int action,
                                   const PortfolioConfig& cfg, Rng& rng);

/// Value of the portfolio if liquidated now: liquid plus each chunk at its
/// principal accrued at the locked rate for the steps already held, with no
/// default applied.
double liquidation_value(const PortfolioState& state, const PortfolioConfig& cfg);

struct PortfolioRolloutStats {
  int invest_executed = 0;
  int invest_coerced = 0;
};

/// Fixed-horizon episode of exactly T steps from the all-liquid start; the
/// final step's reward values the remaining ladder at liquidation_value so
/// the episode total is the log of the realized gross return. Episode.states
/// holds the step index (0 plays the role of the recurrent state),
/// Episode.actions the actions sampled from the policy (before any
/// liquidity coercion, so the score decomposition stays exact).
Episode portfolio_episode(const PortfolioConfig& cfg, const SigmoidInvestPolicy& policy,
                          Rng& rng, PortfolioRolloutStats* stats = nullptr);

}  // namespace riskpg
