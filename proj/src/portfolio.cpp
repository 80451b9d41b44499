#include "riskpg/portfolio.hpp"

#include <cmath>

#include "riskpg/errors.hpp"

namespace riskpg {

void validate(const PortfolioConfig& cfg) {
  if (cfg.maturity < 1) throw ConfigError("maturity must be >= 1");
  if (cfg.horizon < cfg.maturity) throw ConfigError("horizon must be >= maturity");
  if (!(cfg.r_liquid > 0.0 && cfg.r_nonliquid_high > 0.0 && cfg.r_nonliquid_low > 0.0))
    throw ConfigError("interest rates must be > 0");
  if (cfg.p_switch < 0.0 || cfg.p_switch > 1.0 || cfg.p_risk < 0.0 || cfg.p_risk > 1.0)
    throw ConfigError("p_switch and p_risk must lie in [0, 1]");
  if (!(cfg.alpha_fraction > 0.0 && cfg.alpha_fraction < 1.0))
    throw ConfigError("alpha_fraction must lie in (0, 1)");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 0.5))
    throw ConfigError("epsilon must lie in (0, 0.5)");
}

Eigen::VectorXd PortfolioState::features(const PortfolioConfig& cfg) const {
  const int n_chunks = static_cast<int>(chunk_principal.size());
  Eigen::VectorXd f(n_chunks + 2);
  const double w = total();
  f[0] = liquid / w;
  for (int i = 0; i < n_chunks; ++i) f[1 + i] = chunk_principal[i] / w;
  f[n_chunks + 1] = rate - cfg.mean_rate();
  return f;
}

PortfolioState portfolio_initial_state(const PortfolioConfig& cfg) {
  PortfolioState st;
  st.liquid = 1.0;
  st.chunk_principal = Eigen::VectorXd::Zero(cfg.maturity);
  st.chunk_rate = Eigen::VectorXd::Zero(cfg.maturity);
  st.rate = cfg.r_nonliquid_high;
  return st;
}

PortfolioStepResult portfolio_step(const PortfolioState& state, int action,
                                   const PortfolioConfig& cfg, Rng& rng) {
  const int n = cfg.maturity;
  if (state.chunk_principal.size() != n || state.chunk_rate.size() != n)
    throw ConfigError("portfolio state does not match the configured maturity");

  const double w_start = state.total();
  // the policy decides from the observed state, so eligibility is judged on
  // the pre-payout liquid fraction
  const bool eligible = state.liquid >= cfg.alpha_fraction * w_start * (1.0 - 1e-12);

  PortfolioStepResult out;
  out.invest_executed = (action == SigmoidInvestPolicy::kInvest) && eligible;
  out.invest_coerced = (action == SigmoidInvestPolicy::kInvest) && !eligible;

  // Every unit of capital earns exactly one rate per step: the maturing chunk
  // finished its N locked periods, so its payout joins liquid before interest;
  // a fresh investment starts its first locked period now, so it is carved out
  // before interest.
  PortfolioState next = state;

  const double maturing = next.chunk_principal[0];
  if (maturing > 0.0 && !rng.bernoulli(cfg.p_risk))
    next.liquid += maturing * std::pow(1.0 + next.chunk_rate[0], n);

  for (int i = 0; i + 1 < n; ++i) {
    next.chunk_principal[i] = next.chunk_principal[i + 1];
    next.chunk_rate[i] = next.chunk_rate[i + 1];
  }
  next.chunk_principal[n - 1] = 0.0;
  next.chunk_rate[n - 1] = 0.0;

  if (out.invest_executed) {
    const double amount = cfg.alpha_fraction * w_start;
    next.liquid -= amount;
    next.chunk_principal[n - 1] = amount;
    next.chunk_rate[n - 1] = state.rate;  // rate locked at investment time
  }

  next.liquid *= 1.0 + cfg.r_liquid;

  if (rng.bernoulli(cfg.p_switch))
    next.rate = (state.rate == cfg.r_nonliquid_high) ? cfg.r_nonliquid_low
                                                     : cfg.r_nonliquid_high;

  out.reward = std::log(next.total() / w_start);
  out.state = std::move(next);
  return out;
}

double liquidation_value(const PortfolioState& state, const PortfolioConfig& cfg) {
  double value = state.liquid;
  const int n = cfg.maturity;
  for (int i = 0; i < n; ++i) {
    const int held = n - (i + 1);  // steps the chunk has been in the ladder
    value += state.chunk_principal[i] * std::pow(1.0 + state.chunk_rate[i], held);
  }
  return value;
}

Episode portfolio_episode(const PortfolioConfig& cfg, const SigmoidInvestPolicy& policy,
                          Rng& rng, PortfolioRolloutStats* stats) {
  validate(cfg);
  if (policy.param_count() != cfg.feature_count())
    throw ConfigError("policy parameter count does not match the portfolio feature vector");

  Episode ep;
  ep.score_sum = Eigen::VectorXd::Zero(policy.param_count());
  PortfolioState st = portfolio_initial_state(cfg);

  for (int t = 0; t < cfg.horizon; ++t) {
    const Eigen::VectorXd feats = st.features(cfg);
    const int action = policy.sample_action(feats, rng);
    ep.states.push_back(t);
    ep.actions.push_back(action);
    ep.score_sum += policy.score(feats, action);

    const double w_start = st.total();
    PortfolioStepResult step = portfolio_step(st, action, cfg, rng);
    if (stats != nullptr) {
      stats->invest_executed += step.invest_executed ? 1 : 0;
      stats->invest_coerced += step.invest_coerced ? 1 : 0;
    }

    double reward = step.reward;
    if (t == cfg.horizon - 1) {
      // final step: liquidate the remaining ladder into the step's return
      reward = std::log(liquidation_value(step.state, cfg) / w_start);
    }
    ep.rewards.push_back(reward);
    ep.total_reward += reward;
    st = std::move(step.state);
  }
  return ep;
}

}  // namespace riskpg
