#include "riskpg/episode.hpp"

#include "riskpg/errors.hpp"

namespace riskpg {

Episode rollout(const FiniteMdp& mdp, const StatePolicy& policy, Rng& rng, int max_steps) {
  if (max_steps < 1) throw ConfigError("rollout: max_steps must be >= 1");

  Episode ep;
  ep.score_sum = Eigen::VectorXd::Zero(policy.param_count());

  int x = mdp.recurrent_state;
  for (int step = 0; step < max_steps; ++step) {
    const int u = policy.sample_action(x, rng);
    ep.states.push_back(x);
    ep.actions.push_back(u);
    ep.rewards.push_back(mdp.reward[x]);
    ep.total_reward += mdp.reward[x];
    ep.score_sum += policy.score(x, u);

    x = rng.sample_discrete(mdp.kernel[u].row(x).transpose());
    if (x == mdp.recurrent_state) return ep;
  }
  ep.truncated = true;
  return ep;
}

Eigen::VectorXd estimate_grad_j(const Episode& ep) {
  if (ep.truncated) throw ConfigError("estimate_grad_j: episode was truncated");
  return ep.total_reward * ep.score_sum;
}

Eigen::VectorXd estimate_grad_v(const Episode& ep, double j_ref,
                                const Eigen::VectorXd& grad_j_ref) {
  if (ep.truncated) throw ConfigError("estimate_grad_v: episode was truncated");
  return ep.total_reward * ep.total_reward * ep.score_sum - 2.0 * j_ref * grad_j_ref;
}

}  // namespace riskpg
