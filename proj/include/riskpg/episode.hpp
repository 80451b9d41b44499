#pragma once

#include <Eigen/Core>
#include <vector>

#include "riskpg/mdp.hpp"
#include "riskpg/policy.hpp"
#include "riskpg/rng.hpp"

namespace riskpg {

/// One trajectory from the recurrent state until its first return (or until
/// the max-length guard fires). states/actions/rewards are aligned: entry k
/// holds the state visited at step k, the action sampled there, and the
/// reward r(states[k]). total_reward is the accumulated reward B and
/// score_sum the likelihood-ratio vector z = sum_k d log mu(u_k | x_k).
struct Episode {
  std::vector<int> states;
  std::vector<int> actions;
  std::vector<double> rewards;
  double total_reward = 0.0;
  Eigen::VectorXd score_sum;
  bool truncated = false;

  int length() const { return static_cast<int>(states.size()); }
};

/// Roll one episode of the finite MDP from its recurrent state. Deterministic
/// given the rng state; truncation after max_steps is flagged, not thrown.
Episode rollout(const FiniteMdp& mdp, const StatePolicy& policy, Rng& rng, int max_steps);

/// Likelihood-ratio estimate of grad J(x*): R * z. Throws ConfigError on a
/// truncated episode (a censored return would bias the estimate).
Eigen::VectorXd estimate_grad_j(const Episode& ep);

/// Likelihood-ratio estimate of grad V(x*): R^2 * z - 2 * j_ref * grad_j_ref.
/// The mean and mean-gradient references are supplied externally: exact
/// values in tests, the fast trackers in the live two-timescale algorithm —
/// a single trajectory cannot estimate J * grad J unbiasedly on its own.
Eigen::VectorXd estimate_grad_v(const Episode& ep, double j_ref,
                                const Eigen::VectorXd& grad_j_ref);

}  // namespace riskpg
