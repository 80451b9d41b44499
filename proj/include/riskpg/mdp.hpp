#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace riskpg {

/// Finite MDP with per-action transition kernels, state rewards, and a
/// designated recurrent state whose visits delimit episodes.
///
/// kernel[u](x, y) is the probability of moving to state y when action u
/// is taken in state x; every kernel row is a distribution over successor
/// states. Rewards depend on the current state only.
struct FiniteMdp {
  int num_states = 0;
  int num_actions = 0;
  std::vector<Eigen::MatrixXd> kernel;  // one row-stochastic n x n matrix per action
  Eigen::VectorXd reward;               // r(x), length num_states
  int recurrent_state = 0;              // x*
};

/// Tolerance for row-stochasticity checks throughout the library.
inline constexpr double kRowSumTol = 1e-12;

/// Check every model invariant and report each violation with its location
/// (action/state indices, row deficits). Empty result means the MDP is valid.
std::vector<std::string> validate_mdp(const FiniteMdp& mdp);

/// Load an MDP from a JSON file with fields n, m, recurrent_state, reward,
/// kernel ([action][from][to]). Throws ParseError on malformed input and
/// ValidationError when the parsed model violates invariants.
FiniteMdp load_mdp(const std::string& path);

/// Write an MDP in the same JSON schema load_mdp reads.
void save_mdp(const FiniteMdp& mdp, const std::string& path);

}  // namespace riskpg
