#pragma once

#include <Eigen/Core>
#include <vector>

#include "riskpg/mdp.hpp"
#include "riskpg/policy.hpp"

namespace riskpg {

/// Matrices induced by an MDP and a tabular policy:
///   p_theta(x, y)      = sum_u mu(u|x) P_u(y|x)
///   p_prime            = p_theta with the column of the recurrent state zeroed
///   grad_p_prime[i]    = d p_prime / d theta_i
/// The column zeroing makes I - p_prime invertible, turning the episodic
/// mean and variance into linear solves.
struct ChainMatrices {
  Eigen::MatrixXd p_theta;
  Eigen::MatrixXd p_prime;
  std::vector<Eigen::MatrixXd> grad_p_prime;
  int recurrent_state = 0;
};

/// Build the induced chain and its parameter derivative stack. The MDP must
/// be valid (throws ValidationError otherwise).
ChainMatrices build_chain(const FiniteMdp& mdp, const StatePolicy& policy);

}  // namespace riskpg
