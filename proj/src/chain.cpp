#include "riskpg/chain.hpp"

#include "riskpg/errors.hpp"

namespace riskpg {

ChainMatrices build_chain(const FiniteMdp& mdp, const StatePolicy& policy) {
  {
    const auto report = validate_mdp(mdp);
    if (!report.empty()) {
      std::string msg = "build_chain on invalid MDP:";
      for (const auto& line : report) msg += "\n  " + line;
      throw ValidationError(msg);
    }
  }
  if (policy.num_actions() != mdp.num_actions)
    throw ConfigError("policy action count does not match MDP");

  const int n = mdp.num_states;
  const int k = policy.param_count();

  ChainMatrices chain;
  chain.recurrent_state = mdp.recurrent_state;
  chain.p_theta = Eigen::MatrixXd::Zero(n, n);
  chain.grad_p_prime.assign(k, Eigen::MatrixXd::Zero(n, n));

  for (int x = 0; x < n; ++x) {
    const Eigen::VectorXd mu = policy.action_probs(x);
    const Eigen::MatrixXd jac = policy.prob_jacobian(x);  // k x m
    for (int u = 0; u < mdp.num_actions; ++u) {
      chain.p_theta.row(x) += mu[u] * mdp.kernel[u].row(x);
      for (int i = 0; i < k; ++i) {
        const double dmu = jac(i, u);
        if (dmu != 0.0) chain.grad_p_prime[i].row(x) += dmu * mdp.kernel[u].row(x);
      }
    }
  }

  chain.p_prime = chain.p_theta;
  chain.p_prime.col(mdp.recurrent_state).setZero();
  for (auto& g : chain.grad_p_prime) g.col(mdp.recurrent_state).setZero();
  return chain;
}

}  // namespace riskpg
