#include "riskpg/nonconvex.hpp"

#include "riskpg/errors.hpp"
#include "riskpg/exact_eval.hpp"

namespace riskpg {

FiniteMdp build_nonconvex_example() {
  using S = NonconvexStates;
  const int n = 8;

  FiniteMdp mdp;
  mdp.num_states = n;
  mdp.num_actions = 2;
  mdp.recurrent_state = S::kStar;
  mdp.reward = Eigen::VectorXd::Zero(n);
  mdp.reward[S::kX1a] = 1.0;
  mdp.reward[S::kX1b] = -1.0;
  mdp.reward[S::kX2a] = 1.0;
  mdp.reward[S::kX2b] = -1.0;
  mdp.reward[S::kX2c] = 1.0;
  mdp.reward[S::kX2d] = -1.0;

  Eigen::MatrixXd p1 = Eigen::MatrixXd::Zero(n, n);  // action u1
  Eigen::MatrixXd p2 = Eigen::MatrixXd::Zero(n, n);  // action u2
  p1(S::kStar, S::kX1a) = 1.0;
  p2(S::kStar, S::kX1b) = 1.0;
  p1(S::kX1a, S::kX2a) = 1.0;
  p2(S::kX1a, S::kX2b) = 1.0;
  p1(S::kX1b, S::kX2c) = 1.0;
  p2(S::kX1b, S::kX2d) = 1.0;
  for (int x : {S::kX2a, S::kX2b, S::kX2c, S::kX2d}) {
    p1(x, S::kTerminal) = 1.0;
    p2(x, S::kTerminal) = 1.0;
  }
  p1(S::kTerminal, S::kStar) = 1.0;
  p2(S::kTerminal, S::kStar) = 1.0;

  mdp.kernel = {std::move(p1), std::move(p2)};
  return mdp;
}

NonconvexDirectPolicy::NonconvexDirectPolicy(double theta1, double theta2) {
  set_params(Eigen::Vector2d(theta1, theta2));
}

void NonconvexDirectPolicy::set_params(const Eigen::VectorXd& theta) {
  if (theta.size() != 2) throw ConfigError("direct policy takes exactly two parameters");
  if (theta.minCoeff() < 0.0 || theta.maxCoeff() > 1.0)
    throw ConfigError("direct policy parameters are probabilities and must lie in [0, 1]");
  theta_ = theta;
}

Eigen::VectorXd NonconvexDirectPolicy::action_probs(int state) const {
  using S = NonconvexStates;
  if (state == S::kStar) return Eigen::Vector2d(theta_[0], 1.0 - theta_[0]);
  if (state == S::kX1a || state == S::kX1b)
    return Eigen::Vector2d(theta_[1], 1.0 - theta_[1]);
  return Eigen::Vector2d(0.5, 0.5);
}

Eigen::MatrixXd NonconvexDirectPolicy::prob_jacobian(int state) const {
  using S = NonconvexStates;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2, 2);
  if (state == S::kStar) {
    jac(0, 0) = 1.0;
    jac(0, 1) = -1.0;
  } else if (state == S::kX1a || state == S::kX1b) {
    jac(1, 0) = 1.0;
    jac(1, 1) = -1.0;
  }
  return jac;
}

std::unique_ptr<StatePolicy> NonconvexDirectPolicy::clone() const {
  return std::make_unique<NonconvexDirectPolicy>(*this);
}

std::vector<FrontierPoint> nonconvex_frontier(int grid_resolution) {
  if (grid_resolution < 2) throw ConfigError("frontier grid resolution must be >= 2");
  const FiniteMdp mdp = build_nonconvex_example();
  NonconvexDirectPolicy policy(0.0, 0.0);

  std::vector<FrontierPoint> points;
  points.reserve(static_cast<std::size_t>(grid_resolution) * grid_resolution);
  for (int i = 0; i < grid_resolution; ++i) {
    for (int jj = 0; jj < grid_resolution; ++jj) {
      const double t1 = static_cast<double>(i) / (grid_resolution - 1);
      const double t2 = static_cast<double>(jj) / (grid_resolution - 1);
      policy.set_params(Eigen::Vector2d(t1, t2));
      const EvalResult eval = evaluate(mdp, policy);
      points.push_back({t1, t2, eval.j_star(), eval.v_star()});
    }
  }
  return points;
}

}  // namespace riskpg
