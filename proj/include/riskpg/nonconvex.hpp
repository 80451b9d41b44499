#pragma once

#include <vector>

#include "riskpg/mdp.hpp"
#include "riskpg/policy.hpp"

namespace riskpg {

/// State indices of the 8-state example chain whose achievable (J, V) pairs
/// form a non-convex region: x* branches to x1a/x1b, each of those branches
/// to a second +-1 layer, everything funnels through t back to x*.
struct NonconvexStates {
  static constexpr int kStar = 0;
  static constexpr int kX1a = 1;
  static constexpr int kX1b = 2;
  static constexpr int kX2a = 3;
  static constexpr int kX2b = 4;
  static constexpr int kX2c = 5;
  static constexpr int kX2d = 6;
  static constexpr int kTerminal = 7;
};

/// Deterministic 8-state, 2-action MDP. The +-1 action rewards are encoded
/// on the action-unique successor states, which is exact here because every
/// action at every decision state leads to a distinct state.
FiniteMdp build_nonconvex_example();

/// Two-parameter policy on the example chain with theta used directly as
/// probabilities: mu(u1 | x*) = theta1, mu(u1 | x1a) = mu(u1 | x1b) = theta2,
/// uniform elsewhere (the remaining states have identical actions). Valid for
/// theta in [0, 1]^2 including the deterministic corners.
class NonconvexDirectPolicy final : public StatePolicy {
 public:
  NonconvexDirectPolicy(double theta1, double theta2);

  int param_count() const override { return 2; }
  int num_actions() const override { return 2; }
  Eigen::VectorXd params() const override { return theta_; }
  void set_params(const Eigen::VectorXd& theta) override;

  Eigen::VectorXd action_probs(int state) const override;
  Eigen::MatrixXd prob_jacobian(int state) const override;

  std::unique_ptr<StatePolicy> clone() const override;

 private:
  Eigen::Vector2d theta_;
};

struct FrontierPoint {
  double theta1;
  double theta2;
  double j_star;
  double v_star;
};

/// Exact (J(x*), V(x*)) over a uniform grid of the direct two-parameter
/// policy — the phase-plane data demonstrating non-convexity.
std::vector<FrontierPoint> nonconvex_frontier(int grid_resolution);

}  // namespace riskpg
