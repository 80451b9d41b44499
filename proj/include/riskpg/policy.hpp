#pragma once

#include <Eigen/Core>
#include <memory>

#include "riskpg/rng.hpp"

namespace riskpg {

/// Differentiable policy over a finite state space. Exposes the action
/// distribution, its parameter Jacobian, and the score vector
/// d log mu(u|x) / d theta — everything the exact linear-solve path and the
/// likelihood-ratio estimators need.
///
/// Implementations are immutable apart from set_params; sampling takes an
/// explicit rng handle.
class StatePolicy {
 public:
  virtual ~StatePolicy() = default;

  virtual int param_count() const = 0;
  virtual int num_actions() const = 0;
  virtual Eigen::VectorXd params() const = 0;
  virtual void set_params(const Eigen::VectorXd& theta) = 0;

  /// mu(.|x): nonnegative, sums to 1.
  virtual Eigen::VectorXd action_probs(int state) const = 0;

  /// d mu(u|x) / d theta_i as a param_count x num_actions matrix.
  virtual Eigen::MatrixXd prob_jacobian(int state) const = 0;

  /// d log mu(u|x) / d theta. Throws ConfigError if mu(u|x) = 0.
  virtual Eigen::VectorXd score(int state, int action) const;

  int sample_action(int state, Rng& rng) const;

  virtual std::unique_ptr<StatePolicy> clone() const = 0;
};

/// Tabular softmax family: one parameter per (state, action),
/// mu(u|x) proportional to exp(theta[x*m + u]). Probabilities are strictly
/// positive for every finite theta, so scores stay bounded.
class TabularSoftmaxPolicy final : public StatePolicy {
 public:
  TabularSoftmaxPolicy(int num_states, int num_actions);
  TabularSoftmaxPolicy(int num_states, int num_actions, const Eigen::VectorXd& theta);

  int param_count() const override { return num_states_ * num_actions_; }
  int num_actions() const override { return num_actions_; }
  int num_states() const { return num_states_; }
  Eigen::VectorXd params() const override { return theta_; }
  void set_params(const Eigen::VectorXd& theta) override;

  Eigen::VectorXd action_probs(int state) const override;
  Eigen::MatrixXd prob_jacobian(int state) const override;
  // Softmax score has the closed form delta_{u,u'} - mu(u'|x) on state x's
  // block and zero elsewhere; overridden to avoid the generic quotient.
  Eigen::VectorXd score(int state, int action) const override;

  std::unique_ptr<StatePolicy> clone() const override;

 private:
  int num_states_;
  int num_actions_;
  Eigen::VectorXd theta_;
};

/// Binary invest/hold policy over a feature vector:
///   P(invest | x) = eps + (1 - 2 eps) / (1 + exp(-theta . x))
/// The eps floor keeps both action probabilities in [eps, 1 - eps], which
/// bounds the score and keeps outcome variance away from zero.
class SigmoidInvestPolicy {
 public:
  static constexpr int kHold = 0;
  static constexpr int kInvest = 1;

  SigmoidInvestPolicy(const Eigen::VectorXd& theta, double epsilon);

  int param_count() const { return static_cast<int>(theta_.size()); }
  const Eigen::VectorXd& params() const { return theta_; }
  void set_params(const Eigen::VectorXd& theta);
  double epsilon() const { return epsilon_; }

  double invest_prob(const Eigen::VectorXd& features) const;
  Eigen::Vector2d action_probs(const Eigen::VectorXd& features) const;
  Eigen::VectorXd score(const Eigen::VectorXd& features, int action) const;
  int sample_action(const Eigen::VectorXd& features, Rng& rng) const;

 private:
  void check_dim(const Eigen::VectorXd& features) const;

  Eigen::VectorXd theta_;
  double epsilon_;
};

}  // namespace riskpg
