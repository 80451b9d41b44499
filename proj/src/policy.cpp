#include "riskpg/policy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "riskpg/errors.hpp"

namespace riskpg {

Eigen::VectorXd StatePolicy::score(int state, int action) const {
  const double p = action_probs(state)[action];
  if (p <= 0.0) {
    std::ostringstream os;
    os << "score undefined: action " << action << " has zero probability at state " << state;
    throw ConfigError(os.str());
  }
  return prob_jacobian(state).col(action) / p;
}

int StatePolicy::sample_action(int state, Rng& rng) const {
  return rng.sample_discrete(action_probs(state));
}

TabularSoftmaxPolicy::TabularSoftmaxPolicy(int num_states, int num_actions)
    : num_states_(num_states),
      num_actions_(num_actions),
      theta_(Eigen::VectorXd::Zero(num_states * num_actions)) {}

TabularSoftmaxPolicy::TabularSoftmaxPolicy(int num_states, int num_actions,
                                           const Eigen::VectorXd& theta)
    : num_states_(num_states), num_actions_(num_actions), theta_(theta) {
  if (theta.size() != static_cast<Eigen::Index>(num_states) * num_actions)
    throw ConfigError("softmax theta must have num_states * num_actions entries");
}

void TabularSoftmaxPolicy::set_params(const Eigen::VectorXd& theta) {
  if (theta.size() != theta_.size())
    throw ConfigError("softmax set_params: dimension mismatch");
  theta_ = theta;
}

Eigen::VectorXd TabularSoftmaxPolicy::action_probs(int state) const {
  Eigen::VectorXd logits = theta_.segment(state * num_actions_, num_actions_);
  logits.array() -= logits.maxCoeff();  // stabilize exp
  Eigen::VectorXd probs = logits.array().exp();
  return probs / probs.sum();
}

Eigen::MatrixXd TabularSoftmaxPolicy::prob_jacobian(int state) const {
  // d mu(u|x) / d theta_{x,u'} = mu(u|x) (delta_{u,u'} - mu(u'|x)); zero for
  // parameters belonging to other states.
  const Eigen::VectorXd mu = action_probs(state);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(param_count(), num_actions_);
  const int base = state * num_actions_;
  for (int u = 0; u < num_actions_; ++u)
    for (int up = 0; up < num_actions_; ++up)
      jac(base + up, u) = mu[u] * ((u == up ? 1.0 : 0.0) - mu[up]);
  return jac;
}

Eigen::VectorXd TabularSoftmaxPolicy::score(int state, int action) const {
  const Eigen::VectorXd mu = action_probs(state);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(param_count());
  const int base = state * num_actions_;
  for (int up = 0; up < num_actions_; ++up)
    s[base + up] = (up == action ? 1.0 : 0.0) - mu[up];
  return s;
}

std::unique_ptr<StatePolicy> TabularSoftmaxPolicy::clone() const {
  return std::make_unique<TabularSoftmaxPolicy>(*this);
}

SigmoidInvestPolicy::SigmoidInvestPolicy(const Eigen::VectorXd& theta, double epsilon)
    : theta_(theta), epsilon_(epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw ConfigError("sigmoid policy requires epsilon in (0, 0.5)");
}

void SigmoidInvestPolicy::set_params(const Eigen::VectorXd& theta) {
  if (theta.size() != theta_.size())
    throw ConfigError("sigmoid policy set_params: dimension mismatch");
  theta_ = theta;
}

void SigmoidInvestPolicy::check_dim(const Eigen::VectorXd& features) const {
  if (features.size() != theta_.size()) {
    std::ostringstream os;
    os << "feature vector has length " << features.size() << ", policy expects "
       << theta_.size();
    throw ConfigError(os.str());
  }
}

double SigmoidInvestPolicy::invest_prob(const Eigen::VectorXd& features) const {
  check_dim(features);
  const double a = theta_.dot(features);
  const double sig = a >= 0.0 ? 1.0 / (1.0 + std::exp(-a)) : std::exp(a) / (1.0 + std::exp(a));
  // clamp away the last-ulp overshoot so probabilities stay in [eps, 1-eps]
  return std::clamp(epsilon_ + (1.0 - 2.0 * epsilon_) * sig, epsilon_, 1.0 - epsilon_);
}

Eigen::Vector2d SigmoidInvestPolicy::action_probs(const Eigen::VectorXd& features) const {
  const double p = invest_prob(features);
  return {1.0 - p, p};
}

Eigen::VectorXd SigmoidInvestPolicy::score(const Eigen::VectorXd& features, int action) const {
  // With p = eps + (1-2eps) sig(a), dp/dtheta = (1-2eps) sig(a)(1-sig(a)) x.
  check_dim(features);
  const double a = theta_.dot(features);
  const double sig = a >= 0.0 ? 1.0 / (1.0 + std::exp(-a)) : std::exp(a) / (1.0 + std::exp(a));
  const double p = epsilon_ + (1.0 - 2.0 * epsilon_) * sig;
  const double dp = (1.0 - 2.0 * epsilon_) * sig * (1.0 - sig);
  const double factor = action == kInvest ? dp / p : -dp / (1.0 - p);
  return factor * features;
}

int SigmoidInvestPolicy::sample_action(const Eigen::VectorXd& features, Rng& rng) const {
  return rng.bernoulli(invest_prob(features)) ? kInvest : kHold;
}

}  // namespace riskpg
