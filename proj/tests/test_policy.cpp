#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "riskpg/errors.hpp"
#include "riskpg/nonconvex.hpp"
#include "riskpg/policy.hpp"

using namespace riskpg;
using riskpg::test::close_rel;

TEST_CASE("softmax with equal logits is uniform") {
  TabularSoftmaxPolicy policy(3, 4);  // theta = 0
  for (int x = 0; x < 3; ++x) {
    const Eigen::VectorXd mu = policy.action_probs(x);
    CHECK(std::abs(mu.sum() - 1.0) <= 1e-12);
    for (int u = 0; u < 4; ++u) CHECK(mu[u] == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("softmax probabilities sum to 1 and stay positive for random theta") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto policy = test::random_softmax_policy(rng, 5, 3);
    for (int x = 0; x < 5; ++x) {
      const Eigen::VectorXd mu = policy.action_probs(x);
      CHECK(std::abs(mu.sum() - 1.0) <= 1e-12);
      CHECK(mu.minCoeff() > 0.0);
    }
  }
}

TEST_CASE("softmax score of a uniform 2-action policy is (0.5, -0.5) on the state block") {
  TabularSoftmaxPolicy policy(2, 2);
  const Eigen::VectorXd s = policy.score(1, 0);  // state 1, action u1
  CHECK(s[0] == 0.0);
  CHECK(s[1] == 0.0);
  CHECK(s[2] == doctest::Approx(0.5));
  CHECK(s[3] == doctest::Approx(-0.5));
}

TEST_CASE("score identity: sum_u mu(u|x) score(x, u) = 0") {
  Rng rng(23);
  const auto policy = test::random_softmax_policy(rng, 4, 3);
  for (int x = 0; x < 4; ++x) {
    const Eigen::VectorXd mu = policy.action_probs(x);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(policy.param_count());
    for (int u = 0; u < 3; ++u) acc += mu[u] * policy.score(x, u);
    CHECK(acc.lpNorm<Eigen::Infinity>() <= 1e-10);
  }
}

TEST_CASE("score matches finite differences of log mu on a randomized policy") {
  Rng rng(37);
  auto policy = test::random_softmax_policy(rng, 3, 3);
  const Eigen::VectorXd theta0 = policy.params();
  for (int x = 0; x < 3; ++x) {
    for (int u = 0; u < 3; ++u) {
      auto log_mu = [&](const Eigen::VectorXd& th) {
        TabularSoftmaxPolicy p(3, 3, th);
        return std::log(p.action_probs(x)[u]);
      };
      const Eigen::VectorXd fd = test::finite_diff(log_mu, theta0, 1e-6);
      const Eigen::VectorXd sc = policy.score(x, u);
      CHECK(test::max_rel_err(sc, fd) <= 1e-6);
    }
  }
}

TEST_CASE("score-probability consistency: first-order expansion of log mu") {
  // log mu_{theta+d}(u|x) - log mu_theta(u|x) = score . d + O(|d|^2)
  Rng rng(41);
  auto policy = test::random_softmax_policy(rng, 3, 2);
  const Eigen::VectorXd theta0 = policy.params();
  Eigen::VectorXd delta(theta0.size());
  for (Eigen::Index i = 0; i < delta.size(); ++i) delta[i] = 2.0 * rng.uniform() - 1.0;
  delta *= 1e-4 / delta.norm();

  for (int x = 0; x < 3; ++x) {
    for (int u = 0; u < 2; ++u) {
      const double before = std::log(policy.action_probs(x)[u]);
      TabularSoftmaxPolicy moved(3, 2, theta0 + delta);
      const double after = std::log(moved.action_probs(x)[u]);
      const double first_order = policy.score(x, u).dot(delta);
      CHECK(std::abs(after - before - first_order) <= 10.0 * delta.squaredNorm());
    }
  }
}

TEST_CASE("sampling is deterministic given the seed") {
  TabularSoftmaxPolicy policy(2, 3);
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) CHECK(policy.sample_action(0, a) == policy.sample_action(0, b));
}

TEST_CASE("sampling frequencies match probabilities within 3 standard errors") {
  const int draws = 1000000;

  SUBCASE("uniform 2-action policy") {
    TabularSoftmaxPolicy policy(1, 2);
    Rng rng(7);
    long count0 = 0;
    for (int i = 0; i < draws; ++i) count0 += policy.sample_action(0, rng) == 0 ? 1 : 0;
    const double freq = static_cast<double>(count0) / draws;
    const double se = std::sqrt(0.5 * 0.5 / draws);
    CHECK(std::abs(freq - 0.5) <= 3.0 * se);
  }

  SUBCASE("epsilon-sigmoid at saturation draws invest with probability 1 - eps") {
    const double eps = 0.05;
    SigmoidInvestPolicy policy(Eigen::VectorXd::Constant(1, 50.0), eps);
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 1.0);
    CHECK(policy.invest_prob(x) == doctest::Approx(1.0 - eps).epsilon(1e-9));
    Rng rng(13);
    long invest = 0;
    for (int i = 0; i < draws; ++i)
      invest += policy.sample_action(x, rng) == SigmoidInvestPolicy::kInvest ? 1 : 0;
    const double freq = static_cast<double>(invest) / draws;
    const double se = std::sqrt(eps * (1.0 - eps) / draws);
    CHECK(std::abs(freq - (1.0 - eps)) <= 3.0 * se);
  }
}

TEST_CASE("epsilon-sigmoid probability formula") {
  const double eps = 0.05;

  SUBCASE("midpoint: theta . x = 0 gives invest probability 0.5") {
    SigmoidInvestPolicy policy(Eigen::VectorXd::Zero(3), eps);
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(3, 0.7);
    CHECK(policy.invest_prob(x) == doctest::Approx(eps + (1.0 - 2.0 * eps) * 0.5));
    const Eigen::Vector2d mu = policy.action_probs(x);
    CHECK(mu.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("limit: invest probability tends to 1 - eps, never beyond") {
    SigmoidInvestPolicy policy(Eigen::VectorXd::Constant(1, 1.0), eps);
    const Eigen::VectorXd big = Eigen::VectorXd::Constant(1, 1e4);
    CHECK(policy.invest_prob(big) == doctest::Approx(1.0 - eps).epsilon(1e-12));
    CHECK(policy.invest_prob(big) <= 1.0 - eps);
    const Eigen::VectorXd small = Eigen::VectorXd::Constant(1, -1e4);
    CHECK(policy.invest_prob(small) == doctest::Approx(eps).epsilon(1e-12));
    CHECK(policy.invest_prob(small) >= eps);
  }
  SUBCASE("feature dimension mismatch is rejected") {
    SigmoidInvestPolicy policy(Eigen::VectorXd::Zero(3), eps);
    CHECK_THROWS_AS(policy.invest_prob(Eigen::VectorXd::Zero(4)), ConfigError);
  }
}

TEST_CASE("epsilon-sigmoid score matches finite differences of log probabilities") {
  const double eps = 0.05;
  Rng rng(5);
  Eigen::VectorXd theta(4), x(4);
  for (int i = 0; i < 4; ++i) {
    theta[i] = 2.0 * rng.uniform() - 1.0;
    x[i] = 2.0 * rng.uniform() - 1.0;
  }
  SigmoidInvestPolicy policy(theta, eps);
  for (int action : {SigmoidInvestPolicy::kHold, SigmoidInvestPolicy::kInvest}) {
    auto log_mu = [&](const Eigen::VectorXd& th) {
      SigmoidInvestPolicy p(th, eps);
      return std::log(p.action_probs(x)[action]);
    };
    const Eigen::VectorXd fd = test::finite_diff(log_mu, theta, 1e-6);
    CHECK(test::max_rel_err(policy.score(x, action), fd) <= 1e-6);
  }
}

TEST_CASE("score is rejected for a zero-probability action") {
  NonconvexDirectPolicy corner(1.0, 0.5);  // u2 impossible at x*
  CHECK_THROWS_AS(corner.score(NonconvexStates::kStar, 1), ConfigError);
  CHECK_NOTHROW(corner.score(NonconvexStates::kStar, 0));
}
