#include <doctest.h>

#include "oracles.hpp"
#include "riskpg/chain.hpp"
#include "riskpg/errors.hpp"
#include "riskpg/nonconvex.hpp"

using namespace riskpg;

namespace {

FiniteMdp one_state_mdp() {
  FiniteMdp mdp;
  mdp.num_states = 1;
  mdp.num_actions = 2;
  mdp.recurrent_state = 0;
  mdp.reward = Eigen::VectorXd::Constant(1, 0.5);
  mdp.kernel = {Eigen::MatrixXd::Constant(1, 1, 1.0), Eigen::MatrixXd::Constant(1, 1, 1.0)};
  return mdp;
}

}  // namespace

TEST_CASE("1-state chain: p_theta = [[1]], zeroing kills the only entry") {
  const FiniteMdp mdp = one_state_mdp();
  TabularSoftmaxPolicy policy(1, 2);
  const ChainMatrices chain = build_chain(mdp, policy);

  CHECK(chain.p_theta(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(chain.p_prime(0, 0) == 0.0);
  for (const auto& g : chain.grad_p_prime) CHECK(g.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("example MDP with the direct policy: p_theta(x*) splits by theta1") {
  const FiniteMdp mdp = build_nonconvex_example();
  const double t1 = 0.3;
  NonconvexDirectPolicy policy(t1, 0.8);
  const ChainMatrices chain = build_chain(mdp, policy);
  using S = NonconvexStates;

  CHECK(chain.p_theta(S::kStar, S::kX1a) == doctest::Approx(t1).epsilon(1e-15));
  CHECK(chain.p_theta(S::kStar, S::kX1b) == doctest::Approx(1.0 - t1).epsilon(1e-15));
}

TEST_CASE("rows of p_theta are stochastic for arbitrary theta") {
  Rng rng(301);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform() * 19);  // up to 20
    const int m = 1 + static_cast<int>(rng.uniform() * 4);   // up to 4 (min 1)
    const FiniteMdp mdp = test::random_ergodic_mdp(rng, n, m);
    const auto policy = test::random_softmax_policy(rng, n, m);
    const ChainMatrices chain = build_chain(mdp, policy);

    for (int x = 0; x < n; ++x)
      CHECK(std::abs(chain.p_theta.row(x).sum() - 1.0) <= 1e-12);

    // p_prime differs from p_theta only in the zeroed recurrent column
    Eigen::MatrixXd diff = chain.p_theta - chain.p_prime;
    diff.col(mdp.recurrent_state).setZero();
    CHECK(diff.lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(chain.p_prime.col(mdp.recurrent_state).lpNorm<Eigen::Infinity>() == 0.0);
    for (const auto& g : chain.grad_p_prime)
      CHECK(g.col(mdp.recurrent_state).lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("grad_p_prime rows: derivative of a probability row sums to zero before zeroing") {
  Rng rng(313);
  const FiniteMdp mdp = test::random_ergodic_mdp(rng, 6, 3);
  const auto policy = test::random_softmax_policy(rng, 6, 3);
  const ChainMatrices chain = build_chain(mdp, policy);

  // build the unzeroed derivative: grad_p_prime plus the derivative of the
  // recurrent column, recomputed directly
  for (int i = 0; i < policy.param_count(); ++i) {
    for (int x = 0; x < 6; ++x) {
      double row_sum = chain.grad_p_prime[i].row(x).sum();
      // add back the zeroed recurrent-column entry
      const Eigen::MatrixXd jac = policy.prob_jacobian(x);
      double col_entry = 0.0;
      for (int u = 0; u < 3; ++u)
        col_entry += jac(i, u) * mdp.kernel[u](x, mdp.recurrent_state);
      CHECK(std::abs(row_sum + col_entry) <= 1e-12);
    }
  }
}

TEST_CASE("grad_p_prime matches central finite differences") {
  Rng rng(317);

  SUBCASE("random 5-state, 3-action instance") {
    const FiniteMdp mdp = test::random_ergodic_mdp(rng, 5, 3);
    auto policy = test::random_softmax_policy(rng, 5, 3);
    const Eigen::VectorXd theta0 = policy.params();
    const ChainMatrices chain = build_chain(mdp, policy);
    const double h = 1e-6;

    double worst = 0.0;
    for (int i = 0; i < policy.param_count(); ++i) {
      Eigen::VectorXd hi = theta0, lo = theta0;
      hi[i] += h;
      lo[i] -= h;
      TabularSoftmaxPolicy phi(5, 3, hi), plo(5, 3, lo);
      const Eigen::MatrixXd fd =
          (build_chain(mdp, phi).p_prime - build_chain(mdp, plo).p_prime) / (2.0 * h);
      const Eigen::MatrixXd err = fd - chain.grad_p_prime[i];
      for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 5; ++y)
          worst = std::max(worst, std::abs(err(x, y)) /
                                      std::max(1.0, std::abs(chain.grad_p_prime[i](x, y))));
    }
    CHECK(worst <= 1e-6);
  }

  SUBCASE("derivative stack property up to n = 20, m = 4") {
    for (int trial = 0; trial < 5; ++trial) {
      const int n = 3 + static_cast<int>(rng.uniform() * 18);
      const int m = 2 + static_cast<int>(rng.uniform() * 3);
      const FiniteMdp mdp = test::random_ergodic_mdp(rng, n, m);
      auto policy = test::random_softmax_policy(rng, n, m);
      const Eigen::VectorXd theta0 = policy.params();
      const ChainMatrices chain = build_chain(mdp, policy);
      const double h = 1e-6;

      // spot-check a third of the parameters to keep the suite quick
      for (int i = 0; i < policy.param_count(); i += 3) {
        Eigen::VectorXd hi = theta0, lo = theta0;
        hi[i] += h;
        lo[i] -= h;
        TabularSoftmaxPolicy phi(n, m, hi), plo(n, m, lo);
        const Eigen::MatrixXd fd =
            (build_chain(mdp, phi).p_prime - build_chain(mdp, plo).p_prime) / (2.0 * h);
        const Eigen::MatrixXd err = fd - chain.grad_p_prime[i];
        for (int x = 0; x < n; ++x)
          for (int y = 0; y < n; ++y)
            CHECK(std::abs(err(x, y)) <=
                  1e-6 * std::max(1.0, std::abs(chain.grad_p_prime[i](x, y))));
      }
    }
  }
}

TEST_CASE("build_chain rejects invalid inputs") {
  FiniteMdp bad = one_state_mdp();
  bad.kernel[0](0, 0) = 0.7;
  TabularSoftmaxPolicy policy(1, 2);
  CHECK_THROWS_AS(build_chain(bad, policy), ValidationError);

  TabularSoftmaxPolicy mismatched(1, 3);
  CHECK_THROWS_AS(build_chain(one_state_mdp(), mismatched), ConfigError);
}
