#include "riskpg/exact_eval.hpp"

#include <algorithm>
#include <sstream>

#include "riskpg/errors.hpp"

namespace riskpg {

namespace {
constexpr double kRcondFloor = 1e-12;
constexpr double kVarianceRoundoff = 1e-9;
}  // namespace

ChainSolver::ChainSolver(const ChainMatrices& chain) {
  const Eigen::Index n = chain.p_prime.rows();
  lu_.compute(Eigen::MatrixXd::Identity(n, n) - chain.p_prime);

  // Eigen's rcond() misses exactly singular factorizations (a zero pivot can
  // slip through the L1 estimator), so also check the U diagonal.
  const Eigen::VectorXd pivots = lu_.matrixLU().diagonal().cwiseAbs();
  const double pivot_ratio =
      pivots.maxCoeff() > 0.0 ? pivots.minCoeff() / pivots.maxCoeff() : 0.0;
  const double rc = std::min(lu_.rcond(), pivot_ratio);
  if (!(rc > kRcondFloor)) {
    std::ostringstream os;
    os << "I - P' is numerically singular (rcond = " << rc
       << "); the chain does not recur to state " << chain.recurrent_state;
    throw NumericalError(os.str());
  }
}

Eigen::VectorXd solve_value(const ChainSolver& solver, const Eigen::VectorXd& reward) {
  return solver.solve(reward);
}

Eigen::VectorXd solve_value(const ChainMatrices& chain, const Eigen::VectorXd& reward) {
  return ChainSolver(chain).solve(reward);
}

Eigen::VectorXd compute_rho(const ChainMatrices& chain, const Eigen::VectorXd& j) {
  const Eigen::MatrixXd& p = chain.p_prime;
  if (j.size() != p.rows()) throw ConfigError("compute_rho: j has wrong length");
  const Eigen::Index n = p.rows();
  Eigen::VectorXd rho(n);
  for (Eigen::Index x = 0; x < n; ++x) {
    const double mass = p.row(x).sum();           // mass not routed into x*
    const double mean = p.row(x).dot(j);          // E of the one-step draw
    // the x*-mass contributes value 0; max() discards roundoff excess over 1
    double acc = std::max(0.0, 1.0 - mass) * mean * mean;
    for (Eigen::Index y = 0; y < n; ++y) {
      const double d = j[y] - mean;
      acc += p(x, y) * d * d;
    }
    rho[x] = acc;
  }
  return rho;
}

Eigen::VectorXd solve_variance(const ChainSolver& solver, const Eigen::VectorXd& rho) {
  Eigen::VectorXd v = solver.solve(rho);
  for (Eigen::Index x = 0; x < v.size(); ++x) {
    if (v[x] < 0.0) {
      if (v[x] < -kVarianceRoundoff) {
        std::ostringstream os;
        os << "variance V(" << x << ") = " << v[x] << " is negative beyond roundoff";
        throw NumericalError(os.str());
      }
      v[x] = 0.0;
    }
  }
  return v;
}

Eigen::VectorXd solve_variance(const ChainMatrices& chain, const Eigen::VectorXd& rho) {
  return solve_variance(ChainSolver(chain), rho);
}

Eigen::MatrixXd grad_value(const ChainMatrices& chain, const ChainSolver& solver,
                           const Eigen::VectorXd& j) {
  const Eigen::Index n = chain.p_prime.rows();
  const int k = static_cast<int>(chain.grad_p_prime.size());
  Eigen::MatrixXd rhs(n, k);
  for (int i = 0; i < k; ++i) rhs.col(i) = chain.grad_p_prime[i] * j;
  return solver.solve(rhs).transpose();
}

Eigen::MatrixXd grad_value(const ChainMatrices& chain, const Eigen::VectorXd& j) {
  return grad_value(chain, ChainSolver(chain), j);
}

Eigen::MatrixXd grad_rho(const ChainMatrices& chain, const Eigen::VectorXd& j,
                         const Eigen::MatrixXd& grad_j) {
  const Eigen::MatrixXd& p = chain.p_prime;
  const Eigen::Index n = p.rows();
  const int k = static_cast<int>(chain.grad_p_prime.size());
  if (grad_j.rows() != k || grad_j.cols() != n)
    throw ConfigError("grad_rho: grad_j has wrong shape");

  const Eigen::VectorXd j_sq = j.array().square().matrix();
  const Eigen::VectorXd pj = p * j;

  Eigen::MatrixXd out(k, n);
  for (int i = 0; i < k; ++i) {
    const Eigen::MatrixXd& dp = chain.grad_p_prime[i];
    const Eigen::VectorXd dj = grad_j.row(i).transpose();
    const Eigen::VectorXd term =
        dp * j_sq + 2.0 * (p * j.cwiseProduct(dj)) - 2.0 * pj.cwiseProduct(dp * j + p * dj);
    out.row(i) = term.transpose();
  }
  return out;
}

Eigen::MatrixXd grad_variance(const ChainMatrices& chain, const ChainSolver& solver,
                              const Eigen::VectorXd& v, const Eigen::MatrixXd& grad_rho_mat) {
  const Eigen::Index n = chain.p_prime.rows();
  const int k = static_cast<int>(chain.grad_p_prime.size());
  if (grad_rho_mat.rows() != k || grad_rho_mat.cols() != n)
    throw ConfigError("grad_variance: grad_rho has wrong shape");
  Eigen::MatrixXd rhs(n, k);
  for (int i = 0; i < k; ++i)
    rhs.col(i) = grad_rho_mat.row(i).transpose() + chain.grad_p_prime[i] * v;
  return solver.solve(rhs).transpose();
}

Eigen::MatrixXd grad_variance(const ChainMatrices& chain, const Eigen::VectorXd& v,
                              const Eigen::MatrixXd& grad_rho_mat) {
  return grad_variance(chain, ChainSolver(chain), v, grad_rho_mat);
}

EvalResult evaluate(const FiniteMdp& mdp, const StatePolicy& policy) {
  const ChainMatrices chain = build_chain(mdp, policy);
  const ChainSolver solver(chain);

  EvalResult res;
  res.recurrent_state = mdp.recurrent_state;
  res.j = solve_value(solver, mdp.reward);
  res.rho = compute_rho(chain, res.j);
  res.v = solve_variance(solver, res.rho);

  const Eigen::MatrixXd gj = grad_value(chain, solver, res.j);
  const Eigen::MatrixXd grho = grad_rho(chain, res.j, gj);
  const Eigen::MatrixXd gv = grad_variance(chain, solver, res.v, grho);
  res.grad_j_star = gj.col(mdp.recurrent_state);
  res.grad_v_star = gv.col(mdp.recurrent_state);
  return res;
}

}  // namespace riskpg
