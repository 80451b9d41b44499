#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

#include "riskpg/chain.hpp"
#include "riskpg/mdp.hpp"
#include "riskpg/policy.hpp"

namespace riskpg {

/// Exact evaluation of a policy on a finite MDP: expected reward-to-recurrence
/// J, its variance V, the one-step continuation variance rho, and the
/// gradients of J and V at the recurrent state.
struct EvalResult {
  Eigen::VectorXd j;
  Eigen::VectorXd v;
  Eigen::VectorXd rho;
  Eigen::VectorXd grad_j_star;  // d J(x*) / d theta
  Eigen::VectorXd grad_v_star;  // d V(x*) / d theta
  int recurrent_state = 0;

  double j_star() const { return j[recurrent_state]; }
  double v_star() const { return v[recurrent_state]; }
};

/// LU factorization of I - P', shared by the value solve, the variance solve,
/// and all gradient right-hand sides. Construction throws NumericalError when
/// the reciprocal condition estimate drops below 1e-12, which signals a chain
/// that does not reliably return to the recurrent state.
class ChainSolver {
 public:
  explicit ChainSolver(const ChainMatrices& chain);

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const { return lu_.solve(rhs); }
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const { return lu_.solve(rhs); }

 private:
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

/// J = (I - P')^{-1} r.
Eigen::VectorXd solve_value(const ChainSolver& solver, const Eigen::VectorXd& reward);
Eigen::VectorXd solve_value(const ChainMatrices& chain, const Eigen::VectorXd& reward);

/// rho(x) = sum_y P'(y|x) J(y)^2 - (sum_y P'(y|x) J(y))^2 — the variance of a
/// one-step draw that takes value J(y) with probability P'(y|x) and 0 with the
/// mass routed into the recurrent state. Evaluated in the shifted sum-of-squares
/// form, which is algebraically identical and cannot go negative in floating
/// point.
Eigen::VectorXd compute_rho(const ChainMatrices& chain, const Eigen::VectorXd& j);

/// V = (I - P')^{-1} rho. Entries in [-1e-9, 0) are clamped to 0; anything
/// more negative is a model/solver bug and throws NumericalError.
Eigen::VectorXd solve_variance(const ChainSolver& solver, const Eigen::VectorXd& rho);
Eigen::VectorXd solve_variance(const ChainMatrices& chain, const Eigen::VectorXd& rho);

/// Gradient of J: one solve (I - P') dJ_i = (dP'_i) J per parameter, sharing
/// the factorization. Returns param_count x n.
Eigen::MatrixXd grad_value(const ChainMatrices& chain, const ChainSolver& solver,
                           const Eigen::VectorXd& j);
Eigen::MatrixXd grad_value(const ChainMatrices& chain, const Eigen::VectorXd& j);

/// Gradient of rho:
///   d rho_i = (dP'_i) J^2 + 2 P'(J o dJ_i) - 2 (P'J) o ((dP'_i) J + P' dJ_i)
/// with J^2 and o elementwise. Returns param_count x n.
Eigen::MatrixXd grad_rho(const ChainMatrices& chain, const Eigen::VectorXd& j,
                         const Eigen::MatrixXd& grad_j);

/// Gradient of V: (I - P') dV_i = d rho_i + (dP'_i) V. Returns param_count x n.
Eigen::MatrixXd grad_variance(const ChainMatrices& chain, const ChainSolver& solver,
                              const Eigen::VectorXd& v, const Eigen::MatrixXd& grad_rho_mat);
Eigen::MatrixXd grad_variance(const ChainMatrices& chain, const Eigen::VectorXd& v,
                              const Eigen::MatrixXd& grad_rho_mat);

/// Full evaluation pipeline with a single factorization of I - P'.
EvalResult evaluate(const FiniteMdp& mdp, const StatePolicy& policy);

}  // namespace riskpg
