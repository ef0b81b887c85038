#pragma once

#include <Eigen/Dense>

#include "regchoice/discretization.hpp"

namespace regchoice {

/// Arithmetic used for the dense factorisation of the regularised system.
///
/// `Single` rounds the assembled matrix and right-hand side to float before
/// factorising, which emulates a default-REAL (4-byte) Fortran program. The
/// residual and norms are always evaluated in double.
enum class Precision { Double, Single };

/// Discretised normal equation  alpha (y - tau y'') + R y = F  with y'(a) = y'(b) = 0.
///
/// R holds the kernel values R(t_i, s_j); the integral over s is carried by
/// the weights of solution_rule. Immutable after construction.
class TikhonovSystem {
 public:
  /// Throws InvalidArgument on size mismatch, tau < 0 or an asymmetric R.
  TikhonovSystem(Eigen::MatrixXd normal_kernel, Eigen::VectorXd rhs, QuadratureRule solution_rule,
                 double tau);

  const Eigen::MatrixXd& R() const { return R_; }
  const Eigen::VectorXd& F() const { return F_; }
  const Eigen::MatrixXd& stabilizer() const { return stabilizer_; }
  double tau() const { return tau_; }
  const QuadratureRule& solution_rule() const { return rule_; }
  int size() const { return rule_.size(); }

  /// Hilbert-Schmidt norm of R and weighted L2 norm of F, cached.
  double norm_R() const { return norm_R_; }
  double norm_F() const { return norm_F_; }

  /// (R y)(t_i) = sum_j R_ij w_j y_j.
  Eigen::VectorXd apply_R(const Eigen::VectorXd& y) const;

  GridFunction F_function() const { return GridFunction(F_, rule_); }

 private:
  Eigen::MatrixXd R_;
  Eigen::VectorXd F_;
  Eigen::MatrixXd stabilizer_;
  double tau_;
  QuadratureRule rule_;
  double norm_R_;
  double norm_F_;
};

/// R_ij = sum_k wx_k K_ki K_kj and F_i = sum_k wx_k K_ki f_k.
TikhonovSystem build_normal_system(const DiscreteOperator& op, const GridFunction& f, double tau);

/// I - tau * D2, where D2 is the second difference with a mirrored ghost node
/// at either end (zero slope), so D2 annihilates constants.
Eigen::MatrixXd stabilizer_matrix(const Grid& grid, double tau);

struct RegularizedSolution {
  double alpha;
  GridFunction y;
  double norm_y;
  /// || R y - F ||, always from an explicit product.
  double residual_norm;
};

/// Solves (alpha * stabilizer + R diag(w)) y = F by LU with partial pivoting.
///
/// Throws InvalidArgument for alpha <= 0 and SolverFailure when the factorised
/// matrix is numerically singular or the solution is not finite.
RegularizedSolution solve_regularized(const TikhonovSystem& sys, double alpha,
                                      Precision precision = Precision::Double);

/// alpha^q * || R y_alpha - F ||.
double psi(const RegularizedSolution& sol, double q);

/// beta * (Delta + Theta * ||y_alpha||).
double xi(const RegularizedSolution& sol, double beta, double Delta, double Theta);

}  // namespace regchoice
