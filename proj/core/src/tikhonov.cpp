#include "regchoice/tikhonov.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "regchoice/errors.hpp"

namespace regchoice {
namespace {

double weighted_hs(const Eigen::MatrixXd& m, const Eigen::VectorXd& w_rows,
                   const Eigen::VectorXd& w_cols) {
  return std::sqrt(w_rows.transpose() * m.cwiseAbs2() * w_cols);
}

template <typename Scalar>
Eigen::VectorXd lu_solve(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs, double alpha) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Matrix ms = m.cast<Scalar>();
  const Vector bs = rhs.cast<Scalar>();
  const Eigen::PartialPivLU<Matrix> lu(ms);
  const double rcond = static_cast<double>(lu.rcond());
  Eigen::VectorXd y = lu.solve(bs).template cast<double>();
  if (!(rcond > 0.0) || !y.allFinite()) {
    throw SolverFailure(
        fmt::format("regularized system is singular at alpha={:.6g} (rcond estimate {:.3g})",
                    alpha, rcond),
        rcond);
  }
  return y;
}

}  // namespace

TikhonovSystem::TikhonovSystem(Eigen::MatrixXd normal_kernel, Eigen::VectorXd rhs,
                               QuadratureRule solution_rule, double tau)
    : R_(std::move(normal_kernel)),
      F_(std::move(rhs)),
      tau_(tau),
      rule_(std::move(solution_rule)),
      norm_R_(0.0),
      norm_F_(0.0) {
  const int n = rule_.size();
  if (R_.rows() != n || R_.cols() != n || F_.size() != n) {
    throw InvalidArgument(fmt::format("normal system is {}x{} with |F|={} on {} nodes", R_.rows(),
                                      R_.cols(), F_.size(), n));
  }
  const double scale = std::max(R_.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  if ((R_ - R_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InvalidArgument("normal kernel R is not symmetric");
  }
  stabilizer_ = stabilizer_matrix(rule_.grid(), tau);
  norm_R_ = weighted_hs(R_, rule_.weights(), rule_.weights());
  norm_F_ = l2_norm(GridFunction(F_, rule_));
}

Eigen::VectorXd TikhonovSystem::apply_R(const Eigen::VectorXd& y) const {
  return R_ * rule_.weights().cwiseProduct(y);
}

TikhonovSystem build_normal_system(const DiscreteOperator& op, const GridFunction& f, double tau) {
  if (!(f.rule == op.out_rule())) {
    throw InvalidArgument("right-hand side does not live on the operator's output grid");
  }
  const Eigen::MatrixXd& k = op.values();
  const Eigen::VectorXd& wx = op.out_rule().weights();
  const Eigen::MatrixXd weighted = wx.asDiagonal() * k;
  Eigen::MatrixXd r = k.transpose() * weighted;
  r = 0.5 * (r + r.transpose()).eval();
  Eigen::VectorXd rhs = weighted.transpose() * f.values;
  return TikhonovSystem(std::move(r), std::move(rhs), op.in_rule(), tau);
}

Eigen::MatrixXd stabilizer_matrix(const Grid& grid, double tau) {
  if (!(tau >= 0.0)) {
    throw InvalidArgument(fmt::format("tau must be non-negative, got {}", tau));
  }
  const int n = grid.size();
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(n, n);
  if (tau == 0.0) return c;

  const double k = tau / (grid.step() * grid.step());
  for (int i = 1; i + 1 < n; ++i) {
    c(i, i - 1) -= k;
    c(i, i) += 2.0 * k;
    c(i, i + 1) -= k;
  }
  // Ghost node y_{-1} = y_1 (and y_n = y_{n-2}) gives y'' ~ 2 (y_1 - y_0) / h^2.
  c(0, 0) += 2.0 * k;
  c(0, 1) -= 2.0 * k;
  c(n - 1, n - 1) += 2.0 * k;
  c(n - 1, n - 2) -= 2.0 * k;
  return c;
}

RegularizedSolution solve_regularized(const TikhonovSystem& sys, double alpha,
                                      Precision precision) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidArgument(fmt::format("alpha must be positive and finite, got {}", alpha));
  }
  const Eigen::VectorXd& w = sys.solution_rule().weights();
  const Eigen::MatrixXd m = alpha * sys.stabilizer() + sys.R() * w.asDiagonal();

  Eigen::VectorXd y = precision == Precision::Single ? lu_solve<float>(m, sys.F(), alpha)
                                                     : lu_solve<double>(m, sys.F(), alpha);

  const Eigen::VectorXd residual = sys.apply_R(y) - sys.F();
  GridFunction yf(std::move(y), sys.solution_rule());
  const double norm_y = l2_norm(yf);
  const double residual_norm = l2_norm(GridFunction(residual, sys.solution_rule()));
  return RegularizedSolution{alpha, std::move(yf), norm_y, residual_norm};
}

double psi(const RegularizedSolution& sol, double q) {
  return std::pow(sol.alpha, q) * sol.residual_norm;
}

double xi(const RegularizedSolution& sol, double beta, double Delta, double Theta) {
  if (!(beta > 0.0)) throw InvalidArgument(fmt::format("beta must be positive, got {}", beta));
  if (!(Delta > 0.0)) throw InvalidArgument(fmt::format("Delta must be positive, got {}", Delta));
  if (!(Theta >= 0.0)) {
    throw InvalidArgument(fmt::format("Theta must be non-negative, got {}", Theta));
  }
  return beta * (Delta + Theta * sol.norm_y);
}

}  // namespace regchoice
