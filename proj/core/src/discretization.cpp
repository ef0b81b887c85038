#include "regchoice/discretization.hpp"

#include <cmath>

#include <fmt/format.h>

#include "regchoice/errors.hpp"

namespace regchoice {

Grid::Grid(double lo, double hi, int n) : lo_(lo), hi_(hi), n_(n), step_(0.0) {
  if (n < 2) {
    throw InvalidArgument(fmt::format("grid needs at least 2 nodes, got {}", n));
  }
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidArgument(fmt::format("grid interval [{}, {}] is empty or non-finite", lo, hi));
  }
  step_ = (hi - lo) / (n - 1);
}

double Grid::node(int i) const {
  if (i == n_ - 1) return hi_;
  return lo_ + i * step_;
}

Eigen::VectorXd Grid::nodes() const {
  Eigen::VectorXd out(n_);
  for (int i = 0; i < n_; ++i) out[i] = node(i);
  return out;
}

Grid make_grid(double lo, double hi, int n) { return Grid(lo, hi, n); }

QuadratureRule::QuadratureRule(Grid grid, Eigen::VectorXd weights)
    : grid_(grid), weights_(std::move(weights)) {
  if (weights_.size() != grid_.size()) {
    throw InvalidArgument(fmt::format("{} weights for a grid of {} nodes", weights_.size(),
                                      grid_.size()));
  }
  if ((weights_.array() <= 0.0).any() || !weights_.allFinite()) {
    throw InvalidArgument("quadrature weights must be positive and finite");
  }
  const double total = weights_.sum();
  if (std::abs(total - grid_.length()) > 1e-12 * std::max(1.0, grid_.length())) {
    throw InvalidArgument(fmt::format("quadrature weights sum to {} instead of {}", total,
                                      grid_.length()));
  }
}

double QuadratureRule::integrate(const Eigen::VectorXd& values) const {
  if (values.size() != weights_.size()) {
    throw InvalidArgument("integrand length does not match the quadrature rule");
  }
  return weights_.dot(values);
}

bool operator==(const QuadratureRule& a, const QuadratureRule& b) {
  return a.grid_ == b.grid_ && a.weights_.size() == b.weights_.size() &&
         a.weights_ == b.weights_;
}

QuadratureRule trapezoid_rule(const Grid& grid) {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(grid.size(), grid.step());
  w[0] = 0.5 * grid.step();
  w[grid.size() - 1] = 0.5 * grid.step();
  return QuadratureRule(grid, std::move(w));
}

GridFunction::GridFunction(Eigen::VectorXd v, QuadratureRule r)
    : values(std::move(v)), rule(std::move(r)) {
  if (values.size() != rule.size()) {
    throw InvalidArgument(fmt::format("grid function has {} values for {} nodes", values.size(),
                                      rule.size()));
  }
}

GridFunction sample_function(const std::function<double(double)>& fn,
                             const QuadratureRule& rule) {
  Eigen::VectorXd v(rule.size());
  for (int i = 0; i < rule.size(); ++i) {
    const double s = rule.grid().node(i);
    v[i] = fn(s);
    if (!std::isfinite(v[i])) {
      throw EvaluationError(fmt::format("non-finite function value at s={}", s), s, s);
    }
  }
  return GridFunction(std::move(v), rule);
}

DiscreteOperator::DiscreteOperator(Eigen::MatrixXd values, QuadratureRule in_rule,
                                   QuadratureRule out_rule)
    : values_(std::move(values)), in_rule_(std::move(in_rule)), out_rule_(std::move(out_rule)) {
  if (values_.rows() != out_rule_.size() || values_.cols() != in_rule_.size()) {
    throw InvalidArgument(fmt::format("operator is {}x{} but grids are {} (out) x {} (in)",
                                      values_.rows(), values_.cols(), out_rule_.size(),
                                      in_rule_.size()));
  }
  if (!values_.allFinite()) {
    throw InvalidArgument("operator has non-finite entries");
  }
}

DiscreteOperator sample_kernel(const Kernel& kernel, const Grid& out_grid,
                               const QuadratureRule& in_rule) {
  const Grid& in_grid = in_rule.grid();
  Eigen::MatrixXd k(out_grid.size(), in_grid.size());
  for (int i = 0; i < out_grid.size(); ++i) {
    const double x = out_grid.node(i);
    for (int j = 0; j < in_grid.size(); ++j) {
      const double s = in_grid.node(j);
      const double v = kernel(x, s);
      if (!std::isfinite(v)) {
        throw EvaluationError(fmt::format("kernel is not finite at (x={}, s={})", x, s), x, s);
      }
      k(i, j) = v;
    }
  }
  return DiscreteOperator(std::move(k), in_rule, trapezoid_rule(out_grid));
}

GridFunction apply_operator(const DiscreteOperator& op, const GridFunction& y) {
  if (!(y.rule == op.in_rule())) {
    throw InvalidArgument("function does not live on the operator's input grid");
  }
  Eigen::VectorXd f = op.values() * op.in_rule().weights().cwiseProduct(y.values);
  return GridFunction(std::move(f), op.out_rule());
}

DiscreteOperator operator_difference(const DiscreteOperator& lhs, const DiscreteOperator& rhs) {
  if (!(lhs.in_rule() == rhs.in_rule()) || !(lhs.out_rule() == rhs.out_rule())) {
    throw InvalidArgument("operators live on different grids");
  }
  return DiscreteOperator(lhs.values() - rhs.values(), lhs.in_rule(), lhs.out_rule());
}

double l2_norm(const GridFunction& g) {
  return std::sqrt(g.rule.weights().dot(g.values.cwiseAbs2()));
}

double hs_norm(const DiscreteOperator& op) {
  const Eigen::VectorXd& wo = op.out_rule().weights();
  const Eigen::VectorXd& wi = op.in_rule().weights();
  return std::sqrt(wo.transpose() * op.values().cwiseAbs2() * wi);
}

}  // namespace regchoice
