#pragma once

// Uniform grids, trapezoid quadrature and quadrature-weighted operators.
//
// Every norm in the library is the continuous one realised by quadrature:
// functions use the weighted L2 norm and operators the Hilbert-Schmidt norm
// of their kernel, never plain Euclidean vector norms.

#include <functional>

#include <Eigen/Dense>

namespace regchoice {

/// Uniform grid lo = nodes[0] < ... < nodes[n-1] = hi.
class Grid {
 public:
  /// Throws InvalidArgument unless n >= 2 and hi > lo.
  Grid(double lo, double hi, int n);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  int size() const { return n_; }
  double step() const { return step_; }
  double length() const { return hi_ - lo_; }

  /// Node i, computed as lo + i*step with the last node pinned to hi.
  double node(int i) const;
  Eigen::VectorXd nodes() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double lo_;
  double hi_;
  int n_;
  double step_;
};

Grid make_grid(double lo, double hi, int n);

/// Nodes of a grid together with positive weights that sum to its length.
class QuadratureRule {
 public:
  /// Validates weight count, positivity and exactness for constants.
  QuadratureRule(Grid grid, Eigen::VectorXd weights);

  const Grid& grid() const { return grid_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  int size() const { return grid_.size(); }

  /// Sum of w_i * g_i.
  double integrate(const Eigen::VectorXd& values) const;

  friend bool operator==(const QuadratureRule& a, const QuadratureRule& b);

 private:
  Grid grid_;
  Eigen::VectorXd weights_;
};

/// Composite trapezoid rule: step/2 at the ends, step inside.
QuadratureRule trapezoid_rule(const Grid& grid);

/// A function sampled on the nodes of a quadrature rule.
struct GridFunction {
  GridFunction(Eigen::VectorXd values, QuadratureRule rule);

  Eigen::VectorXd values;
  QuadratureRule rule;
};

GridFunction sample_function(const std::function<double(double)>& fn, const QuadratureRule& rule);

/// Kernel matrix K(x_i, s_j); rows follow the output grid, columns the input grid.
///
/// Represents y -> integral K(x, s) y(s) ds with the input rule supplying the
/// integration weights.
class DiscreteOperator {
 public:
  DiscreteOperator(Eigen::MatrixXd values, QuadratureRule in_rule, QuadratureRule out_rule);

  const Eigen::MatrixXd& values() const { return values_; }
  const QuadratureRule& in_rule() const { return in_rule_; }
  const QuadratureRule& out_rule() const { return out_rule_; }

 private:
  Eigen::MatrixXd values_;
  QuadratureRule in_rule_;
  QuadratureRule out_rule_;
};

using Kernel = std::function<double(double x, double s)>;

/// Samples `kernel` on out_grid x in_rule.grid(); the output side gets the
/// trapezoid rule of out_grid. Throws EvaluationError on a non-finite sample.
DiscreteOperator sample_kernel(const Kernel& kernel, const Grid& out_grid,
                               const QuadratureRule& in_rule);

/// result_i = sum_j K_ij w_j y_j on the operator's output grid.
GridFunction apply_operator(const DiscreteOperator& op, const GridFunction& y);

/// Entrywise difference of two operators on identical grids.
DiscreteOperator operator_difference(const DiscreteOperator& lhs, const DiscreteOperator& rhs);

double l2_norm(const GridFunction& g);

/// sqrt(sum_ij wout_i win_j K_ij^2), the quadrature form of the double integral.
double hs_norm(const DiscreteOperator& op);

}  // namespace regchoice
