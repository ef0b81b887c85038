#pragma once

// Test-only reference computations. Nothing here calls into the library's
// solver or root finder, so they can be used to check those paths.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "regchoice/discretization.hpp"
#include "regchoice/model_problem.hpp"
#include "regchoice/tikhonov.hpp"

namespace regchoice::testing {

using Dense = std::vector<std::vector<double>>;

/// Gauss-Jordan elimination with full pivoting on plain vectors.
inline std::vector<double> gauss_jordan_solve(Dense a, std::vector<double> b) {
  const std::size_t n = b.size();
  std::vector<std::size_t> col_of(n);
  for (std::size_t i = 0; i < n; ++i) col_of[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pr = k, pc = k;
    for (std::size_t i = k; i < n; ++i) {
      for (std::size_t j = k; j < n; ++j) {
        if (std::abs(a[i][j]) > std::abs(a[pr][pc])) {
          pr = i;
          pc = j;
        }
      }
    }
    std::swap(a[k], a[pr]);
    std::swap(b[k], b[pr]);
    for (auto& row : a) std::swap(row[k], row[pc]);
    std::swap(col_of[k], col_of[pc]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const double m = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= m * a[k][j];
      b[i] -= m * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[col_of[k]] = b[k] / a[k][k];
  return x;
}

/// Least-squares solution of sum_j K_ij w_j y_j = f_i in the wx-weighted norm,
/// via the normal equations assembled entry by entry.
inline std::vector<double> normal_equations_solution(const DiscreteOperator& op,
                                                     const GridFunction& f) {
  const auto& k = op.values();
  const auto& wx = op.out_rule().weights();
  const auto& ws = op.in_rule().weights();
  const auto m = static_cast<std::size_t>(k.rows());
  const auto n = static_cast<std::size_t>(k.cols());
  Dense normal(n, std::vector<double>(n, 0.0));
  std::vector<double> rhs(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t r = 0; r < m; ++r) {
        sum += k(r, i) * ws[i] * wx[r] * k(r, j) * ws[j];
      }
      normal[i][j] = sum;
    }
    for (std::size_t r = 0; r < m; ++r) rhs[i] += k(r, i) * ws[i] * wx[r] * f.values[r];
  }
  return gauss_jordan_solve(normal, rhs);
}

/// Smallest lg(alpha) on a uniform grid of spacing `step` at which
/// gap(alpha) >= 0, searching upward from lg_lo.
template <typename Gap>
double dense_scan_root(Gap gap, double lg_lo, double lg_hi, double step) {
  for (double lg = lg_lo; lg <= lg_hi + 1e-12; lg += step) {
    if (gap(std::pow(10.0, lg)) >= 0.0) return lg;
  }
  return std::nan("");
}

/// A small blurred-bump problem with white noise; exact and noisy data share the operator.
struct SmallProblem {
  DiscreteOperator op;
  GridFunction exact_y;
  GridFunction exact_f;
  GridFunction noisy_f;
  TikhonovSystem exact_sys;
  TikhonovSystem noisy_sys;
  double Delta;  ///< ||F~ - F||
};

inline SmallProblem make_small_problem(int n, double width, double noise_rel, double tau,
                                       std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double c1 = 0.2 + 0.2 * u(gen);
  const double c2 = 0.6 + 0.2 * u(gen);
  const double h1 = 0.5 + u(gen);
  const double h2 = 0.5 + u(gen);

  const QuadratureRule s_rule = trapezoid_rule(make_grid(0.0, 1.0, n));
  const Grid x_grid = make_grid(-0.1, 1.1, n + 3);
  DiscreteOperator op = sample_kernel(
      [width](double x, double s) { return std::exp(-(x - s) * (x - s) / (width * width)); },
      x_grid, s_rule);
  GridFunction y = sample_function(
      [&](double s) {
        return h1 * std::exp(-std::pow((s - c1) / 0.15, 2)) +
               h2 * std::exp(-std::pow((s - c2) / 0.15, 2));
      },
      s_rule);
  GridFunction f = apply_operator(op, y);
  const double sigma = noise_rel * f.values.cwiseAbs().maxCoeff();
  std::normal_distribution<double> noise(0.0, sigma);
  Eigen::VectorXd fv = f.values;
  for (int i = 0; i < fv.size(); ++i) fv[i] += noise(gen);
  GridFunction noisy(fv, f.rule);
  TikhonovSystem exact_sys = build_normal_system(op, f, tau);
  TikhonovSystem noisy_sys = build_normal_system(op, noisy, tau);
  const double Delta = l2_norm(GridFunction(noisy_sys.F() - exact_sys.F(), s_rule));
  return SmallProblem{op, y, f, noisy, exact_sys, noisy_sys, Delta};
}

}  // namespace regchoice::testing
