#include "regchoice/error_bounds.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "regchoice/errors.hpp"

namespace regchoice {

double delta_upper(double delta, double theta, double norm_A, double norm_f) {
  return norm_A * delta + norm_f * theta;
}

double theta_upper(double theta, double norm_A) { return 2.0 * norm_A * theta; }

DataErrorEstimates measured_errors(const DiscreteOperator& exact_op,
                                   const DiscreteOperator& noisy_op, const GridFunction& exact_f,
                                   const GridFunction& noisy_f, const TikhonovSystem& exact_sys,
                                   const TikhonovSystem& noisy_sys, double nominal_delta) {
  if (!(exact_f.rule == noisy_f.rule) || !(exact_f.rule == exact_op.out_rule()) ||
      !(exact_sys.solution_rule() == noisy_sys.solution_rule())) {
    throw InvalidArgument("exact and noisy model objects live on different grids");
  }
  const QuadratureRule& t_rule = exact_sys.solution_rule();
  DataErrorEstimates e;
  e.delta = nominal_delta;
  e.theta = hs_norm(operator_difference(noisy_op, exact_op));
  const double norm_A = hs_norm(noisy_op);
  e.Delta_upper = delta_upper(nominal_delta, e.theta, norm_A, l2_norm(noisy_f));
  e.Theta_upper = theta_upper(e.theta, norm_A);
  e.f_error = l2_norm(GridFunction(noisy_f.values - exact_f.values, exact_f.rule));
  e.Delta_measured = l2_norm(GridFunction(noisy_sys.F() - exact_sys.F(), t_rule));
  const Eigen::MatrixXd dR = noisy_sys.R() - exact_sys.R();
  e.Theta_measured =
      std::sqrt(t_rule.weights().transpose() * dR.cwiseAbs2() * t_rule.weights());
  return e;
}

double qtilde(double q) {
  if (!(q >= 0.0)) throw InvalidArgument(fmt::format("q must be >= 0, got {}", q));
  return std::min(q + 0.5, 1.0) / (q + 1.0);
}

double error_bound(double q, double delta, double theta, double c3, double c4, double a1,
                   double a2) {
  if (!(c3 > 0.0) || !(c4 > 0.0) || !(a1 > 0.0) || !(a2 > 0.0)) {
    throw InvalidArgument("error_bound constants c3, c4, a1, a2 must be positive");
  }
  if (!(q >= 0.0) || !(delta >= 0.0) || !(theta >= 0.0)) {
    throw InvalidArgument("error_bound needs q, delta, theta >= 0");
  }
  const double x = delta + theta;
  return c3 / std::sqrt(a1) * std::pow(x, (q + 0.5) / (q + 1.0)) +
         c4 * a2 * std::pow(x, 1.0 / (q + 1.0));
}

double fit_convergence_rate(std::span<const RateSample> samples) {
  if (samples.size() < 3) {
    throw InvalidArgument(fmt::format("rate fit needs >= 3 samples, got {}", samples.size()));
  }
  double xmin = samples.front().x;
  double xmax = samples.front().x;
  for (const RateSample& s : samples) {
    if (!(s.x > 0.0) || !(s.e > 0.0)) {
      throw InvalidArgument("rate fit needs strictly positive samples");
    }
    xmin = std::min(xmin, s.x);
    xmax = std::max(xmax, s.x);
  }
  if (std::log10(xmax / xmin) < 2.0 - 1e-12) {
    throw InvalidArgument("rate fit samples span less than two decades");
  }
  const auto n = static_cast<double>(samples.size());
  double mx = 0.0;
  double me = 0.0;
  for (const RateSample& s : samples) {
    mx += std::log(s.x);
    me += std::log(s.e);
  }
  mx /= n;
  me /= n;
  double sxx = 0.0;
  double sxe = 0.0;
  for (const RateSample& s : samples) {
    const double dx = std::log(s.x) - mx;
    sxx += dx * dx;
    sxe += dx * (std::log(s.e) - me);
  }
  return sxe / sxx;
}

RateReport make_rate_report(double q, std::vector<RateSample> samples) {
  RateReport r;
  r.q = q;
  r.qtilde = qtilde(q);
  r.fitted_exponent = fit_convergence_rate(samples);
  r.samples = std::move(samples);
  return r;
}

}  // namespace regchoice
