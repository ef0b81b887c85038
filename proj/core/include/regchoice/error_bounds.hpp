#pragma once

#include <optional>
#include <span>
#include <vector>

#include "regchoice/discretization.hpp"
#include "regchoice/tikhonov.hpp"

namespace regchoice {

/// Errors of the data (f, A) and of the normal system (F, R).
///
/// `delta` is the nominal noise level supplied by the caller (per-node standard
/// deviation for the model problem); `f_error` is the measured functional norm
/// ||f~ - f|| when the exact data are known.
struct DataErrorEstimates {
  double delta = 0.0;
  double theta = 0.0;        ///< ||A~ - A||
  double Delta_upper = 0.0;  ///< ||A~|| delta + ||f~|| theta
  double Theta_upper = 0.0;  ///< 2 ||A~|| theta
  std::optional<double> f_error;
  std::optional<double> Delta_measured;  ///< ||F~ - F||
  std::optional<double> Theta_measured;  ///< ||R~ - R||
};

struct RateSample {
  double x;  ///< delta + theta
  double e;  ///< solution error
};

struct RateReport {
  double q = 0.0;
  double qtilde = 0.0;
  std::vector<RateSample> samples;
  double fitted_exponent = 0.0;
};

double delta_upper(double delta, double theta, double norm_A, double norm_f);

double theta_upper(double theta, double norm_A);

/// Measured errors of a model instance; also fills the upper estimates from
/// `nominal_delta`. Throws InvalidArgument when the exact and noisy objects
/// live on different grids.
DataErrorEstimates measured_errors(const DiscreteOperator& exact_op,
                                   const DiscreteOperator& noisy_op, const GridFunction& exact_f,
                                   const GridFunction& noisy_f, const TikhonovSystem& exact_sys,
                                   const TikhonovSystem& noisy_sys, double nominal_delta);

/// min{q + 0.5, 1} / (q + 1).
double qtilde(double q);

/// (c3 / sqrt(a1)) x^((q+0.5)/(q+1)) + c4 a2 x^(1/(q+1)) with x = delta + theta.
double error_bound(double q, double delta, double theta, double c3, double c4, double a1,
                   double a2);

/// Least-squares slope of log e against log x. Needs >= 3 samples, positive
/// values and a spread of at least two decades in x.
double fit_convergence_rate(std::span<const RateSample> samples);

RateReport make_rate_report(double q, std::vector<RateSample> samples);

}  // namespace regchoice
