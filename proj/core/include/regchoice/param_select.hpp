#pragma once

// A posteriori choice of the regularisation parameter.
//
// The main rule picks alpha as the root of
//
//     psi(alpha) = alpha^q ||R y_alpha - F||  =  xi(alpha) = beta (Delta + Theta ||y_alpha||)
//
// where Delta and Theta bound the errors of F and R (not of f and A). psi is
// increasing and xi non-increasing in alpha, so the root is unique whenever
// ||F|| > beta Delta (q = 0) or ||F|| > 0 (q > 0); otherwise the answer is y = 0.
// Two discrepancy-type rules and an error-minimising scan (model problems only)
// are provided for comparison.

#include <optional>
#include <string_view>
#include <vector>

#include "regchoice/discretization.hpp"
#include "regchoice/tikhonov.hpp"

namespace regchoice {

enum class Rule { Nvac, Kojdecki, Gdp, OptScan };

std::string_view to_string(Rule rule);
/// Accepts "nvac", "kojdecki", "gdp", "opt-scan"; throws InvalidArgument otherwise.
Rule parse_rule(std::string_view name);

/// Bisection in lg(alpha) over [alpha_min_factor, alpha_max_factor] * ||R||.
struct RootSearch {
  double alpha_min_factor = 1e-15;
  double alpha_max_factor = 10.0;
  double root_tol_lg = 1e-4;
  Precision precision = Precision::Double;

  void validate() const;
};

struct NvacConfig {
  double q = 0.0;
  double beta = 1.0;
  double Delta = 0.0;
  double Theta = 0.0;
  RootSearch search;

  /// Throws InvalidArgument on q < 0, beta <= 0, Delta <= 0, Theta < 0 or a bad bracket.
  void validate() const;
};

/// One evaluation of the selection equation. For the root rules lhs/rhs are the
/// two sides of the equation; for the opt-scan lhs is the relative error and rhs is 0.
struct TraceSample {
  double alpha;
  double lhs;
  double rhs;
};

struct BoundsReport {
  double alpha0 = 0.0;      ///< ||R||
  double data_bound = 0.0;  ///< [beta (2 ||R|| Delta / ||F|| + Theta)]^(1/(q+1))
  double c1 = 0.0;
  double c1_bound = 0.0;    ///< c1 (Delta + Theta)^(1/(q+1))
  std::optional<double> c2;
  std::optional<double> c2_bound;  ///< c2 (delta + theta)^(1/(q+1))
  bool cond12_ok = false;
  bool cond17_ok = false;
};

struct AlphaSelection {
  Rule rule;
  double alpha;
  RegularizedSolution solution;
  std::vector<TraceSample> trace;  ///< sorted by alpha
  std::optional<BoundsReport> bounds;
  bool degenerate = false;
};

/// ||F|| > beta Delta for q = 0, ||F|| > 0 for q > 0.
bool check_solvability(const NvacConfig& cfg, double norm_F);

/// Delta/||F|| + Theta/||R|| <= ||R||^q / (2 beta); guarantees alpha_n <= ||R||.
bool check_extended_condition(const NvacConfig& cfg, double norm_F, double norm_R);

/// Upper estimates for alpha_n. c2 and c2_bound are filled only here, since
/// they need ||A||, ||f|| and the raw data errors delta, theta.
BoundsReport compute_bounds(const TikhonovSystem& sys, const NvacConfig& cfg, double norm_A,
                            double norm_f, double delta, double theta);

/// Root of psi = xi. Returns a degenerate selection with y = 0 and alpha = +inf
/// when check_solvability fails; throws BracketFailure if the bracket holds no
/// sign change.
AlphaSelection solve_nvac(const TikhonovSystem& sys, const NvacConfig& cfg);

/// Root of alpha^q ||R y - F|| = beta ||A|| (delta + theta ||y||).
///
/// When both sides vanish-or-exceed at the floor because the right side is
/// identically zero (delta = theta = 0), the bracket floor is returned flagged
/// degenerate.
AlphaSelection solve_kojdecki(const TikhonovSystem& sys, double q, double beta, double delta,
                              double theta, double norm_A, const RootSearch& search = {});

/// Root of ||A y - f||^2 = (delta + theta ||y||)^2 + mu^2 (generalised discrepancy).
AlphaSelection solve_gdp(const DiscreteOperator& op, const GridFunction& f,
                         const TikhonovSystem& sys, double delta, double theta, double mu,
                         const RootSearch& search = {});

/// Minimiser of ||y_alpha - exact|| / ||exact|| over lg alpha = lg_lo, lg_lo + lg_step, ... <= lg_hi.
AlphaSelection scan_alpha_opt(const TikhonovSystem& sys, const GridFunction& exact, double lg_lo,
                              double lg_hi, double lg_step,
                              Precision precision = Precision::Double);

/// The lg alpha values visited by scan_alpha_opt for the same arguments.
std::vector<double> lg_alpha_grid(double lg_lo, double lg_hi, double lg_step);

}  // namespace regchoice
