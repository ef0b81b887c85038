#include "regchoice/param_select.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>

#include <fmt/format.h>

#include "regchoice/errors.hpp"

namespace regchoice {
namespace {

struct Sides {
  double lhs;
  double rhs;
};

using SidesFn = std::function<Sides(const RegularizedSolution&)>;

enum class BracketOutcome { Root, FloorDegenerate };

struct BisectionResult {
  BracketOutcome outcome;
  RegularizedSolution solution;
  std::vector<TraceSample> trace;
};

// Bisection on lg(alpha). The gap lhs - rhs is negative below the root.
BisectionResult bisect_lg(const TikhonovSystem& sys, const RootSearch& search,
                          const SidesFn& sides, bool allow_floor_degenerate,
                          std::string_view rule_name) {
  search.validate();
  if (!(sys.norm_R() > 0.0)) {
    throw InvalidArgument("cannot bracket alpha: ||R|| is zero");
  }
  std::vector<TraceSample> trace;
  auto evaluate = [&](double lg_alpha) {
    RegularizedSolution sol = solve_regularized(sys, std::pow(10.0, lg_alpha), search.precision);
    const Sides s = sides(sol);
    trace.push_back({sol.alpha, s.lhs, s.rhs});
    return std::pair{std::move(sol), s};
  };
  auto sort_trace = [&] {
    std::sort(trace.begin(), trace.end(),
              [](const TraceSample& a, const TraceSample& b) { return a.alpha < b.alpha; });
  };

  double lo = std::log10(search.alpha_min_factor * sys.norm_R());
  double hi = std::log10(search.alpha_max_factor * sys.norm_R());
  auto [sol_lo, s_lo] = evaluate(lo);
  const double gap_lo = s_lo.lhs - s_lo.rhs;
  if (gap_lo >= 0.0) {
    if (allow_floor_degenerate && s_lo.rhs == 0.0) {
      sort_trace();
      return {BracketOutcome::FloorDegenerate, std::move(sol_lo), std::move(trace)};
    }
    auto [sol_hi, s_hi] = evaluate(hi);
    throw BracketFailure(
        fmt::format("{}: no sign change on lg alpha in [{:.4f}, {:.4f}]; lhs-rhs = {:.6g} at the "
                    "floor and {:.6g} at the ceiling",
                    rule_name, lo, hi, gap_lo, s_hi.lhs - s_hi.rhs),
        gap_lo, s_hi.lhs - s_hi.rhs);
  }
  auto [sol_hi, s_hi] = evaluate(hi);
  const double gap_hi = s_hi.lhs - s_hi.rhs;
  if (gap_hi < 0.0) {
    throw BracketFailure(
        fmt::format("{}: no sign change on lg alpha in [{:.4f}, {:.4f}]; lhs-rhs = {:.6g} at the "
                    "floor and {:.6g} at the ceiling",
                    rule_name, lo, hi, gap_lo, gap_hi),
        gap_lo, gap_hi);
  }

  while (hi - lo > search.root_tol_lg) {
    const double mid = 0.5 * (lo + hi);
    auto [sol, s] = evaluate(mid);
    if (s.lhs - s.rhs < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  auto [root, s_root] = evaluate(0.5 * (lo + hi));
  sort_trace();
  return {BracketOutcome::Root, std::move(root), std::move(trace)};
}

double root_exponent(double q) { return 1.0 / (q + 1.0); }

BoundsReport partial_bounds(const TikhonovSystem& sys, const NvacConfig& cfg) {
  BoundsReport b;
  const double norm_R = sys.norm_R();
  const double norm_F = sys.norm_F();
  const double e = root_exponent(cfg.q);
  b.alpha0 = norm_R;
  b.cond12_ok = check_solvability(cfg, norm_F);
  if (norm_F > 0.0 && norm_R > 0.0) {
    b.cond17_ok = check_extended_condition(cfg, norm_F, norm_R);
    b.data_bound = std::pow(cfg.beta * (2.0 * norm_R / norm_F * cfg.Delta + cfg.Theta), e);
    b.c1 = std::pow(cfg.beta * std::max(2.0 * norm_R / norm_F, 1.0), e);
    b.c1_bound = b.c1 * std::pow(cfg.Delta + cfg.Theta, e);
  }
  return b;
}

}  // namespace

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::Nvac:
      return "nvac";
    case Rule::Kojdecki:
      return "kojdecki";
    case Rule::Gdp:
      return "gdp";
    case Rule::OptScan:
      return "opt-scan";
  }
  return "unknown";
}

Rule parse_rule(std::string_view name) {
  for (Rule r : {Rule::Nvac, Rule::Kojdecki, Rule::Gdp, Rule::OptScan}) {
    if (to_string(r) == name) return r;
  }
  throw InvalidArgument(fmt::format("unknown rule '{}'", name));
}

void RootSearch::validate() const {
  if (!(alpha_min_factor > 0.0) || !(alpha_max_factor > alpha_min_factor)) {
    throw InvalidArgument(fmt::format("alpha bracket factors [{}, {}] are invalid",
                                      alpha_min_factor, alpha_max_factor));
  }
  if (!(root_tol_lg > 0.0)) {
    throw InvalidArgument(fmt::format("root tolerance must be positive, got {}", root_tol_lg));
  }
}

void NvacConfig::validate() const {
  if (!(q >= 0.0)) throw InvalidArgument(fmt::format("q must be >= 0, got {}", q));
  if (!(beta > 0.0)) throw InvalidArgument(fmt::format("beta must be > 0, got {}", beta));
  if (!(Delta > 0.0)) throw InvalidArgument(fmt::format("Delta must be > 0, got {}", Delta));
  if (!(Theta >= 0.0)) throw InvalidArgument(fmt::format("Theta must be >= 0, got {}", Theta));
  search.validate();
}

bool check_solvability(const NvacConfig& cfg, double norm_F) {
  if (cfg.q == 0.0) return norm_F > cfg.beta * cfg.Delta;
  return norm_F > 0.0;
}

bool check_extended_condition(const NvacConfig& cfg, double norm_F, double norm_R) {
  const double lhs = cfg.Delta / norm_F + cfg.Theta / norm_R;
  return lhs <= std::pow(norm_R, cfg.q) / (2.0 * cfg.beta);
}

BoundsReport compute_bounds(const TikhonovSystem& sys, const NvacConfig& cfg, double norm_A,
                            double norm_f, double delta, double theta) {
  if (!(sys.norm_R() > 0.0) || !(sys.norm_F() > 0.0) || !(norm_A > 0.0) || !(norm_f > 0.0)) {
    throw InvalidArgument("bounds need positive ||R||, ||F||, ||A|| and ||f||");
  }
  BoundsReport b = partial_bounds(sys, cfg);
  const double e = root_exponent(cfg.q);
  const double norm_R = sys.norm_R();
  const double norm_F = sys.norm_F();
  const double c2 = std::pow(
      2.0 * cfg.beta * norm_A * std::max(norm_R / norm_F, norm_A * norm_f / norm_F + 1.0), e);
  b.c2 = c2;
  b.c2_bound = c2 * std::pow(delta + theta, e);
  return b;
}

AlphaSelection solve_nvac(const TikhonovSystem& sys, const NvacConfig& cfg) {
  cfg.validate();
  BoundsReport bounds = partial_bounds(sys, cfg);
  if (!bounds.cond12_ok) {
    const int n = sys.size();
    RegularizedSolution zero{std::numeric_limits<double>::infinity(),
                             GridFunction(Eigen::VectorXd::Zero(n), sys.solution_rule()), 0.0,
                             sys.norm_F()};
    return AlphaSelection{Rule::Nvac, zero.alpha, std::move(zero), {}, bounds, true};
  }
  const SidesFn sides = [&](const RegularizedSolution& sol) {
    return Sides{psi(sol, cfg.q), xi(sol, cfg.beta, cfg.Delta, cfg.Theta)};
  };
  BisectionResult r = bisect_lg(sys, cfg.search, sides, false, "nvac");
  const double alpha = r.solution.alpha;
  return AlphaSelection{Rule::Nvac, alpha, std::move(r.solution), std::move(r.trace), bounds,
                        false};
}

AlphaSelection solve_kojdecki(const TikhonovSystem& sys, double q, double beta, double delta,
                              double theta, double norm_A, const RootSearch& search) {
  if (!(q >= 0.0) || !(beta > 0.0) || !(delta >= 0.0) || !(theta >= 0.0) || !(norm_A > 0.0)) {
    throw InvalidArgument("kojdecki rule needs q >= 0, beta > 0, delta, theta >= 0, ||A|| > 0");
  }
  const SidesFn sides = [&](const RegularizedSolution& sol) {
    return Sides{psi(sol, q), beta * norm_A * (delta + theta * sol.norm_y)};
  };
  BisectionResult r = bisect_lg(sys, search, sides, true, "kojdecki");
  const double alpha = r.solution.alpha;
  return AlphaSelection{Rule::Kojdecki, alpha, std::move(r.solution), std::move(r.trace),
                        std::nullopt, r.outcome == BracketOutcome::FloorDegenerate};
}

AlphaSelection solve_gdp(const DiscreteOperator& op, const GridFunction& f,
                         const TikhonovSystem& sys, double delta, double theta, double mu,
                         const RootSearch& search) {
  if (!(f.rule == op.out_rule()) || !(op.in_rule() == sys.solution_rule())) {
    throw InvalidArgument("gdp: operator, data and system live on different grids");
  }
  if (!(delta >= 0.0) || !(theta >= 0.0) || !(mu >= 0.0)) {
    throw InvalidArgument("gdp needs delta, theta, mu >= 0");
  }
  const SidesFn sides = [&](const RegularizedSolution& sol) {
    const GridFunction image = apply_operator(op, sol.y);
    const double discrepancy = l2_norm(GridFunction(image.values - f.values, f.rule));
    const double level = delta + theta * sol.norm_y;
    return Sides{discrepancy * discrepancy, level * level + mu * mu};
  };
  BisectionResult r = bisect_lg(sys, search, sides, true, "gdp");
  const double alpha = r.solution.alpha;
  return AlphaSelection{Rule::Gdp, alpha, std::move(r.solution), std::move(r.trace), std::nullopt,
                        r.outcome == BracketOutcome::FloorDegenerate};
}

std::vector<double> lg_alpha_grid(double lg_lo, double lg_hi, double lg_step) {
  if (!(lg_step > 0.0) || !(lg_lo <= lg_hi) || !std::isfinite(lg_lo) || !std::isfinite(lg_hi)) {
    throw InvalidArgument(
        fmt::format("empty lg alpha grid [{}, {}] step {}", lg_lo, lg_hi, lg_step));
  }
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((lg_hi - lg_lo) / lg_step + 1e-9)) + 1;
  out.reserve(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) out.push_back(lg_lo + static_cast<double>(k) * lg_step);
  return out;
}

AlphaSelection scan_alpha_opt(const TikhonovSystem& sys, const GridFunction& exact, double lg_lo,
                              double lg_hi, double lg_step, Precision precision) {
  if (!(exact.rule == sys.solution_rule())) {
    throw InvalidArgument("exact solution does not live on the system's grid");
  }
  const double exact_norm = l2_norm(exact);
  if (!(exact_norm > 0.0)) throw InvalidArgument("exact solution has zero norm");

  const std::vector<double> grid = lg_alpha_grid(lg_lo, lg_hi, lg_step);
  std::vector<TraceSample> trace;
  trace.reserve(grid.size());
  std::optional<RegularizedSolution> best;
  double best_error = std::numeric_limits<double>::infinity();
  for (double lg : grid) {
    RegularizedSolution sol = solve_regularized(sys, std::pow(10.0, lg), precision);
    const double err =
        l2_norm(GridFunction(sol.y.values - exact.values, exact.rule)) / exact_norm;
    trace.push_back({sol.alpha, err, 0.0});
    if (err < best_error) {
      best_error = err;
      best = std::move(sol);
    }
  }
  const double alpha = best->alpha;
  return AlphaSelection{Rule::OptScan, alpha, std::move(*best), std::move(trace), std::nullopt,
                        false};
}

}  // namespace regchoice
