#include "regchoice/model_problem.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "regchoice/errors.hpp"

namespace regchoice {
namespace {

struct Bump {
  double amplitude;
  double center;
  double width;
};

constexpr std::array<Bump, 5> kBumps{{
    {6.5, -0.66, 0.085},
    {9.0, -0.41, 0.075},
    {12.0, 0.14, 0.084},
    {14.0, 0.41, 0.095},
    {9.0, 0.67, 0.065},
}};

double unit_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

void ModelSpec::validate() const {
  if (!(r_exact > 0.0) || !(r_used > 0.0)) {
    throw InvalidArgument(fmt::format("kernel parameters must be positive (r={}, r~={})", r_exact,
                                      r_used));
  }
  if (!(delta >= 0.0)) throw InvalidArgument(fmt::format("delta must be >= 0, got {}", delta));
  if (l < 2 || n < 2) throw InvalidArgument(fmt::format("node counts l={}, n={} too small", l, n));
  if (!(b > a) || !(d > c)) throw InvalidArgument("model intervals are empty");
  if (!(tau >= 0.0)) throw InvalidArgument(fmt::format("tau must be >= 0, got {}", tau));
}

double exact_solution_fn(double s) {
  double sum = 0.0;
  for (const Bump& b : kBumps) {
    const double z = (s - b.center) / b.width;
    sum += b.amplitude * std::exp(-z * z);
  }
  return sum;
}

double kernel_fn(double x, double s, double r) {
  if (!(r > 0.0)) throw InvalidArgument(fmt::format("kernel parameter r must be > 0, got {}", r));
  const double dx = x - s;
  return std::sqrt(r / std::numbers::pi) * std::exp(-r * dx * dx / (1.0 + x * x));
}

std::vector<double> gaussian_noise(int n, double delta, std::uint64_t seed) {
  if (n < 0) throw InvalidArgument("noise length must be >= 0");
  if (!(delta >= 0.0)) throw InvalidArgument(fmt::format("delta must be >= 0, got {}", delta));
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  if (delta == 0.0) return out;

  std::mt19937_64 gen(seed);
  for (int i = 0; i < n; i += 2) {
    const double u1 = unit_uniform(gen);
    const double u2 = unit_uniform(gen);
    const double radius = std::sqrt(-2.0 * std::log1p(-u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out[i] = delta * radius * std::cos(angle);
    if (i + 1 < n) out[i + 1] = delta * radius * std::sin(angle);
  }
  return out;
}

ModelInstance build_instance(const ModelSpec& spec) {
  spec.validate();
  const QuadratureRule s_rule = trapezoid_rule(make_grid(spec.a, spec.b, spec.n));
  const Grid x_grid = make_grid(spec.c, spec.d, spec.l);

  GridFunction y = sample_function(exact_solution_fn, s_rule);
  DiscreteOperator exact_op = sample_kernel(
      [r = spec.r_exact](double x, double s) { return kernel_fn(x, s, r); }, x_grid, s_rule);
  DiscreteOperator noisy_op = sample_kernel(
      [r = spec.r_used](double x, double s) { return kernel_fn(x, s, r); }, x_grid, s_rule);

  GridFunction f = apply_operator(exact_op, y);
  const std::vector<double> noise = gaussian_noise(spec.l, spec.delta, spec.seed);
  Eigen::VectorXd noisy = f.values + Eigen::Map<const Eigen::VectorXd>(noise.data(), spec.l);
  GridFunction noisy_f(std::move(noisy), f.rule);

  TikhonovSystem exact_sys = build_normal_system(exact_op, f, spec.tau);
  TikhonovSystem noisy_sys = build_normal_system(noisy_op, noisy_f, spec.tau);
  DataErrorEstimates errors =
      measured_errors(exact_op, noisy_op, f, noisy_f, exact_sys, noisy_sys, spec.delta);

  return ModelInstance{spec,
                       std::move(y),
                       std::move(f),
                       std::move(noisy_f),
                       std::move(exact_op),
                       std::move(noisy_op),
                       std::move(exact_sys),
                       std::move(noisy_sys),
                       std::move(errors)};
}

}  // namespace regchoice
