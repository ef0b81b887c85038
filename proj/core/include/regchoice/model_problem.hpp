#pragma once

// Benchmark: a sum of five gaussians blurred by a gaussian kernel whose width
// varies with x, observed with white noise and a slightly wrong width parameter.

#include <cstdint>
#include <vector>

#include "regchoice/discretization.hpp"
#include "regchoice/error_bounds.hpp"
#include "regchoice/tikhonov.hpp"

namespace regchoice {

struct ModelSpec {
  double r_exact = 59.924;
  double r_used = 60.0;
  double delta = 0.15;  ///< standard deviation of the noise added to each f node
  std::uint64_t seed = 1;
  double a = -0.85;  ///< solution interval [a, b]
  double b = 0.85;
  double c = -1.0;  ///< data interval [c, d]
  double d = 1.0;
  int l = 161;  ///< nodes on x
  int n = 137;  ///< nodes on s and t
  double tau = 1.0;

  void validate() const;
};

struct ModelInstance {
  ModelSpec spec;
  GridFunction exact_solution;  ///< on the s grid
  GridFunction exact_f;         ///< on the x grid
  GridFunction noisy_f;
  DiscreteOperator exact_op;
  DiscreteOperator noisy_op;
  TikhonovSystem exact_system;  ///< built from (A, f)
  TikhonovSystem noisy_system;  ///< built from (A~, f~); this is what gets solved
  DataErrorEstimates errors;
};

double exact_solution_fn(double s);

/// sqrt(r/pi) exp(-r (x - s)^2 / (1 + x^2)). Throws InvalidArgument for r <= 0.
double kernel_fn(double x, double s, double r);

/// n independent N(0, delta^2) samples.
///
/// Generator: std::mt19937_64 seeded with `seed`; each uniform is the top 53
/// bits of one draw scaled to [0, 1); pairs (u1, u2) are mapped by Box-Muller,
/// z1 = sqrt(-2 ln(1 - u1)) cos(2 pi u2), z2 = ... sin(2 pi u2), consumed in
/// that order.
std::vector<double> gaussian_noise(int n, double delta, std::uint64_t seed);

/// Pure function of spec: same spec, bit-identical instance.
ModelInstance build_instance(const ModelSpec& spec);

}  // namespace regchoice
