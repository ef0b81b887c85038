#include "regchoice/model_problem.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include <gtest/gtest.h>

#include "regchoice/errors.hpp"

namespace regchoice {
namespace {

TEST(ExactSolution, PointValues) {
  EXPECT_NEAR(exact_solution_fn(0.0), 0.7461184022761381, 1e-14);
  EXPECT_NEAR(exact_solution_fn(0.41), 14.00039204292266, 1e-12);
  EXPECT_GE(exact_solution_fn(0.41), 14.0);
}

TEST(Kernel, Values) {
  for (double r : {1.0, 59.924, 60.0}) {
    for (double x : {-1.0, 0.0, 0.3}) {
      EXPECT_DOUBLE_EQ(kernel_fn(x, x, r), std::sqrt(r / std::numbers::pi));
    }
    EXPECT_NEAR(kernel_fn(0.0, 1.0, r), std::sqrt(r / std::numbers::pi) * std::exp(-r),
                1e-15 * std::sqrt(r));
  }
  EXPECT_THROW(kernel_fn(0.0, 0.0, 0.0), InvalidArgument);
  EXPECT_THROW(kernel_fn(0.0, 0.0, -1.0), InvalidArgument);
}

TEST(GaussianNoise, ZeroDelta) {
  for (double v : gaussian_noise(101, 0.0, 5)) EXPECT_EQ(v, 0.0);
}

TEST(GaussianNoise, Deterministic) {
  EXPECT_EQ(gaussian_noise(161, 0.15, 42), gaussian_noise(161, 0.15, 42));
  EXPECT_NE(gaussian_noise(161, 0.15, 42), gaussian_noise(161, 0.15, 43));
}

TEST(GaussianNoise, LargeSampleMoments) {
  const std::vector<double> v = gaussian_noise(100000, 0.15, 1);
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (v.size() - 1));
  EXPECT_GE(sd, 0.148);
  EXPECT_LE(sd, 0.152);
  EXPECT_LT(std::abs(mean), 4.0 * 0.15 / std::sqrt(1e5));
}

TEST(GaussianNoise, SmallSampleStd) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::vector<double> v = gaussian_noise(400, 0.5, seed);
    double ss = 0.0;
    for (double x : v) ss += x * x;
    EXPECT_NEAR(std::sqrt(ss / v.size()), 0.5, 0.5 * 0.15) << "seed " << seed;
  }
}

TEST(GaussianNoise, NeighboursUncorrelated) {
  const std::vector<double> v = gaussian_noise(100000, 1.0, 3);
  double lag1 = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) lag1 += v[i] * v[i - 1];
  EXPECT_LT(std::abs(lag1 / v.size()), 4.0 / std::sqrt(1e5));
}

TEST(Spec, Validation) {
  EXPECT_NO_THROW(ModelSpec{}.validate());
  EXPECT_THROW(ModelSpec{.r_exact = 0.0}.validate(), InvalidArgument);
  EXPECT_THROW(ModelSpec{.r_used = -1.0}.validate(), InvalidArgument);
  EXPECT_THROW(ModelSpec{.delta = -0.1}.validate(), InvalidArgument);
  EXPECT_THROW(ModelSpec{.l = 1}.validate(), InvalidArgument);
  EXPECT_THROW(ModelSpec{.n = 1}.validate(), InvalidArgument);
}

TEST(Instance, BitIdenticalForSameSpec) {
  const ModelSpec spec{.delta = 0.15, .seed = 7};
  const ModelInstance a = build_instance(spec);
  const ModelInstance b = build_instance(spec);
  EXPECT_EQ(a.noisy_f.values, b.noisy_f.values);
  EXPECT_EQ(a.noisy_system.R(), b.noisy_system.R());
  EXPECT_EQ(a.noisy_system.F(), b.noisy_system.F());
  EXPECT_EQ(*a.errors.Delta_measured, *b.errors.Delta_measured);
}

TEST(Instance, GridsFollowSpec) {
  const ModelInstance inst = build_instance(ModelSpec{});
  EXPECT_EQ(inst.exact_solution.values.size(), 137);
  EXPECT_EQ(inst.exact_f.values.size(), 161);
  EXPECT_EQ(inst.noisy_op.values().rows(), 161);
  EXPECT_EQ(inst.noisy_op.values().cols(), 137);
  EXPECT_EQ(inst.noisy_system.size(), 137);
  EXPECT_EQ(inst.exact_solution.rule.grid(), make_grid(-0.85, 0.85, 137));
  EXPECT_EQ(inst.exact_f.rule.grid(), make_grid(-1.0, 1.0, 161));
}

TEST(Instance, ExactDataWhenNoiseFree) {
  const ModelInstance inst = build_instance(ModelSpec{.r_used = 59.924, .delta = 0.0});
  EXPECT_EQ(inst.noisy_f.values, inst.exact_f.values);
  EXPECT_EQ(inst.noisy_system.F(), inst.exact_system.F());
}

TEST(Instance, NoiseHasSmallMean) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ModelInstance inst = build_instance(ModelSpec{.delta = 0.5, .seed = seed});
    const double mean = (inst.noisy_f.values - inst.exact_f.values).mean();
    EXPECT_LT(std::abs(mean), 4.0 * 0.5 / std::sqrt(161.0)) << "seed " << seed;
  }
}

TEST(Instance, PerturbedKernelErrors) {
  const ModelInstance inst = build_instance(ModelSpec{.delta = 0.15});
  EXPECT_NEAR(inst.errors.theta, 1.321e-3, 1.321e-3 * 0.02);
  EXPECT_NEAR(*inst.errors.Theta_measured, 1.194e-3, 1.194e-3 * 0.02);
  EXPECT_NEAR(inst.errors.Theta_upper, 6.392e-3, 6.392e-3 * 0.02);
}

TEST(Instance, ExactNormsOfNormalSystem) {
  const ModelInstance inst = build_instance(ModelSpec{});
  EXPECT_NEAR(inst.exact_system.norm_F(), 7.216, 7.216 * 5e-3);
  EXPECT_NEAR(inst.exact_system.norm_R(), 2.196, 2.196 * 5e-3);
}

}  // namespace
}  // namespace regchoice
