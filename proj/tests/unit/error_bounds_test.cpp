#include "regchoice/error_bounds.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "regchoice/errors.hpp"
#include "regchoice/model_problem.hpp"

namespace regchoice {
namespace {

TEST(DeltaUpper, Examples) {
  EXPECT_NEAR(delta_upper(1e-4, 1.321e-3, 2.419, 6.907), 9.4e-3, 9.4e-3 * 0.02);
  EXPECT_NEAR(delta_upper(0.5, 1.321e-3, 2.419, 6.907), 1.219, 1.219 * 0.02);
  EXPECT_DOUBLE_EQ(delta_upper(0.3, 0.0, 2.5, 6.0), 0.75);
}

TEST(ThetaUpper, Examples) {
  EXPECT_NEAR(theta_upper(1.321e-3, 2.419), 6.392e-3, 6.392e-3 * 0.02);
  EXPECT_EQ(theta_upper(0.0, 2.419), 0.0);
  EXPECT_DOUBLE_EQ(theta_upper(1.0, 0.5), 1.0);
}

TEST(Qtilde, Examples) {
  EXPECT_DOUBLE_EQ(qtilde(0.5), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(qtilde(0.0), 0.5);
  EXPECT_DOUBLE_EQ(qtilde(1.0), 0.5);
  EXPECT_THROW(qtilde(-0.1), InvalidArgument);
}

TEST(Qtilde, MaximumAtHalf) {
  double best = 0.0, arg = -1.0;
  for (int k = 0; k <= 4000; ++k) {
    const double q = k * 1e-3;
    const double v = qtilde(q);
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0);
    if (v > best) {
      best = v;
      arg = q;
    }
  }
  EXPECT_NEAR(best, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(arg, 0.5, 1e-12);
  EXPECT_NEAR(qtilde(0.5 - 1e-9), qtilde(0.5 + 1e-9), 1e-8);
}

TEST(ErrorBound, Examples) {
  EXPECT_EQ(error_bound(0.0, 0.0, 0.0, 1, 1, 1, 1), 0.0);
  EXPECT_NEAR(error_bound(0.0, 1e-4, 0.0, 1, 1, 1, 1), 0.0101, 1e-15);
  EXPECT_NEAR(error_bound(0.5, 5e-4, 5e-4, 1, 1, 1, 1), 2e-2, 1e-15);
  EXPECT_THROW(error_bound(0.0, 1e-4, 0.0, 0, 1, 1, 1), InvalidArgument);
  EXPECT_THROW(error_bound(0.0, 1e-4, 0.0, 1, 1, -1, 1), InvalidArgument);
}

TEST(RateFit, ExactPowerLaws) {
  for (double p : {1.0, 0.5, 2.0 / 3.0, 0.2}) {
    std::vector<RateSample> s;
    for (double x : {1e-5, 1e-4, 1e-3, 1e-2, 1e-1}) s.push_back({x, 3.7 * std::pow(x, p)});
    EXPECT_NEAR(fit_convergence_rate(s), p, 1e-9);
  }
}

TEST(RateFit, RejectsDegenerateSamples) {
  const std::vector<RateSample> two{{1e-3, 1.0}, {1e-1, 2.0}};
  EXPECT_THROW(fit_convergence_rate(two), InvalidArgument);
  const std::vector<RateSample> narrow{{1e-3, 1.0}, {2e-3, 2.0}, {5e-3, 3.0}};
  EXPECT_THROW(fit_convergence_rate(narrow), InvalidArgument);
  const std::vector<RateSample> nonpositive{{1e-3, 1.0}, {1e-2, 0.0}, {1e-1, 3.0}};
  EXPECT_THROW(fit_convergence_rate(nonpositive), InvalidArgument);
}

TEST(RateReport, FillsFields) {
  std::vector<RateSample> s{{1e-4, 1e-2}, {1e-3, std::sqrt(1e-3)}, {1e-2, 1e-1}};
  const RateReport r = make_rate_report(0.0, s);
  EXPECT_DOUBLE_EQ(r.qtilde, 0.5);
  EXPECT_NEAR(r.fitted_exponent, 0.5, 1e-9);
  EXPECT_EQ(r.samples.size(), 3u);
}

TEST(MeasuredErrors, NoNoiseMeansNoError) {
  const ModelInstance inst = build_instance(ModelSpec{.r_used = 59.924, .delta = 0.0});
  EXPECT_EQ(inst.errors.theta, 0.0);
  EXPECT_EQ(*inst.errors.Delta_measured, 0.0);
  EXPECT_EQ(*inst.errors.Theta_measured, 0.0);
  EXPECT_EQ(*inst.errors.f_error, 0.0);
}

TEST(MeasuredErrors, TriangleInequalities) {
  for (double delta : {1e-4, 0.15, 0.5}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const ModelInstance inst = build_instance(ModelSpec{.delta = delta, .seed = seed});
      const double norm_At = hs_norm(inst.noisy_op);
      const double norm_A = hs_norm(inst.exact_op);
      const double norm_f = l2_norm(inst.exact_f);
      const auto& e = inst.errors;
      EXPECT_LE(*e.Delta_measured, norm_At * *e.f_error + norm_f * e.theta + 1e-12);
      EXPECT_LE(*e.Theta_measured, (norm_At + norm_A) * e.theta + 1e-12);
      EXPECT_GE(e.Delta_upper, 0.0);
      EXPECT_GE(e.Theta_upper, 0.0);
    }
  }
}

TEST(MeasuredErrors, GridMismatchThrows) {
  const ModelInstance a = build_instance(ModelSpec{});
  const ModelInstance b = build_instance(ModelSpec{.l = 81});
  EXPECT_THROW(measured_errors(a.exact_op, a.noisy_op, a.exact_f, b.noisy_f, a.exact_system,
                               a.noisy_system, 0.15),
               InvalidArgument);
}

}  // namespace
}  // namespace regchoice
