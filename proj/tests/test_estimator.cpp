#include "support.hpp"

#include "l2d/estimator.hpp"
#include "l2d/tmle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace l2d;
using namespace l2d::testing;

TEST(WaldCi, Arithmetic)
{
  const auto ci = wald_ci(0.2, 0.05);
  EXPECT_NEAR(ci.lo, 0.102, 1e-4);
  EXPECT_NEAR(ci.hi, 0.298, 1e-4);
  const auto zero = wald_ci(0.3, 0.0);
  EXPECT_EQ(zero.lo, 0.3);
  EXPECT_EQ(zero.hi, 0.3);
  EXPECT_NEAR(wald_ci(0.0, 1.0, 0.5).hi, 0.6744897501960817, 1e-12);
  EXPECT_THROW(wald_ci(0.1, -1.0), std::invalid_argument);
  EXPECT_THROW(wald_ci(0.1, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(wald_ci(0.1, 1.0, 0.0), std::invalid_argument);
}

TEST(WaldCi, NotTruncatedAtZero)
{
  EXPECT_LT(wald_ci(0.01, 0.05).lo, 0.0);
}

TEST(InfluenceSe, Values)
{
  EXPECT_EQ(influence_se(std::vector<double>(10, 0.0)), 0.0);
  // {3.6, -0.4} in proportions 0.1 / 0.9: sd 1.2, so se * sqrt(n) -> 1.2
  std::vector<double> d;
  for (int i = 0; i < 100000; ++i) {
    d.push_back(i % 10 == 0 ? 3.6 : -0.4);
  }
  EXPECT_NEAR(influence_se(d) * std::sqrt(100000.0), 1.2, 1e-4);
}

TEST(InfluenceSe, GaussianSmoke)
{
  const auto data = sim::sample_design(sim::make_design("gaussian"), 800, 5);
  auto r = estimate_l2d(data);
  EXPECT_GT(r.se, 0.0);
  EXPECT_TRUE(std::isfinite(r.se));
  EXPECT_GT(r.se_tmle, 0.0);
}

TEST(Options, Validation)
{
  EstimatorOptions o;
  EXPECT_NO_THROW(o.validate());
  EXPECT_EQ(o.resolved_points(1), 401u);
  EXPECT_EQ(o.resolved_points(2), 201u);
  o.level = 1.5;
  EXPECT_THROW(o.validate(), std::invalid_argument);
  o = {};
  o.points_per_dim = 2;
  EXPECT_THROW(o.validate(), std::invalid_argument);
  o = {};
  o.max_rounds = 0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
  o = {};
  o.grid_padding_bandwidths = -1.0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
  o = {};
  o.selector = BandwidthSelector::fixed;
  EXPECT_THROW(o.validate(), std::invalid_argument);
  EXPECT_EQ(parse_se_source("tmle"), SeSource::targeted_fit);
  EXPECT_THROW(parse_se_source("bootstrap"), std::invalid_argument);
}

TEST(EstimationGrid, CoversDataWithPadding)
{
  const auto data = sim::sample_design(sim::make_design("uniform"), 200, 6);
  EstimatorOptions o;
  const auto b0 = Bandwidth::fixed({ 0.05 });
  const auto b1 = Bandwidth::fixed({ 0.1 });
  const auto g = estimation_grid(data, b0, b1, o);
  const auto xs = data.points().column(0);
  const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
  EXPECT_NEAR(g.bounds()[0].lo, *mn - 0.4, 1e-12);
  EXPECT_NEAR(g.bounds()[0].hi, *mx + 0.4, 1e-12);
  EXPECT_EQ(g.points_per_dim(), 401u);
}

TEST(Estimate, ReportFieldsConsistent)
{
  const auto data = sim::sample_design(sim::make_design("triangle"), 500, 7);
  const auto r = estimate_l2d(data);
  EXPECT_EQ(r.n0, 500u);
  EXPECT_EQ(r.n1, 500u);
  EXPECT_EQ(r.se, r.se_kernel);
  EXPECT_NEAR(r.ci_tmle.hi - r.psi_tmle, r.psi_tmle - r.ci_tmle.lo, 1e-12);
  EXPECT_NEAR(r.ci_kernel.width(), r.ci_tmle.width(), 1e-12);
  EXPECT_EQ(static_cast<int>(r.epsilons.size()), r.rounds);
  EXPECT_EQ(r.bandwidth0.selector, BandwidthSelector::plug_in);

  EstimatorOptions o;
  o.se_source = SeSource::targeted_fit;
  const auto t = estimate_l2d(data, o);
  EXPECT_EQ(t.se, t.se_tmle);
  EXPECT_EQ(t.psi_tmle, r.psi_tmle);
}

TEST(Estimate, Deterministic)
{
  const auto data = sim::sample_design(sim::make_design("gaussian"), 300, 8);
  const auto a = estimate_l2d(data);
  const auto b = estimate_l2d(data);
  EXPECT_EQ(a.psi_tmle, b.psi_tmle);
  EXPECT_EQ(a.se, b.se);
  EXPECT_EQ(a.epsilons, b.epsilons);
}

TEST(Estimate, ArmSwapInvariance)
{
  const auto data = sim::sample_design(sim::make_design("gaussian"), 300, 9);
  const auto a = estimate_l2d(data);
  const auto b = estimate_l2d(data.swapped());
  EXPECT_NEAR(a.psi_kernel, b.psi_kernel, 1e-12);
  EXPECT_NEAR(a.psi_tmle, b.psi_tmle, 1e-9);
}

TEST(Estimate, FixedBandwidth)
{
  const auto data = sim::sample_design(sim::make_design("gaussian"), 300, 10);
  EstimatorOptions o;
  o.selector = BandwidthSelector::fixed;
  o.fixed_bandwidth = { 0.2 };
  const auto r = estimate_l2d(data, o);
  EXPECT_EQ(r.bandwidth0.h[0], 0.2);
  EXPECT_EQ(r.bandwidth1.h[0], 0.2);
  o.fixed_bandwidth = { 0.2, 0.3 };
  EXPECT_THROW(estimate_l2d(data, o), std::invalid_argument);
}

// Null examples are checked against the standard error of the targeted fit,
// the interval that accompanies psi_tmle.
TEST(Estimate, UniformNull)
{
  const auto data = sim::sample_design(sim::make_design("uniform", true), 5000, 11);
  const auto r = estimate_l2d(data);
  EXPECT_LT(std::abs(r.psi_tmle), 3.0 * r.se_tmle);
}

TEST(Estimate, UniformOffsetCoversTruth)
{
  const auto data = sim::sample_design(sim::make_design("uniform"), 12800, 12);
  const auto r = estimate_l2d(data);
  EXPECT_LT(std::abs(r.psi_tmle - 0.2), 3.0 * r.se_tmle);
}

TEST(Estimate, BivariateNull)
{
  const auto data = gaussian_null_2d(2000, 13);
  const auto r = estimate_l2d(data);
  EXPECT_EQ(r.grid_points_per_dim, 201u);
  EXPECT_EQ(r.bandwidth0.h.size(), 2u);
  EXPECT_LT(std::abs(r.psi_tmle), 3.0 * r.se_tmle);
}

TEST(Estimate, BivariateShiftDetected)
{
  auto base = gaussian_null_2d(400, 14);
  std::vector<double> c(base.points().coords().begin(), base.points().coords().end());
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (base.label(i) == Arm::one) {
      c[2 * i] += 1.0;
    }
  }
  const auto r = estimate_l2d(LabeledDataset(PointSet(2, c), base.labels()));
  EXPECT_GT(r.ci_tmle.lo, 0.0);
}
