#include "support.hpp"

#include "l2d/estimator.hpp"
#include "l2d/tmle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace l2d;
using namespace l2d::testing;

namespace {

struct KernelSetup
{
  LabeledDataset data;
  DensityPair pair;
};

KernelSetup kernel_setup(const std::string& design, std::size_t n, std::uint64_t seed,
                         bool null_case = false)
{
  const auto d = sim::make_design(design, null_case);
  auto data = sim::sample_design(d, n, seed);
  EstimatorOptions o;
  const auto s0 = data.arm_points(Arm::zero);
  const auto s1 = data.arm_points(Arm::one);
  auto b0 = select_bandwidth(s0, o.selector);
  auto b1 = select_bandwidth(s1, o.selector);
  auto grid = std::make_shared<const QuadGrid>(estimation_grid(data, b0, b1, o));
  DensityPair pair{ kde_fit(s0, b0), kde_fit(s1, b1), data.proportion_one(), grid, nullptr };
  return { std::move(data), std::move(pair) };
}

} // namespace

TEST(EpsilonBounds, Arithmetic)
{
  const std::vector<double> d = { -2.0, 3.0 };
  const auto b = epsilon_bounds(d);
  EXPECT_NEAR(b.lo, -0.999 / 3.0, 1e-15);
  EXPECT_NEAR(b.hi, 0.999 / 2.0, 1e-15);
  EXPECT_FALSE(b.degenerate);

  const std::vector<double> u = { 3.6, -0.4 };
  const auto c = epsilon_bounds(u);
  EXPECT_NEAR(c.lo, -0.2775, 1e-12);
  EXPECT_NEAR(c.hi, 2.4975, 1e-12);
}

TEST(EpsilonBounds, DegenerateAndOneSided)
{
  const std::vector<double> z(5, 0.0);
  const auto b = epsilon_bounds(z);
  EXPECT_TRUE(b.degenerate);
  EXPECT_EQ(b.lo, -EpsilonBounds::sentinel);
  EXPECT_EQ(b.hi, EpsilonBounds::sentinel);

  const std::vector<double> pos = { 1.0, 2.0 };
  const auto p = epsilon_bounds(pos);
  EXPECT_NEAR(p.lo, -0.4995, 1e-15);
  EXPECT_EQ(p.hi, EpsilonBounds::sentinel);
}

TEST(EpsilonBounds, UnionOfBlocks)
{
  const std::vector<double> a = { -1.0, 0.5 };
  const std::vector<double> b = { 4.0 };
  const std::span<const double> blocks[] = { a, b };
  const auto e = epsilon_bounds(blocks);
  EXPECT_NEAR(e.lo, -0.999 / 4.0, 1e-15);
  EXPECT_NEAR(e.hi, 0.999, 1e-15);
}

TEST(EpsilonLikelihood, Values)
{
  const std::vector<double> d = { 1.0, -0.5 };
  EXPECT_EQ(epsilon_log_likelihood(0.0, d), 0.0);
  EXPECT_NEAR(epsilon_log_likelihood(0.5, d), std::log(1.5) + std::log(0.75), 1e-15);
  EXPECT_NEAR(epsilon_log_likelihood(0.5, d), 0.11778, 1e-5);
  const std::vector<double> z(4, 0.0);
  EXPECT_EQ(epsilon_log_likelihood(123.0, z), 0.0);
  EXPECT_THROW(epsilon_log_likelihood(2.0, d), std::domain_error);
}

TEST(FitEpsilon, ClosedForms)
{
  const std::vector<double> sym = { 1.0, -1.0 };
  EXPECT_NEAR(fit_epsilon(sym, epsilon_bounds(sym)), 0.0, 1e-12);

  const std::vector<double> d = { 1.0, -0.5 };
  EXPECT_NEAR(fit_epsilon(d, epsilon_bounds(d)), 0.5, 1e-9);

  const std::vector<double> pos = { 0.5, 2.0, 1.0 };
  const auto b = epsilon_bounds(pos);
  EXPECT_EQ(fit_epsilon(pos, b), b.hi);

  const std::vector<double> z(3, 0.0);
  EXPECT_EQ(fit_epsilon(z, epsilon_bounds(z)), 0.0);
}

// The fitted epsilon is a stationary point of the concave likelihood.
TEST(FitEpsilonProperty, ScoreRoot)
{
  std::mt19937_64 rng(31);
  std::normal_distribution<double> z(0.2, 1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> d(5 + t);
    for (double& v : d) {
      v = z(rng);
    }
    const auto b = epsilon_bounds(d);
    const double e = fit_epsilon(d, b);
    ASSERT_TRUE(b.contains(e));
    if (e > b.lo && e < b.hi) {
      EXPECT_NEAR(epsilon_score(e, d), 0.0, 1e-8 * static_cast<double>(d.size()));
    }
    const double ll = epsilon_log_likelihood(e, d);
    for (double step : { -1e-4, 1e-4 }) {
      const double other = std::clamp(e + step, b.lo, b.hi);
      EXPECT_GE(ll + 1e-12, epsilon_log_likelihood(other, d));
    }
  }
}

TEST(StoppingRule, Threshold)
{
  // threshold 1 / (10 ln 100) = 0.02171
  EXPECT_TRUE(stopping_criterion_met(0.001, 1.0, 100));
  EXPECT_TRUE(stopping_criterion_met(0.0217, 1.0, 100));
  EXPECT_FALSE(stopping_criterion_met(0.0218, 1.0, 100));
  EXPECT_FALSE(stopping_criterion_met(-0.03, 1.0, 100));
}

TEST(TmleUpdate, IdenticalFitIsFixedPoint)
{
  auto g = std::make_shared<GaussianDensity>(0.0, 1.0);
  auto data = sim::sample_design(sim::make_design("gaussian", true), 100, 3);
  const auto pair = make_pair(g, g, grid_1d(-6.0, 6.0, 401), data.proportion_one());
  const auto res = tmle_update(pair, centering_constants(pair), data);
  EXPECT_EQ(res.epsilon, 0.0);
  EXPECT_TRUE(res.degenerate);

  const auto fit = tmle_targeting_loop(pair, data);
  EXPECT_EQ(fit.rounds, 1);
  ASSERT_EQ(fit.epsilons.size(), 1u);
  EXPECT_EQ(fit.epsilons[0], 0.0);
  EXPECT_TRUE(fit.criterion_met);
  EXPECT_NEAR(l2d_plugin(fit.final_pair), 0.0, 1e-15);
}

TEST(TmleUpdate, GaussianUpdateKeepsMassAndReducesScore)
{
  auto s = kernel_setup("gaussian", 800, 17);
  const auto field = centering_constants(s.pair);
  const auto res = tmle_update(s.pair, field, s.data);
  const auto [m0, m1] = arm_masses(res.pair);
  EXPECT_NEAR(m0, 1.0, 1e-4);
  EXPECT_NEAR(m1, 1.0, 1e-4);

  const auto before = mean_and_sd(gradient_on_sample(field, s.data)).first;
  const auto after =
    mean_and_sd(gradient_on_sample(centering_constants(res.pair), s.data)).first;
  EXPECT_LT(std::abs(after), std::abs(before));
}

TEST(TmleUpdate, FluctuatedDensityNonnegative)
{
  auto s = kernel_setup("uniform", 400, 18);
  const auto res = tmle_update(s.pair, centering_constants(s.pair), s.data);
  const auto on_grid = evaluate_pair(res.pair, s.pair.grid->points());
  const auto on_sample = evaluate_pair(res.pair, s.data.points());
  for (const auto* v : { &on_grid.v0, &on_grid.v1, &on_sample.v0, &on_sample.v1 }) {
    for (double x : *v) {
      ASSERT_GE(x, 0.0);
    }
  }
}

TEST(TmleLoop, CachedAndDirectAgree)
{
  auto s = kernel_setup("triangle", 300, 19);
  const auto direct = tmle_targeting_loop(s.pair, s.data);
  const auto cached = tmle_targeting_loop(s.pair, s.data, cache_pair(s.pair, s.data));
  ASSERT_EQ(direct.epsilons.size(), cached.epsilons.size());
  for (std::size_t k = 0; k < direct.epsilons.size(); ++k) {
    EXPECT_NEAR(direct.epsilons[k], cached.epsilons[k], 1e-12);
  }
  EXPECT_NEAR(l2d_plugin(direct.final_pair),
              l2d_plugin(cached.final_pair), 1e-12);
  // the final pair evaluates to the cached values
  const auto v = evaluate_pair(cached.final_pair, s.data.points());
  for (std::size_t i = 0; i < v.v1.size(); ++i) {
    EXPECT_NEAR(v.v1[i], cached.final_values.sample.v1[i], 1e-12);
  }
}

TEST(TmleLoop, RecordsEveryRoundAndRespectsMaxRounds)
{
  auto s = kernel_setup("gaussian", 200, 20);
  const auto fit = tmle_targeting_loop(s.pair, s.data, 1);
  EXPECT_EQ(fit.rounds, 1);
  EXPECT_EQ(fit.epsilons.size(), 1u);
  EXPECT_EQ(fit.final_gradient.size(), s.data.size());
  EXPECT_EQ(fit.warning(), !fit.criterion_met);
  EXPECT_THROW(tmle_targeting_loop(s.pair, s.data, 0), std::invalid_argument);
}

TEST(TmleLoop, RejectsMismatchedProportion)
{
  auto s = kernel_setup("gaussian", 100, 21);
  s.pair.pA1 = 0.4;
  EXPECT_THROW(tmle_targeting_loop(s.pair, s.data), std::invalid_argument);
}

// Targeted fits stay normalized and nonnegative on grid and sample.
TEST(TmleProperty, FluctuationInvariants)
{
  for (const std::string design : { "gaussian", "triangle", "uniform" }) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      auto s = kernel_setup(design, 150 + 100 * seed, 40 + seed);
      const auto fit = tmle_targeting_loop(s.pair, s.data);
      EXPECT_GE(fit.rounds, 1);
      EXPECT_LE(fit.rounds, 10);
      const auto [m0, m1] = arm_masses(fit.final_pair);
      EXPECT_NEAR(m0, 1.0, 1e-4) << design << " " << seed;
      EXPECT_NEAR(m1, 1.0, 1e-4) << design << " " << seed;
      for (const auto* v : { &fit.final_values.grid.v0, &fit.final_values.grid.v1,
                             &fit.final_values.sample.v0, &fit.final_values.sample.v1 }) {
        for (double x : *v) {
          ASSERT_GE(x, 0.0);
        }
      }
      if (fit.criterion_met) {
        EXPECT_LE(std::abs(fit.pn_dstar),
                  fit.sd_dstar / (std::sqrt(static_cast<double>(s.data.size())) *
                                  std::log(static_cast<double>(s.data.size()))));
      }
    }
  }
}
