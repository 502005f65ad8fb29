#include "l2d/grid.hpp"
#include "l2d/kde.hpp"
#include "l2d/simharness.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace l2d;

namespace {

PointSet normal_sample(std::size_t n, double sd, std::uint64_t seed, std::size_t d = 1)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, sd);
  std::vector<double> c(n * d);
  for (double& v : c) {
    v = z(rng);
  }
  return PointSet(d, std::move(c));
}

PointSet scaled(const PointSet& s, double k)
{
  std::vector<double> c(s.coords().begin(), s.coords().end());
  for (double& v : c) {
    v *= k;
  }
  return PointSet(s.dims(), std::move(c));
}

double sample_sd(const std::vector<double>& x)
{
  double m = 0.0;
  for (double v : x) {
    m += v;
  }
  m /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) {
    ss += (v - m) * (v - m);
  }
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double grid_mass(const KernelDensity& f, const PointSet& sample, double pad)
{
  std::vector<Interval> b;
  for (std::size_t j = 0; j < sample.dims(); ++j) {
    const auto col = sample.column(j);
    const auto [mn, mx] = std::minmax_element(col.begin(), col.end());
    b.push_back({ *mn - pad * f.bandwidth().h[j], *mx + pad * f.bandwidth().h[j] });
  }
  const QuadGrid g(b, sample.dims() == 1 ? 2001 : 201);
  return g.integrate(f.evaluate(g.points()));
}

} // namespace

TEST(Density, AnalyticDensitiesIntegrateToOne)
{
  const QuadGrid g({ { -5.0, 5.0 } }, 200001);
  EXPECT_NEAR(g.integrate(GaussianDensity(0.3, 0.5).evaluate(g.points())), 1.0, 1e-10);
  EXPECT_NEAR(g.integrate(TriangleDensity(0.5, 1.0).evaluate(g.points())), 1.0, 1e-8);
  EXPECT_NEAR(g.integrate(UniformDensity(0.1, 1.1).evaluate(g.points())), 1.0, 1e-4);
}

TEST(Density, PointValues)
{
  const double x0[] = { 0.0 };
  const double x1[] = { 0.75 };
  EXPECT_NEAR(GaussianDensity(0.0, 0.5)(x0), 0.7978845608028654, 1e-15);
  EXPECT_DOUBLE_EQ(TriangleDensity(0.5, 1.0)(x1), 0.75);
  EXPECT_DOUBLE_EQ(UniformDensity(0.1, 1.1)(x1), 1.0);
  EXPECT_DOUBLE_EQ(UniformDensity(0.1, 1.1)(x0), 0.0);
  EXPECT_THROW(GaussianDensity(0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(UniformDensity(1.0, 0.0), std::invalid_argument);
}

TEST(Bandwidth, NormalReference1d)
{
  // standardize a sample to sd exactly 1
  auto s = normal_sample(100, 1.0, 3);
  const double sd = sample_sd(s.column(0));
  s = scaled(s, 1.0 / sd);
  const auto bw = normal_reference_bandwidth(s);
  EXPECT_NEAR(bw.h[0], std::pow(4.0 / 300.0, 0.2), 1e-12);
  EXPECT_NEAR(bw.h[0], 0.421685, 1e-6);
  EXPECT_NEAR(normal_reference_bandwidth(scaled(s, 2.0)).h[0], 2.0 * bw.h[0], 1e-12);
}

TEST(Bandwidth, NormalReference2d)
{
  auto s = normal_sample(100, 1.0, 4, 2);
  std::vector<double> c(s.coords().begin(), s.coords().end());
  for (std::size_t j = 0; j < 2; ++j) {
    const double sd = sample_sd(s.column(j));
    for (std::size_t i = 0; i < 100; ++i) {
      c[2 * i + j] /= sd;
    }
  }
  const auto bw = normal_reference_bandwidth(PointSet(2, c));
  EXPECT_NEAR(bw.h[0], std::pow(4.0 / 400.0, 1.0 / 6.0), 1e-12);
  EXPECT_NEAR(bw.h[1], 0.4642, 1e-4);
}

TEST(Bandwidth, DegenerateSampleNamesDimension)
{
  const PointSet s(2, { 1.0, 0.0, 2.0, 0.0, 3.0, 0.0, 4.0, 0.0 });
  try {
    normal_reference_bandwidth(s);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("dimension 1"), std::string::npos);
  }
  EXPECT_THROW(normal_reference_bandwidth(PointSet::from_column({ 1.0 })),
               std::invalid_argument);
}

TEST(Bandwidth, PlugInCloseToNormalReferenceForGaussianData)
{
  const auto s = normal_sample(10000, 1.0, 5);
  const double hpi = plug_in_bandwidth(s).h[0];
  const double nrd = normal_reference_bandwidth(s).h[0];
  EXPECT_NEAR(hpi / nrd, 1.0, 0.15);
}

TEST(Bandwidth, PlugInScaleEquivariant)
{
  const auto s = normal_sample(2000, 1.0, 6);
  EXPECT_NEAR(plug_in_bandwidth(scaled(s, 2.0)).h[0], 2.0 * plug_in_bandwidth(s).h[0], 1e-9);
}

TEST(Bandwidth, PlugInAdaptsToBimodality)
{
  auto s = normal_sample(10000, 1.0, 7);
  std::vector<double> c(s.coords().begin(), s.coords().end());
  for (std::size_t i = 0; i < c.size(); i += 2) {
    c[i] += 6.0;
  }
  const auto b = PointSet::from_column(c);
  EXPECT_LT(plug_in_bandwidth(b).h[0], normal_reference_bandwidth(b).h[0]);
}

TEST(Bandwidth, SelectAndValidate)
{
  const auto s = normal_sample(50, 1.0, 8);
  EXPECT_EQ(select_bandwidth(s, BandwidthSelector::plug_in).selector,
            BandwidthSelector::plug_in);
  EXPECT_THROW(select_bandwidth(s, BandwidthSelector::fixed), std::invalid_argument);
  EXPECT_THROW(Bandwidth::fixed({ -1.0 }), std::invalid_argument);
  EXPECT_THROW(Bandwidth::fixed({}), std::invalid_argument);
  EXPECT_EQ(parse_bandwidth_selector("hpi"), BandwidthSelector::plug_in);
  EXPECT_EQ(parse_bandwidth_selector("nrd"), BandwidthSelector::normal_reference);
  EXPECT_THROW(parse_bandwidth_selector("silverman"), std::invalid_argument);
}

// Binned functional estimates against the exact double sum and frozen values
// from an independent numpy evaluation.
TEST(Bandwidth, PsiFunctionals)
{
  const std::vector<double> x = { -1.3, -0.4, 0.1, 0.25, 0.9, 1.7, 2.2, -2.0 };
  EXPECT_NEAR(detail::exact_psi(x, 0.7, 4), 0.392205066956, 1e-10);
  EXPECT_NEAR(detail::exact_psi(x, 0.9, 6), -0.732022653910, 1e-10);

  const auto big = normal_sample(3000, 1.0, 9).column(0);
  const auto [mn, mx] = std::minmax_element(big.begin(), big.end());
  const auto counts = detail::linear_bin(big, *mn, *mx, 401);
  double total = 0.0;
  for (double c : counts) {
    total += c;
  }
  EXPECT_NEAR(total, 3000.0, 1e-9);
  const double delta = (*mx - *mn) / 400.0;
  for (int r : { 4, 6 }) {
    const double g = r == 4 ? 0.3 : 0.4;
    const double exact = detail::exact_psi(big, g, r);
    //! binning error is O((delta / g)^2)
    EXPECT_NEAR(detail::binned_psi(counts, delta, big.size(), g, r) / exact, 1.0, 5e-3);
  }
}

TEST(Kde, SingleKernelPeak)
{
  const auto f = kde_fit(PointSet::from_column({ 0.0 }), Bandwidth::fixed({ 1.0 }));
  const double x[] = { 0.0 };
  EXPECT_NEAR((*f)(x), 0.3989422804014327, 1e-12);
}

TEST(Kde, TwoKernelAverage)
{
  const auto f = kde_fit(PointSet::from_column({ -1.0, 1.0 }), Bandwidth::fixed({ 1.0 }));
  const auto v = kde_eval(*f, PointSet::from_column({ 0.0 }));
  EXPECT_NEAR(v[0], 0.24197072451914337, 1e-12);
}

TEST(Kde, MatchesBruteForceSum)
{
  const auto s = normal_sample(500, 1.0, 10);
  const double h = 0.2;
  const auto f = kde_fit(s, Bandwidth::fixed({ h }));
  const auto q = normal_sample(50, 2.0, 11);
  const auto v = f->evaluate(q);
  for (std::size_t i = 0; i < q.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double z = (q(i, 0) - s(j, 0)) / h;
      sum += std::exp(-0.5 * z * z);
    }
    const double expect = sum / (500.0 * h * std::sqrt(2.0 * M_PI));
    EXPECT_NEAR(v[i], expect, 1e-9 * expect + 1e-15);
  }
}

TEST(Kde, MatchesBruteForceSum2d)
{
  const auto s = normal_sample(300, 1.0, 12, 2);
  const double hx = 0.3;
  const double hy = 0.5;
  const auto f = kde_fit(s, Bandwidth::fixed({ hx, hy }));
  const auto q = normal_sample(20, 1.5, 13, 2);
  const auto v = f->evaluate(q);
  for (std::size_t i = 0; i < q.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double zx = (q(i, 0) - s(j, 0)) / hx;
      const double zy = (q(i, 1) - s(j, 1)) / hy;
      sum += std::exp(-0.5 * (zx * zx + zy * zy));
    }
    const double expect = sum / (300.0 * hx * hy * 2.0 * M_PI);
    EXPECT_NEAR(v[i], expect, 1e-9 * expect + 1e-15);
  }
}

TEST(Kde, FarPointsStayPositiveAndFinite)
{
  const auto f = kde_fit(PointSet::from_column({ 0.0, 0.1 }), Bandwidth::fixed({ 0.1 }));
  const auto v = f->evaluate(PointSet::from_column({ 3.0, -2.5 }));
  for (double x : v) {
    EXPECT_TRUE(std::isfinite(x));
    EXPECT_GE(x, 0.0);
  }
  EXPECT_THROW(f->evaluate(PointSet::from_column({ NAN })), std::invalid_argument);
  EXPECT_THROW(kde_fit(PointSet::from_column({ 0.0 }), Bandwidth::fixed({ 1.0, 1.0 })),
               std::invalid_argument);
}

// Every fit integrates to one over the sample range padded by 6 bandwidths.
TEST(KdeProperty, IntegratesToOne)
{
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 20 + 37 * seed;
    const auto s1 = normal_sample(n, 0.5 + 0.1 * seed, 100 + seed);
    for (auto sel : { BandwidthSelector::plug_in, BandwidthSelector::normal_reference }) {
      const auto f = kde_fit(s1, select_bandwidth(s1, sel));
      EXPECT_NEAR(grid_mass(*f, s1, 6.0), 1.0, 1e-3);
    }
    if (seed % 4 == 0) {
      const auto s2 = normal_sample(n, 1.0, 200 + seed, 2);
      const auto f = kde_fit(s2, select_bandwidth(s2, BandwidthSelector::plug_in));
      EXPECT_NEAR(grid_mass(*f, s2, 6.0), 1.0, 1e-3);
    }
  }
}
