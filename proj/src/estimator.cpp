#include "l2d/estimator.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace l2d {

std::string to_string(SeSource s)
{
  return s == SeSource::kernel_fit ? "kernel" : "tmle";
}

SeSource parse_se_source(std::string_view name)
{
  if (name == "kernel" || name == "kernel_fit") {
    return SeSource::kernel_fit;
  }
  if (name == "tmle" || name == "targeted_fit") {
    return SeSource::targeted_fit;
  }
  throw std::invalid_argument("unknown standard error source '" + std::string(name) + "'");
}

void EstimatorOptions::validate() const
{
  if (points_per_dim != 0 && points_per_dim < 3) {
    throw std::invalid_argument("points_per_dim must be at least 3");
  }
  if (!(grid_padding_bandwidths >= 0.0) || !std::isfinite(grid_padding_bandwidths)) {
    throw std::invalid_argument("grid padding must be a nonnegative number of bandwidths");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("confidence level must lie in (0, 1)");
  }
  if (max_rounds < 1) {
    throw std::invalid_argument("max_rounds must be at least 1");
  }
  if (selector == BandwidthSelector::fixed) {
    Bandwidth::fixed(fixed_bandwidth);
  }
}

std::size_t EstimatorOptions::resolved_points(std::size_t dims) const
{
  if (points_per_dim != 0) {
    return points_per_dim;
  }
  return dims == 1 ? default_points_1d : default_points_2d;
}

double influence_se(std::span<const double> gradient_values)
{
  if (gradient_values.size() < 2) {
    throw std::invalid_argument("influence-curve SE needs at least 2 observations");
  }
  const auto [mean, sd] = mean_and_sd(gradient_values);
  return sd / std::sqrt(static_cast<double>(gradient_values.size()));
}

double influence_se(const DensityPair& pair, const LabeledDataset& data)
{
  return influence_se(gradient_on_sample(centering_constants(pair), data));
}

double normal_quantile(double p)
{
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

ConfidenceInterval wald_ci(double psi, double se, double level)
{
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("confidence level must lie in (0, 1)");
  }
  if (!(se >= 0.0)) {
    throw std::invalid_argument("standard error must be nonnegative");
  }
  const double half = normal_quantile(0.5 * (1.0 + level)) * se;
  return { psi - half, psi + half };
}

QuadGrid estimation_grid(const LabeledDataset& data, const Bandwidth& bw0,
                         const Bandwidth& bw1, const EstimatorOptions& options)
{
  std::vector<Interval> bounds;
  for (std::size_t j = 0; j < data.dims(); ++j) {
    const auto col = data.points().column(j);
    const auto [mn, mx] = std::minmax_element(col.begin(), col.end());
    const double pad = options.grid_padding_bandwidths * std::max(bw0.h[j], bw1.h[j]);
    bounds.push_back({ *mn - pad, *mx + pad });
  }
  return QuadGrid(std::move(bounds), options.resolved_points(data.dims()));
}

namespace {

Bandwidth arm_bandwidth(const PointSet& sample, const EstimatorOptions& options)
{
  if (options.selector == BandwidthSelector::fixed) {
    auto bw = Bandwidth::fixed(options.fixed_bandwidth);
    if (bw.h.size() != sample.dims()) {
      throw std::invalid_argument("fixed bandwidth dimension does not match the data");
    }
    return bw;
  }
  return select_bandwidth(sample, options.selector);
}

double plugin_from_values(const QuadGrid& grid, const ArmValues& v)
{
  std::vector<double> sq(grid.size());
  for (std::size_t i = 0; i < sq.size(); ++i) {
    const double d = v.v1[i] - v.v0[i];
    sq[i] = d * d;
  }
  return grid.integrate(sq);
}

} // namespace

EstimateReport estimate_l2d(const LabeledDataset& data, const EstimatorOptions& options)
{
  options.validate();
  const auto sample0 = data.arm_points(Arm::zero);
  const auto sample1 = data.arm_points(Arm::one);
  auto bw0 = arm_bandwidth(sample0, options);
  auto bw1 = arm_bandwidth(sample1, options);

  auto grid = std::make_shared<const QuadGrid>(estimation_grid(data, bw0, bw1, options));
  DensityPair initial{ kde_fit(sample0, bw0), kde_fit(sample1, bw1), data.proportion_one(),
                       grid, nullptr };

  auto cache = cache_pair(initial, data);
  const auto kernel_field = centering_constants(initial, cache.grid);
  std::vector<double> kernel_gradient(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    kernel_gradient[i] =
      kernel_field.value(cache.sample.v0[i], cache.sample.v1[i], data.label(i));
  }

  EstimateReport report;
  report.psi_kernel = plugin_from_values(*grid, cache.grid);
  report.se_kernel = influence_se(kernel_gradient);

  const auto fit = tmle_targeting_loop(initial, data, std::move(cache), options.max_rounds);
  report.psi_tmle = plugin_from_values(*grid, fit.final_values.grid);
  report.se_tmle = influence_se(fit.final_gradient);

  report.se = options.se_source == SeSource::kernel_fit ? report.se_kernel : report.se_tmle;
  report.level = options.level;
  report.ci_kernel = wald_ci(report.psi_kernel, report.se, options.level);
  report.ci_tmle = wald_ci(report.psi_tmle, report.se, options.level);

  report.epsilons = fit.epsilons;
  report.rounds = fit.rounds;
  report.criterion_met = fit.criterion_met;
  report.pn_dstar = fit.pn_dstar;
  report.sd_dstar = fit.sd_dstar;
  report.grid_bounds = grid->bounds();
  report.grid_points_per_dim = grid->points_per_dim();
  report.bandwidth0 = std::move(bw0);
  report.bandwidth1 = std::move(bw1);
  report.n0 = data.count(Arm::zero);
  report.n1 = data.count(Arm::one);
  return report;
}

} // namespace l2d
