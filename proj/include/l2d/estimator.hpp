#pragma once

#include "l2d/dataset.hpp"
#include "l2d/gradient.hpp"
#include "l2d/kde.hpp"
#include "l2d/tmle.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace l2d {

//! Which fitted pair the influence-curve standard error is evaluated at.
enum class SeSource
{
  kernel_fit,
  targeted_fit
};

std::string to_string(SeSource s);
SeSource parse_se_source(std::string_view name);

struct EstimatorOptions
{
  std::size_t points_per_dim = 0; // 0: 401 for d = 1, 201 for d = 2
  double grid_padding_bandwidths = 4.0;
  BandwidthSelector selector = BandwidthSelector::plug_in;
  std::vector<double> fixed_bandwidth; // used when selector == fixed
  double level = 0.95;
  int max_rounds = 10;
  SeSource se_source = SeSource::kernel_fit;

  void validate() const;
  std::size_t resolved_points(std::size_t dims) const;
};

struct ConfidenceInterval
{
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return lo <= x && x <= hi; }
  double width() const { return hi - lo; }
};

struct EstimateReport
{
  double psi_kernel = 0.0;
  double psi_tmle = 0.0;

  //! Standard error behind both intervals (chosen by EstimatorOptions::se_source).
  double se = 0.0;
  double se_kernel = 0.0; // from D* at the kernel fit
  double se_tmle = 0.0;   // from D* at the targeted fit

  double level = 0.95;
  ConfidenceInterval ci_kernel;
  ConfidenceInterval ci_tmle;

  std::vector<double> epsilons;
  int rounds = 0;
  bool criterion_met = false;
  double pn_dstar = 0.0;
  double sd_dstar = 0.0;

  std::vector<Interval> grid_bounds;
  std::size_t grid_points_per_dim = 0;
  Bandwidth bandwidth0;
  Bandwidth bandwidth1;
  std::size_t n0 = 0;
  std::size_t n1 = 0;
};

//! Empirical sd (divisor n - 1) of per-observation gradient values over sqrt(n).
double influence_se(std::span<const double> gradient_values);

//! Influence-curve SE of D*(pair) over the observations of `data`.
double influence_se(const DensityPair& pair, const LabeledDataset& data);

//! Standard normal quantile.
double normal_quantile(double p);

ConfidenceInterval wald_ci(double psi, double se, double level = 0.95);

//! Integration grid spanning both arms' data padded by `padding` times the
//! larger bandwidth in each dimension.
QuadGrid estimation_grid(const LabeledDataset& data, const Bandwidth& bw0,
                         const Bandwidth& bw1, const EstimatorOptions& options);

EstimateReport estimate_l2d(const LabeledDataset& data, const EstimatorOptions& options = {});

} // namespace l2d
