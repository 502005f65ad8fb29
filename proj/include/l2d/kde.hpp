#pragma once

#include "l2d/density.hpp"
#include "l2d/points.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace l2d {

enum class BandwidthSelector
{
  plug_in,
  normal_reference,
  fixed
};

std::string to_string(BandwidthSelector s);
BandwidthSelector parse_bandwidth_selector(std::string_view name);

//! Diagonal Gaussian-kernel bandwidth, one scale per dimension.
struct Bandwidth
{
  std::vector<double> h;
  BandwidthSelector selector = BandwidthSelector::fixed;

  static Bandwidth fixed(std::vector<double> h);
  void validate() const;
};

//! Normal-scale rule h_j = sd_j * (4 / ((d + 2) n))^(1 / (d + 4)).
Bandwidth normal_reference_bandwidth(const PointSet& sample);

//! Two-stage direct plug-in selector (Wand & Jones), applied per coordinate.
//!
//! The psi_8 functional starts from the normal scale, psi_6 and psi_4 are
//! kernel estimates at their AMSE-optimal pilot bandwidths, and the result
//! minimizes the AMISE h = (R(phi) / (psi_4 n))^(1/5). The pilot functionals
//! are computed on a linearly binned copy of the sample.
Bandwidth plug_in_bandwidth(const PointSet& sample);

Bandwidth select_bandwidth(const PointSet& sample, BandwidthSelector selector);

//! Gaussian product-kernel density estimate.
//!
//! Evaluation is the direct kernel sum. Support points are sorted along the
//! first coordinate and terms further than `cutoff_bandwidths` scales away are
//! skipped; each skipped term is below exp(-40.5) of the kernel peak.
class KernelDensity final : public Density
{
public:
  static constexpr double cutoff_bandwidths = 9.0;

  KernelDensity(const PointSet& sample, Bandwidth bw);

  std::size_t dims() const override { return dims_; }
  using Density::evaluate;
  void evaluate(const PointSet& points, std::span<double> out) const override;

  const Bandwidth& bandwidth() const { return bw_; }
  std::size_t sample_size() const { return xs_.size(); }

private:
  std::size_t dims_;
  Bandwidth bw_;
  std::vector<double> xs_; // sorted first coordinate
  std::vector<double> ys_; // second coordinate, permuted alongside xs_
  double norm_;
};

std::shared_ptr<const KernelDensity> kde_fit(const PointSet& sample, Bandwidth bw);

std::vector<double> kde_eval(const KernelDensity& density, const PointSet& points);

namespace detail {

//! Sum of exp(-z^2 / 2), z = (q - xs[j]) * inv_h, over a contiguous block.
double gauss_kernel_sum(const double* xs, std::size_t n, double q, double inv_h);

//! Bivariate product-kernel analogue of gauss_kernel_sum.
double gauss_kernel_sum_2d(const double* xs, const double* ys, std::size_t n, double qx,
                           double qy, double inv_hx, double inv_hy);

//! Linear binning of `x` onto `m` equally spaced grid points spanning [lo, hi].
std::vector<double> linear_bin(std::span<const double> x, double lo, double hi,
                               std::size_t m);

//! Binned estimate of psi_r = integral f^(r) f for even r in {4, 6}.
double binned_psi(std::span<const double> counts, double delta, std::size_t n, double g,
                  int r);

//! Exact O(n^2) estimate of psi_r, used to check the binned version.
double exact_psi(std::span<const double> x, double g, int r);

} // namespace detail

} // namespace l2d
