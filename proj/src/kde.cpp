#include "l2d/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace l2d {

std::string to_string(BandwidthSelector s)
{
  switch (s) {
    case BandwidthSelector::plug_in:
      return "plug_in";
    case BandwidthSelector::normal_reference:
      return "normal_reference";
    case BandwidthSelector::fixed:
      return "fixed";
  }
  return "unknown";
}

BandwidthSelector parse_bandwidth_selector(std::string_view name)
{
  if (name == "plug_in" || name == "hpi") {
    return BandwidthSelector::plug_in;
  }
  if (name == "normal_reference" || name == "nrd") {
    return BandwidthSelector::normal_reference;
  }
  if (name == "fixed") {
    return BandwidthSelector::fixed;
  }
  throw std::invalid_argument("unknown bandwidth selector '" + std::string(name) + "'");
}

Bandwidth Bandwidth::fixed(std::vector<double> h)
{
  Bandwidth bw{ std::move(h), BandwidthSelector::fixed };
  bw.validate();
  return bw;
}

void Bandwidth::validate() const
{
  if (h.empty() || h.size() > 2) {
    throw std::invalid_argument("bandwidth must have 1 or 2 components");
  }
  for (double v : h) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("bandwidth components must be positive and finite");
    }
  }
}

namespace {

constexpr std::size_t bin_count = 401;
const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);

double sample_sd(std::span<const double> x)
{
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) {
    ss += (v - mean) * (v - mean);
  }
  return std::sqrt(ss / (n - 1.0));
}

std::vector<double> checked_scales(const PointSet& sample, std::size_t min_n)
{
  if (sample.size() < min_n) {
    throw std::invalid_argument("bandwidth selection needs at least " +
                                std::to_string(min_n) + " observations");
  }
  std::vector<double> sd(sample.dims());
  for (std::size_t j = 0; j < sample.dims(); ++j) {
    const auto col = sample.column(j);
    sd[j] = sample_sd(col);
    if (!(sd[j] > 0.0) || !std::isfinite(sd[j])) {
      throw std::invalid_argument("degenerate sample: dimension " + std::to_string(j) +
                                  " has zero spread");
    }
  }
  return sd;
}

// Derivatives of the standard normal density, even orders only.
double phi_derivative(double z, int r)
{
  const double z2 = z * z;
  const double base = inv_sqrt_2pi * std::exp(-0.5 * z2);
  switch (r) {
    case 4:
      return (z2 * z2 - 6.0 * z2 + 3.0) * base;
    case 6:
      return (z2 * z2 * z2 - 15.0 * z2 * z2 + 45.0 * z2 - 15.0) * base;
    default:
      throw std::invalid_argument("psi functional order must be 4 or 6");
  }
}

double plug_in_1d(std::span<const double> x, double sd)
{
  const auto n = static_cast<double>(x.size());
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  const double lo = *mn;
  const double hi = *mx;
  const auto counts = detail::linear_bin(x, lo, hi, bin_count);
  const double delta = (hi - lo) / static_cast<double>(bin_count - 1);

  const double psi8 = 105.0 / (32.0 * std::pow(sd, 9) * std::sqrt(std::numbers::pi));
  const double g6 = std::pow(30.0 * inv_sqrt_2pi / (psi8 * n), 1.0 / 9.0);
  const double psi6 = detail::binned_psi(counts, delta, x.size(), g6, 6);

  const double normal_scale =
    sd * std::pow(4.0 / (3.0 * n), 0.2);
  if (!(psi6 < 0.0)) {
    return normal_scale;
  }
  const double g4 = std::pow(-6.0 * inv_sqrt_2pi / (psi6 * n), 1.0 / 7.0);
  const double psi4 = detail::binned_psi(counts, delta, x.size(), g4, 4);
  if (!(psi4 > 0.0)) {
    return normal_scale;
  }
  return std::pow(0.5 * inv_sqrt_pi / (psi4 * n), 0.2);
}

} // namespace

Bandwidth normal_reference_bandwidth(const PointSet& sample)
{
  const auto sd = checked_scales(sample, 2);
  const auto d = static_cast<double>(sample.dims());
  const auto n = static_cast<double>(sample.size());
  const double factor = std::pow(4.0 / ((d + 2.0) * n), 1.0 / (d + 4.0));
  Bandwidth bw{ {}, BandwidthSelector::normal_reference };
  for (double s : sd) {
    bw.h.push_back(s * factor);
  }
  return bw;
}

Bandwidth plug_in_bandwidth(const PointSet& sample)
{
  const auto sd = checked_scales(sample, 4);
  Bandwidth bw{ {}, BandwidthSelector::plug_in };
  for (std::size_t j = 0; j < sample.dims(); ++j) {
    bw.h.push_back(plug_in_1d(sample.column(j), sd[j]));
  }
  bw.validate();
  return bw;
}

Bandwidth select_bandwidth(const PointSet& sample, BandwidthSelector selector)
{
  switch (selector) {
    case BandwidthSelector::plug_in:
      return plug_in_bandwidth(sample);
    case BandwidthSelector::normal_reference:
      return normal_reference_bandwidth(sample);
    case BandwidthSelector::fixed:
      break;
  }
  throw std::invalid_argument("a fixed bandwidth must be supplied explicitly");
}

KernelDensity::KernelDensity(const PointSet& sample, Bandwidth bw)
  : dims_(sample.dims())
  , bw_(std::move(bw))
{
  if (sample.empty()) {
    throw std::invalid_argument("kernel density needs at least one observation");
  }
  bw_.validate();
  if (bw_.h.size() != dims_) {
    throw std::invalid_argument("bandwidth dimension does not match the sample");
  }
  for (double c : sample.coords()) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("kernel density sample contains non-finite values");
    }
  }

  const std::size_t n = sample.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sample(a, 0) < sample(b, 0);
  });
  xs_.resize(n);
  if (dims_ == 2) {
    ys_.resize(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    xs_[i] = sample(order[i], 0);
    if (dims_ == 2) {
      ys_[i] = sample(order[i], 1);
    }
  }

  double hprod = 1.0;
  for (double h : bw_.h) {
    hprod *= h;
  }
  norm_ = std::pow(inv_sqrt_2pi, static_cast<double>(dims_)) /
          (static_cast<double>(n) * hprod);
}

void KernelDensity::evaluate(const PointSet& points, std::span<double> out) const
{
  if (points.dims() != dims_) {
    throw std::invalid_argument("query dimension does not match the density");
  }
  if (out.size() != points.size()) {
    throw std::invalid_argument("output buffer size mismatch");
  }
  const double hx = bw_.h[0];
  const double reach = cutoff_bandwidths * hx;
  const double inv_hx = 1.0 / hx;
  const double inv_hy = dims_ == 2 ? 1.0 / bw_.h[1] : 0.0;

  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto q = points.row(i);
    for (double c : q) {
      if (!std::isfinite(c)) {
        throw std::invalid_argument("non-finite query point at row " + std::to_string(i));
      }
    }
    auto first = std::lower_bound(xs_.begin(), xs_.end(), q[0] - reach);
    auto last = std::upper_bound(first, xs_.end(), q[0] + reach);
    if (first == last) {
      // Far from every support point: the full sum, which may underflow.
      first = xs_.begin();
      last = xs_.end();
    }
    const auto offset = static_cast<std::size_t>(first - xs_.begin());
    const auto count = static_cast<std::size_t>(last - first);
    double s;
    if (dims_ == 1) {
      s = detail::gauss_kernel_sum(xs_.data() + offset, count, q[0], inv_hx);
    } else {
      s = detail::gauss_kernel_sum_2d(xs_.data() + offset, ys_.data() + offset, count, q[0],
                                      q[1], inv_hx, inv_hy);
    }
    out[i] = norm_ * s;
  }
}

std::shared_ptr<const KernelDensity> kde_fit(const PointSet& sample, Bandwidth bw)
{
  return std::make_shared<const KernelDensity>(sample, std::move(bw));
}

std::vector<double> kde_eval(const KernelDensity& density, const PointSet& points)
{
  return density.evaluate(points);
}

namespace detail {

std::vector<double> linear_bin(std::span<const double> x, double lo, double hi,
                               std::size_t m)
{
  std::vector<double> counts(m, 0.0);
  const double delta = (hi - lo) / static_cast<double>(m - 1);
  for (double v : x) {
    const double pos = (v - lo) / delta;
    auto k = static_cast<std::size_t>(std::floor(pos));
    if (k >= m - 1) {
      counts[m - 1] += 1.0;
      continue;
    }
    const double frac = pos - static_cast<double>(k);
    counts[k] += 1.0 - frac;
    counts[k + 1] += frac;
  }
  return counts;
}

double binned_psi(std::span<const double> counts, double delta, std::size_t n, double g,
                  int r)
{
  const std::size_t m = counts.size();
  const double scale = std::pow(g, -(r + 1));
  double total = 0.0;
  for (std::size_t lag = 0; lag < m; ++lag) {
    const double kernel = scale * phi_derivative(static_cast<double>(lag) * delta / g, r);
    double cross = 0.0;
    for (std::size_t k = 0; k + lag < m; ++k) {
      cross += counts[k] * counts[k + lag];
    }
    total += (lag == 0 ? 1.0 : 2.0) * kernel * cross;
  }
  const auto nn = static_cast<double>(n);
  return total / (nn * nn);
}

double exact_psi(std::span<const double> x, double g, int r)
{
  const double scale = std::pow(g, -(r + 1));
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      total += scale * phi_derivative((x[i] - x[j]) / g, r);
    }
  }
  const auto nn = static_cast<double>(x.size());
  return total / (nn * nn);
}

} // namespace detail

} // namespace l2d
