#include "l2d/density.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace l2d {

std::vector<double> Density::evaluate(const PointSet& points) const
{
  std::vector<double> out(points.size());
  evaluate(points, out);
  return out;
}

double Density::operator()(std::span<const double> x) const
{
  PointSet p(x.size(), std::vector<double>(x.begin(), x.end()));
  double v = 0.0;
  evaluate(p, std::span<double>(&v, 1));
  return v;
}

namespace {

void check_1d(const PointSet& points, std::span<double> out)
{
  if (points.dims() != 1) {
    throw std::invalid_argument("univariate density queried with multivariate points");
  }
  if (out.size() != points.size()) {
    throw std::invalid_argument("output buffer size mismatch");
  }
}

} // namespace

GaussianDensity::GaussianDensity(double mean, double sd)
  : mean_(mean)
  , sd_(sd)
{
  if (!(sd > 0.0) || !std::isfinite(sd) || !std::isfinite(mean)) {
    throw std::invalid_argument("gaussian density needs finite mean and sd > 0");
  }
}

void GaussianDensity::evaluate(const PointSet& points, std::span<double> out) const
{
  check_1d(points, out);
  const double norm = 1.0 / (sd_ * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double z = (points(i, 0) - mean_) / sd_;
    out[i] = norm * std::exp(-0.5 * z * z);
  }
}

TriangleDensity::TriangleDensity(double center, double half_width)
  : center_(center)
  , half_width_(half_width)
{
  if (!(half_width > 0.0) || !std::isfinite(half_width) || !std::isfinite(center)) {
    throw std::invalid_argument("triangle density needs finite center and half width > 0");
  }
}

void TriangleDensity::evaluate(const PointSet& points, std::span<double> out) const
{
  check_1d(points, out);
  const double peak = 1.0 / half_width_;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double u = std::abs(points(i, 0) - center_) / half_width_;
    out[i] = u < 1.0 ? peak * (1.0 - u) : 0.0;
  }
}

UniformDensity::UniformDensity(double lo, double hi)
  : lo_(lo)
  , hi_(hi)
{
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("uniform density needs finite lo < hi");
  }
}

void UniformDensity::evaluate(const PointSet& points, std::span<double> out) const
{
  check_1d(points, out);
  const double height = 1.0 / (hi_ - lo_);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = points(i, 0);
    out[i] = (x >= lo_ && x <= hi_) ? height : 0.0;
  }
}

} // namespace l2d
