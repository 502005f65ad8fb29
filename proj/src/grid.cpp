#include "l2d/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace l2d {

namespace {

std::vector<double> trapezoid_axis(const Interval& iv, std::size_t m)
{
  std::vector<double> axis(m);
  const double step = iv.length() / static_cast<double>(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    axis[i] = iv.lo + static_cast<double>(i) * step;
  }
  axis[m - 1] = iv.hi;
  return axis;
}

std::vector<double> trapezoid_weights(const Interval& iv, std::size_t m)
{
  const double step = iv.length() / static_cast<double>(m - 1);
  std::vector<double> w(m, step);
  w.front() = 0.5 * step;
  w.back() = 0.5 * step;
  return w;
}

} // namespace

QuadGrid::QuadGrid(std::vector<Interval> bounds, std::size_t points_per_dim)
  : bounds_(std::move(bounds))
  , points_per_dim_(points_per_dim)
{
  if (bounds_.empty() || bounds_.size() > 2) {
    throw std::invalid_argument("grid dimension must be 1 or 2");
  }
  if (points_per_dim_ < 3) {
    throw std::invalid_argument("grid needs at least 3 points per dimension");
  }
  for (std::size_t j = 0; j < bounds_.size(); ++j) {
    const auto& iv = bounds_[j];
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
      throw std::invalid_argument("grid bounds must be finite (dimension " +
                                  std::to_string(j) + ")");
    }
    if (!(iv.lo < iv.hi)) {
      throw std::invalid_argument("grid bounds need lo < hi (dimension " +
                                  std::to_string(j) + ")");
    }
  }

  const std::size_t m = points_per_dim_;
  std::vector<std::vector<double>> axis_weights;
  for (const auto& iv : bounds_) {
    axes_.push_back(trapezoid_axis(iv, m));
    axis_weights.push_back(trapezoid_weights(iv, m));
  }

  if (dims() == 1) {
    weights_ = axis_weights[0];
    points_ = PointSet(1, axes_[0]);
  } else {
    weights_.resize(m * m);
    std::vector<double> coords(2 * m * m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < m; ++k) {
        const std::size_t idx = i * m + k;
        weights_[idx] = axis_weights[0][i] * axis_weights[1][k];
        coords[2 * idx] = axes_[0][i];
        coords[2 * idx + 1] = axes_[1][k];
      }
    }
    points_ = PointSet(2, std::move(coords));
  }
}

double QuadGrid::volume() const
{
  double v = 1.0;
  for (const auto& iv : bounds_) {
    v *= iv.length();
  }
  return v;
}

double QuadGrid::spacing(std::size_t j) const
{
  return bounds_.at(j).length() / static_cast<double>(points_per_dim_ - 1);
}

double QuadGrid::integrate(std::span<const double> values) const
{
  if (values.size() != weights_.size()) {
    throw std::invalid_argument("integrand has " + std::to_string(values.size()) +
                                " values, grid has " + std::to_string(weights_.size()) +
                                " points");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw std::domain_error("non-finite integrand value at grid point " +
                              std::to_string(i));
    }
    sum += weights_[i] * values[i];
  }
  return sum;
}

bool QuadGrid::same_layout(const QuadGrid& other) const
{
  return points_per_dim_ == other.points_per_dim_ && bounds_ == other.bounds_;
}

QuadGrid build_grid(std::vector<Interval> bounds, std::size_t points_per_dim)
{
  return QuadGrid(std::move(bounds), points_per_dim);
}

double integrate(const QuadGrid& grid, std::span<const double> values)
{
  return grid.integrate(values);
}

} // namespace l2d
