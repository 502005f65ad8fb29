#pragma once

#include "l2d/points.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace l2d {

struct Interval
{
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

inline constexpr std::size_t default_points_1d = 401;
inline constexpr std::size_t default_points_2d = 201;

//! Tensor-product trapezoid grid over a box in 1 or 2 dimensions.
//!
//! Points are enumerated row-major: for d = 2 the index is i0 * m1 + i1, so
//! the first axis varies slowest. Immutable once built.
class QuadGrid
{
public:
  QuadGrid(std::vector<Interval> bounds, std::size_t points_per_dim);

  std::size_t dims() const { return bounds_.size(); }
  std::size_t size() const { return weights_.size(); }
  std::size_t points_per_dim() const { return points_per_dim_; }

  const std::vector<Interval>& bounds() const { return bounds_; }
  std::span<const double> axis(std::size_t j) const { return axes_[j]; }
  std::span<const double> weights() const { return weights_; }
  const PointSet& points() const { return points_; }

  double volume() const;
  double spacing(std::size_t j) const;

  //! Trapezoid sum of grid-sampled values.
  double integrate(std::span<const double> values) const;

  bool same_layout(const QuadGrid& other) const;

private:
  std::vector<Interval> bounds_;
  std::size_t points_per_dim_;
  std::vector<std::vector<double>> axes_;
  std::vector<double> weights_;
  PointSet points_;
};

QuadGrid build_grid(std::vector<Interval> bounds, std::size_t points_per_dim);

double integrate(const QuadGrid& grid, std::span<const double> values);

} // namespace l2d
