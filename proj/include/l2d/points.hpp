#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace l2d {

//! Row-major n x d block of coordinates, d in {1, 2}.
class PointSet
{
public:
  PointSet() = default;
  PointSet(std::size_t dims, std::vector<double> coords);

  static PointSet from_column(std::vector<double> xs) { return PointSet(1, std::move(xs)); }

  std::size_t dims() const { return dims_; }
  std::size_t size() const { return dims_ == 0 ? 0 : coords_.size() / dims_; }
  bool empty() const { return coords_.empty(); }

  std::span<const double> row(std::size_t i) const
  {
    return { coords_.data() + i * dims_, dims_ };
  }
  double operator()(std::size_t i, std::size_t j) const { return coords_[i * dims_ + j]; }

  std::span<const double> coords() const { return coords_; }
  std::vector<double> column(std::size_t j) const;

  void push_back(std::span<const double> point);
  void reserve(std::size_t n) { coords_.reserve(n * dims_); }

private:
  std::size_t dims_ = 0;
  std::vector<double> coords_;
};

inline PointSet::PointSet(std::size_t dims, std::vector<double> coords)
  : dims_(dims)
  , coords_(std::move(coords))
{
  if (dims_ < 1 || dims_ > 2) {
    throw std::invalid_argument("only 1- and 2-dimensional points are supported");
  }
  if (coords_.size() % dims_ != 0) {
    throw std::invalid_argument("coordinate count is not a multiple of the dimension");
  }
}

inline std::vector<double> PointSet::column(std::size_t j) const
{
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = coords_[i * dims_ + j];
  }
  return out;
}

inline void PointSet::push_back(std::span<const double> point)
{
  if (point.size() != dims_) {
    throw std::invalid_argument("point dimension mismatch");
  }
  coords_.insert(coords_.end(), point.begin(), point.end());
}

} // namespace l2d
