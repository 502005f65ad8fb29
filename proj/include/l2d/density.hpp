#pragma once

#include "l2d/points.hpp"

#include <memory>
#include <span>
#include <vector>

namespace l2d {

//! A density over R^d that can be evaluated at arbitrary points.
class Density
{
public:
  virtual ~Density() = default;

  virtual std::size_t dims() const = 0;

  //! Writes the density at every row of `points` into `out`.
  virtual void evaluate(const PointSet& points, std::span<double> out) const = 0;

  std::vector<double> evaluate(const PointSet& points) const;
  double operator()(std::span<const double> x) const;
};

using DensityPtr = std::shared_ptr<const Density>;

//! N(mean, sd^2) on the real line.
class GaussianDensity final : public Density
{
public:
  GaussianDensity(double mean, double sd);
  std::size_t dims() const override { return 1; }
  using Density::evaluate;
  void evaluate(const PointSet& points, std::span<double> out) const override;

private:
  double mean_;
  double sd_;
};

//! Symmetric tent density with peak at `center` and support center +- half_width.
class TriangleDensity final : public Density
{
public:
  TriangleDensity(double center, double half_width);
  std::size_t dims() const override { return 1; }
  using Density::evaluate;
  void evaluate(const PointSet& points, std::span<double> out) const override;

private:
  double center_;
  double half_width_;
};

//! Uniform density on the closed interval [lo, hi].
class UniformDensity final : public Density
{
public:
  UniformDensity(double lo, double hi);
  std::size_t dims() const override { return 1; }
  using Density::evaluate;
  void evaluate(const PointSet& points, std::span<double> out) const override;

private:
  double lo_;
  double hi_;
};

} // namespace l2d
