#pragma once

#include "l2d/gradient.hpp"
#include "l2d/simharness.hpp"

#include <memory>
#include <random>

namespace l2d::testing {

inline std::shared_ptr<const QuadGrid> grid_1d(double lo, double hi, std::size_t m)
{
  return std::make_shared<const QuadGrid>(std::vector<Interval>{ { lo, hi } }, m);
}

inline DensityPair make_pair(DensityPtr p0, DensityPtr p1,
                             std::shared_ptr<const QuadGrid> grid, double pA1 = 0.5)
{
  return { std::move(p0), std::move(p1), pA1, std::move(grid), nullptr };
}

//! U[0,1] vs U[0.1,1.1] on a fine grid.
inline DensityPair uniform_offset_pair(std::size_t m = 20001)
{
  return make_pair(std::make_shared<UniformDensity>(0.0, 1.0),
                   std::make_shared<UniformDensity>(0.1, 1.1), grid_1d(-0.5, 1.6, m));
}

//! N(0, 0.25) vs N(0.5, 0.25).
inline DensityPair gaussian_pair(std::size_t m = 4001)
{
  return make_pair(std::make_shared<GaussianDensity>(0.0, 0.5),
                   std::make_shared<GaussianDensity>(0.5, 0.5), grid_1d(-4.0, 4.5, m));
}

inline DensityPair triangle_pair(std::size_t m = 20001)
{
  return make_pair(std::make_shared<TriangleDensity>(0.0, 1.0),
                   std::make_shared<TriangleDensity>(0.5, 1.0), grid_1d(-1.5, 2.0, m));
}

inline LabeledDataset gaussian_null_2d(std::size_t n_per_arm, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::vector<double> coords;
  std::vector<Arm> labels;
  for (std::size_t i = 0; i < 2 * n_per_arm; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double u1 = 1.0 - sim::uniform01(rng);
      const double u2 = sim::uniform01(rng);
      coords.push_back(std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2));
    }
    labels.push_back(i < n_per_arm ? Arm::zero : Arm::one);
  }
  return LabeledDataset(PointSet(2, std::move(coords)), std::move(labels));
}

} // namespace l2d::testing
