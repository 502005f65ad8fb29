#pragma once

#include "l2d/dataset.hpp"
#include "l2d/density.hpp"
#include "l2d/grid.hpp"

#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace l2d {

//! Values of both conditional densities at a common set of points.
struct ArmValues
{
  std::vector<double> v0;
  std::vector<double> v1;

  const std::vector<double>& arm(Arm a) const { return a == Arm::one ? v1 : v0; }
  std::vector<double>& arm(Arm a) { return a == Arm::one ? v1 : v0; }
};

//! A pair of conditional densities that is cheaper to evaluate jointly than
//! arm by arm (e.g. a fluctuated pair whose arms share a parent).
class JointDensity
{
public:
  virtual ~JointDensity() = default;
  virtual ArmValues evaluate(const PointSet& points) const = 0;
};

//! The conditional densities p0 = p(x | A = 0), p1 = p(x | A = 1), the
//! marginal p(A = 1) and the grid all integrals are taken over.
struct DensityPair
{
  DensityPtr p0;
  DensityPtr p1;
  double pA1 = 0.5;
  std::shared_ptr<const QuadGrid> grid;
  std::shared_ptr<const JointDensity> joint;

  const DensityPtr& arm(Arm a) const { return a == Arm::one ? p1 : p0; }
  double proportion(Arm a) const { return a == Arm::one ? pA1 : 1.0 - pA1; }

  //! Structural checks: both densities present, matching dimensions,
  //! 0 < pA1 < 1, grid present.
  void validate() const;

  //! Same pair with arms exchanged and pA1 replaced by 1 - pA1.
  DensityPair swapped() const;
};

ArmValues evaluate_pair(const DensityPair& pair, const PointSet& points);

//! Grid integral of each arm, for normalization checks.
std::pair<double, double> arm_masses(const DensityPair& pair);

//! Canonical gradient at one point given both densities there.
inline double gradient_value(double p0, double p1, Arm a, double c0, double c1, double pA1)
{
  if (a == Arm::one) {
    return 2.0 / pA1 * (p1 - p0 - c1);
  }
  return 2.0 / (1.0 - pA1) * (p0 - p1 - c0);
}

//! The mean-centering terms of the canonical gradient at `pair`:
//! c1 = int (p1 - p0) p1 dx and c0 = int (p0 - p1) p0 dx.
struct GradientField
{
  double c1 = 0.0;
  double c0 = 0.0;
  DensityPair pair;

  double value(double p0, double p1, Arm a) const
  {
    return gradient_value(p0, p1, a, c0, c1, pair.pA1);
  }
};

GradientField centering_constants(const DensityPair& pair);

//! Variant reusing already computed grid values of `pair`.
GradientField centering_constants(const DensityPair& pair, const ArmValues& on_grid);

double gradient_at(const GradientField& field, std::span<const double> x, Arm a);

//! Gradient for arm `a` at every row of `points`.
std::vector<double> gradient_values(const GradientField& field, const PointSet& points,
                                    Arm a);

//! Gradient of every observation at its own label.
std::vector<double> gradient_on_sample(const GradientField& field,
                                       const LabeledDataset& data);

//! (int D(., 1) p1 dx, int D(., 0) p0 dx); both vanish up to quadrature error.
std::pair<double, double> gradient_mean_zero_check(const GradientField& field);

//! Grid L2 distance int (p1 - p0)^2 dx.
double l2d_plugin(const DensityPair& pair);

//! P0 D*(P): the mean of the gradient at `pair` under the `truth` distribution.
double gradient_mean_under(const DensityPair& pair, const DensityPair& truth);

//! Second-order remainder -int [(p1_0 - p0_0) - (p1 - p0)]^2 dx.
double remainder_r2(const DensityPair& pair, const DensityPair& truth);

//! Var(D*(P0)) under the truth, the asymptotic variance bound per observation.
double efficiency_bound(const DensityPair& truth);

} // namespace l2d
