#include "l2d/gradient.hpp"

#include <cmath>
#include <stdexcept>

namespace l2d {

void DensityPair::validate() const
{
  if (!p0 || !p1) {
    throw std::invalid_argument("density pair is missing an arm");
  }
  if (!grid) {
    throw std::invalid_argument("density pair has no integration grid");
  }
  if (p0->dims() != p1->dims() || p0->dims() != grid->dims()) {
    throw std::invalid_argument("density pair dimensions do not match its grid");
  }
  if (!(pA1 > 0.0 && pA1 < 1.0)) {
    throw std::invalid_argument("p(A = 1) must lie strictly between 0 and 1");
  }
}

namespace {

class SwappedJoint final : public JointDensity
{
public:
  explicit SwappedJoint(std::shared_ptr<const JointDensity> inner)
    : inner_(std::move(inner))
  {
  }
  ArmValues evaluate(const PointSet& points) const override
  {
    auto v = inner_->evaluate(points);
    std::swap(v.v0, v.v1);
    return v;
  }

private:
  std::shared_ptr<const JointDensity> inner_;
};

void require_shared_grid(const DensityPair& a, const DensityPair& b)
{
  if (!a.grid->same_layout(*b.grid)) {
    throw std::invalid_argument("density pairs are defined on different grids");
  }
}

} // namespace

DensityPair DensityPair::swapped() const
{
  DensityPair out{ p1, p0, 1.0 - pA1, grid, nullptr };
  if (joint) {
    out.joint = std::make_shared<SwappedJoint>(joint);
  }
  return out;
}

ArmValues evaluate_pair(const DensityPair& pair, const PointSet& points)
{
  if (pair.joint) {
    return pair.joint->evaluate(points);
  }
  return { pair.p0->evaluate(points), pair.p1->evaluate(points) };
}

std::pair<double, double> arm_masses(const DensityPair& pair)
{
  pair.validate();
  const auto v = evaluate_pair(pair, pair.grid->points());
  return { pair.grid->integrate(v.v0), pair.grid->integrate(v.v1) };
}

GradientField centering_constants(const DensityPair& pair, const ArmValues& on_grid)
{
  pair.validate();
  const auto& grid = *pair.grid;
  const std::size_t m = grid.size();
  if (on_grid.v0.size() != m || on_grid.v1.size() != m) {
    throw std::invalid_argument("grid values do not match the grid size");
  }
  std::vector<double> f1(m);
  std::vector<double> f0(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double diff = on_grid.v1[i] - on_grid.v0[i];
    f1[i] = diff * on_grid.v1[i];
    f0[i] = -diff * on_grid.v0[i];
  }
  return GradientField{ grid.integrate(f1), grid.integrate(f0), pair };
}

GradientField centering_constants(const DensityPair& pair)
{
  pair.validate();
  return centering_constants(pair, evaluate_pair(pair, pair.grid->points()));
}

double gradient_at(const GradientField& field, std::span<const double> x, Arm a)
{
  PointSet p(x.size(), std::vector<double>(x.begin(), x.end()));
  return gradient_values(field, p, a).front();
}

std::vector<double> gradient_values(const GradientField& field, const PointSet& points,
                                    Arm a)
{
  const auto v = evaluate_pair(field.pair, points);
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = field.value(v.v0[i], v.v1[i], a);
  }
  return out;
}

std::vector<double> gradient_on_sample(const GradientField& field,
                                       const LabeledDataset& data)
{
  const auto v = evaluate_pair(field.pair, data.points());
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = field.value(v.v0[i], v.v1[i], data.label(i));
  }
  return out;
}

std::pair<double, double> gradient_mean_zero_check(const GradientField& field)
{
  const auto& grid = *field.pair.grid;
  const auto v = evaluate_pair(field.pair, grid.points());
  std::vector<double> f1(grid.size());
  std::vector<double> f0(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    f1[i] = field.value(v.v0[i], v.v1[i], Arm::one) * v.v1[i];
    f0[i] = field.value(v.v0[i], v.v1[i], Arm::zero) * v.v0[i];
  }
  return { grid.integrate(f1), grid.integrate(f0) };
}

double l2d_plugin(const DensityPair& pair)
{
  pair.validate();
  const auto v = evaluate_pair(pair, pair.grid->points());
  std::vector<double> sq(v.v0.size());
  for (std::size_t i = 0; i < sq.size(); ++i) {
    const double d = v.v1[i] - v.v0[i];
    sq[i] = d * d;
  }
  return pair.grid->integrate(sq);
}

double gradient_mean_under(const DensityPair& pair, const DensityPair& truth)
{
  truth.validate();
  require_shared_grid(pair, truth);
  const auto& grid = *pair.grid;
  const auto v = evaluate_pair(pair, grid.points());
  const auto field = centering_constants(pair, v);
  const auto t = evaluate_pair(truth, grid.points());
  std::vector<double> f1(grid.size());
  std::vector<double> f0(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    f1[i] = field.value(v.v0[i], v.v1[i], Arm::one) * t.v1[i];
    f0[i] = field.value(v.v0[i], v.v1[i], Arm::zero) * t.v0[i];
  }
  // Observations follow the truth, including its p(A = 1); the gradient keeps
  // the pA1 of `pair` in its weights.
  return truth.pA1 * grid.integrate(f1) + (1.0 - truth.pA1) * grid.integrate(f0);
}

double remainder_r2(const DensityPair& pair, const DensityPair& truth)
{
  pair.validate();
  truth.validate();
  require_shared_grid(pair, truth);
  const auto& grid = *pair.grid;
  const auto v = evaluate_pair(pair, grid.points());
  const auto t = evaluate_pair(truth, grid.points());
  std::vector<double> sq(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = (t.v1[i] - t.v0[i]) - (v.v1[i] - v.v0[i]);
    sq[i] = d * d;
  }
  return -grid.integrate(sq);
}

double efficiency_bound(const DensityPair& truth)
{
  const auto& grid = *truth.grid;
  const auto v = evaluate_pair(truth, grid.points());
  const auto field = centering_constants(truth, v);
  std::vector<double> f1(grid.size());
  std::vector<double> f0(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d1 = field.value(v.v0[i], v.v1[i], Arm::one);
    const double d0 = field.value(v.v0[i], v.v1[i], Arm::zero);
    f1[i] = d1 * d1 * v.v1[i];
    f0[i] = d0 * d0 * v.v0[i];
  }
  return truth.pA1 * grid.integrate(f1) + (1.0 - truth.pA1) * grid.integrate(f0);
}

} // namespace l2d
