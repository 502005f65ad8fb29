#include "l2d/tmle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace l2d {

EpsilonBounds epsilon_bounds(std::span<const std::span<const double>> blocks)
{
  double max_d = 0.0;
  double min_d = 0.0;
  for (const auto& block : blocks) {
    for (double v : block) {
      if (!std::isfinite(v)) {
        throw std::domain_error("non-finite gradient value");
      }
      max_d = std::max(max_d, v);
      min_d = std::min(min_d, v);
    }
  }
  EpsilonBounds b;
  if (max_d > 0.0) {
    b.lo = -EpsilonBounds::margin / max_d;
  }
  if (min_d < 0.0) {
    b.hi = EpsilonBounds::margin / -min_d;
  }
  b.degenerate = max_d == 0.0 && min_d == 0.0;
  return b;
}

EpsilonBounds epsilon_bounds(std::span<const double> gradient_values)
{
  const std::span<const double> blocks[] = { gradient_values };
  return epsilon_bounds(blocks);
}

double epsilon_log_likelihood(double eps, std::span<const double> d)
{
  double ll = 0.0;
  for (double v : d) {
    const double factor = 1.0 + eps * v;
    if (!(factor > 0.0)) {
      throw std::domain_error("epsilon " + std::to_string(eps) +
                              " leaves the feasible fluctuation range");
    }
    ll += std::log(factor);
  }
  return ll;
}

double epsilon_score(double eps, std::span<const double> d)
{
  double s = 0.0;
  for (double v : d) {
    s += v / (1.0 + eps * v);
  }
  return s;
}

namespace {

double score_slope(double eps, std::span<const double> d)
{
  double s = 0.0;
  for (double v : d) {
    const double f = 1.0 + eps * v;
    s -= v * v / (f * f);
  }
  return s;
}

} // namespace

double fit_epsilon(std::span<const double> d, const EpsilonBounds& bounds)
{
  if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; })) {
    return 0.0;
  }
  double lo = bounds.lo;
  double hi = bounds.hi;
  if (!(lo < hi)) {
    throw std::invalid_argument("empty epsilon interval");
  }
  // The score is strictly decreasing, so a sign-constant score puts the
  // maximizer on the boundary.
  if (epsilon_score(lo, d) <= 0.0) {
    return lo;
  }
  if (epsilon_score(hi, d) >= 0.0) {
    return hi;
  }

  double x = (lo < 0.0 && 0.0 < hi) ? 0.0 : 0.5 * (lo + hi);
  for (int iter = 0; iter < 500; ++iter) {
    const double s = epsilon_score(x, d);
    if (s == 0.0) {
      return x;
    }
    if (s > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 1e-10) {
      return 0.5 * (lo + hi);
    }
    double next = x - s / score_slope(x, d);
    if (!(next > lo && next < hi)) {
      next = 0.5 * (lo + hi);
    }
    if (std::abs(next - x) <= 1e-10) {
      return next;
    }
    x = next;
  }
  return x;
}

bool stopping_criterion_met(double mean, double sd, std::size_t n)
{
  const auto nn = static_cast<double>(n);
  return std::abs(mean) <= sd / (std::sqrt(nn) * std::log(nn));
}

std::pair<double, double> mean_and_sd(std::span<const double> values)
{
  const auto n = static_cast<double>(values.size());
  if (values.size() < 2) {
    throw std::invalid_argument("standard deviation needs at least 2 values");
  }
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) {
    ss += (v - mean) * (v - mean);
  }
  return { mean, std::sqrt(ss / (n - 1.0)) };
}

FluctuatedPair::FluctuatedPair(GradientField parent, double epsilon)
  : parent_(std::move(parent))
  , epsilon_(epsilon)
{
  parent_.pair.validate();
}

ArmValues FluctuatedPair::evaluate(const PointSet& points) const
{
  auto v = evaluate_pair(parent_.pair, points);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d0 = parent_.value(v.v0[i], v.v1[i], Arm::zero);
    const double d1 = parent_.value(v.v0[i], v.v1[i], Arm::one);
    v.v0[i] *= 1.0 + epsilon_ * d0;
    v.v1[i] *= 1.0 + epsilon_ * d1;
  }
  return v;
}

FluctuatedDensity::FluctuatedDensity(std::shared_ptr<const FluctuatedPair> joint, Arm arm)
  : joint_(std::move(joint))
  , arm_(arm)
{
}

std::size_t FluctuatedDensity::dims() const
{
  return joint_->parent().pair.p0->dims();
}

void FluctuatedDensity::evaluate(const PointSet& points, std::span<double> out) const
{
  if (out.size() != points.size()) {
    throw std::invalid_argument("output buffer size mismatch");
  }
  const auto v = joint_->evaluate(points);
  std::copy(v.arm(arm_).begin(), v.arm(arm_).end(), out.begin());
}

DensityPair fluctuate(const GradientField& field, double epsilon)
{
  auto joint = std::make_shared<const FluctuatedPair>(field, epsilon);
  DensityPair out;
  out.p0 = std::make_shared<const FluctuatedDensity>(joint, Arm::zero);
  out.p1 = std::make_shared<const FluctuatedDensity>(joint, Arm::one);
  out.pA1 = field.pair.pA1;
  out.grid = field.pair.grid;
  out.joint = joint;
  return out;
}

PairCache cache_pair(const DensityPair& pair, const LabeledDataset& data)
{
  pair.validate();
  return { evaluate_pair(pair, pair.grid->points()), evaluate_pair(pair, data.points()) };
}

namespace {

void check_inputs(const DensityPair& pair, const LabeledDataset& data)
{
  pair.validate();
  if (data.dims() != pair.grid->dims()) {
    throw std::invalid_argument("dataset dimension does not match the density pair");
  }
  if (std::abs(pair.pA1 - data.proportion_one()) > 1e-12) {
    throw std::invalid_argument("p(A = 1) of the pair is not the dataset proportion");
  }
}

struct ArmGradients
{
  std::vector<double> g0;
  std::vector<double> g1;
};

ArmGradients both_arm_gradients(const GradientField& field, const ArmValues& v)
{
  ArmGradients out{ std::vector<double>(v.v0.size()), std::vector<double>(v.v0.size()) };
  for (std::size_t i = 0; i < v.v0.size(); ++i) {
    out.g0[i] = field.value(v.v0[i], v.v1[i], Arm::zero);
    out.g1[i] = field.value(v.v0[i], v.v1[i], Arm::one);
  }
  return out;
}

std::vector<double> own_label_gradient(const GradientField& field, const ArmValues& sample,
                                       const LabeledDataset& data)
{
  std::vector<double> d(data.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = field.value(sample.v0[i], sample.v1[i], data.label(i));
  }
  return d;
}

void scale_by(ArmValues& v, const ArmGradients& g, double eps)
{
  for (std::size_t i = 0; i < v.v0.size(); ++i) {
    v.v0[i] *= 1.0 + eps * g.g0[i];
    v.v1[i] *= 1.0 + eps * g.g1[i];
  }
}

// Fits epsilon along `field` and advances both the pair and its cached
// values. Positivity is enforced on grid points and all observations.
UpdateResult apply_update(const DensityPair& pair, const GradientField& field,
                          PairCache& cache, const LabeledDataset& data)
{
  const auto on_grid = both_arm_gradients(field, cache.grid);
  const auto on_sample = both_arm_gradients(field, cache.sample);
  const std::span<const double> blocks[] = { on_grid.g0, on_grid.g1, on_sample.g0,
                                             on_sample.g1 };
  const auto bounds = epsilon_bounds(blocks);

  UpdateResult result{ pair, 0.0, bounds.degenerate };
  if (bounds.degenerate) {
    return result;
  }
  std::vector<double> d(data.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = data.label(i) == Arm::one ? on_sample.g1[i] : on_sample.g0[i];
  }
  result.epsilon = fit_epsilon(d, bounds);
  if (result.epsilon != 0.0) {
    scale_by(cache.grid, on_grid, result.epsilon);
    scale_by(cache.sample, on_sample, result.epsilon);
    result.pair = fluctuate(field, result.epsilon);
  }
  return result;
}

} // namespace

UpdateResult tmle_update(const DensityPair& pair, const GradientField& field,
                         const LabeledDataset& data)
{
  check_inputs(pair, data);
  auto cache = cache_pair(pair, data);
  return apply_update(pair, field, cache, data);
}

TmleFit tmle_targeting_loop(const DensityPair& pair, const LabeledDataset& data,
                            int max_rounds)
{
  check_inputs(pair, data);
  return tmle_targeting_loop(pair, data, cache_pair(pair, data), max_rounds);
}

TmleFit tmle_targeting_loop(const DensityPair& pair, const LabeledDataset& data,
                            PairCache initial, int max_rounds)
{
  check_inputs(pair, data);
  if (max_rounds < 1) {
    throw std::invalid_argument("max_rounds must be at least 1");
  }
  if (initial.grid.v0.size() != pair.grid->size() || initial.sample.v0.size() != data.size()) {
    throw std::invalid_argument("cached values do not match the grid or dataset");
  }

  TmleFit fit;
  fit.final_values = std::move(initial);
  DensityPair current = pair;
  auto field = centering_constants(current, fit.final_values.grid);
  auto d = own_label_gradient(field, fit.final_values.sample, data);
  fit.initial_pn_dstar = mean_and_sd(d).first;

  for (int round = 1; round <= max_rounds; ++round) {
    auto step = apply_update(current, field, fit.final_values, data);
    current = std::move(step.pair);
    fit.epsilons.push_back(step.epsilon);
    fit.rounds = round;

    field = centering_constants(current, fit.final_values.grid);
    d = own_label_gradient(field, fit.final_values.sample, data);
    const auto [mean, sd] = mean_and_sd(d);
    fit.pn_dstar = mean;
    fit.sd_dstar = sd;
    fit.criterion_met = stopping_criterion_met(mean, sd, data.size());
    if (fit.criterion_met) {
      break;
    }
  }
  fit.final_pair = std::move(current);
  fit.final_gradient = std::move(d);
  return fit;
}

} // namespace l2d
