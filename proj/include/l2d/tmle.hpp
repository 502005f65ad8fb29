#pragma once

#include "l2d/dataset.hpp"
#include "l2d/gradient.hpp"

#include <memory>
#include <span>
#include <vector>

namespace l2d {

//! Feasible fluctuation range [lo, hi] keeping 1 + eps * D > 0 on the
//! evaluation set. An unconstrained side is reported as -/+ `sentinel`.
struct EpsilonBounds
{
  static constexpr double sentinel = 1e6;
  static constexpr double margin = 0.999;

  double lo = -sentinel;
  double hi = sentinel;
  bool degenerate = false;

  bool contains(double eps) const { return eps >= lo && eps <= hi; }
};

EpsilonBounds epsilon_bounds(std::span<const double> gradient_values);

//! Bounds over the union of several blocks of gradient values.
EpsilonBounds epsilon_bounds(std::span<const std::span<const double>> blocks);

//! sum_i log(1 + eps * d_i). Throws std::domain_error when some factor is
//! not positive.
double epsilon_log_likelihood(double eps, std::span<const double> d);

//! Derivative of epsilon_log_likelihood: sum_i d_i / (1 + eps * d_i).
double epsilon_score(double eps, std::span<const double> d);

//! Maximizer of the concave log-likelihood on [bounds.lo, bounds.hi]:
//! safeguarded Newton on the score inside a shrinking bracket, to 1e-10.
double fit_epsilon(std::span<const double> d, const EpsilonBounds& bounds);

//! |mean| <= sd / (sqrt(n) log n), natural logarithm.
bool stopping_criterion_met(double mean, double sd, std::size_t n);

//! Both arms of p_eps = (1 + eps D*(P)) p for a parent pair P, evaluated
//! together so nested fluctuations cost one parent evaluation per level.
class FluctuatedPair final : public JointDensity
{
public:
  FluctuatedPair(GradientField parent, double epsilon);

  ArmValues evaluate(const PointSet& points) const override;

  double epsilon() const { return epsilon_; }
  const GradientField& parent() const { return parent_; }

private:
  GradientField parent_;
  double epsilon_;
};

//! One arm of a FluctuatedPair.
class FluctuatedDensity final : public Density
{
public:
  FluctuatedDensity(std::shared_ptr<const FluctuatedPair> joint, Arm arm);

  std::size_t dims() const override;
  using Density::evaluate;
  void evaluate(const PointSet& points, std::span<double> out) const override;

  double epsilon() const { return joint_->epsilon(); }
  Arm arm() const { return arm_; }

private:
  std::shared_ptr<const FluctuatedPair> joint_;
  Arm arm_;
};

//! The fluctuated pair through `field.pair` at `epsilon`; pA1 is unchanged.
DensityPair fluctuate(const GradientField& field, double epsilon);

//! Values of a pair on its grid and at every observation of a dataset.
struct PairCache
{
  ArmValues grid;
  ArmValues sample;
};

PairCache cache_pair(const DensityPair& pair, const LabeledDataset& data);

struct UpdateResult
{
  DensityPair pair;
  double epsilon = 0.0;
  bool degenerate = false;
};

//! One least-favorable-submodel update of `pair` along `field`.
UpdateResult tmle_update(const DensityPair& pair, const GradientField& field,
                         const LabeledDataset& data);

struct TmleFit
{
  std::vector<double> epsilons;
  DensityPair final_pair;
  double pn_dstar = 0.0;    // empirical mean of D*(P_n*)
  double sd_dstar = 0.0;    // empirical sd of D*(P_n*), divisor n - 1
  double initial_pn_dstar = 0.0;
  bool criterion_met = false;
  int rounds = 0;

  PairCache final_values;
  std::vector<double> final_gradient; // D*(P_n*)(X_i, A_i)

  bool warning() const { return !criterion_met; }
};

//! Update, recompute the gradient, and check the stopping rule, up to
//! `max_rounds` times. Every round records its epsilon.
TmleFit tmle_targeting_loop(const DensityPair& pair, const LabeledDataset& data,
                            int max_rounds = 10);

//! Same, starting from already evaluated values of `pair`.
TmleFit tmle_targeting_loop(const DensityPair& pair, const LabeledDataset& data,
                            PairCache initial, int max_rounds = 10);

//! Empirical mean and sd (divisor n - 1).
std::pair<double, double> mean_and_sd(std::span<const double> values);

} // namespace l2d
