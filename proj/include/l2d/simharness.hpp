#pragma once

#include "l2d/dataset.hpp"
#include "l2d/estimator.hpp"
#include "l2d/gradient.hpp"

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace l2d::sim {

enum class DesignKind
{
  gaussian,
  triangle,
  uniform
};

//! A two-arm data-generating design with analytic densities and truth.
struct SimDesign
{
  std::string name;
  DesignKind kind = DesignKind::gaussian;
  bool null_case = false; // arm 1 drawn from the arm-0 distribution

  DensityPtr p0;
  DensityPtr p1;
  double true_psi = 0.0;
  double pA1 = 0.5;

  //! Fine grid covering both supports, used for analytic truths.
  std::shared_ptr<const QuadGrid> truth_grid;

  DensityPair truth_pair() const;

  //! `m` draws from the arm-`a` distribution.
  std::vector<double> draw(Arm a, std::size_t m, std::mt19937_64& rng) const;

  //! Label used for seeding and reports, e.g. "gaussian" or "gaussian-null".
  std::string label() const { return null_case ? name + "-null" : name; }
};

std::vector<std::string> design_names();

//! gaussian: N(0, 0.5^2) vs N(0.5, 0.5^2); triangle: tent 1 - |x| on [-1, 1]
//! vs the same shifted by 0.5; uniform: U[0, 1] vs U[0.1, 1.1].
SimDesign make_design(std::string_view name, bool null_case = false);

//! n draws per arm (arm 0 first), deterministic in `seed`.
LabeledDataset sample_design(const SimDesign& design, std::size_t n, std::uint64_t seed);

//! Seed of replicate r of cell (design, n), a pure function of its inputs.
std::uint64_t replicate_seed(std::uint64_t master_seed, std::string_view design,
                             std::size_t n, std::size_t replicate);

//! Uniform double in [0, 1) from the top 53 bits of one engine draw.
double uniform01(std::mt19937_64& rng);

struct ReplicateRecord
{
  double psi_kernel = 0.0;
  double psi_tmle = 0.0;
  double se_kernel = 0.0;
  double se_tmle = 0.0;
  int rounds = 0;
  bool criterion_met = false;
  bool failed = false;
  std::string error;
};

//! R independent replicates of one (design, n) cell, stored by replicate index.
std::vector<ReplicateRecord> run_replicates(const SimDesign& design, std::size_t n,
                                            std::size_t replicates,
                                            std::uint64_t master_seed,
                                            const EstimatorOptions& options, unsigned jobs);

enum class Method
{
  kernel,
  tmle
};

std::string to_string(Method m);

struct SimResult
{
  std::string design;
  Method method = Method::tmle;
  std::size_t n = 0; // per arm; each replicate has 2n observations
  std::size_t replicates = 0;
  double coverage_oracle = 0.0;
  double coverage_sample = 0.0;
  double mse_times_n = 0.0; // scaled by the total observation count 2n
  double var_times_n = 0.0;
  double efficiency_bound = 0.0;
  double mean_rounds = 0.0;
  double mean_estimate = 0.0;
  std::size_t failures = 0;
  std::uint64_t seed_base = 0;
};

//! Coverage and error metrics for both methods of one cell. Failed
//! replicates are excluded and counted.
std::vector<SimResult> summarize(const SimDesign& design, std::size_t n,
                                 const std::vector<ReplicateRecord>& records,
                                 double efficiency_bound, double level,
                                 std::uint64_t master_seed);

struct LadderOptions
{
  std::vector<std::size_t> n_values;
  std::size_t replicates = 300;
  std::uint64_t master_seed = 1;
  EstimatorOptions estimator;
  unsigned jobs = 0;
};

std::vector<std::size_t> default_ladder();    // 50, 100, ..., 12800
std::vector<std::size_t> full_scale_ladder(); // 50, 100, ..., 51200

//! For every n: kernel and TMLE results, in ladder order.
std::vector<SimResult> run_ladder(const SimDesign& design, const LadderOptions& options);

} // namespace l2d::sim
