#include "l2d/simharness.hpp"

#include "l2d/parallel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace l2d::sim {

namespace {

constexpr std::size_t truth_grid_points = 21001;

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

DesignKind parse_kind(std::string_view name)
{
  if (name == "gaussian") {
    return DesignKind::gaussian;
  }
  if (name == "triangle") {
    return DesignKind::triangle;
  }
  if (name == "uniform") {
    return DesignKind::uniform;
  }
  throw std::invalid_argument("unknown simulation design '" + std::string(name) + "'");
}

double arm_offset(const SimDesign& d, Arm a)
{
  if (a == Arm::zero || d.null_case) {
    return 0.0;
  }
  switch (d.kind) {
    case DesignKind::gaussian:
    case DesignKind::triangle:
      return 0.5;
    case DesignKind::uniform:
      return 0.1;
  }
  return 0.0;
}

} // namespace

double uniform01(std::mt19937_64& rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<std::string> design_names()
{
  return { "gaussian", "triangle", "uniform" };
}

SimDesign make_design(std::string_view name, bool null_case)
{
  SimDesign d;
  d.kind = parse_kind(name);
  d.name = std::string(name);
  d.null_case = null_case;

  Interval span;
  switch (d.kind) {
    case DesignKind::gaussian:
      d.p0 = std::make_shared<GaussianDensity>(0.0, 0.5);
      d.p1 = std::make_shared<GaussianDensity>(null_case ? 0.0 : 0.5, 0.5);
      d.true_psi = 2.0 / std::sqrt(std::numbers::pi) * (1.0 - std::exp(-0.25));
      span = { -4.0, 4.5 };
      break;
    case DesignKind::triangle:
      d.p0 = std::make_shared<TriangleDensity>(0.0, 1.0);
      d.p1 = std::make_shared<TriangleDensity>(null_case ? 0.0 : 0.5, 1.0);
      d.true_psi = 0.375;
      span = { -1.5, 2.0 };
      break;
    case DesignKind::uniform:
      d.p0 = std::make_shared<UniformDensity>(0.0, 1.0);
      d.p1 = null_case ? d.p0 : std::make_shared<UniformDensity>(0.1, 1.1);
      d.true_psi = 0.2;
      span = { -0.5, 1.6 };
      break;
  }
  if (null_case) {
    d.true_psi = 0.0;
  }
  d.truth_grid = std::make_shared<const QuadGrid>(std::vector<Interval>{ span },
                                                  truth_grid_points);
  return d;
}

DensityPair SimDesign::truth_pair() const
{
  return DensityPair{ p0, p1, pA1, truth_grid, nullptr };
}

std::vector<double> SimDesign::draw(Arm a, std::size_t m, std::mt19937_64& rng) const
{
  const double shift = arm_offset(*this, a);
  std::vector<double> out(m);
  for (auto& x : out) {
    switch (kind) {
      case DesignKind::gaussian: {
        // Box-Muller, cosine branch only.
        const double u1 = 1.0 - uniform01(rng);
        const double u2 = uniform01(rng);
        const double z =
          std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        x = shift + 0.5 * z;
        break;
      }
      case DesignKind::triangle:
        x = shift + uniform01(rng) + uniform01(rng) - 1.0;
        break;
      case DesignKind::uniform:
        x = shift + uniform01(rng);
        break;
    }
  }
  return out;
}

LabeledDataset sample_design(const SimDesign& design, std::size_t n, std::uint64_t seed)
{
  if (n < 2) {
    throw std::invalid_argument("each arm needs at least 2 draws");
  }
  std::mt19937_64 rng(seed);
  auto x0 = design.draw(Arm::zero, n, rng);
  auto x1 = design.draw(Arm::one, n, rng);
  std::vector<double> coords;
  coords.reserve(2 * n);
  coords.insert(coords.end(), x0.begin(), x0.end());
  coords.insert(coords.end(), x1.begin(), x1.end());
  std::vector<Arm> labels(2 * n, Arm::zero);
  std::fill(labels.begin() + static_cast<std::ptrdiff_t>(n), labels.end(), Arm::one);
  return LabeledDataset(PointSet(1, std::move(coords)), std::move(labels));
}

std::uint64_t replicate_seed(std::uint64_t master_seed, std::string_view design,
                             std::size_t n, std::size_t replicate)
{
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ fnv1a(design));
  h = splitmix64(h ^ static_cast<std::uint64_t>(n));
  h = splitmix64(h ^ static_cast<std::uint64_t>(replicate));
  return h;
}

std::vector<ReplicateRecord> run_replicates(const SimDesign& design, std::size_t n,
                                            std::size_t replicates,
                                            std::uint64_t master_seed,
                                            const EstimatorOptions& options, unsigned jobs)
{
  std::vector<ReplicateRecord> records(replicates);
  const std::string label = design.label();
  parallel_for(replicates, jobs, [&](std::size_t r) {
    auto& rec = records[r];
    try {
      const auto data = sample_design(design, n, replicate_seed(master_seed, label, n, r));
      const auto est = estimate_l2d(data, options);
      rec.psi_kernel = est.psi_kernel;
      rec.psi_tmle = est.psi_tmle;
      rec.se_kernel = est.se_kernel;
      rec.se_tmle = est.se_tmle;
      rec.rounds = est.rounds;
      rec.criterion_met = est.criterion_met;
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.error = e.what();
    }
  });
  return records;
}

std::string to_string(Method m)
{
  return m == Method::kernel ? "kernel" : "tmle";
}

std::vector<SimResult> summarize(const SimDesign& design, std::size_t n,
                                 const std::vector<ReplicateRecord>& records,
                                 double efficiency_bound, double level,
                                 std::uint64_t master_seed)
{
  const double z = normal_quantile(0.5 * (1.0 + level));
  const double total_n = 2.0 * static_cast<double>(n);

  std::vector<SimResult> out;
  for (Method method : { Method::kernel, Method::tmle }) {
    std::vector<double> est;
    std::vector<double> se;
    double rounds = 0.0;
    std::size_t failures = 0;
    for (const auto& rec : records) {
      if (rec.failed) {
        ++failures;
        continue;
      }
      est.push_back(method == Method::kernel ? rec.psi_kernel : rec.psi_tmle);
      se.push_back(method == Method::kernel ? rec.se_kernel : rec.se_tmle);
      rounds += rec.rounds;
    }
    if (est.size() < 2) {
      throw std::runtime_error("fewer than 2 successful replicates for " + design.label() +
                               " at n = " + std::to_string(n));
    }
    const auto r = static_cast<double>(est.size());
    double mean = 0.0;
    for (double e : est) {
      mean += e;
    }
    mean /= r;
    double mse = 0.0;
    double var = 0.0;
    for (double e : est) {
      mse += (e - design.true_psi) * (e - design.true_psi);
      var += (e - mean) * (e - mean);
    }
    const double oracle_se = std::sqrt(var / (r - 1.0));
    std::size_t hit_oracle = 0;
    std::size_t hit_sample = 0;
    for (std::size_t i = 0; i < est.size(); ++i) {
      const double err = std::abs(est[i] - design.true_psi);
      hit_oracle += err <= z * oracle_se ? 1 : 0;
      hit_sample += err <= z * se[i] ? 1 : 0;
    }

    SimResult res;
    res.design = design.label();
    res.method = method;
    res.n = n;
    res.replicates = est.size();
    res.coverage_oracle = static_cast<double>(hit_oracle) / r;
    res.coverage_sample = static_cast<double>(hit_sample) / r;
    res.mse_times_n = total_n * mse / r;
    res.var_times_n = total_n * var / r;
    res.efficiency_bound = efficiency_bound;
    res.mean_rounds = method == Method::tmle ? rounds / r : 0.0;
    res.mean_estimate = mean;
    res.failures = failures;
    res.seed_base = replicate_seed(master_seed, design.label(), n, 0);
    out.push_back(res);
  }
  return out;
}

std::vector<std::size_t> default_ladder()
{
  std::vector<std::size_t> out;
  for (std::size_t n = 50; n <= 12800; n *= 2) {
    out.push_back(n);
  }
  return out;
}

std::vector<std::size_t> full_scale_ladder()
{
  std::vector<std::size_t> out;
  for (std::size_t n = 50; n <= 51200; n *= 2) {
    out.push_back(n);
  }
  return out;
}

std::vector<SimResult> run_ladder(const SimDesign& design, const LadderOptions& options)
{
  if (options.n_values.empty()) {
    throw std::invalid_argument("the sample-size ladder is empty");
  }
  if (options.replicates < 2) {
    throw std::invalid_argument("at least 2 replicates are required");
  }
  options.estimator.validate();
  const double bound = efficiency_bound(design.truth_pair());
  std::vector<SimResult> out;
  for (std::size_t n : options.n_values) {
    const auto records = run_replicates(design, n, options.replicates, options.master_seed,
                                        options.estimator, options.jobs);
    auto cell = summarize(design, n, records, bound, options.estimator.level,
                          options.master_seed);
    out.insert(out.end(), cell.begin(), cell.end());
  }
  return out;
}

} // namespace l2d::sim
