// l2d: estimate, simulate and geo subcommands.

#include "l2d/dataset.hpp"
#include "l2d/estimator.hpp"
#include "l2d/geopipeline.hpp"
#include "l2d/report.hpp"
#include "l2d/simharness.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

namespace fs = std::filesystem;

struct EstimatorFlags
{
  std::size_t points_per_dim = 0;
  double padding = 4.0;
  std::string selector = "plug_in";
  std::vector<double> bandwidth;
  double level = 0.95;
  int max_rounds = 10;
  std::string se_source = "kernel";

  l2d::EstimatorOptions resolve() const
  {
    l2d::EstimatorOptions o;
    o.points_per_dim = points_per_dim;
    o.grid_padding_bandwidths = padding;
    o.selector = l2d::parse_bandwidth_selector(selector);
    o.fixed_bandwidth = bandwidth;
    if (!bandwidth.empty() && selector == "plug_in") {
      o.selector = l2d::BandwidthSelector::fixed;
    }
    o.level = level;
    o.max_rounds = max_rounds;
    o.se_source = l2d::parse_se_source(se_source);
    o.validate();
    return o;
  }
};

const CLI::Validator open_unit_interval(
  [](std::string& s) -> std::string {
    double v = 0.0;
    try {
      v = std::stod(s);
    } catch (const std::exception&) {
      return "not a number: " + s;
    }
    if (!(v > 0.0 && v < 1.0)) {
      return "level must lie strictly between 0 and 1, got " + s;
    }
    return {};
  },
  "(0,1)");

void add_estimator_flags(CLI::App* cmd, EstimatorFlags& f)
{
  cmd->add_option("--points-per-dim", f.points_per_dim,
                  "Quadrature points per dimension (0: 401 in 1-D, 201 in 2-D)");
  cmd->add_option("--padding", f.padding, "Grid padding beyond the data, in bandwidths")
    ->check(CLI::PositiveNumber);
  cmd->add_option("--selector", f.selector, "Bandwidth selector")
    ->check(CLI::IsMember({ "plug_in", "hpi", "normal_reference", "nrd", "fixed" }));
  cmd->add_option("--bandwidth", f.bandwidth,
                  "Fixed bandwidth per dimension (implies --selector fixed)")
    ->default_str("none");
  cmd->add_option("--level", f.level, "Confidence level")->check(open_unit_interval);
  cmd->add_option("--max-rounds", f.max_rounds, "Maximum targeting rounds")
    ->check(CLI::Range(1, 1000));
  cmd->add_option("--se-source", f.se_source,
                  "Gradient behind the standard error: kernel fit or targeted fit")
    ->check(CLI::IsMember({ "kernel", "tmle" }));
}

void ensure_parent(const fs::path& p)
{
  if (p.has_parent_path()) {
    fs::create_directories(p.parent_path());
  }
}

std::ofstream open_output(const fs::path& p)
{
  ensure_parent(p);
  std::ofstream out(p, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + p.string() + "'");
  }
  return out;
}

int cmd_estimate(const std::string& input, const std::string& output, const EstimatorFlags& f)
{
  const auto options = f.resolve();
  l2d::LabeledDataset data = [&] {
    if (input == "-") {
      return l2d::read_labeled_csv(std::cin);
    }
    std::ifstream in(input, std::ios::binary);
    if (!in) {
      throw std::runtime_error("cannot open '" + input + "'");
    }
    try {
      return l2d::read_labeled_csv(in);
    } catch (const std::exception& e) {
      throw std::runtime_error(input + ": " + e.what());
    }
  }();
  const auto report = l2d::estimate_l2d(data, options);
  l2d::report::write_estimate_text(std::cout, report);
  if (!output.empty()) {
    auto out = open_output(output);
    l2d::report::write_estimate_csv(out, report);
  }
  return 0;
}

struct SimFlags
{
  std::string design = "all";
  std::vector<std::size_t> n_values;
  std::size_t replicates = 300;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
  std::string out_dir = ".";
  bool null_case = false;
  bool full_scale = false;
};

int cmd_simulate(const SimFlags& s, const EstimatorFlags& f)
{
  l2d::sim::LadderOptions ladder;
  ladder.estimator = f.resolve();
  ladder.replicates = s.replicates;
  ladder.master_seed = s.seed;
  ladder.jobs = s.jobs;
  if (!s.n_values.empty()) {
    ladder.n_values = s.n_values;
  } else {
    ladder.n_values = s.full_scale ? l2d::sim::full_scale_ladder() : l2d::sim::default_ladder();
  }

  std::vector<std::string> names;
  if (s.design == "all") {
    names = l2d::sim::design_names();
  } else {
    names.push_back(s.design);
  }
  std::vector<l2d::sim::SimDesign> designs;
  for (const auto& name : names) {
    designs.push_back(l2d::sim::make_design(name, s.null_case));
  }

  std::vector<l2d::sim::SimResult> all;
  std::size_t failures = 0;
  for (const auto& design : designs) {
    std::cerr << fmt::format("simulating {} ({} replicates per n)\n", design.label(),
                             ladder.replicates);
    auto results = l2d::sim::run_ladder(design, ladder);
    for (const auto& r : results) {
      failures += r.failures;
    }
    const auto svg_path = fs::path(s.out_dir) / ("sim_" + design.label() + ".svg");
    auto svg = open_output(svg_path);
    l2d::report::write_sim_svg(svg, design.label(), results, ladder.estimator.level);
    all.insert(all.end(), results.begin(), results.end());
  }
  const auto csv_path = fs::path(s.out_dir) / "sim_results.csv";
  auto out = open_output(csv_path);
  l2d::report::write_sim_csv(out, all);
  l2d::report::write_sim_csv(std::cout, all);
  if (failures > 0) {
    std::cerr << fmt::format("warning: {} replicate estimations failed and were excluded\n",
                             failures);
  }
  return 0;
}

struct GeoFlags
{
  std::string input;
  l2d::geo::ColumnMap columns;
  std::string cutoff;
  int days_before = 80;
  int days_after = 80;
  std::size_t min_count = 100;
  bool plate_carree = false;
  unsigned jobs = 0;
  std::string results = "results.csv";
  std::string chart = "ranking.svg";
};

int cmd_geo(const GeoFlags& g, const EstimatorFlags& f)
{
  l2d::geo::GeoOptions options;
  options.estimator = f.resolve();
  const auto cutoff = l2d::geo::parse_date(g.cutoff);
  if (!cutoff) {
    throw std::runtime_error("cannot parse cutoff date '" + g.cutoff + "'");
  }
  options.window = { *cutoff, g.days_before, g.days_after };
  options.min_count = g.min_count;
  options.plate_carree = g.plate_carree;
  options.jobs = g.jobs;

  const auto ingest = l2d::geo::ingest_csv(g.input, g.columns);
  std::cerr << fmt::format("read {} rows, skipped {} malformed\n", ingest.rows, ingest.skipped);
  const auto results = l2d::geo::analyze(ingest.records, options);

  auto csv = open_output(g.results);
  l2d::report::write_geo_csv(csv, results);
  auto svg = open_output(g.chart);
  l2d::report::write_geo_svg(svg, results);

  for (const auto& r : results) {
    if (r.report) {
      std::cout << fmt::format("{:<32} {:>6} {:>6}  psi_tmle {:.5g}  [{:.5g}, {:.5g}]\n",
                               r.category, r.n_before, r.n_after, r.report->psi_tmle,
                               r.report->ci_tmle.lo, r.report->ci_tmle.hi);
    } else {
      std::cout << fmt::format("{:<32} {:>6} {:>6}  failed: {}\n", r.category, r.n_before,
                               r.n_after, r.error);
    }
  }
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{ "Targeted estimation of the L2 distance between two densities" };
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "Key-value config file; command-line flags take precedence");
  app.require_subcommand(1);

  EstimatorFlags est_flags;
  std::string est_input;
  std::string est_output;
  auto* estimate = app.add_subcommand("estimate", "Estimate the L2 distance from a labeled CSV");
  estimate->add_option("--input,-i", est_input, "CSV with columns x[,y],a ('-' for stdin)")
    ->required();
  estimate->add_option("--output,-o", est_output, "Write a one-row result CSV here");
  add_estimator_flags(estimate, est_flags);

  EstimatorFlags sim_est;
  SimFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo coverage and efficiency study");
  simulate->add_option("--design", sim.design, "Design name or 'all'")
    ->check(CLI::IsMember({ "gaussian", "triangle", "uniform", "all" }));
  simulate->add_option("--n", sim.n_values, "Per-arm sample sizes")
    ->delimiter(',')
    ->check(CLI::Range(std::size_t{ 2 }, std::size_t{ 100000000 }))
    ->default_str("50,100,...,12800");
  simulate->add_option("--replicates,-R", sim.replicates, "Replicates per sample size")
    ->check(CLI::Range(std::size_t{ 2 }, std::size_t{ 1000000 }));
  simulate->add_option("--seed", sim.seed, "Master seed");
  simulate->add_option("--jobs,-j", sim.jobs, "Worker threads (0: all cores)");
  simulate->add_option("--out-dir", sim.out_dir, "Directory for sim_results.csv and SVG plots");
  simulate->add_flag("--null", sim.null_case, "Draw both arms from the arm-0 distribution");
  simulate->add_flag("--full-scale", sim.full_scale,
                     "Use the ladder up to n = 51200 (with --replicates 5000 for full scale)");
  add_estimator_flags(simulate, sim_est);

  EstimatorFlags geo_est;
  GeoFlags geo;
  auto* geocmd = app.add_subcommand("geo", "Before/after L2 distance per incident category");
  geocmd->add_option("--input,-i", geo.input, "Incident CSV")->required()->check(
    CLI::ExistingFile);
  geocmd->add_option("--category-col", geo.columns.category, "Category column");
  geocmd->add_option("--date-col", geo.columns.date, "Date column");
  geocmd->add_option("--lon-col", geo.columns.lon, "Longitude column");
  geocmd->add_option("--lat-col", geo.columns.lat, "Latitude column");
  geocmd->add_option("--cutoff", geo.cutoff, "Cutoff date (YYYY-MM-DD or MM/DD/YYYY)")
    ->required();
  geocmd->add_option("--days-before", geo.days_before, "Days in the before window")
    ->check(CLI::Range(1, 100000));
  geocmd->add_option("--days-after", geo.days_after, "Days in the after window")
    ->check(CLI::Range(1, 100000));
  geocmd->add_option("--min-count", geo.min_count, "Minimum incidents in each window");
  geocmd->add_flag("--plate-carree", geo.plate_carree,
                   "Scale longitude by cos(mean latitude)");
  geocmd->add_option("--jobs,-j", geo.jobs, "Worker threads (0: all cores)");
  geocmd->add_option("--results", geo.results, "Result CSV path");
  geocmd->add_option("--chart", geo.chart, "Ranking SVG path");
  add_estimator_flags(geocmd, geo_est);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*estimate) {
      return cmd_estimate(est_input, est_output, est_flags);
    }
    if (*simulate) {
      return cmd_simulate(sim, sim_est);
    }
    return cmd_geo(geo, geo_est);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
