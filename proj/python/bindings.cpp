#include "l2d/estimator.hpp"
#include "l2d/simharness.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

namespace py = pybind11;
using namespace l2d;

namespace {

LabeledDataset to_dataset(py::array_t<double, py::array::c_style | py::array::forcecast> x,
                          py::array_t<int, py::array::c_style | py::array::forcecast> a)
{
  if (x.ndim() != 1 && x.ndim() != 2) {
    throw std::invalid_argument("x must be a 1-D array or an (n, d) array");
  }
  const std::size_t n = static_cast<std::size_t>(x.shape(0));
  const std::size_t d = x.ndim() == 1 ? 1 : static_cast<std::size_t>(x.shape(1));
  if (a.ndim() != 1 || static_cast<std::size_t>(a.shape(0)) != n) {
    throw std::invalid_argument("a must be a 1-D array with one label per row of x");
  }
  std::vector<double> coords(x.data(), x.data() + n * d);
  std::vector<Arm> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int v = a.data()[i];
    if (v != 0 && v != 1) {
      throw std::invalid_argument("labels must be 0 or 1");
    }
    labels.push_back(v == 1 ? Arm::one : Arm::zero);
  }
  return LabeledDataset(PointSet(d, std::move(coords)), std::move(labels));
}

EstimatorOptions make_options(std::size_t points_per_dim, double padding,
                              const std::string& selector,
                              std::optional<std::vector<double>> bandwidth, double level,
                              int max_rounds, const std::string& se_source)
{
  EstimatorOptions o;
  o.points_per_dim = points_per_dim;
  o.grid_padding_bandwidths = padding;
  o.selector = parse_bandwidth_selector(selector);
  if (bandwidth) {
    o.selector = BandwidthSelector::fixed;
    o.fixed_bandwidth = *bandwidth;
  }
  o.level = level;
  o.max_rounds = max_rounds;
  o.se_source = parse_se_source(se_source);
  o.validate();
  return o;
}

py::dict to_dict(const EstimateReport& r)
{
  py::dict out;
  out["psi_kernel"] = r.psi_kernel;
  out["psi_tmle"] = r.psi_tmle;
  out["se"] = r.se;
  out["se_kernel"] = r.se_kernel;
  out["se_tmle"] = r.se_tmle;
  out["level"] = r.level;
  out["ci_kernel"] = py::make_tuple(r.ci_kernel.lo, r.ci_kernel.hi);
  out["ci_tmle"] = py::make_tuple(r.ci_tmle.lo, r.ci_tmle.hi);
  out["epsilons"] = r.epsilons;
  out["rounds"] = r.rounds;
  out["criterion_met"] = r.criterion_met;
  out["bandwidth0"] = r.bandwidth0.h;
  out["bandwidth1"] = r.bandwidth1.h;
  out["grid_points_per_dim"] = r.grid_points_per_dim;
  out["n0"] = r.n0;
  out["n1"] = r.n1;
  return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "L2 distance between two densities with a targeted kernel estimator";

  m.def(
    "estimate",
    [](py::array_t<double, py::array::c_style | py::array::forcecast> x,
       py::array_t<int, py::array::c_style | py::array::forcecast> a, std::size_t points_per_dim,
       double padding, const std::string& selector, std::optional<std::vector<double>> bandwidth,
       double level, int max_rounds, const std::string& se_source) {
      const auto data = to_dataset(x, a);
      const auto opts =
        make_options(points_per_dim, padding, selector, bandwidth, level, max_rounds, se_source);
      EstimateReport r;
      {
        py::gil_scoped_release release;
        r = estimate_l2d(data, opts);
      }
      return to_dict(r);
    },
    py::arg("x"), py::arg("a"), py::kw_only(), py::arg("points_per_dim") = 0,
    py::arg("padding") = 4.0, py::arg("selector") = "plug_in",
    py::arg("bandwidth") = py::none(), py::arg("level") = 0.95, py::arg("max_rounds") = 10,
    py::arg("se_source") = "kernel",
    "Estimate the L2 distance between the arm-1 and arm-0 densities of x.");

  m.def("designs", &sim::design_names);

  m.def(
    "true_psi",
    [](const std::string& design, bool null_case) {
      return sim::make_design(design, null_case).true_psi;
    },
    py::arg("design"), py::arg("null_case") = false);

  m.def(
    "sample",
    [](const std::string& design, std::size_t n, std::uint64_t seed, bool null_case) {
      const auto data = sim::sample_design(sim::make_design(design, null_case), n, seed);
      py::array_t<double> x(static_cast<py::ssize_t>(data.size()));
      py::array_t<int> a(static_cast<py::ssize_t>(data.size()));
      const auto c = data.points().coords();
      std::copy(c.begin(), c.end(), x.mutable_data());
      for (std::size_t i = 0; i < data.size(); ++i) {
        a.mutable_data()[i] = data.label(i) == Arm::one ? 1 : 0;
      }
      return py::make_tuple(x, a);
    },
    py::arg("design"), py::arg("n"), py::arg("seed"), py::arg("null_case") = false,
    "Draw n observations per arm from a simulation design; returns (x, a).");

  m.def(
    "simulate",
    [](const std::string& design, std::vector<std::size_t> n_values, std::size_t replicates,
       std::uint64_t seed, unsigned jobs, bool null_case) {
      const auto d = sim::make_design(design, null_case);
      sim::LadderOptions o;
      o.n_values = std::move(n_values);
      o.replicates = replicates;
      o.master_seed = seed;
      o.jobs = jobs;
      std::vector<sim::SimResult> res;
      {
        py::gil_scoped_release release;
        res = sim::run_ladder(d, o);
      }
      py::list out;
      for (const auto& r : res) {
        py::dict row;
        row["design"] = r.design;
        row["method"] = sim::to_string(r.method);
        row["n"] = r.n;
        row["replicates"] = r.replicates;
        row["coverage_oracle"] = r.coverage_oracle;
        row["coverage_sample"] = r.coverage_sample;
        row["mse_n"] = r.mse_times_n;
        row["var_n"] = r.var_times_n;
        row["eff_bound"] = r.efficiency_bound;
        row["mean_rounds"] = r.mean_rounds;
        row["mean_estimate"] = r.mean_estimate;
        row["failures"] = r.failures;
        out.append(row);
      }
      return out;
    },
    py::arg("design"), py::arg("n_values"), py::arg("replicates") = 300, py::arg("seed") = 1,
    py::arg("jobs") = 0, py::arg("null_case") = false);
}
