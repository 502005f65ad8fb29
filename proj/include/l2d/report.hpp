#pragma once

#include "l2d/estimator.hpp"
#include "l2d/geopipeline.hpp"
#include "l2d/simharness.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace l2d::report {

//! One header row and one value row describing an estimate.
void write_estimate_csv(std::ostream& out, const EstimateReport& r);

//! Human-readable summary for terminals.
void write_estimate_text(std::ostream& out, const EstimateReport& r);

//! Columns: design, method, n, R, coverage_oracle, coverage_sample, mse_n,
//! var_n, eff_bound, mean_rounds.
void write_sim_csv(std::ostream& out, const std::vector<sim::SimResult>& results);

//! Coverage panel and scaled-error panel for one design, against
//! log2(n / 50).
void write_sim_svg(std::ostream& out, const std::string& design,
                   const std::vector<sim::SimResult>& results, double level);

//! Columns: category, n_before, n_after, psi_kernel, psi_tmle, se,
//! ci_kernel_lo, ci_kernel_hi, ci_tmle_lo, ci_tmle_hi, rounds, error.
void write_geo_csv(std::ostream& out, const std::vector<geo::CategoryResult>& results);

//! Ranked dot-and-interval chart with a sample-size table on the left.
void write_geo_svg(std::ostream& out, const std::vector<geo::CategoryResult>& results);

} // namespace l2d::report
