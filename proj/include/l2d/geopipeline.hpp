#pragma once

#include "l2d/estimator.hpp"

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace l2d::geo {

using Date = std::chrono::sys_days;

//! Parses "YYYY-MM-DD" or "MM/DD/YYYY", optionally followed by a time part
//! separated by 'T' or a space. Returns nullopt for anything else.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date d);

struct IncidentRecord
{
  std::string category; // trimmed, upper-cased
  Date date;
  double lon = 0.0;
  double lat = 0.0;
};

//! Header names of the four input columns.
struct ColumnMap
{
  std::string category = "Category";
  std::string date = "Date";
  std::string lon = "X";
  std::string lat = "Y";
};

struct IngestResult
{
  std::vector<IncidentRecord> records;
  std::size_t rows = 0;
  std::size_t skipped = 0;
};

//! Reads incident rows, skipping (and counting) rows with a blank or
//! unparseable field. Throws when a mapped column is missing or more than
//! half of the rows are malformed.
IngestResult ingest_csv(std::istream& in, const ColumnMap& columns);
IngestResult ingest_csv(const std::filesystem::path& path, const ColumnMap& columns);

struct WindowSpec
{
  Date cutoff;
  int days_before = 80;
  int days_after = 80;

  void validate() const;
};

enum class WindowLabel
{
  before,
  after,
  excluded
};

//! before: cutoff - days_before <= date < cutoff; after: cutoff < date <=
//! cutoff + days_after. The cutoff day itself is excluded.
WindowLabel window_label(Date date, const WindowSpec& spec);

std::vector<WindowLabel> window_split(const std::vector<IncidentRecord>& records,
                                      const WindowSpec& spec);

struct CategoryCount
{
  std::string category;
  std::size_t n_before = 0;
  std::size_t n_after = 0;
};

//! Windowed counts per category, sorted by total descending then name.
std::vector<CategoryCount> category_counts(const std::vector<IncidentRecord>& records,
                                           const WindowSpec& spec);

//! Categories with at least `min_count` incidents in both windows, sorted
//! by total count descending (ties by name).
std::vector<std::string> eligible_categories(const std::vector<IncidentRecord>& records,
                                             const WindowSpec& spec,
                                             std::size_t min_count = 100);

struct GeoOptions
{
  WindowSpec window;
  std::size_t min_count = 100;
  bool plate_carree = false; // scale longitude by cos(mean latitude)
  EstimatorOptions estimator;
  unsigned jobs = 0;
};

struct CategoryResult
{
  std::string category;
  std::size_t n_before = 0;
  std::size_t n_after = 0;
  std::optional<EstimateReport> report;
  std::string error;
};

//! Per-category bivariate L2D (A = 0 before, A = 1 after) for every
//! eligible category, ranked by psi_tmle descending. Categories whose
//! estimation fails are kept with their error and ranked last.
std::vector<CategoryResult> analyze(const std::vector<IncidentRecord>& records,
                                    const GeoOptions& options);

//! The labeled 2-D dataset analyze() builds for one category.
LabeledDataset category_dataset(const std::vector<IncidentRecord>& records,
                                std::string_view category, const GeoOptions& options);

} // namespace l2d::geo
