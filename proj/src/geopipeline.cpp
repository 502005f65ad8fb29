#include "l2d/geopipeline.hpp"

#include "l2d/csv.hpp"
#include "l2d/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <stdexcept>

namespace l2d::geo {

namespace {

std::optional<int> parse_int(std::string_view s)
{
  if (s.empty()) {
    return std::nullopt;
  }
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return v;
}

std::optional<double> parse_double(std::string_view s)
{
  const auto t = csv::trim(s);
  if (t.empty()) {
    return std::nullopt;
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::optional<Date> make_date(std::optional<int> y, std::optional<int> m, std::optional<int> d)
{
  if (!y || !m || !d || *m < 1 || *d < 1) {
    return std::nullopt;
  }
  const std::chrono::year_month_day ymd{ std::chrono::year{ *y },
                                         std::chrono::month{ static_cast<unsigned>(*m) },
                                         std::chrono::day{ static_cast<unsigned>(*d) } };
  if (!ymd.ok()) {
    return std::nullopt;
  }
  return Date{ ymd };
}

std::string normalize_category(std::string_view raw)
{
  auto s = csv::trim(raw);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::toupper(c));
  });
  return s;
}

} // namespace

std::optional<Date> parse_date(std::string_view text)
{
  const auto trimmed = csv::trim(text);
  std::string_view s = trimmed;
  const auto cut = s.find_first_of("T ");
  if (cut != std::string_view::npos) {
    s = s.substr(0, cut);
  }
  if (s.size() == 10 && s[4] == '-' && s[7] == '-') {
    return make_date(parse_int(s.substr(0, 4)), parse_int(s.substr(5, 2)),
                     parse_int(s.substr(8, 2)));
  }
  const auto p1 = s.find('/');
  const auto p2 = p1 == std::string_view::npos ? p1 : s.find('/', p1 + 1);
  if (p2 != std::string_view::npos && s.size() - p2 - 1 == 4) {
    return make_date(parse_int(s.substr(p2 + 1)), parse_int(s.substr(0, p1)),
                     parse_int(s.substr(p1 + 1, p2 - p1 - 1)));
  }
  return std::nullopt;
}

std::string format_date(Date d)
{
  const std::chrono::year_month_day ymd{ d };
  return fmt::format("{:04}-{:02}-{:02}", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

IngestResult ingest_csv(std::istream& in, const ColumnMap& columns)
{
  csv::Reader reader(in);
  std::vector<std::string> header;
  if (!reader.next(header)) {
    throw std::runtime_error("input CSV is empty");
  }
  for (auto& h : header) {
    h = csv::trim(h);
  }
  auto find = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw std::runtime_error("column '" + name + "' not found in the CSV header");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t ic = find(columns.category);
  const std::size_t id = find(columns.date);
  const std::size_t ix = find(columns.lon);
  const std::size_t iy = find(columns.lat);
  const std::size_t needed = std::max({ ic, id, ix, iy }) + 1;

  IngestResult result;
  std::vector<std::string> row;
  while (reader.next(row)) {
    if (row.size() == 1 && csv::trim(row[0]).empty()) {
      continue; // blank line
    }
    ++result.rows;
    if (row.size() < needed) {
      ++result.skipped;
      continue;
    }
    auto category = normalize_category(row[ic]);
    const auto date = parse_date(row[id]);
    const auto lon = parse_double(row[ix]);
    const auto lat = parse_double(row[iy]);
    if (category.empty() || !date || !lon || !lat) {
      ++result.skipped;
      continue;
    }
    result.records.push_back({ std::move(category), *date, *lon, *lat });
  }
  if (result.rows > 0 && 2 * result.skipped > result.rows) {
    throw std::runtime_error(fmt::format("{} of {} rows are malformed", result.skipped,
                                         result.rows));
  }
  return result;
}

IngestResult ingest_csv(const std::filesystem::path& path, const ColumnMap& columns)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open '" + path.string() + "'");
  }
  return ingest_csv(in, columns);
}

void WindowSpec::validate() const
{
  if (days_before < 1 || days_after < 1) {
    throw std::invalid_argument("window lengths must be at least one day");
  }
}

WindowLabel window_label(Date date, const WindowSpec& spec)
{
  using std::chrono::days;
  if (date < spec.cutoff && date >= spec.cutoff - days{ spec.days_before }) {
    return WindowLabel::before;
  }
  if (date > spec.cutoff && date <= spec.cutoff + days{ spec.days_after }) {
    return WindowLabel::after;
  }
  return WindowLabel::excluded;
}

std::vector<WindowLabel> window_split(const std::vector<IncidentRecord>& records,
                                      const WindowSpec& spec)
{
  spec.validate();
  std::vector<WindowLabel> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    out.push_back(window_label(r.date, spec));
  }
  return out;
}

std::vector<CategoryCount> category_counts(const std::vector<IncidentRecord>& records,
                                           const WindowSpec& spec)
{
  const auto labels = window_split(records, spec);
  std::map<std::string, CategoryCount> counts;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (labels[i] == WindowLabel::excluded) {
      continue;
    }
    auto& c = counts[records[i].category];
    c.category = records[i].category;
    if (labels[i] == WindowLabel::before) {
      ++c.n_before;
    } else {
      ++c.n_after;
    }
  }
  std::vector<CategoryCount> out;
  for (auto& [name, c] : counts) {
    out.push_back(c);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.n_before + a.n_after > b.n_before + b.n_after;
  });
  return out;
}

std::vector<std::string> eligible_categories(const std::vector<IncidentRecord>& records,
                                             const WindowSpec& spec, std::size_t min_count)
{
  std::vector<std::string> out;
  for (const auto& c : category_counts(records, spec)) {
    if (c.n_before >= min_count && c.n_after >= min_count) {
      out.push_back(c.category);
    }
  }
  return out;
}

LabeledDataset category_dataset(const std::vector<IncidentRecord>& records,
                                std::string_view category, const GeoOptions& options)
{
  const auto labels = window_split(records, options.window);
  std::vector<std::size_t> rows;
  double lat_sum = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (labels[i] != WindowLabel::excluded && records[i].category == category) {
      rows.push_back(i);
      lat_sum += records[i].lat;
    }
  }
  double lon_scale = 1.0;
  if (options.plate_carree && !rows.empty()) {
    const double mean_lat = lat_sum / static_cast<double>(rows.size());
    lon_scale = std::cos(mean_lat * std::numbers::pi / 180.0);
  }
  std::vector<double> coords;
  std::vector<Arm> arms;
  coords.reserve(2 * rows.size());
  for (std::size_t i : rows) {
    coords.push_back(records[i].lon * lon_scale);
    coords.push_back(records[i].lat);
    arms.push_back(labels[i] == WindowLabel::after ? Arm::one : Arm::zero);
  }
  return LabeledDataset(PointSet(2, std::move(coords)), std::move(arms));
}

std::vector<CategoryResult> analyze(const std::vector<IncidentRecord>& records,
                                    const GeoOptions& options)
{
  options.window.validate();
  options.estimator.validate();
  std::vector<CategoryResult> results;
  for (const auto& c : category_counts(records, options.window)) {
    if (c.n_before >= options.min_count && c.n_after >= options.min_count) {
      results.push_back({ c.category, c.n_before, c.n_after, std::nullopt, {} });
    }
  }
  if (results.empty()) {
    throw std::runtime_error(fmt::format(
      "no category has at least {} incidents in both windows", options.min_count));
  }

  parallel_for(results.size(), options.jobs, [&](std::size_t k) {
    auto& res = results[k];
    try {
      res.report = estimate_l2d(category_dataset(records, res.category, options),
                                options.estimator);
    } catch (const std::exception& e) {
      res.error = e.what();
    }
  });

  std::stable_sort(results.begin(), results.end(), [](const auto& a, const auto& b) {
    if (a.report.has_value() != b.report.has_value()) {
      return a.report.has_value();
    }
    if (a.report && a.report->psi_tmle != b.report->psi_tmle) {
      return a.report->psi_tmle > b.report->psi_tmle;
    }
    return a.category < b.category;
  });
  return results;
}

} // namespace l2d::geo
