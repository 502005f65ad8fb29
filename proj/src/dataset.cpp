#include "l2d/dataset.hpp"

#include "l2d/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace l2d {

LabeledDataset::LabeledDataset(PointSet points, std::vector<Arm> labels)
  : points_(std::move(points))
  , labels_(std::move(labels))
{
  if (points_.size() != labels_.size()) {
    throw std::invalid_argument("dataset has " + std::to_string(points_.size()) +
                                " points but " + std::to_string(labels_.size()) + " labels");
  }
  if (points_.dims() < 1 || points_.dims() > 2) {
    throw std::invalid_argument("dataset dimension must be 1 or 2");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (double c : points_.row(i)) {
      if (!std::isfinite(c)) {
        throw std::invalid_argument("non-finite coordinate in observation " +
                                    std::to_string(i));
      }
    }
    if (labels_[i] == Arm::one) {
      ++n1_;
    } else if (labels_[i] == Arm::zero) {
      ++n0_;
    } else {
      throw std::invalid_argument("label of observation " + std::to_string(i) +
                                  " is not 0 or 1");
    }
  }
  if (n0_ < 2 || n1_ < 2) {
    throw std::invalid_argument("each arm needs at least 2 observations (have " +
                                std::to_string(n0_) + " and " + std::to_string(n1_) + ")");
  }
}

PointSet LabeledDataset::arm_points(Arm a) const
{
  PointSet out(points_.dims(), {});
  out.reserve(count(a));
  for (std::size_t i = 0; i < size(); ++i) {
    if (labels_[i] == a) {
      out.push_back(points_.row(i));
    }
  }
  return out;
}

LabeledDataset LabeledDataset::swapped() const
{
  std::vector<Arm> flipped(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    flipped[i] = other(labels_[i]);
  }
  return LabeledDataset(points_, std::move(flipped));
}

} // namespace l2d

namespace l2d {

namespace {

std::optional<double> to_number(std::string_view text)
{
  const auto t = csv::trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    return std::nullopt;
  }
  return v;
}

} // namespace

LabeledDataset read_labeled_csv(std::istream& in)
{
  csv::Reader reader(in);
  std::vector<std::string> row;
  std::vector<double> coords;
  std::vector<Arm> labels;
  std::size_t width = 0;
  bool first = true;
  while (reader.next(row)) {
    if (row.size() == 1 && csv::trim(row[0]).empty()) {
      continue;
    }
    const auto where = "line " + std::to_string(reader.line());
    if (first) {
      first = false;
      const bool header = std::any_of(row.begin(), row.end(), [](const std::string& f) {
        return !to_number(f).has_value();
      });
      width = row.size();
      if (width < 2 || width > 3) {
        throw std::runtime_error(where + ": expected 2 or 3 columns (x[,y],a), found " +
                                 std::to_string(width));
      }
      if (header) {
        continue;
      }
    }
    if (row.size() != width) {
      throw std::runtime_error(where + ": expected " + std::to_string(width) +
                               " fields, found " + std::to_string(row.size()));
    }
    for (std::size_t j = 0; j + 1 < width; ++j) {
      const auto v = to_number(row[j]);
      if (!v || !std::isfinite(*v)) {
        throw std::runtime_error(where + ": coordinate '" + row[j] + "' is not a finite number");
      }
      coords.push_back(*v);
    }
    const auto a = csv::trim(row.back());
    if (a == "0") {
      labels.push_back(Arm::zero);
    } else if (a == "1") {
      labels.push_back(Arm::one);
    } else {
      throw std::runtime_error(where + ": label '" + a + "' is not 0 or 1");
    }
  }
  if (labels.empty()) {
    throw std::runtime_error("input has no observations");
  }
  return LabeledDataset(PointSet(width - 1, std::move(coords)), std::move(labels));
}

} // namespace l2d
