#include "l2d/csv.hpp"

#include <fmt/format.h>

#include <stdexcept>

namespace l2d::csv {

Reader::Reader(std::istream& in, char separator)
  : in_(in)
  , sep_(separator)
{
}

bool Reader::next(std::vector<std::string>& fields)
{
  fields.clear();
  if (in_.peek() == std::char_traits<char>::eof()) {
    return false;
  }
  record_line_ = line_;
  std::string field;
  bool quoted = false;
  bool field_was_quoted = false;
  char c;
  while (in_.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in_.peek() == '"') {
          in_.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') {
          ++line_;
        }
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty() && !field_was_quoted) {
      quoted = true;
      field_was_quoted = true;
    } else if (c == sep_) {
      fields.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else if (c == '\n') {
      ++line_;
      if (!field.empty() && field.back() == '\r') {
        field.pop_back();
      }
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(c);
    }
  }
  if (quoted) {
    throw std::runtime_error("unterminated quoted field starting on line " +
                             std::to_string(record_line_));
  }
  if (!field.empty() && field.back() == '\r') {
    field.pop_back();
  }
  fields.push_back(std::move(field));
  return true;
}

std::string escape(std::string_view field)
{
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') {
      out += "\"\"";
    } else {
      out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields)
{
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) {
      out << ',';
    }
    out << escape(fields[i]);
  }
  out << '\n';
}

std::string format_number(double v)
{
  return fmt::format("{}", v);
}

std::string trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

} // namespace l2d::csv
