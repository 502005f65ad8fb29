#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace l2d::csv {

//! RFC-4180 record reader: quoted fields may contain separators, doubled
//! quotes and line breaks. Accepts LF and CRLF line endings.
class Reader
{
public:
  explicit Reader(std::istream& in, char separator = ',');

  //! Reads the next record; false at end of input.
  bool next(std::vector<std::string>& fields);

  //! 1-based physical line on which the last record started.
  std::size_t line() const { return record_line_; }

private:
  std::istream& in_;
  char sep_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

//! Quotes a field when it contains a separator, quote or line break.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

//! Shortest decimal text that round-trips to the same double.
std::string format_number(double v);

std::string trim(std::string_view s);

} // namespace l2d::csv
