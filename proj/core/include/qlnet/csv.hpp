#pragma once

#include <concepts>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace qlnet {

// Shortest decimal text that parses back to the same double; "nan", "inf"
// and "-inf" for non-finite values.
std::string format_number(double v);

// Minimal RFC 4180 writer: fields containing a comma, quote or newline are
// quoted. Every row must have as many fields as the header.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  CsvWriter& field(std::string_view v);
  CsvWriter& field(const char* v) { return field(std::string_view(v)); }
  CsvWriter& field(const std::string& v) { return field(std::string_view(v)); }
  CsvWriter& field(double v);
  CsvWriter& field(bool v);
  template <std::integral I>
  CsvWriter& field(I v) {
    return field(std::string_view(std::to_string(v)));
  }
  CsvWriter& field(const std::optional<double>& v);  // empty when none
  void end_row();

  std::size_t rows_written() const { return rows_; }

 private:
  std::ostream& out_;
  std::size_t columns_;
  std::size_t current_ = 0;
  std::size_t rows_ = 0;
};

}  // namespace qlnet
