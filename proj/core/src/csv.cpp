#include "qlnet/csv.hpp"

#include <charconv>
#include <cmath>

#include "qlnet/errors.hpp"

namespace qlnet {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header)
    : out_(out), columns_(header.size()) {
  if (header.empty()) throw ArgumentError("CSV header is empty");
  for (const auto& h : header) field(std::string_view(h));
  end_row();
  rows_ = 0;
}

CsvWriter& CsvWriter::field(std::string_view v) {
  if (current_ == columns_) throw ArgumentError("CSV row has more fields than the header");
  if (current_ > 0) out_ << ',';
  if (v.find_first_of(",\"\n\r") == std::string_view::npos) {
    out_ << v;
  } else {
    out_ << '"';
    for (char c : v) {
      if (c == '"') out_ << '"';
      out_ << c;
    }
    out_ << '"';
  }
  ++current_;
  return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(std::string_view(format_number(v))); }

CsvWriter& CsvWriter::field(bool v) { return field(std::string_view(v ? "true" : "false")); }

CsvWriter& CsvWriter::field(const std::optional<double>& v) {
  return v ? field(*v) : field(std::string_view());
}

void CsvWriter::end_row() {
  if (current_ != columns_) {
    throw ArgumentError("CSV row has " + std::to_string(current_) + " fields, header has " +
                        std::to_string(columns_));
  }
  out_ << '\n';
  current_ = 0;
  ++rows_;
}

}  // namespace qlnet
