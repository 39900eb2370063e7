#ifndef QCOMBPASS_CSV_HPP
#define QCOMBPASS_CSV_HPP

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcombpass {

// Fixed-point text with nine significant digits.
inline std::string format_fixed9(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  const int exponent = static_cast<int>(std::floor(std::log10(std::abs(v))));
  const int decimals = std::max(0, 8 - exponent);
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos) return "0";
  return s;
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<double>& values) {
    if (values.size() != header_.size()) throw std::invalid_argument("CSV row width does not match header");
    std::vector<std::string> row;
    row.reserve(values.size());
    for (double v : values) row.push_back(format_fixed9(v));
    rows_.push_back(std::move(row));
  }

  void add_text_row(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw std::invalid_argument("CSV row width does not match header");
    rows_.push_back(std::move(row));
  }

  std::size_t rows() const { return rows_.size(); }

  std::string str() const {
    std::ostringstream out;
    write_line(out, header_);
    for (const auto& r : rows_) write_line(out, r);
    return out.str();
  }

 private:
  static void write_line(std::ostringstream& out, const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << cells[k];
    out << "\n";
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace qcombpass

#endif  // QCOMBPASS_CSV_HPP
