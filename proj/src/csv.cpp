#include "qctrl/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace qctrl {

std::string format_sig(double value, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

void CsvWriter::header(const std::vector<std::string>& names) {
  if (names.empty()) throw std::invalid_argument("CsvWriter: empty header");
  n_columns_ = names.size();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out_ << ',';
    out_ << names[i];
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (n_columns_ == 0) throw std::logic_error("CsvWriter: row before header");
  if (values.size() != n_columns_) throw std::invalid_argument("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << format_sig(values[i], digits_);
  }
  out_ << '\n';
}

}  // namespace qctrl
