// csv.hpp — deterministic CSV output with fixed significant digits

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qctrl {

// Shortest %g form with the given significant digits ("0.25", "1e-09", ...).
std::string format_sig(double value, int digits = 12);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out, int digits = 12) : out_(out), digits_(digits) {}

  void header(const std::vector<std::string>& names);
  void row(const std::vector<double>& values);

 private:
  std::ostream& out_;
  int digits_;
  std::size_t n_columns_ = 0;
};

}  // namespace qctrl
