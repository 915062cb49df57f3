#pragma once

#include <optional>
#include <ostream>
#include <string>

namespace qhhg {

/// Shortest round-trip decimal representation; locale-independent and
/// deterministic, so repeated runs emit byte-identical files.
std::string format_double(double v);

/// Absent values print as "nan".
std::string format_optional(const std::optional<double>& v);

class CsvRow {
  public:
    explicit CsvRow(std::ostream& os) : os_(os) {}
    CsvRow& col(const std::string& s);
    CsvRow& col(double v);
    CsvRow& col(int v);
    CsvRow& col(const std::optional<double>& v);
    ~CsvRow();

  private:
    std::ostream& os_;
    bool first_ = true;
};

}  // namespace qhhg
