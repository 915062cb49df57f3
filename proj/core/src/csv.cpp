#include "qhhg/csv.hpp"

#include <cmath>
#include <cstdio>

namespace qhhg {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    // Shortest representation that round-trips: try increasing precision.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) return buf;
    }
    return buf;
}

std::string format_optional(const std::optional<double>& v) {
    return v ? format_double(*v) : "nan";
}

CsvRow& CsvRow::col(const std::string& s) {
    if (!first_) os_ << ',';
    first_ = false;
    os_ << s;
    return *this;
}

CsvRow& CsvRow::col(double v) { return col(format_double(v)); }

CsvRow& CsvRow::col(int v) { return col(std::to_string(v)); }

CsvRow& CsvRow::col(const std::optional<double>& v) { return col(format_optional(v)); }

CsvRow::~CsvRow() { os_ << '\n'; }

}  // namespace qhhg
