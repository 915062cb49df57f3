#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace qhhg {

// Minimal static plot emitter. CSV files are the contract; these renderings
// are a convenience view of the same data.

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

void write_line_chart_svg(const std::filesystem::path& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<SvgSeries>& series, bool log_y = false);

/// values[row][col]; rows labeled by y_ticks, columns by x_ticks.
void write_heatmap_svg(const std::filesystem::path& path, const std::string& title,
                       const std::string& x_label, const std::string& y_label,
                       const std::vector<std::vector<double>>& values,
                       const std::vector<double>& x_ticks, const std::vector<double>& y_ticks);

}  // namespace qhhg
