#include "qhhg/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "qhhg/csv.hpp"

namespace qhhg {

namespace {

constexpr int width = 720;
constexpr int height = 480;
constexpr int margin_l = 70, margin_r = 20, margin_t = 40, margin_b = 50;

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                         "#8c564b", "#e377c2", "#17becf"};

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void update(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void pad() {
        if (!(hi > lo)) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double d = 0.05 * (hi - lo);
        lo -= d;
        hi += d;
    }
};

std::string num(double v) { return format_double(v); }

// Five-stop blue-to-yellow map.
std::string colormap(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const double stops[5][3] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    const double x = t * 4.0;
    const int i = std::min(3, static_cast<int>(x));
    const double f = x - i;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                  static_cast<int>(stops[i][0] + f * (stops[i + 1][0] - stops[i][0])),
                  static_cast<int>(stops[i][1] + f * (stops[i + 1][1] - stops[i][1])),
                  static_cast<int>(stops[i][2] + f * (stops[i + 1][2] - stops[i][2])));
    return buf;
}

void open_svg(std::ofstream& os, const std::filesystem::path& path) {
    os.open(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open SVG output: " + path.string());
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void draw_frame(std::ofstream& os, const std::string& title, const std::string& x_label,
                const std::string& y_label) {
    os << "<rect x=\"" << margin_l << "\" y=\"" << margin_t << "\" width=\""
       << (width - margin_l - margin_r) << "\" height=\"" << (height - margin_t - margin_b)
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
       << "</text>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
       << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
    os << "<text x=\"16\" y=\"" << height / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
       << "transform=\"rotate(-90 16 " << height / 2 << ")\">" << y_label << "</text>\n";
}

}  // namespace

void write_line_chart_svg(const std::filesystem::path& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<SvgSeries>& series, bool log_y) {
    Range rx, ry;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            rx.update(s.x[i]);
            const double y = log_y ? (s.y[i] > 0 ? std::log10(s.y[i]) : NAN) : s.y[i];
            ry.update(y);
        }
    if (!std::isfinite(rx.lo) || !std::isfinite(ry.lo)) {
        rx = {0.0, 1.0};
        ry = {0.0, 1.0};
    }
    rx.pad();
    ry.pad();

    const double pw = width - margin_l - margin_r;
    const double ph = height - margin_t - margin_b;
    auto px = [&](double x) { return margin_l + (x - rx.lo) / (rx.hi - rx.lo) * pw; };
    auto py = [&](double y) { return margin_t + ph - (y - ry.lo) / (ry.hi - ry.lo) * ph; };

    std::ofstream os;
    open_svg(os, path);
    draw_frame(os, title, x_label, log_y ? "log10 " + y_label : y_label);

    for (int i = 0; i <= 4; ++i) {
        const double fx = rx.lo + i * (rx.hi - rx.lo) / 4.0;
        const double fy = ry.lo + i * (ry.hi - ry.lo) / 4.0;
        os << "<text x=\"" << px(fx) << "\" y=\"" << height - margin_b + 16
           << "\" text-anchor=\"middle\" font-size=\"11\">" << num(fx) << "</text>\n";
        os << "<text x=\"" << margin_l - 6 << "\" y=\"" << py(fy) + 4
           << "\" text-anchor=\"end\" font-size=\"11\">" << num(fy) << "</text>\n";
    }

    int color = 0;
    double legend_y = margin_t + 16;
    for (const auto& s : series) {
        const char* stroke = palette[color % 8];
        os << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double y = log_y ? (s.y[i] > 0 ? std::log10(s.y[i]) : ry.lo) : s.y[i];
            os << px(s.x[i]) << ',' << py(y) << ' ';
        }
        os << "\"/>\n";
        os << "<text x=\"" << width - margin_r - 8 << "\" y=\"" << legend_y
           << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << stroke << "\">" << s.label
           << "</text>\n";
        legend_y += 16;
        ++color;
    }
    os << "</svg>\n";
}

void write_heatmap_svg(const std::filesystem::path& path, const std::string& title,
                       const std::string& x_label, const std::string& y_label,
                       const std::vector<std::vector<double>>& values,
                       const std::vector<double>& x_ticks, const std::vector<double>& y_ticks) {
    const std::size_t rows = values.size();
    const std::size_t cols = rows ? values[0].size() : 0;
    if (rows == 0 || cols == 0) throw std::invalid_argument("heatmap: empty value matrix");

    Range rv;
    for (const auto& row : values)
        for (double v : row) rv.update(v);
    if (!(rv.hi > rv.lo)) rv.hi = rv.lo + 1.0;

    const double pw = width - margin_l - margin_r;
    const double ph = height - margin_t - margin_b;
    const double cw = pw / static_cast<double>(cols);
    const double ch = ph / static_cast<double>(rows);

    std::ofstream os;
    open_svg(os, path);
    draw_frame(os, title, x_label, y_label);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const double t = (values[r][c] - rv.lo) / (rv.hi - rv.lo);
            // Row 0 at the bottom.
            os << "<rect x=\"" << margin_l + c * cw << "\" y=\"" << margin_t + ph - (r + 1) * ch
               << "\" width=\"" << cw + 0.5 << "\" height=\"" << ch + 0.5 << "\" fill=\""
               << colormap(t) << "\"/>\n";
        }
    for (std::size_t c = 0; c < cols && c < x_ticks.size(); ++c)
        os << "<text x=\"" << margin_l + (c + 0.5) * cw << "\" y=\"" << height - margin_b + 16
           << "\" text-anchor=\"middle\" font-size=\"10\">" << num(x_ticks[c]) << "</text>\n";
    for (std::size_t r = 0; r < rows && r < y_ticks.size(); ++r)
        os << "<text x=\"" << margin_l - 6 << "\" y=\"" << margin_t + ph - (r + 0.5) * ch + 4
           << "\" text-anchor=\"end\" font-size=\"10\">" << num(y_ticks[r]) << "</text>\n";
    os << "</svg>\n";
}

}  // namespace qhhg
