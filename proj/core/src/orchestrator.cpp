#include "qhhg/orchestrator.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qhhg/csv.hpp"
#include "qhhg/svg.hpp"
#include "qhhg/toy_statistics.hpp"
#include "qhhg/version.hpp"

namespace qhhg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double pi = std::numbers::pi;

// ---------------------------------------------------------------------------
// config parsing

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
    }
}

Envelope parse_envelope(const json& j) {
    reject_unknown_keys(j, {"type", "n_cycles", "duration_fs", "duration_au"}, "driver.envelope");
    const std::string type = j.at("type").get<std::string>();
    if (type == "monochromatic") return Envelope::monochromatic(j.value("n_cycles", 5.0));
    if (type == "sin2") {
        if (j.contains("duration_au")) return Envelope::sin2(j.at("duration_au").get<double>());
        return Envelope::sin2_fs(j.value("duration_fs", 13.0));
    }
    throw std::invalid_argument("config: envelope type must be 'monochromatic' or 'sin2'");
}

ExperimentConfig::Type parse_type(const std::string& s) {
    using T = ExperimentConfig::Type;
    if (s == "spectrum") return T::Spectrum;
    if (s == "phi-sweep") return T::PhiSweep;
    if (s == "ellipticity-sweep") return T::EllipticitySweep;
    if (s == "g2-report") return T::G2Report;
    if (s == "toy-g2") return T::ToyG2;
    if (s == "depletion-sweep") return T::DepletionSweep;
    throw std::invalid_argument("config: unknown experiment type '" + s + "'");
}

const char* type_tag(ExperimentConfig::Type t) {
    using T = ExperimentConfig::Type;
    switch (t) {
        case T::Spectrum: return "spectrum";
        case T::PhiSweep: return "phi-sweep";
        case T::EllipticitySweep: return "ellipticity-sweep";
        case T::G2Report: return "g2-report";
        case T::ToyG2: return "toy-g2";
        case T::DepletionSweep: return "depletion-sweep";
    }
    return "?";
}

std::vector<int> default_report_orders() {
    std::vector<int> q;
    for (int v = 3; v <= 33; v += 2) q.push_back(v);
    return q;
}

// ---------------------------------------------------------------------------
// point store: incremental per-parameter-point artifacts for resumable runs

class PointStore {
  public:
    PointStore(fs::path dir, bool resume) : dir_(std::move(dir)), resume_(resume) {
        fs::create_directories(dir_);
    }

    std::string fetch(int index, const std::function<std::string()>& produce) {
        char name[32];
        std::snprintf(name, sizeof(name), "point_%05d.txt", index);
        const fs::path path = dir_ / name;
        if (resume_ && fs::exists(path)) {
            std::ifstream is(path, std::ios::binary);
            std::ostringstream buf;
            buf << is.rdbuf();
            ++reused;
            return buf.str();
        }
        const std::string content = produce();
        const fs::path tmp = dir_ / (std::string(name) + ".tmp");
        {
            std::ofstream os(tmp, std::ios::binary);
            os << content;
        }
        fs::rename(tmp, path);  // point files appear only when complete
        ++computed;
        return content;
    }

    int computed = 0;
    int reused = 0;

  private:
    fs::path dir_;
    bool resume_;
};

// A point artifact holds one or more named row blocks.
std::string make_sections(const std::vector<std::pair<std::string, std::string>>& sections) {
    std::string out;
    for (const auto& [key, rows] : sections) {
        out += "##FILE " + key + "\n";
        out += rows;
    }
    return out;
}

std::map<std::string, std::string> split_sections(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream is(text);
    std::string line, current;
    while (std::getline(is, line)) {
        if (line.rfind("##FILE ", 0) == 0) {
            current = line.substr(7);
            out.emplace(current, "");
        } else if (!current.empty()) {
            out[current] += line + "\n";
        }
    }
    return out;
}

std::pair<std::string, std::string> split_header(const std::string& csv_text) {
    const auto nl = csv_text.find('\n');
    if (nl == std::string::npos) return {csv_text, ""};
    return {csv_text.substr(0, nl), csv_text.substr(nl + 1)};
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        throw std::runtime_error("csv table: missing column '" + name + "'");
    }
};

Table parse_csv_text(const std::string& text) {
    Table t;
    std::istringstream is(text);
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (first) {
            t.header = cells;
            first = false;
        } else {
            std::vector<double> row;
            row.reserve(cells.size());
            for (const auto& c : cells) row.push_back(std::strtod(c.c_str(), nullptr));
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// ---------------------------------------------------------------------------

struct FileSpec {
    std::string key;     // <key>.csv
    std::string header;  // header row (no newline)
};

struct ExperimentPlan {
    std::vector<FileSpec> files;
    int n_points = 1;
    std::function<std::string(int)> produce;
    // Derived outputs computed from the assembled tables (so resumed and
    // fresh runs agree byte for byte).
    std::function<void(const std::map<std::string, std::string>& assembled,
                       const fs::path& out_dir, bool svg, std::vector<fs::path>& files)>
        epilogue;
};

std::string spectrum_body(const SpectrumSet& s) {
    std::ostringstream os;
    write_spectrum_csv(os, s);
    return split_header(os.str()).second;
}

std::string report_body(const SpectrumSet& s, std::span<const int> orders) {
    std::ostringstream os;
    const auto reports = harmonic_reports(s, orders);
    write_report_csv(os, reports);
    return split_header(os.str()).second;
}

constexpr const char* report_header = "q,i_par,i_perp,e_q,v,g2_par,g2_perp,phase";

std::string intensity_row(double phi_raw, const SpectrumSet& s, std::span<const int> orders) {
    std::ostringstream os;
    CsvRow row(os);
    row.col(phi_raw);
    for (int q : orders) row.col(harmonic_intensity(s, q, Polarization::Total));
    return os.str();
}

int feasible_order(const RunConfig& cfg) {
    const SfaGrid grid = cfg.make_grid();
    const double omega_max = (grid.n_t / 2) * (2.0 * pi / (grid.n_t * grid.dt()));
    return static_cast<int>(std::floor(omega_max / cfg.driver.carrier - cfg.window_half_width - 1e-9));
}

std::vector<int> clamp_orders(const RunConfig& cfg, const std::vector<int>& orders) {
    const int feasible = std::min(cfg.q_max, feasible_order(cfg));
    std::vector<int> out;
    for (int q : orders)
        if (q >= 1 && q <= feasible) out.push_back(q);
    if (out.empty()) throw std::invalid_argument("config: no requested harmonic fits the grid");
    return out;
}

// ---------------------------------------------------------------------------
// experiment plans

ExperimentPlan plan_spectrum(const RunConfig& cfg, bool with_spectrum_file) {
    ExperimentPlan plan;
    const auto orders = clamp_orders(cfg, cfg.experiment.harmonics);
    if (with_spectrum_file)
        plan.files.push_back({"spectrum", "omega,omega_over_omega_l,s_par,s_perp,m4_par,m4_perp,re_x,im_x"});
    plan.files.push_back({"harmonics", report_header});
    plan.n_points = 1;
    plan.produce = [cfg, orders, with_spectrum_file](int) {
        const SpectrumSet s = compute_ensemble_spectrum(
            cfg.driver, cfg.make_grid(), cfg.n_samples,
            DipoleOptions{cfg.experiment.depletion, cfg.hann_window}, cfg.make_accumulate_options());
        std::vector<std::pair<std::string, std::string>> sections;
        if (with_spectrum_file) sections.emplace_back("spectrum", spectrum_body(s));
        sections.emplace_back("harmonics", report_body(s, orders));
        return make_sections(sections);
    };
    plan.epilogue = [](const std::map<std::string, std::string>& assembled, const fs::path& dir,
                       bool svg, std::vector<fs::path>& files) {
        if (!svg || !assembled.count("spectrum")) return;
        const Table t = parse_csv_text(assembled.at("spectrum"));
        SvgSeries total{"s_par + s_perp", {}, {}};
        const int cq = t.column("omega_over_omega_l");
        const int cp = t.column("s_par");
        const int cs = t.column("s_perp");
        for (const auto& r : t.rows) {
            if (r[cq] < 1e-6) continue;
            total.x.push_back(r[cq]);
            total.y.push_back(r[cp] + r[cs]);
        }
        const fs::path p = dir / "spectrum.svg";
        write_line_chart_svg(p, "harmonic spectrum", "harmonic order", "intensity", {total}, true);
        files.push_back(p);
    };
    return plan;
}

ExperimentPlan plan_phi_sweep(const RunConfig& cfg) {
    ExperimentPlan plan;
    const auto orders = clamp_orders(cfg, cfg.experiment.harmonics);
    const int n = cfg.experiment.phi_points;

    std::string header = "phi";
    for (int q : orders) header += ",i_total_q" + std::to_string(q);
    plan.files.push_back({"phi_sweep_intensities", header});
    plan.n_points = n;
    plan.produce = [cfg, orders, n](int j) {
        const double phi_raw = -pi + 2.0 * pi * j / n;
        RunConfig point = cfg;
        point.driver.squeezing_angle = phi_raw;
        point.driver.validate_and_normalize();
        const SpectrumSet s = compute_ensemble_spectrum(
            point.driver, point.make_grid(), point.n_samples,
            DipoleOptions{false, point.hann_window}, point.make_accumulate_options());
        return make_sections({{"phi_sweep_intensities", intensity_row(phi_raw, s, orders)}});
    };
    plan.epilogue = [orders](const std::map<std::string, std::string>& assembled, const fs::path& dir,
                             bool svg, std::vector<fs::path>& files) {
        const Table t = parse_csv_text(assembled.at("phi_sweep_intensities"));
        const int c_phi = t.column("phi");

        // Reference row: squeezing angle pi (phase squeezing).
        int ref_row = -1;
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            if (std::abs(normalize_angle(t.rows[r][c_phi]) - pi) < 1e-12) ref_row = static_cast<int>(r);
        if (ref_row < 0)
            throw std::invalid_argument("phi sweep: grid does not contain the phase-squeezing reference");

        std::string ds_header = "phi";
        for (int q : orders) ds_header += ",delta_s_q" + std::to_string(q);
        std::ostringstream ds;
        ds << ds_header << "\n";
        std::vector<std::vector<double>> ds_values(orders.size());
        for (const auto& row : t.rows) {
            CsvRow out(ds);
            out.col(row[c_phi]);
            for (std::size_t iq = 0; iq < orders.size(); ++iq) {
                const double ref = t.rows[ref_row][1 + iq];
                if (!(ref > 0.0))
                    throw std::invalid_argument("phi sweep: undefined reference intensity at q = " +
                                                std::to_string(orders[iq]));
                const double v = std::abs(1.0 - row[1 + iq] / ref);
                out.col(v);
                ds_values[iq].push_back(v);
            }
        }
        const fs::path ds_path = dir / "delta_s.csv";
        std::ofstream(ds_path, std::ios::binary) << ds.str();
        files.push_back(ds_path);

        std::ostringstream ft;
        ft << "q,m,re,im,magnitude\n";
        for (std::size_t iq = 0; iq < orders.size(); ++iq) {
            const auto coeff = fourier_of_delta_s(ds_values[iq]);
            for (std::size_t m = 0; m <= coeff.size() / 2; ++m)
                CsvRow(ft).col(orders[iq]).col(static_cast<int>(m)).col(coeff[m].real())
                    .col(coeff[m].imag()).col(std::abs(coeff[m]));
        }
        const fs::path ft_path = dir / "delta_s_ft.csv";
        std::ofstream(ft_path, std::ios::binary) << ft.str();
        files.push_back(ft_path);

        if (svg) {
            std::vector<SvgSeries> series;
            const Table dst = parse_csv_text(ds.str());
            for (std::size_t iq = 0; iq < orders.size(); ++iq) {
                SvgSeries s{"q = " + std::to_string(orders[iq]), {}, {}};
                for (const auto& r : dst.rows) {
                    s.x.push_back(r[0]);
                    s.y.push_back(r[1 + iq]);
                }
                series.push_back(std::move(s));
            }
            const fs::path p = dir / "delta_s.svg";
            write_line_chart_svg(p, "normalized intensity difference", "squeezing angle (rad)",
                                 "delta S", series, false);
            files.push_back(p);
        }
    };
    return plan;
}

ExperimentPlan plan_ellipticity_sweep(const RunConfig& cfg) {
    ExperimentPlan plan;
    const auto orders = clamp_orders(cfg, cfg.experiment.harmonics);
    const auto& a_grid = cfg.experiment.ellipticity_grid;
    const auto& phis = cfg.experiment.phi_values;
    plan.files.push_back({"harmonics_sweep", std::string("a,phi,") + report_header});
    plan.n_points = static_cast<int>(a_grid.size() * phis.size());
    plan.produce = [cfg, orders, a_grid, phis](int index) {
        const int n_phi = static_cast<int>(phis.size());
        const double a = a_grid[index / n_phi];
        const double phi = phis[index % n_phi];
        RunConfig point = cfg;
        point.driver.ellipticity = a;
        point.driver.squeezing_angle = phi;
        point.driver.validate_and_normalize();
        const SpectrumSet s = compute_ensemble_spectrum(
            point.driver, point.make_grid(), point.n_samples,
            DipoleOptions{false, point.hann_window}, point.make_accumulate_options());
        const auto reports = harmonic_reports(s, orders);
        std::ostringstream os;
        for (const auto& r : reports) {
            CsvRow(os).col(a).col(phi).col(r.q).col(r.i_par).col(r.i_perp).col(r.ellipticity)
                .col(r.visibility).col(r.g2_par).col(r.g2_perp).col(r.rel_phase);
        }
        return make_sections({{"harmonics_sweep", os.str()}});
    };
    plan.epilogue = [orders, a_grid](const std::map<std::string, std::string>& assembled,
                                     const fs::path& dir, bool svg, std::vector<fs::path>& files) {
        const Table t = parse_csv_text(assembled.at("harmonics_sweep"));
        const int c_a = t.column("a"), c_phi = t.column("phi"), c_q = t.column("q");
        const int c_ipar = t.column("i_par"), c_iperp = t.column("i_perp"), c_e = t.column("e_q");

        auto total_at = [&](double a, double phi_norm, int q) -> double {
            for (const auto& r : t.rows)
                if (r[c_a] == a && std::abs(normalize_angle(r[c_phi]) - phi_norm) < 1e-12 &&
                    static_cast<int>(r[c_q]) == q)
                    return r[c_ipar] + r[c_iperp];
            throw std::runtime_error("ellipticity sweep: missing table entry");
        };

        std::ostringstream ds;
        ds << "a,q,delta_s_phi0\n";
        for (double a : a_grid)
            for (int q : orders) {
                const double ref = total_at(a, pi, q);
                if (!(ref > 0.0))
                    throw std::invalid_argument(
                        "ellipticity sweep: undefined phase-squeezing reference at q = " +
                        std::to_string(q));
                CsvRow(ds).col(a).col(q).col(std::abs(1.0 - total_at(a, 0.0, q) / ref));
            }
        const fs::path ds_path = dir / "delta_s0.csv";
        std::ofstream(ds_path, std::ios::binary) << ds.str();
        files.push_back(ds_path);

        if (svg) {
            for (const double phi_norm : {0.0, pi}) {
                std::vector<std::vector<double>> grid(a_grid.size(),
                                                      std::vector<double>(orders.size(), 0.0));
                for (std::size_t ia = 0; ia < a_grid.size(); ++ia)
                    for (std::size_t iq = 0; iq < orders.size(); ++iq)
                        for (const auto& r : t.rows)
                            if (r[c_a] == a_grid[ia] &&
                                std::abs(normalize_angle(r[c_phi]) - phi_norm) < 1e-12 &&
                                static_cast<int>(r[c_q]) == orders[iq])
                                grid[ia][iq] = std::isnan(r[c_e]) ? 0.0 : r[c_e];
                std::vector<double> q_ticks(orders.begin(), orders.end());
                const std::string tag = phi_norm == 0.0 ? "amplitude" : "phase";
                const fs::path p = dir / ("ellipticity_" + tag + ".svg");
                write_heatmap_svg(p, "harmonic ellipticity (" + tag + " squeezing)",
                                  "harmonic order", "driver ellipticity", grid, q_ticks,
                                  std::vector<double>(a_grid.begin(), a_grid.end()));
                files.push_back(p);
            }
        }
    };
    return plan;
}

ExperimentPlan plan_depletion_sweep(const RunConfig& cfg) {
    ExperimentPlan plan;
    const int q = cfg.experiment.harmonic;
    const auto eps_grid = cfg.experiment.epsbar_grid;
    const auto isq_grid = cfg.experiment.isq_grid;
    const std::string qs = std::to_string(q);
    plan.files.push_back({"depletion_points", "epsbar,isq,i_q" + qs + "_par,g2_q" + qs + "_par"});
    plan.n_points = static_cast<int>(eps_grid.size() * isq_grid.size());
    plan.produce = [cfg, q, eps_grid, isq_grid](int index) {
        const int n_isq = static_cast<int>(isq_grid.size());
        const double epsbar = eps_grid[index / n_isq];
        const double isq = isq_grid[index % n_isq];
        RunConfig point = cfg;
        point.driver.mean_amplitude = epsbar;
        point.driver.squeezing_intensity = isq;
        if (point.driver.envelope.kind != Envelope::Kind::Sin2)
            point.driver.envelope = Envelope::sin2_fs(13.0);  // depletion runs use a pulsed field
        point.driver.validate_and_normalize();
        const SpectrumSet s = compute_ensemble_spectrum(
            point.driver, point.make_grid(), point.n_samples,
            DipoleOptions{true, point.hann_window}, point.make_accumulate_options(),
            FieldStyle::Collinear);
        const auto g = g2(s, q, Polarization::Par);
        std::ostringstream os;
        CsvRow(os).col(epsbar).col(isq).col(s.wq_par[q]).col(g);
        return make_sections({{"depletion_points", os.str()}});
    };
    plan.epilogue = [eps_grid, isq_grid, qs](const std::map<std::string, std::string>& assembled,
                                             const fs::path& dir, bool svg,
                                             std::vector<fs::path>& files) {
        const Table t = parse_csv_text(assembled.at("depletion_points"));
        auto g2_at = [&](double epsbar, double isq) -> double {
            for (const auto& r : t.rows)
                if (r[0] == epsbar && r[1] == isq) return r[3];
            throw std::runtime_error("depletion sweep: missing table entry");
        };

        std::ostringstream by_eps;
        by_eps << "epsbar";
        for (double isq : isq_grid) by_eps << ",g2_isq_" << format_double(isq);
        by_eps << "\n";
        for (double e : eps_grid) {
            CsvRow row(by_eps);
            row.col(e);
            for (double isq : isq_grid) row.col(g2_at(e, isq));
        }
        const fs::path p1 = dir / "g2_vs_epsbar.csv";
        std::ofstream(p1, std::ios::binary) << by_eps.str();
        files.push_back(p1);

        std::ostringstream by_isq;
        by_isq << "isq";
        for (double e : eps_grid) by_isq << ",g2_epsbar_" << format_double(e);
        by_isq << "\n";
        for (double isq : isq_grid) {
            CsvRow row(by_isq);
            row.col(isq);
            for (double e : eps_grid) row.col(g2_at(e, isq));
        }
        const fs::path p2 = dir / "g2_vs_isq.csv";
        std::ofstream(p2, std::ios::binary) << by_isq.str();
        files.push_back(p2);

        if (svg) {
            std::vector<SvgSeries> series;
            for (double e : eps_grid) {
                SvgSeries s{"epsbar = " + format_double(e), {}, {}};
                for (double isq : isq_grid) {
                    s.x.push_back(isq);
                    s.y.push_back(g2_at(e, isq));
                }
                series.push_back(std::move(s));
            }
            const fs::path p = dir / "depletion_g2.svg";
            write_line_chart_svg(p, "g2(0) at harmonic " + qs + " with depletion",
                                 "squeezing intensity (a.u.)", "g2(0)", series, true);
            files.push_back(p);
        }
    };
    return plan;
}

ExperimentPlan plan_toy_g2(const RunConfig& cfg) {
    ExperimentPlan plan;
    const auto& ex = cfg.experiment;
    std::string header = "p,g2_bsv_closed";
    for (double m : ex.toy_mean_values) header += ",g2_mean_" + format_double(m);
    const bool depleted = ex.toy_eps_crit > 0.0;
    if (depleted)
        for (double m : ex.toy_mean_values) header += ",g2_depleted_mean_" + format_double(m);
    plan.files.push_back({"toy_g2", header});
    plan.n_points = 1;
    plan.produce = [ex, depleted](int) {
        std::ostringstream os;
        for (double p : ex.toy_p_grid) {
            CsvRow row(os);
            row.col(p).col(g2_bsv_closed_form(p));
            for (double m : ex.toy_mean_values)
                row.col(g2_toy_quadrature({p, ex.toy_sigma, m}));
            if (depleted)
                for (double m : ex.toy_mean_values)
                    row.col(g2_toy_depleted({p, ex.toy_sigma, m}, ex.toy_eps_crit,
                                            ex.toy_suppression_exponent));
        }
        return make_sections({{"toy_g2", os.str()}});
    };
    plan.epilogue = [ex](const std::map<std::string, std::string>& assembled, const fs::path& dir,
                         bool svg, std::vector<fs::path>& files) {
        if (!svg) return;
        const Table t = parse_csv_text(assembled.at("toy_g2"));
        std::vector<SvgSeries> series;
        for (std::size_t c = 1; c < t.header.size(); ++c) {
            SvgSeries s{t.header[c], {}, {}};
            for (const auto& r : t.rows) {
                s.x.push_back(r[0]);
                s.y.push_back(r[c]);
            }
            series.push_back(std::move(s));
        }
        const fs::path p = dir / "toy_g2.svg";
        write_line_chart_svg(p, "toy-model photon statistics", "nonlinearity exponent p", "g2(0)",
                             series, true);
        files.push_back(p);
    };
    return plan;
}

}  // namespace

// ---------------------------------------------------------------------------

SfaGrid RunConfig::make_grid() const {
    SfaGrid g = SfaGrid::for_driver(driver, n_t);
    if (max_excursion > 0.0) g.max_excursion = max_excursion;
    g.regularization = regularization;
    return g;
}

AccumulateOptions RunConfig::make_accumulate_options() const {
    return AccumulateOptions{driver.carrier, window_half_width, q_max};
}

void RunConfig::validate() {
    driver.validate_and_normalize();
    if (n_t < 4) throw std::invalid_argument("config: grid.n_t too small");
    if (n_samples < 1) throw std::invalid_argument("config: sampling.n_samples must be >= 1");
    if (!(window_half_width > 0.0 && window_half_width <= 0.5))
        throw std::invalid_argument("config: spectra.window_half_width must lie in (0, 0.5]");
    if (q_max < 1) throw std::invalid_argument("config: spectra.q_max must be >= 1");

    using T = ExperimentConfig::Type;
    auto& ex = experiment;
    if (ex.harmonics.empty())
        ex.harmonics = (ex.type == T::PhiSweep) ? std::vector<int>{17, 19, 21} : default_report_orders();
    for (int q : ex.harmonics)
        if (q < 1) throw std::invalid_argument("config: harmonic orders must be >= 1");

    switch (ex.type) {
        case T::PhiSweep:
            if (ex.phi_points < 2) throw std::invalid_argument("config: phi_points must be >= 2");
            break;
        case T::EllipticitySweep: {
            if (ex.ellipticity_grid.empty())
                throw std::invalid_argument("config: empty ellipticity grid");
            for (double a : ex.ellipticity_grid)
                if (!(a >= 0.0 && a <= 1.0))
                    throw std::invalid_argument("config: ellipticity grid values must lie in [0, 1]");
            if (ex.phi_values.empty()) ex.phi_values = {0.0, pi};
            bool has0 = false, haspi = false;
            for (double p : ex.phi_values) {
                if (std::abs(normalize_angle(p)) < 1e-12) has0 = true;
                if (std::abs(normalize_angle(p) - pi) < 1e-12) haspi = true;
            }
            if (!has0 || !haspi)
                throw std::invalid_argument(
                    "config: ellipticity sweep needs squeezing angles 0 and pi");
            break;
        }
        case T::DepletionSweep:
            if (ex.epsbar_grid.empty() || ex.isq_grid.empty())
                throw std::invalid_argument("config: depletion sweep grids must be non-empty");
            for (double e : ex.epsbar_grid)
                if (!(e >= 0.0)) throw std::invalid_argument("config: epsbar grid values must be >= 0");
            for (double i : ex.isq_grid)
                if (!(i >= 0.0)) throw std::invalid_argument("config: isq grid values must be >= 0");
            if (ex.harmonic < 1) throw std::invalid_argument("config: depletion harmonic must be >= 1");
            break;
        case T::ToyG2: {
            if (ex.toy_p_grid.empty())
                for (double p = 0.0; p <= 8.0 + 1e-9; p += 0.25) ex.toy_p_grid.push_back(p);
            if (ex.toy_mean_values.empty()) ex.toy_mean_values = {0.0, 1.0, 2.0};
            if (!(ex.toy_sigma > 0.0)) throw std::invalid_argument("config: toy sigma must be > 0");
            if (ex.toy_eps_crit < 0.0)
                throw std::invalid_argument("config: toy eps_crit must be >= 0");
            break;
        }
        default: break;
    }
}

RunConfig default_run_config() {
    RunConfig cfg;
    cfg.driver.envelope = Envelope::monochromatic(5.0);
    return cfg;
}

RunConfig parse_run_config(const std::string& json_text) {
    json j = json::parse(json_text);
    reject_unknown_keys(j, {"driver", "grid", "spectra", "sampling", "experiment", "output"}, "root");
    RunConfig cfg = default_run_config();

    if (j.contains("driver")) {
        const json& d = j["driver"];
        reject_unknown_keys(d,
                            {"mean_amplitude", "carrier", "ellipticity", "squeezing_intensity",
                             "squeezing_angle", "ionization_potential", "handedness", "envelope"},
                            "driver");
        cfg.driver.mean_amplitude = d.value("mean_amplitude", cfg.driver.mean_amplitude);
        cfg.driver.carrier = d.value("carrier", cfg.driver.carrier);
        cfg.driver.ellipticity = d.value("ellipticity", cfg.driver.ellipticity);
        cfg.driver.squeezing_intensity = d.value("squeezing_intensity", cfg.driver.squeezing_intensity);
        cfg.driver.squeezing_angle = d.value("squeezing_angle", cfg.driver.squeezing_angle);
        cfg.driver.ionization_potential = d.value("ionization_potential", cfg.driver.ionization_potential);
        cfg.driver.handedness = d.value("handedness", cfg.driver.handedness);
        if (d.contains("envelope")) cfg.driver.envelope = parse_envelope(d["envelope"]);
    }
    if (j.contains("grid")) {
        const json& g = j["grid"];
        reject_unknown_keys(g, {"n_t", "max_excursion", "regularization", "hann_window"}, "grid");
        cfg.n_t = g.value("n_t", cfg.n_t);
        cfg.max_excursion = g.value("max_excursion", cfg.max_excursion);
        cfg.regularization = g.value("regularization", cfg.regularization);
        cfg.hann_window = g.value("hann_window", cfg.hann_window);
    }
    if (j.contains("spectra")) {
        const json& s = j["spectra"];
        reject_unknown_keys(s, {"window_half_width", "q_max"}, "spectra");
        cfg.window_half_width = s.value("window_half_width", cfg.window_half_width);
        cfg.q_max = s.value("q_max", cfg.q_max);
    }
    if (j.contains("sampling")) {
        const json& s = j["sampling"];
        reject_unknown_keys(s, {"n_samples"}, "sampling");
        cfg.n_samples = s.value("n_samples", cfg.n_samples);
    }
    if (j.contains("experiment")) {
        const json& e = j["experiment"];
        reject_unknown_keys(e,
                            {"type", "harmonics", "phi_points", "ellipticity_grid", "phi_values",
                             "harmonic", "epsbar_grid", "isq_grid", "depletion", "toy_p_grid",
                             "toy_mean_values", "toy_sigma", "toy_eps_crit",
                             "toy_suppression_exponent"},
                            "experiment");
        if (e.contains("type")) cfg.experiment.type = parse_type(e["type"].get<std::string>());
        if (e.contains("harmonics")) cfg.experiment.harmonics = e["harmonics"].get<std::vector<int>>();
        cfg.experiment.phi_points = e.value("phi_points", cfg.experiment.phi_points);
        if (e.contains("ellipticity_grid"))
            cfg.experiment.ellipticity_grid = e["ellipticity_grid"].get<std::vector<double>>();
        if (e.contains("phi_values"))
            cfg.experiment.phi_values = e["phi_values"].get<std::vector<double>>();
        cfg.experiment.harmonic = e.value("harmonic", cfg.experiment.harmonic);
        if (e.contains("epsbar_grid"))
            cfg.experiment.epsbar_grid = e["epsbar_grid"].get<std::vector<double>>();
        if (e.contains("isq_grid"))
            cfg.experiment.isq_grid = e["isq_grid"].get<std::vector<double>>();
        cfg.experiment.depletion = e.value("depletion", cfg.experiment.depletion);
        if (e.contains("toy_p_grid"))
            cfg.experiment.toy_p_grid = e["toy_p_grid"].get<std::vector<double>>();
        if (e.contains("toy_mean_values"))
            cfg.experiment.toy_mean_values = e["toy_mean_values"].get<std::vector<double>>();
        cfg.experiment.toy_sigma = e.value("toy_sigma", cfg.experiment.toy_sigma);
        cfg.experiment.toy_eps_crit = e.value("toy_eps_crit", cfg.experiment.toy_eps_crit);
        cfg.experiment.toy_suppression_exponent =
            e.value("toy_suppression_exponent", cfg.experiment.toy_suppression_exponent);
    }
    if (j.contains("output")) {
        const json& o = j["output"];
        reject_unknown_keys(o, {"directory", "csv", "svg"}, "output");
        if (o.contains("directory")) cfg.output.directory = o["directory"].get<std::string>();
        cfg.output.csv = o.value("csv", cfg.output.csv);
        cfg.output.svg = o.value("svg", cfg.output.svg);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_run_config(buf.str());
}

std::string canonical_config_json(const RunConfig& cfg) {
    json env;
    if (cfg.driver.envelope.kind == Envelope::Kind::Monochromatic)
        env = {{"type", "monochromatic"}, {"n_cycles", cfg.driver.envelope.n_cycles}};
    else
        env = {{"type", "sin2"}, {"duration_au", cfg.driver.envelope.duration_au}};
    json j = {
        {"driver",
         {{"mean_amplitude", cfg.driver.mean_amplitude},
          {"carrier", cfg.driver.carrier},
          {"ellipticity", cfg.driver.ellipticity},
          {"squeezing_intensity", cfg.driver.squeezing_intensity},
          {"squeezing_angle", cfg.driver.squeezing_angle},
          {"ionization_potential", cfg.driver.ionization_potential},
          {"handedness", cfg.driver.handedness},
          {"envelope", env}}},
        {"grid",
         {{"n_t", cfg.n_t},
          {"max_excursion", cfg.max_excursion},
          {"regularization", cfg.regularization},
          {"hann_window", cfg.hann_window}}},
        {"spectra", {{"window_half_width", cfg.window_half_width}, {"q_max", cfg.q_max}}},
        {"sampling", {{"n_samples", cfg.n_samples}}},
        {"experiment",
         {{"type", type_tag(cfg.experiment.type)},
          {"harmonics", cfg.experiment.harmonics},
          {"phi_points", cfg.experiment.phi_points},
          {"ellipticity_grid", cfg.experiment.ellipticity_grid},
          {"phi_values", cfg.experiment.phi_values},
          {"harmonic", cfg.experiment.harmonic},
          {"epsbar_grid", cfg.experiment.epsbar_grid},
          {"isq_grid", cfg.experiment.isq_grid},
          {"depletion", cfg.experiment.depletion},
          {"toy_p_grid", cfg.experiment.toy_p_grid},
          {"toy_mean_values", cfg.experiment.toy_mean_values},
          {"toy_sigma", cfg.experiment.toy_sigma},
          {"toy_eps_crit", cfg.experiment.toy_eps_crit},
          {"toy_suppression_exponent", cfg.experiment.toy_suppression_exponent}}},
    };
    return j.dump();
}

std::string config_hash(const RunConfig& cfg) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(canonical_config_json(cfg))));
    return buf;
}

void set_worker_threads(int n) {
    if (n > 0) omp_set_num_threads(n);
}

SpectrumSet compute_ensemble_spectrum(const DriverConfig& driver, const SfaGrid& grid,
                                      int n_samples, const DipoleOptions& dipole_options,
                                      const AccumulateOptions& accumulate_options,
                                      FieldStyle style) {
    const auto samples = build_quadrature_samples(driver.squeezing_intensity, n_samples);
    SpectrumAccumulator acc(accumulate_options);
    for (const auto& s : samples) {
        const FieldRealization r = style == FieldStyle::Collinear
                                       ? realize_field_collinear(driver, s)
                                       : realize_field(driver, s);
        acc.add(compute_dipole(r, driver, grid, dipole_options));
    }
    return acc.finalize(driver);
}

RunSummary run_experiment(const RunConfig& config_in, const RunOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = config_in;
    cfg.validate();
    set_worker_threads(options.threads);

    ExperimentPlan plan;
    using T = ExperimentConfig::Type;
    switch (cfg.experiment.type) {
        case T::Spectrum: plan = plan_spectrum(cfg, true); break;
        case T::G2Report: plan = plan_spectrum(cfg, false); break;
        case T::PhiSweep: plan = plan_phi_sweep(cfg); break;
        case T::EllipticitySweep: plan = plan_ellipticity_sweep(cfg); break;
        case T::ToyG2: plan = plan_toy_g2(cfg); break;
        case T::DepletionSweep: plan = plan_depletion_sweep(cfg); break;
    }

    const fs::path out_dir = cfg.output.directory;
    fs::create_directories(out_dir);
    PointStore store(out_dir / ".points" / config_hash(cfg), options.resume);

    std::map<std::string, std::string> assembled;
    for (const auto& f : plan.files) assembled[f.key] = f.header + "\n";
    for (int i = 0; i < plan.n_points; ++i) {
        const auto sections = split_sections(store.fetch(i, [&] { return plan.produce(i); }));
        for (const auto& [key, rows] : sections) {
            if (!assembled.count(key))
                throw std::runtime_error("internal: point produced unknown section '" + key + "'");
            assembled[key] += rows;
        }
    }

    RunSummary summary;
    summary.points_total = plan.n_points;
    summary.points_computed = store.computed;
    summary.points_reused = store.reused;

    if (cfg.output.csv) {
        for (const auto& f : plan.files) {
            const fs::path path = out_dir / (f.key + ".csv");
            std::ofstream os(path, std::ios::binary);
            os << assembled[f.key];
            summary.files.push_back(path);
        }
    }
    if (plan.epilogue) plan.epilogue(assembled, out_dir, cfg.output.svg, summary.files);

    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::ofstream manifest(out_dir / "manifest");
    manifest << "tool qhhg " << version << "\n"
             << "experiment " << type_tag(cfg.experiment.type) << "\n"
             << "config_hash " << config_hash(cfg) << "\n"
             << "threads " << omp_get_max_threads() << "\n"
             << "points_total " << summary.points_total << "\n"
             << "points_computed " << summary.points_computed << "\n"
             << "points_reused " << summary.points_reused << "\n"
             << "wall_seconds " << format_double(summary.wall_seconds) << "\n";
    return summary;
}

}  // namespace qhhg
