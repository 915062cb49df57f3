#include "qhhg/observables.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "qhhg/csv.hpp"

namespace qhhg {

namespace {

void check_order(const SpectrumSet& s, int q) {
    if (q < 1 || q > s.q_max)
        throw std::invalid_argument("harmonic order " + std::to_string(q) +
                                    " outside the tracked range [1, " + std::to_string(s.q_max) + "]");
}

// Dark-harmonic floor: anything below 1e-300 of the strongest windowed
// intensity is reported as absent.
double dark_threshold(const SpectrumSet& s) {
    double max_i = 0.0;
    for (int q = 1; q <= s.q_max; ++q)
        max_i = std::max(max_i, s.wq_par[q] + s.wq_perp[q]);
    return 1e-300 * max_i;
}

int nearest_bin(const SpectrumSet& s, int q) {
    const int k = static_cast<int>(std::llround(q * s.omega_l / s.omega_step));
    if (k < 0 || k >= static_cast<int>(s.omega.size()))
        throw std::invalid_argument("harmonic order outside the spectral grid");
    return k;
}

}  // namespace

std::optional<double> ellipticity(const SpectrumSet& spectrum, int q) {
    check_order(spectrum, q);
    const double total = spectrum.wq_par[q] + spectrum.wq_perp[q];
    if (!(total > dark_threshold(spectrum)) || total <= 0.0) return std::nullopt;
    const double e = std::abs(2.0 * spectrum.wq_cross[q].imag()) / total;
    return std::min(e, 1.0);
}

std::optional<double> visibility(const SpectrumSet& spectrum, int q) {
    check_order(spectrum, q);
    const double total = spectrum.wq_par[q] + spectrum.wq_perp[q];
    if (!(total > dark_threshold(spectrum)) || total <= 0.0) return std::nullopt;
    return (spectrum.wq_par[q] - spectrum.wq_perp[q]) / total;
}

std::optional<double> g2(const SpectrumSet& spectrum, int q, Polarization mu, G2Mode mode) {
    check_order(spectrum, q);
    if (mu == Polarization::Total)
        throw std::invalid_argument("g2 is defined per polarization mode");
    double first = 0.0, second = 0.0;
    if (mode == G2Mode::Windowed) {
        first = (mu == Polarization::Par) ? spectrum.wq_par[q] : spectrum.wq_perp[q];
        second = (mu == Polarization::Par) ? spectrum.wq2_par[q] : spectrum.wq2_perp[q];
    } else {
        const int k = nearest_bin(spectrum, q);
        first = (mu == Polarization::Par) ? spectrum.s_par[k] : spectrum.s_perp[k];
        second = (mu == Polarization::Par) ? spectrum.m4_par[k] : spectrum.m4_perp[k];
    }
    const double floor = dark_threshold(spectrum);
    if (!(first > 0.0) || first * first <= floor * floor) return std::nullopt;
    return second / (first * first);
}

std::vector<HarmonicReport> harmonic_reports(const SpectrumSet& spectrum,
                                             std::span<const int> orders, G2Mode mode) {
    std::vector<HarmonicReport> out;
    out.reserve(orders.size());
    for (int q : orders) {
        check_order(spectrum, q);
        HarmonicReport r;
        r.q = q;
        r.i_par = spectrum.wq_par[q];
        r.i_perp = spectrum.wq_perp[q];
        r.ellipticity = ellipticity(spectrum, q);
        r.visibility = visibility(spectrum, q);
        r.g2_par = g2(spectrum, q, Polarization::Par, mode);
        r.g2_perp = g2(spectrum, q, Polarization::Perp, mode);
        r.rel_phase = std::arg(spectrum.wq_cross[q]);
        out.push_back(r);
    }
    return out;
}

void write_report_csv(std::ostream& os, std::span<const HarmonicReport> reports) {
    os << "q,i_par,i_perp,e_q,v,g2_par,g2_perp,phase\n";
    for (const auto& r : reports) {
        CsvRow(os)
            .col(r.q)
            .col(r.i_par)
            .col(r.i_perp)
            .col(r.ellipticity)
            .col(r.visibility)
            .col(r.g2_par)
            .col(r.g2_perp)
            .col(r.rel_phase);
    }
}

}  // namespace qhhg
