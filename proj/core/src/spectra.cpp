#include "qhhg/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "qhhg/csv.hpp"

namespace qhhg {

namespace {
constexpr double pi = std::numbers::pi;

// Bin range [lo, hi] covering |k*step - q*omega_l| <= h*omega_l.
std::pair<int, int> window_bins(double q, double omega_l, double half_width, double step, int n_bins) {
    const double lo_w = (q - half_width) * omega_l;
    const double hi_w = (q + half_width) * omega_l;
    if (lo_w < -1e-12 || hi_w > (n_bins - 1) * step * (1.0 + 1e-12))
        throw std::invalid_argument("harmonic window exceeds the spectral grid (q = " +
                                    std::to_string(q) + ")");
    const int lo = static_cast<int>(std::ceil(lo_w / step - 1e-9));
    const int hi = static_cast<int>(std::floor(hi_w / step + 1e-9));
    return {std::max(lo, 0), std::min(hi, n_bins - 1)};
}
}  // namespace

SpectrumAccumulator::SpectrumAccumulator(const AccumulateOptions& options) : options_(options) {
    if (!(options.omega_l > 0.0)) throw std::invalid_argument("accumulate: omega_l must be > 0");
    if (!(options.window_half_width > 0.0))
        throw std::invalid_argument("accumulate: window half-width must be > 0");
}

void SpectrumAccumulator::add(const DipoleRecord& record) {
    const int n_bins = record.n_t / 2 + 1;
    if (!initialized_) {
        set_.n_t = record.n_t;
        set_.dt = record.dt;
        set_.omega_step = record.omega_step;
        set_.omega_l = options_.omega_l;
        set_.window_half_width = options_.window_half_width;
        set_.omega.resize(n_bins);
        for (int k = 0; k < n_bins; ++k) set_.omega[k] = k * record.omega_step;
        set_.s_par.assign(n_bins, 0.0);
        set_.s_perp.assign(n_bins, 0.0);
        set_.m4_par.assign(n_bins, 0.0);
        set_.m4_perp.assign(n_bins, 0.0);
        set_.cross.assign(n_bins, {0.0, 0.0});
        // Track only orders whose full window fits on the grid.
        const double omega_max = (n_bins - 1) * record.omega_step;
        int feasible = static_cast<int>(std::floor(omega_max / options_.omega_l -
                                                   options_.window_half_width - 1e-9));
        set_.q_max = std::clamp(std::min(options_.q_max, feasible), 0, 1 << 12);
        set_.wq_par.assign(set_.q_max + 1, 0.0);
        set_.wq_perp.assign(set_.q_max + 1, 0.0);
        set_.wq2_par.assign(set_.q_max + 1, 0.0);
        set_.wq2_perp.assign(set_.q_max + 1, 0.0);
        set_.wq_cross.assign(set_.q_max + 1, {0.0, 0.0});
        initialized_ = true;
    } else if (record.n_t != set_.n_t || record.dt != set_.dt) {
        throw std::invalid_argument("accumulate: mixed grids across dipole records");
    }

    const double w = record.weight;
    for (int k = 0; k < n_bins; ++k) {
        const double p2 = std::norm(record.spec_par[k]);
        const double q2 = std::norm(record.spec_perp[k]);
        set_.s_par[k] += w * p2;
        set_.s_perp[k] += w * q2;
        set_.m4_par[k] += w * p2 * p2;
        set_.m4_perp[k] += w * q2 * q2;
        set_.cross[k] += w * std::conj(record.spec_par[k]) * record.spec_perp[k];
    }

    const double dw = set_.omega_step;
    for (int q = 1; q <= set_.q_max; ++q) {
        const auto [lo, hi] =
            window_bins(q, set_.omega_l, set_.window_half_width, dw, n_bins);
        double i_par = 0.0, i_perp = 0.0;
        std::complex<double> x(0.0, 0.0);
        for (int k = lo; k <= hi; ++k) {
            i_par += std::norm(record.spec_par[k]);
            i_perp += std::norm(record.spec_perp[k]);
            x += std::conj(record.spec_par[k]) * record.spec_perp[k];
        }
        i_par *= dw;
        i_perp *= dw;
        x *= dw;
        set_.wq_par[q] += w * i_par;
        set_.wq_perp[q] += w * i_perp;
        set_.wq2_par[q] += w * i_par * i_par;
        set_.wq2_perp[q] += w * i_perp * i_perp;
        set_.wq_cross[q] += w * x;
    }

    set_.weight_sum += w;
    set_.n_records += 1;
}

SpectrumSet SpectrumAccumulator::finalize(const DriverConfig& config) {
    if (!initialized_) throw std::invalid_argument("accumulate: no records");
    if (std::abs(set_.weight_sum - 1.0) > 1e-6)
        throw std::invalid_argument("accumulate: record weights must sum to 1 (got " +
                                    std::to_string(set_.weight_sum) + ")");
    set_.config = config;
    return std::move(set_);
}

SpectrumSet accumulate(std::span<const DipoleRecord> records, const DriverConfig& config,
                       const AccumulateOptions& options) {
    SpectrumAccumulator acc(options);
    for (const auto& r : records) acc.add(r);
    return acc.finalize(config);
}

double harmonic_intensity(const SpectrumSet& spectrum, double q, Polarization selector) {
    const int n_bins = static_cast<int>(spectrum.omega.size());
    const auto [lo, hi] =
        window_bins(q, spectrum.omega_l, spectrum.window_half_width, spectrum.omega_step, n_bins);
    double sum = 0.0;
    for (int k = lo; k <= hi; ++k) {
        switch (selector) {
            case Polarization::Par: sum += spectrum.s_par[k]; break;
            case Polarization::Perp: sum += spectrum.s_perp[k]; break;
            case Polarization::Total: sum += spectrum.s_par[k] + spectrum.s_perp[k]; break;
        }
    }
    return sum * spectrum.omega_step;
}

double delta_s(const SpectrumSet& at_phi, const SpectrumSet& reference, int q) {
    const auto& a = at_phi.config;
    const auto& b = reference.config;
    if (a.mean_amplitude != b.mean_amplitude || a.carrier != b.carrier ||
        a.ellipticity != b.ellipticity || a.squeezing_intensity != b.squeezing_intensity)
        throw std::invalid_argument("delta_s: spectra stem from different driver configurations");
    if (at_phi.n_t != reference.n_t || at_phi.dt != reference.dt)
        throw std::invalid_argument("delta_s: spectra live on different grids");
    const double ref = harmonic_intensity(reference, q, Polarization::Total);
    if (!(ref > 0.0))
        throw std::invalid_argument("delta_s: undefined reference (zero intensity at q = " +
                                    std::to_string(q) + ")");
    return std::abs(1.0 - harmonic_intensity(at_phi, q, Polarization::Total) / ref);
}

std::vector<std::complex<double>> fourier_of_delta_s(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) throw std::invalid_argument("fourier_of_delta_s: empty input");
    std::vector<std::complex<double>> coeff(n);
    for (std::size_t m = 0; m < n; ++m) {
        std::complex<double> c(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double arg = -2.0 * pi * static_cast<double>(m * j) / static_cast<double>(n);
            c += values[j] * std::complex<double>(std::cos(arg), std::sin(arg));
        }
        coeff[m] = c / static_cast<double>(n);
    }
    return coeff;
}

std::vector<std::complex<double>> fourier_of_delta_s(std::span<const double> phi,
                                                     std::span<const double> values) {
    if (phi.size() != values.size())
        throw std::invalid_argument("fourier_of_delta_s: grid/value size mismatch");
    const std::size_t n = phi.size();
    if (n < 2) throw std::invalid_argument("fourier_of_delta_s: need at least two grid points");
    const double step = 2.0 * pi / static_cast<double>(n);
    for (std::size_t j = 1; j < n; ++j)
        if (std::abs((phi[j] - phi[j - 1]) - step) > 1e-9)
            throw std::invalid_argument("fourier_of_delta_s: non-uniform angle grid");
    return fourier_of_delta_s(values);
}

void write_spectrum_csv(std::ostream& os, const SpectrumSet& s) {
    os << "omega,omega_over_omega_l,s_par,s_perp,m4_par,m4_perp,re_x,im_x\n";
    for (std::size_t k = 0; k < s.omega.size(); ++k) {
        CsvRow(os)
            .col(s.omega[k])
            .col(s.omega[k] / s.omega_l)
            .col(s.s_par[k])
            .col(s.s_perp[k])
            .col(s.m4_par[k])
            .col(s.m4_perp[k])
            .col(s.cross[k].real())
            .col(s.cross[k].imag());
    }
}

}  // namespace qhhg
