#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "qhhg/spectra.hpp"

namespace qhhg {

enum class G2Mode { Windowed, Pointwise };

/// Per-harmonic derived observables. Dark harmonics (denominator below
/// 1e-300 of the spectral maximum) report absent values instead of infinities.
struct HarmonicReport {
    int q = 0;
    double i_par = 0.0;
    double i_perp = 0.0;
    std::optional<double> ellipticity;  // 0..1
    std::optional<double> visibility;   // -1..1
    std::optional<double> g2_par, g2_perp;
    double rel_phase = 0.0;  // arg of the windowed cross moment
};

/// Stokes-operator ellipticity of harmonic q,
///   E_q = |2 Im X_q| / (I_par + I_perp),
/// X_q the window-integrated cross moment.
std::optional<double> ellipticity(const SpectrumSet& spectrum, int q);

/// Intensity split between polarization components,
///   V = (I_par - I_perp) / (I_par + I_perp).
std::optional<double> visibility(const SpectrumSet& spectrum, int q);

/// Second-order autocorrelation of mode (mu, q),
///   g2 = sum_r w_r I_r^2 / (sum_r w_r I_r)^2,
/// with I_r the per-realization window-integrated intensity (Windowed mode)
/// or the per-realization |spec|^2 at the bin nearest q*omega_l (Pointwise).
std::optional<double> g2(const SpectrumSet& spectrum, int q, Polarization mu,
                         G2Mode mode = G2Mode::Windowed);

std::vector<HarmonicReport> harmonic_reports(const SpectrumSet& spectrum,
                                             std::span<const int> orders,
                                             G2Mode mode = G2Mode::Windowed);

/// CSV export: q, i_par, i_perp, e_q, v, g2_par, g2_perp, phase.
void write_report_csv(std::ostream& os, std::span<const HarmonicReport> reports);

}  // namespace qhhg
