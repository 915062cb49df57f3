#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "qhhg/sfa_engine.hpp"

namespace qhhg {

enum class Polarization { Par, Perp, Total };

struct AccumulateOptions {
    double omega_l = 0.057;          // carrier used for harmonic windows
    double window_half_width = 0.5;  // in units of omega_l
    int q_max = 64;                  // highest harmonic order tracked per realization
};

/// Ensemble moments of the per-realization spectra. Pointwise arrays hold
/// the weighted second moment S, fourth moment M4 and complex cross moment
/// X(w) = sum_r w_r conj(spec_par) * spec_perp. Per-order arrays hold the
/// window-integrated first and second intensity moments needed for
/// photon-statistics observables (the window integral is taken per
/// realization before averaging).
struct SpectrumSet {
    int n_t = 0;
    double dt = 0.0;
    double omega_step = 0.0;
    double omega_l = 0.0;
    double window_half_width = 0.5;

    std::vector<double> omega;
    std::vector<double> s_par, s_perp;
    std::vector<double> m4_par, m4_perp;
    std::vector<std::complex<double>> cross;

    int q_max = 0;  // per-order arrays are indexed 0..q_max (entry 0 unused)
    std::vector<double> wq_par, wq_perp;    // sum_r w_r I_{r,q,mu}
    std::vector<double> wq2_par, wq2_perp;  // sum_r w_r I_{r,q,mu}^2
    std::vector<std::complex<double>> wq_cross;

    double weight_sum = 0.0;
    int n_records = 0;
    DriverConfig config{};  // metadata of the generating driver
};

/// Streaming accumulator; records must share one grid and their weights sum
/// to 1. Insertion order fixes the floating-point reduction order.
class SpectrumAccumulator {
  public:
    explicit SpectrumAccumulator(const AccumulateOptions& options);
    void add(const DipoleRecord& record);
    SpectrumSet finalize(const DriverConfig& config);

  private:
    AccumulateOptions options_;
    SpectrumSet set_;
    bool initialized_ = false;
};

SpectrumSet accumulate(std::span<const DipoleRecord> records, const DriverConfig& config,
                       const AccumulateOptions& options);

/// Window-integrated ensemble intensity of harmonic q:
/// integral of the selected S over [(q-h) w_L, (q+h) w_L], h the configured
/// half-width. Throws if the window exceeds the spectral grid.
double harmonic_intensity(const SpectrumSet& spectrum, double q, Polarization selector);

/// Normalized intensity difference of harmonic q between a squeezing angle
/// and the phase-squeezed reference:  |1 - S_phi(w_q) / S_ref(w_q)| using
/// total (par + perp) windowed intensity. Both spectra must come from the
/// same driver up to the squeezing angle. Throws "undefined reference" when
/// the reference intensity vanishes.
double delta_s(const SpectrumSet& at_phi, const SpectrumSet& reference, int q);

/// DFT coefficients c_m = (1/N) sum_j v_j exp(-i m phi_j) of values sampled
/// on a uniform angle grid covering one 2*pi period; m = 0..N-1.
std::vector<std::complex<double>> fourier_of_delta_s(std::span<const double> values);
/// Variant validating grid uniformity; throws on a non-uniform grid.
std::vector<std::complex<double>> fourier_of_delta_s(std::span<const double> phi,
                                                     std::span<const double> values);

/// CSV export: omega, omega/omega_l, s_par, s_perp, m4_par, m4_perp, re_x, im_x.
void write_spectrum_csv(std::ostream& os, const SpectrumSet& spectrum);

}  // namespace qhhg
