#pragma once

#include <complex>
#include <vector>

#include "qhhg/phase_space.hpp"

namespace qhhg {

/// Complex two-vector (matrix elements carry a phase).
struct CVec2 {
    std::complex<double> par{0.0, 0.0};
    std::complex<double> perp{0.0, 0.0};
};

/// Uniform time grid and discretization controls for the dipole integral.
/// The analysis window is [t_start, t_end); the field history starts at
/// t = 0, so a nonzero t_start acts as a lead-in. Continuous-wave drivers
/// use a lead-in of one excursion cap so the analysis window sees the
/// steady periodic dipole; an integer-cycle rectangular window of a
/// periodic signal is leakage-free, so no taper is needed there.
struct SfaGrid {
    double t_start = 0.0;         // a.u.; analysis window start (multiple of dt)
    double t_end = 0.0;           // a.u.
    int n_t = 4096;               // samples in the analysis window
    double max_excursion = 0.0;   // a.u.; cap on ionization-to-recollision delay
    double regularization = 1e-4; // eps_reg in the wavepacket-spreading prefactor

    double dt() const { return (t_end - t_start) / n_t; }
    int lead_steps() const;       // grid steps before the analysis window
    int total_steps() const { return lead_steps() + n_t; }

    /// Grid sized for a driver: analysis span = envelope duration, excursion
    /// cap 1.5 optical periods unless overridden, lead-in of one cap for
    /// continuous-wave envelopes (zero for pulsed ones).
    static SfaGrid for_driver(const DriverConfig& config, int n_t = 4096,
                              double max_excursion_override = 0.0);

    /// Enforces resolution invariants (>= 4096 points per 5 optical cycles,
    /// Nyquist margin >= 60*omega, excursion cap >= one period). Throws
    /// std::invalid_argument before any computation starts.
    void validate(double omega) const;
};

/// Per-realization precomputed field tables covering [0, t_end): field
/// components, vector potential A = -cumint E accumulated from pulse start,
/// running integrals of A and |A|^2, and the ground-state survival amplitude
/// D(t) = exp(-1/2 cumint Gamma_ADK) when depletion is enabled (identically
/// 1 otherwise). Index 0 is pulse start, not the analysis window start.
struct FieldContext {
    SfaGrid grid{};
    double omega = 0.0;
    double i_p = 0.0;
    std::vector<double> e_par, e_perp;    // E_mu(t_i)
    std::vector<double> a_par, a_perp;    // A_mu(t_i)
    std::vector<double> ia_par, ia_perp;  // int_0^{t_i} A_mu
    std::vector<double> ia2;              // int_0^{t_i} |A|^2
    std::vector<double> damp;             // D(t_i)

    static FieldContext build(const FieldRealization& realization, const DriverConfig& config,
                              const SfaGrid& grid, bool depletion);

    double time_at(int i) const { return i * grid.dt(); }
    int index_of(double t) const;  // throws if t does not sit on the grid
};

/// Semiclassical action accumulated between ionization (index i_t1) and
/// recombination (index i_t) for canonical momentum p:
///   S = int_{t1}^{t} [ (p + A)^2 / 2 + I_p ] dtau,
/// evaluated with the same trapezoidal running integrals as the dipole sum.
double action(const FieldContext& ctx, Vec2 p, int i_t, int i_t1);
double action(const FieldContext& ctx, Vec2 p, double t, double t1);

/// Stationary (returning) canonical momentum, p_st = -(1/tau) int_{t1}^t A,
/// chosen so the freed electron revisits the ion.
Vec2 stationary_momentum(const FieldContext& ctx, int i_t, int i_t1);
Vec2 stationary_momentum(const FieldContext& ctx, double t, double t1);

/// Hydrogenic 1s bound-continuum dipole matrix element,
///   d(v) = i * (2^{7/2} (2 I_p)^{5/4} / pi) * v / (v^2 + 2 I_p)^3.
CVec2 bound_continuum_dipole(Vec2 v, double i_p);

/// Quasi-static tunneling ionization rate for the hydrogen ground state,
///   Gamma = 4 (2 I_p)^{5/2} / |E| * exp(-2 (2 I_p)^{3/2} / (3 |E|)),
/// with Gamma(0) = 0 exactly.
double adk_rate(double e_inst, double i_p);

/// Time-dependent dipole of one field realization plus its spectral
/// transform on the FFT-conjugate grid.
struct DipoleRecord {
    int n_t = 0;
    double dt = 0.0;
    double omega_step = 0.0;  // spectral grid: omega_k = k * omega_step, k = 0..n_t/2
    std::vector<double> d_par, d_perp;                       // real time series
    std::vector<std::complex<double>> spec_par, spec_perp;   // dt-scaled DFT, n_t/2 + 1 bins
    double weight = 1.0;
};

struct DipoleOptions {
    bool depletion = false;    // ADK ground-state depletion amplitudes
    bool hann_window = false;  // optional taper before the FFT
};

/// Stationary-phase (Lewenstein-form) dipole: for every grid time t the
/// ionization-time sum
///   d(t) = sum_{t1} dt1 pref(tau) D(t) e^{-iS(p_st,t,t1)}
///          [E(t1) . d(p_st + A(t1))] D(t1) d*(p_st + A(t)) + c.c.
/// with pref(tau) = (pi / (eps_reg + i tau/2))^{3/2} and tau = t - t1 capped
/// at grid.max_excursion. Output times are computed independently (parallel)
/// with a sequential inner sum, so results are identical for any thread
/// count.
DipoleRecord compute_dipole(const FieldRealization& realization, const DriverConfig& config,
                            const SfaGrid& grid, const DipoleOptions& options = {});

}  // namespace qhhg
