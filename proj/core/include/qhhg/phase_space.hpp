#pragma once

#include <complex>
#include <vector>

namespace qhhg {

/// Two-component field value / vector in the (parallel, perpendicular)
/// polarization basis.
struct Vec2 {
    double par = 0.0;
    double perp = 0.0;
};

/// Temporal envelope of the driving pulse. The pulse support is [0, duration].
struct Envelope {
    enum class Kind { Monochromatic, Sin2 };

    Kind kind = Kind::Monochromatic;
    double n_cycles = 5.0;     // Monochromatic: number of optical cycles
    double duration_au = 0.0;  // Sin2: total duration in a.u. of time

    static Envelope monochromatic(double cycles);
    static Envelope sin2(double duration_au);
    static Envelope sin2_fs(double duration_fs);

    /// Pulse support length in a.u. for carrier angular frequency `omega`.
    double duration(double omega) const;

    /// Envelope factor f(t); zero outside [0, duration].
    double value(double t, double omega) const;
};

/// Full description of the quantum driver: a coherent parallel component of
/// amplitude `mean_amplitude` and a displaced squeezed perpendicular
/// component. `ellipticity` scales the perpendicular displacement (0 linear,
/// 1 circular); the squeezing is configured by its field-intensity
/// contribution `squeezing_intensity` and the quadrature angle
/// `squeezing_angle` (0 amplitude squeezing, pi phase squeezing).
struct DriverConfig {
    double mean_amplitude = 0.053;      // a.u. field strength
    double carrier = 0.057;             // a.u. angular frequency
    double ellipticity = 0.0;           // dimensionless, 0..1
    double squeezing_intensity = 1e-5;  // a.u. field-intensity units
    double squeezing_angle = 0.0;       // radians, reduced into (-pi, pi]
    Envelope envelope{};
    double ionization_potential = 0.5;  // a.u.
    int handedness = +1;                // sign of the perpendicular displacement phase

    /// Checks ranges and reduces `squeezing_angle` into (-pi, pi].
    /// Throws std::invalid_argument on violation.
    void validate_and_normalize();
};

/// One deterministic quadrature node of the classical-limit Gaussian along
/// the anti-squeezed quadrature: field offset `tilde_x` with probability
/// mass `weight`.
struct QuadratureSample {
    double tilde_x = 0.0;  // a.u. field amplitude
    double weight = 1.0;   // dimensionless, sums to 1 over a sample set
};

/// One classical field realization: complex quadrature amplitudes of both
/// polarization modes plus the Monte-Carlo/quadrature weight.
struct FieldRealization {
    std::complex<double> eps_par{0.0, 0.0};
    std::complex<double> eps_perp{0.0, 0.0};
    double weight = 1.0;
    double source_tilde_x = 0.0;  // provenance: the sampled quadrature offset
};

/// Classical-limit marginal of the squeezed-state Husimi function along the
/// anti-squeezed quadrature: a Gaussian of variance 4*i_sq,
///   (1/sqrt(8 pi i_sq)) * exp(-x^2 / (8 i_sq)).
/// Requires i_sq > 0; the degenerate i_sq = 0 case must use the single delta
/// sample instead (std::domain_error).
double husimi_marginal_density(double tilde_x, double i_sq);

/// Deterministic Gauss-Hermite discretization of the classical-limit
/// Gaussian: n nodes/weights rescaled to variance 4*i_sq, weights
/// normalized to unit mass. i_sq = 0 collapses to the single sample (0, 1).
/// Identical inputs produce bit-identical output.
std::vector<QuadratureSample> build_quadrature_samples(double i_sq, int n);

/// Maps a quadrature sample to a classical field realization:
///   eps_par  = mean_amplitude                    (coherent, no fluctuation)
///   eps_perp = handedness*i*A*mean_amplitude + tilde_x * exp(-i*phi/2)
/// i.e. the mean elliptical displacement on the perpendicular sin-quadrature
/// plus the fluctuation rotated back from the tilde frame (tilde_y = 0).
FieldRealization realize_field(const DriverConfig& config, const QuadratureSample& sample);

/// Collinear variant used for linearly polarized displaced-squeezed drivers:
/// mean and fluctuation share the parallel mode,
///   eps_par = mean_amplitude + tilde_x * exp(-i*phi/2),  eps_perp = 0.
/// `ellipticity` is ignored.
FieldRealization realize_field_collinear(const DriverConfig& config, const QuadratureSample& sample);

/// Time-domain field of a realization:
///   E_mu(t) = f(t) * [Re(eps_mu) cos(w t) + Im(eps_mu) sin(w t)],
/// f the configured envelope. Returns zero outside the pulse support.
Vec2 evaluate_field(const FieldRealization& realization, const DriverConfig& config, double t);

/// Reduces an angle into (-pi, pi].
double normalize_angle(double phi);

/// Raw Gauss-Hermite rule for weight exp(-x^2) on the real line; nodes in
/// ascending order. Exposed for tests and reuse.
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace qhhg
