#include "qhhg/phase_space.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qhhg/atomic_units.hpp"

namespace qhhg {

namespace {
constexpr double pi = std::numbers::pi;
}

Envelope Envelope::monochromatic(double cycles) {
    Envelope e;
    e.kind = Kind::Monochromatic;
    e.n_cycles = cycles;
    return e;
}

Envelope Envelope::sin2(double duration_au) {
    Envelope e;
    e.kind = Kind::Sin2;
    e.duration_au = duration_au;
    return e;
}

Envelope Envelope::sin2_fs(double duration_fs) { return sin2(duration_fs * au::fs); }

double Envelope::duration(double omega) const {
    switch (kind) {
        case Kind::Monochromatic: return n_cycles * 2.0 * pi / omega;
        case Kind::Sin2: return duration_au;
    }
    return 0.0;
}

double Envelope::value(double t, double omega) const {
    if (t < 0.0) return 0.0;
    switch (kind) {
        case Kind::Monochromatic:
            // Continuous-wave field; `duration` only sizes the analysis span.
            return 1.0;
        case Kind::Sin2: {
            const double dur = duration(omega);
            if (t >= dur) return 0.0;
            const double s = std::sin(pi * t / dur);
            return s * s;
        }
    }
    return 0.0;
}

double normalize_angle(double phi) {
    double r = std::remainder(phi, 2.0 * pi);
    if (r <= -pi) r += 2.0 * pi;
    return r;
}

void DriverConfig::validate_and_normalize() {
    if (!(mean_amplitude >= 0.0)) throw std::invalid_argument("driver: mean_amplitude must be >= 0");
    if (!(carrier > 0.0)) throw std::invalid_argument("driver: carrier frequency must be > 0");
    if (!(ellipticity >= 0.0 && ellipticity <= 1.0))
        throw std::invalid_argument("driver: ellipticity must lie in [0, 1]");
    if (!(squeezing_intensity >= 0.0))
        throw std::invalid_argument("driver: squeezing_intensity must be >= 0");
    if (!(ionization_potential > 0.0))
        throw std::invalid_argument("driver: ionization_potential must be > 0");
    if (handedness != 1 && handedness != -1)
        throw std::invalid_argument("driver: handedness must be +1 or -1");
    if (!std::isfinite(squeezing_angle)) throw std::invalid_argument("driver: squeezing_angle not finite");
    const double dur = envelope.duration(carrier);
    if (!(dur > 0.0)) throw std::invalid_argument("driver: envelope duration must be > 0");
    squeezing_angle = normalize_angle(squeezing_angle);
}

double husimi_marginal_density(double tilde_x, double i_sq) {
    if (!(i_sq > 0.0))
        throw std::domain_error("husimi_marginal_density: degenerate distribution (i_sq = 0); "
                                "use the single delta sample instead");
    const double var8 = 8.0 * i_sq;  // 2 * variance, variance = 4 i_sq
    return std::exp(-tilde_x * tilde_x / var8) / std::sqrt(pi * var8);
}

void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);

    // Newton iteration on the orthonormal recurrence; roots come out in
    // descending order of |z|, mirrored onto the negative axis.
    constexpr double pim4 = 0.7511255444649425;  // pi^{-1/4}
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * nodes[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * nodes[1];
        else
            z = 2.0 * z - nodes[i - 2];

        double pp = 0.0;
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            double p1 = pim4;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) <= 1e-14 * (1.0 + std::abs(z))) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw std::runtime_error("gauss_hermite: Newton iteration failed for n = " + std::to_string(n));
        if ((n % 2) == 1 && i == m - 1) z = 0.0;  // center root of odd rules is exact
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }

    // Ascending node order.
    for (int i = 0; i < n / 2; ++i) {
        std::swap(nodes[i], nodes[n - 1 - i]);
        std::swap(weights[i], weights[n - 1 - i]);
    }
}

std::vector<QuadratureSample> build_quadrature_samples(double i_sq, int n) {
    if (n < 1) throw std::invalid_argument("build_quadrature_samples: n must be >= 1");
    if (!(i_sq >= 0.0)) throw std::invalid_argument("build_quadrature_samples: i_sq must be >= 0");
    if (i_sq == 0.0) return {QuadratureSample{0.0, 1.0}};

    std::vector<double> z, w;
    gauss_hermite(n, z, w);

    // x = sqrt(2) sigma z maps the e^{-z^2} rule onto the Gaussian of
    // variance sigma^2 = 4 i_sq; weights renormalized to unit mass.
    const double scale = std::sqrt(8.0 * i_sq);
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) wsum += w[i];
    std::vector<QuadratureSample> samples(n);
    for (int i = 0; i < n; ++i) {
        samples[i].tilde_x = scale * z[i];
        samples[i].weight = w[i] / wsum;
    }
    return samples;
}

FieldRealization realize_field(const DriverConfig& config, const QuadratureSample& sample) {
    FieldRealization r;
    r.eps_par = std::complex<double>(config.mean_amplitude, 0.0);
    const std::complex<double> displacement(
        0.0, config.handedness * config.ellipticity * config.mean_amplitude);
    const double half = 0.5 * config.squeezing_angle;
    const std::complex<double> fluct =
        sample.tilde_x * std::complex<double>(std::cos(half), -std::sin(half));
    r.eps_perp = displacement + fluct;
    r.weight = sample.weight;
    r.source_tilde_x = sample.tilde_x;
    return r;
}

FieldRealization realize_field_collinear(const DriverConfig& config, const QuadratureSample& sample) {
    FieldRealization r;
    const double half = 0.5 * config.squeezing_angle;
    r.eps_par = config.mean_amplitude +
                sample.tilde_x * std::complex<double>(std::cos(half), -std::sin(half));
    r.eps_perp = 0.0;
    r.weight = sample.weight;
    r.source_tilde_x = sample.tilde_x;
    return r;
}

Vec2 evaluate_field(const FieldRealization& realization, const DriverConfig& config, double t) {
    const double f = config.envelope.value(t, config.carrier);
    if (f == 0.0) return {0.0, 0.0};
    const double c = std::cos(config.carrier * t);
    const double s = std::sin(config.carrier * t);
    return {f * (realization.eps_par.real() * c + realization.eps_par.imag() * s),
            f * (realization.eps_perp.real() * c + realization.eps_perp.imag() * s)};
}

}  // namespace qhhg
