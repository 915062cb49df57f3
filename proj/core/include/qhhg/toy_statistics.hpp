#pragma once

namespace qhhg {

/// Power-law toy model for the photon statistics of one harmonic: the
/// harmonic amplitude responds as |eps|^p to a driving field amplitude eps
/// drawn from a Gaussian of variance sigma centered at mean.
struct ToyModelParams {
    double p = 1.0;      // nonlinearity exponent, >= 0
    double sigma = 1.0;  // Gaussian variance of the field distribution, a.u.^2
    double mean = 0.0;   // a.u.; 0 reproduces the bright-squeezed-vacuum analogue
};

/// g2(0) of the toy model by adaptive quadrature over mean +- 12 sqrt(sigma):
///   sqrt(2 pi sigma) int e^{-(e-mean)^2/2sigma} |e|^{4p} de
///   / [ int e^{-(e-mean)^2/2sigma} |e|^{2p} de ]^2,
/// relative accuracy 1e-10. For non-integer p the response is defined through
/// |e|^{2p} (intensity is a magnitude); integer even powers are unaffected.
/// Throws std::runtime_error with diagnostics if the quadrature fails to
/// converge.
double g2_toy_quadrature(const ToyModelParams& params);

/// Closed form for the zero-mean (BSV) case, sigma-independent:
///   g2 = sqrt(pi) Gamma(1/2 + 2p) / Gamma(1/2 + p)^2,
/// evaluated through log-gamma; diverges as p -> infinity.
double g2_bsv_closed_form(double p);

/// The same expression carrying the sigma prefactor,
///   sigma * sqrt(pi) Gamma(1/2 + 2p) / Gamma(1/2 + p)^2.
/// Direct evaluation of the defining integral is sigma-independent and equals
/// g2_bsv_closed_form; the two coincide at sigma = 1. Kept for comparison.
double g2_bsv_printed_form(double p, double sigma);

/// Toy model with a saturating response |e|^p exp(-(|e|/eps_crit)^s) modeling
/// ground-state depletion beyond a critical field; eps_crit -> infinity
/// recovers g2_toy_quadrature.
double g2_toy_depleted(const ToyModelParams& params, double eps_crit, double suppression_exponent);

}  // namespace qhhg
