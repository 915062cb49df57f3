#include "qhhg/sfa_engine.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace qhhg {

namespace {
constexpr double pi = std::numbers::pi;

void cumulative_trapezoid(const std::vector<double>& f, double dt, std::vector<double>& out) {
    out.resize(f.size());
    if (f.empty()) return;
    out[0] = 0.0;
    for (std::size_t i = 1; i < f.size(); ++i)
        out[i] = out[i - 1] + 0.5 * dt * (f[i - 1] + f[i]);
}
}  // namespace

int SfaGrid::lead_steps() const {
    const int lead = static_cast<int>(std::llround(t_start / dt()));
    if (std::abs(t_start - lead * dt()) > 1e-9 * std::max(1.0, t_start))
        throw std::invalid_argument("sfa grid: t_start must be a multiple of dt");
    return lead;
}

SfaGrid SfaGrid::for_driver(const DriverConfig& config, int n_t) {
    SfaGrid g;
    g.n_t = n_t;
    g.max_excursion = 1.5 * 2.0 * pi / config.carrier;
    const double span = config.envelope.duration(config.carrier);
    const double dt = span / n_t;
    if (config.envelope.kind == Envelope::Kind::Monochromatic) {
        const int lead = static_cast<int>(std::ceil(g.max_excursion / dt - 1e-9));
        g.t_start = lead * dt;
    } else {
        g.t_start = 0.0;  // the pulse transient is the signal
    }
    g.t_end = g.t_start + span;
    return g;
}

void SfaGrid::validate(double omega) const {
    if (!(t_end > t_start)) throw std::invalid_argument("sfa grid: empty time span");
    if (t_start < 0.0) throw std::invalid_argument("sfa grid: negative analysis start");
    if (n_t < 4) throw std::invalid_argument("sfa grid: n_t too small");
    const double period = 2.0 * pi / omega;
    const double span_cycles = (t_end - t_start) / period;
    if (n_t < 4096.0 * span_cycles / 5.0)
        throw std::invalid_argument("sfa grid: fewer than 4096 points per 5 optical cycles (n_t = " +
                                    std::to_string(n_t) + ")");
    if (pi / dt() < 60.0 * omega)
        throw std::invalid_argument("sfa grid: Nyquist frequency below 60x the carrier");
    if (!(max_excursion >= period))
        throw std::invalid_argument("sfa grid: max_excursion below one laser period");
    if (!(regularization > 0.0)) throw std::invalid_argument("sfa grid: regularization must be > 0");
    lead_steps();
}

FieldContext FieldContext::build(const FieldRealization& realization, const DriverConfig& config,
                                 const SfaGrid& grid, bool depletion) {
    FieldContext ctx;
    ctx.grid = grid;
    ctx.omega = config.carrier;
    ctx.i_p = config.ionization_potential;

    const int n = grid.total_steps();
    const double dt = grid.dt();
    ctx.e_par.resize(n);
    ctx.e_perp.resize(n);
    for (int i = 0; i < n; ++i) {
        const Vec2 e = evaluate_field(realization, config, i * dt);
        ctx.e_par[i] = e.par;
        ctx.e_perp[i] = e.perp;
    }

    // A = -cumint E, accumulated from pulse start.
    cumulative_trapezoid(ctx.e_par, dt, ctx.a_par);
    cumulative_trapezoid(ctx.e_perp, dt, ctx.a_perp);
    for (int i = 0; i < n; ++i) {
        ctx.a_par[i] = -ctx.a_par[i];
        ctx.a_perp[i] = -ctx.a_perp[i];
    }
    cumulative_trapezoid(ctx.a_par, dt, ctx.ia_par);
    cumulative_trapezoid(ctx.a_perp, dt, ctx.ia_perp);
    std::vector<double> a2(n);
    for (int i = 0; i < n; ++i)
        a2[i] = ctx.a_par[i] * ctx.a_par[i] + ctx.a_perp[i] * ctx.a_perp[i];
    cumulative_trapezoid(a2, dt, ctx.ia2);

    ctx.damp.assign(n, 1.0);
    if (depletion) {
        std::vector<double> gamma(n);
        for (int i = 0; i < n; ++i)
            gamma[i] = adk_rate(std::hypot(ctx.e_par[i], ctx.e_perp[i]), ctx.i_p);
        std::vector<double> cum;
        cumulative_trapezoid(gamma, dt, cum);
        for (int i = 0; i < n; ++i) ctx.damp[i] = std::exp(-0.5 * cum[i]);
    }
    return ctx;
}

int FieldContext::index_of(double t) const {
    const double dt = grid.dt();
    const double x = t / dt;
    const long long i = std::llround(x);
    if (i < 0 || i >= grid.total_steps() || std::abs(x - static_cast<double>(i)) > 1e-6)
        throw std::invalid_argument("field context: time does not lie on the grid");
    return static_cast<int>(i);
}

double action(const FieldContext& ctx, Vec2 p, int i_t, int i_t1) {
    if (i_t1 > i_t) throw std::invalid_argument("action: ionization time after recombination time");
    const double tau = (i_t - i_t1) * ctx.grid.dt();
    const double d_ia_par = ctx.ia_par[i_t] - ctx.ia_par[i_t1];
    const double d_ia_perp = ctx.ia_perp[i_t] - ctx.ia_perp[i_t1];
    const double d_ia2 = ctx.ia2[i_t] - ctx.ia2[i_t1];
    const double p2 = p.par * p.par + p.perp * p.perp;
    return (0.5 * p2 + ctx.i_p) * tau + p.par * d_ia_par + p.perp * d_ia_perp + 0.5 * d_ia2;
}

double action(const FieldContext& ctx, Vec2 p, double t, double t1) {
    return action(ctx, p, ctx.index_of(t), ctx.index_of(t1));
}

Vec2 stationary_momentum(const FieldContext& ctx, int i_t, int i_t1) {
    if (i_t1 >= i_t) throw std::invalid_argument("stationary_momentum: requires a positive excursion");
    const double inv_tau = 1.0 / ((i_t - i_t1) * ctx.grid.dt());
    return {-(ctx.ia_par[i_t] - ctx.ia_par[i_t1]) * inv_tau,
            -(ctx.ia_perp[i_t] - ctx.ia_perp[i_t1]) * inv_tau};
}

Vec2 stationary_momentum(const FieldContext& ctx, double t, double t1) {
    return stationary_momentum(ctx, ctx.index_of(t), ctx.index_of(t1));
}

CVec2 bound_continuum_dipole(Vec2 v, double i_p) {
    const double two_ip = 2.0 * i_p;
    const double scale = std::pow(2.0, 3.5) * std::pow(two_ip, 1.25) / pi;
    const double den = v.par * v.par + v.perp * v.perp + two_ip;
    const double factor = scale / (den * den * den);
    return {std::complex<double>(0.0, factor * v.par), std::complex<double>(0.0, factor * v.perp)};
}

double adk_rate(double e_inst, double i_p) {
    if (e_inst < 0.0) throw std::invalid_argument("adk_rate: field magnitude must be >= 0");
    if (e_inst == 0.0) return 0.0;
    const double kappa = std::pow(2.0 * i_p, 1.5);  // (2 I_p)^{3/2}
    return 4.0 * kappa * (2.0 * i_p) / e_inst * std::exp(-2.0 * kappa / (3.0 * e_inst));
}

DipoleRecord compute_dipole(const FieldRealization& realization, const DriverConfig& config,
                            const SfaGrid& grid, const DipoleOptions& options) {
    grid.validate(config.carrier);

    const FieldContext ctx = FieldContext::build(realization, config, grid, options.depletion);
    const int n = grid.n_t;
    const int lead = grid.lead_steps();
    const double dt = grid.dt();
    const int cap =
        std::min<int>(grid.total_steps() - 1, static_cast<int>(std::floor(grid.max_excursion / dt + 1e-9)));
    const double two_ip = 2.0 * config.ionization_potential;
    const double i_p = config.ionization_potential;
    const double me_scale = std::pow(2.0, 3.5) * std::pow(two_ip, 1.25) / pi;
    const double me_scale2 = me_scale * me_scale;

    // Wavepacket-spreading prefactor per excursion step; tabulated once.
    std::vector<std::complex<double>> pref(cap + 1);
    for (int k = 1; k <= cap; ++k)
        pref[k] = std::pow(std::complex<double>(pi, 0.0) /
                               std::complex<double>(grid.regularization, 0.5 * k * dt),
                           1.5);

    DipoleRecord rec;
    rec.n_t = n;
    rec.dt = dt;
    rec.omega_step = 2.0 * pi / (n * dt);
    rec.d_par.assign(n, 0.0);
    rec.d_perp.assign(n, 0.0);
    rec.weight = realization.weight;

    const double* e_par = ctx.e_par.data();
    const double* e_perp = ctx.e_perp.data();
    const double* a_par = ctx.a_par.data();
    const double* a_perp = ctx.a_perp.data();
    const double* ia_par = ctx.ia_par.data();
    const double* ia_perp = ctx.ia_perp.data();
    const double* ia2 = ctx.ia2.data();
    const double* damp = ctx.damp.data();

    // Each output time owns its ionization-time sum; no cross-time state, so
    // the partition across threads cannot change the result.
#pragma omp parallel for schedule(dynamic, 16)
    for (int iout = 0; iout < n; ++iout) {
        const int it = lead + iout;  // global grid index; births may reach into the lead-in
        std::complex<double> acc_par(0.0, 0.0);
        std::complex<double> acc_perp(0.0, 0.0);
        const int kmax = std::min(cap, it);
        const double ia_par_t = ia_par[it];
        const double ia_perp_t = ia_perp[it];
        const double ia2_t = ia2[it];
        const double ap_t = a_par[it];
        const double aq_t = a_perp[it];
        const double damp_t = damp[it];
        for (int k = 1; k <= kmax; ++k) {
            const int i1 = it - k;
            const double tau = k * dt;
            const double inv_tau = 1.0 / tau;
            const double d_ia_par = ia_par_t - ia_par[i1];
            const double d_ia_perp = ia_perp_t - ia_perp[i1];
            const double ps_par = -d_ia_par * inv_tau;
            const double ps_perp = -d_ia_perp * inv_tau;
            const double s_action =
                i_p * tau +
                0.5 * ((ia2_t - ia2[i1]) - (d_ia_par * d_ia_par + d_ia_perp * d_ia_perp) * inv_tau);

            const double v1_par = ps_par + a_par[i1];
            const double v1_perp = ps_perp + a_perp[i1];
            const double vt_par = ps_par + ap_t;
            const double vt_perp = ps_perp + aq_t;

            const double den1 = v1_par * v1_par + v1_perp * v1_perp + two_ip;
            const double dent = vt_par * vt_par + vt_perp * vt_perp + two_ip;
            const double ion = (e_par[i1] * v1_par + e_perp[i1] * v1_perp) / (den1 * den1 * den1);
            const double trap_w = (k == kmax) ? 0.5 : 1.0;
            const double amp =
                me_scale2 * ion / (dent * dent * dent) * damp[i1] * damp_t * trap_w;

            const std::complex<double> phase(std::cos(s_action), -std::sin(s_action));
            const std::complex<double> term = pref[k] * phase * amp;
            acc_par += term * vt_par;
            acc_perp += term * vt_perp;
        }
        // + c.c. makes the dipole real.
        rec.d_par[iout] = 2.0 * acc_par.real() * dt;
        rec.d_perp[iout] = 2.0 * acc_perp.real() * dt;
    }

    if (options.hann_window) {
        for (int i = 0; i < n; ++i) {
            const double w = 0.5 * (1.0 - std::cos(2.0 * pi * i / (n - 1)));
            rec.d_par[i] *= w;
            rec.d_perp[i] *= w;
        }
    }

    rec.spec_par.resize(n / 2 + 1);
    rec.spec_perp.resize(n / 2 + 1);
    detail::real_fft(rec.d_par.data(), n, rec.spec_par.data());
    detail::real_fft(rec.d_perp.data(), n, rec.spec_perp.data());
    for (auto& c : rec.spec_par) c *= dt;
    for (auto& c : rec.spec_perp) c *= dt;
    return rec;
}

}  // namespace qhhg
