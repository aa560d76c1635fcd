#include "cqed.hpp"

#include "errors.hpp"
#include "ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hqg {

namespace {

void check_params(const CqedParams& p) {
    if (!(p.kappa > 0.0) || !std::isfinite(p.kappa))
        throw config_error("cavity coupling rate kappa must be positive");
    if (p.kappa_s < 0.0 || !std::isfinite(p.kappa_s))
        throw config_error("cavity internal loss kappa_s must be non-negative");
    if (p.gamma_s < 0.0 || !std::isfinite(p.gamma_s))
        throw config_error("emitter decay gamma_s must be non-negative");
    if (p.coupling < 0.0 || !std::isfinite(p.coupling))
        throw config_error("emitter coupling g must be non-negative");
}

double effective_coupling(const CqedParams& p) {
    return p.occupied ? p.coupling : 0.0;
}

} // namespace

double cooperativity(const CqedParams& p) {
    check_params(p);
    double denom = p.kappa * p.gamma_s;
    if (denom <= 0.0) return std::numeric_limits<double>::infinity();
    return p.coupling * p.coupling / denom;
}

cplx transfer_c1(const CqedParams& p, double omega) {
    check_params(p);
    double g = effective_coupling(p);
    cplx iw(0.0, omega);
    if (g == 0.0) {
        // Bare cavity: the emitter factors (i w - gamma_s) cancel exactly.
        // Dividing them out keeps the resonance point well defined when
        // gamma_s = 0, where the raw quotient would be 0/0.
        return (iw - 0.5 * (p.kappa_s - p.kappa)) /
               (iw - 0.5 * (p.kappa_s + p.kappa));
    }
    cplx num = (iw - 0.5 * (p.kappa_s - p.kappa)) * (iw - p.gamma_s) + g * g;
    cplx den = (iw - 0.5 * (p.kappa_s + p.kappa)) * (iw - p.gamma_s) + g * g;
    return num / den;
}

cplx transfer_c2(const CqedParams& p, double omega) {
    check_params(p);
    if (p.kappa_s == 0.0) return cplx(0.0, 0.0);
    double g = effective_coupling(p);
    cplx iw(0.0, omega);
    if (g == 0.0) {
        // gamma_eff reduces to gamma_s, so the emitter factors cancel here
        // too (same degeneracy at gamma_s = 0 as in transfer_c1).
        return std::sqrt(p.kappa * p.kappa_s) /
               (iw - 0.5 * (p.kappa_s + p.kappa));
    }
    double gamma_eff = std::sqrt(p.gamma_s * p.gamma_s +
                                 2.0 * g * g * p.gamma_s / p.kappa_s);
    cplx num = std::sqrt(p.kappa * p.kappa_s) * (iw - gamma_eff);
    cplx den = (iw - 0.5 * (p.kappa_s + p.kappa)) * (iw - p.gamma_s) + g * g;
    return num / den;
}

TransferPair transfer_functions(const FrequencyGrid& grid, const CqedParams& p) {
    check_params(p);
    TransferPair out;
    out.grid = grid;
    out.c1.resize(static_cast<std::size_t>(grid.n_points));
    out.c2.resize(static_cast<std::size_t>(grid.n_points));
    double g = effective_coupling(p);
    if (p.kappa_s == 0.0) {
        out.gamma_eff = std::numeric_limits<double>::infinity();
    } else {
        out.gamma_eff = std::sqrt(p.gamma_s * p.gamma_s +
                                  2.0 * g * g * p.gamma_s / p.kappa_s);
    }
    for (int i = 0; i < grid.n_points; ++i) {
        double w = grid.point(i);
        out.c1[static_cast<std::size_t>(i)] = transfer_c1(p, w);
        out.c2[static_cast<std::size_t>(i)] = transfer_c2(p, w);
    }
    return out;
}

double reflection_phase(const CqedParams& p) {
    cplx r = transfer_c1(p, 0.0);
    if (std::abs(r) < 1e-300)
        throw numeric_error("reflection amplitude vanishes at resonance; "
                            "phase undefined");
    // Complex division can land on the negative real axis with a -0 imaginary
    // part, where atan2 reports -pi; the mirror phase convention is +pi there.
    if (r.imag() == 0.0) return r.real() > 0.0 ? 0.0 : pi;
    return std::arg(r);
}

cplx mode_overlap_lambda(const SampledMode& f, const TransferPair& t) {
    if (!f.grid.same_as(t.grid))
        throw config_error("mode and transfer pair live on different grids");
    cplx acc(0.0, 0.0);
    for (int i = 0; i < f.grid.n_points; ++i) {
        std::size_t k = static_cast<std::size_t>(i);
        acc += trapezoid_weight(f.grid, i) * std::norm(f.amp[k]) * std::conj(t.c1[k]);
    }
    return acc;
}

namespace {

double weighted_mean(const SampledMode& f, const TransferPair& t,
                     const std::vector<cplx>& channel) {
    if (!f.grid.same_as(t.grid))
        throw config_error("mode and transfer pair live on different grids");
    double acc = 0.0;
    for (int i = 0; i < f.grid.n_points; ++i) {
        std::size_t k = static_cast<std::size_t>(i);
        acc += trapezoid_weight(f.grid, i) * std::norm(f.amp[k]) * std::norm(channel[k]);
    }
    return acc;
}

} // namespace

double kept_fraction(const SampledMode& f, const TransferPair& t) {
    return weighted_mean(f, t, t.c1);
}

double lost_fraction(const SampledMode& f, const TransferPair& t) {
    return weighted_mean(f, t, t.c2);
}

cplx drive_value(const GaussianDrive& d, double t) {
    if (!(d.duration > 0.0)) throw config_error("drive duration must be positive");
    // L2-normalized: integral |env|^2 dt = 1 for env = norm * exp(-4 u^2).
    double norm = std::sqrt(1.0 / (d.duration * std::sqrt(pi / 8.0)));
    double u = (t - d.center) / d.duration;
    return cplx(d.amplitude * norm * std::exp(-4.0 * u * u), 0.0);
}

MeanFieldTrajectory simulate_mean_field(const CqedParams& p,
                                        const std::function<cplx(double)>& b_in,
                                        double t0, double t1, int n_samples,
                                        double rel_tol, double field_scale_hint) {
    check_params(p);
    if (!(t1 > t0)) throw config_error("mean-field time span must be increasing");
    if (n_samples < 16)
        throw config_error("mean-field sampling needs at least 16 points");
    if (!(rel_tol >= 1e-12 && rel_tol <= 1e-6))
        throw config_error("mean-field tolerance must lie in [1e-12, 1e-6]");

    double g = effective_coupling(p);
    double kappa_t = p.kappa + p.kappa_s;
    double sqrt_kappa = std::sqrt(p.kappa);

    // State layout: [Re a, Im a, Re s, Im s, sz, Re a_lin, Im a_lin,
    //                Re s_lin, Im s_lin].
    auto rhs = [&](double t, const double* y, double* dy) {
        cplx a(y[0], y[1]), s(y[2], y[3]);
        double sz = y[4];
        cplx al(y[5], y[6]), sl(y[7], y[8]);
        cplx drive = sqrt_kappa * b_in(t);
        cplx ig(0.0, g);

        cplx da = -0.5 * kappa_t * a - ig * s - drive;
        cplx ds = -p.gamma_s * s + 2.0 * ig * a * sz;
        double dsz = -2.0 * p.gamma_s * (sz + 0.5) +
                     (ig * (std::conj(a) * s - a * std::conj(s))).real();
        cplx dal = -0.5 * kappa_t * al - ig * sl - drive;
        cplx dsl = -p.gamma_s * sl - ig * al;

        dy[0] = da.real(); dy[1] = da.imag();
        dy[2] = ds.real(); dy[3] = ds.imag();
        dy[4] = dsz;
        dy[5] = dal.real(); dy[6] = dal.imag();
        dy[7] = dsl.real(); dy[8] = dsl.imag();
    };

    std::vector<double> y(9, 0.0);
    y[4] = -0.5;

    MeanFieldTrajectory out;
    out.times.resize(static_cast<std::size_t>(n_samples));
    double dt = (t1 - t0) / (n_samples - 1);
    for (int i = 0; i < n_samples; ++i)
        out.times[static_cast<std::size_t>(i)] = t0 + dt * i;
    out.times.back() = t1;

    std::size_t n = static_cast<std::size_t>(n_samples);
    out.input.resize(n);
    out.cavity.resize(n);
    out.spin.resize(n);
    out.inversion.resize(n);
    out.output.resize(n);
    out.cavity_lin.resize(n);
    out.spin_lin.resize(n);
    out.output_lin.resize(n);

    auto observer = [&](std::size_t idx, double t, const double* s) {
        cplx bin = b_in(t);
        cplx a(s[0], s[1]);
        cplx al(s[5], s[6]);
        out.input[idx] = bin;
        out.cavity[idx] = a;
        out.spin[idx] = cplx(s[2], s[3]);
        out.inversion[idx] = s[4];
        out.output[idx] = bin + sqrt_kappa * a;
        out.cavity_lin[idx] = al;
        out.spin_lin[idx] = cplx(s[7], s[8]);
        out.output_lin[idx] = bin + sqrt_kappa * al;
    };

    OdeOptions opt;
    opt.rel_tol = rel_tol;
    // Field amplitudes scale with the drive; sigma_z is O(1). A uniform
    // absolute floor well below both keeps the error control meaningful for
    // weak drives without rejecting the vacuum segments.
    double scale = std::max(std::abs(field_scale_hint), 1e-6);
    opt.abs_tol = std::max(1e-300, rel_tol * 1e-3 * scale);

    integrate_dp5(9, rhs, t0, t1, y, out.times, observer, opt);
    return out;
}

double inversion_drift(const MeanFieldTrajectory& t) {
    double worst = 0.0;
    for (double sz : t.inversion) worst = std::max(worst, std::abs(sz + 0.5));
    return worst;
}

double linearization_drift_estimate(const CqedParams& p, double amplitude) {
    check_params(p);
    if (p.coupling <= 0.0) return 0.0;
    return 2.0 * p.kappa * p.gamma_s * amplitude * amplitude /
           (p.coupling * p.coupling);
}

CouplingRateReadings derive_coupling_rate(double cavity_omega, double mode_volume,
                                          double dipole_moment, double mode_profile,
                                          double kappa) {
    if (!(cavity_omega > 0.0) || !(mode_volume > 0.0))
        throw config_error("coupling rate inputs must be positive");
    constexpr double hbar = 1.054571817e-34;
    constexpr double eps0 = 8.8541878128e-12;
    double field_half = std::sqrt(hbar * cavity_omega / (2.0 * eps0 * mode_volume));
    CouplingRateReadings r;
    r.standard = field_half * dipole_moment * mode_profile / hbar;
    r.no_half = r.standard * std::sqrt(2.0);
    r.over_kappa = (kappa > 0.0) ? r.standard / kappa : 0.0;
    r.note = "vacuum-field reading with the conventional 1/2 under the root; "
             "no_half drops it; over_kappa keeps a trailing 1/kappa "
             "(dimensionless, so not a rate)";
    return r;
}

double coplanar_mode_volume(double electrode_distance, double cavity_length) {
    if (!(electrode_distance > 0.0) || !(cavity_length > 0.0))
        throw config_error("mode volume dimensions must be positive");
    return 0.5 * pi * electrode_distance * electrode_distance * cavity_length;
}

} // namespace hqg
