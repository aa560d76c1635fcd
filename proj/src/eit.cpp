#include "eit.hpp"

#include "errors.hpp"
#include "integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace hqg {

namespace {

constexpr double k_boltzmann = 1.380649e-23; // J/K

void check_schedule(const ControlSchedule& s) {
    if (!(s.peak > 0.0) || !(s.rate > 0.0) || !(s.total_time > 0.0))
        throw config_error("control schedule: peak, rate and total_time must be positive");
    if (!(s.off_time < s.on_time) || !(s.on_time < s.total_time))
        throw config_error("control schedule: need off_time < on_time < total_time");
    if (!(s.floor_fraction > 0.0) || s.floor_fraction >= 1.0)
        throw config_error("control schedule: floor_fraction must be in (0, 1)");
}

} // namespace

ControlValue control_amplitude(const ControlSchedule& s, double t) {
    check_schedule(s);
    const double u_on = s.rate * (t - s.on_time);
    const double u_off = s.rate * (t - s.off_time);
    const double raw = s.peak * 0.5 * (2.0 + std::tanh(u_on) - std::tanh(u_off));
    const double floor = s.floor_fraction * s.peak;
    if (raw <= floor)
        return {floor, 0.0};
    const double ch_on = std::cosh(u_on), ch_off = std::cosh(u_off);
    const double deriv =
        s.peak * 0.5 * s.rate * (1.0 / (ch_on * ch_on) - 1.0 / (ch_off * ch_off));
    return {raw, deriv};
}

Mixing mixing_eta(double control_amplitude, double coupling, double atom_count) {
    const double g2n = coupling * coupling * atom_count;
    const double o2 = control_amplitude * control_amplitude;
    if (!(g2n + o2 > 0.0))
        throw config_error("mixing fraction undefined: g^2 N + Omega^2 is zero");
    const double eta = g2n / (g2n + o2);
    return {eta, speed_of_light * (1.0 - eta)};
}

PdeCoefficients pde_coefficients(const EitChannelParams& p, double t) {
    const ControlValue c = control_amplitude(p.schedule, t);
    const double eta = mixing_eta(c.amplitude, p.coupling, p.atom_count).eta;
    const double log_deriv = c.derivative / c.amplitude;
    const double inv_o2 = 1.0 / (c.amplitude * c.amplitude);
    const double one_m = 1.0 - eta;
    PdeCoefficients out;
    out.gain = eta * (log_deriv - p.gamma_bc);
    out.spreading = one_m * one_m * eta * inv_o2 *
                    ((2.0 * p.gamma_bc + p.gamma_ba) - 6.0 * log_deriv);
    out.dispersion = one_m * one_m * one_m * eta * inv_o2;
    return out;
}

StorageTransfer storage_transfer(const SampledMode& input, const EitChannelParams& p) {
    check_schedule(p.schedule);
    if (!(p.coupling > 0.0) || !(p.atom_count > 0.0))
        throw config_error("storage channel: coupling and atom count must be positive");
    if (p.gamma_bc < 0.0 || p.gamma_ba < 0.0)
        throw config_error("storage channel: decay rates must be non-negative");

    StorageTransfer out;
    out.grid = input.grid;

    const double T = p.schedule.total_time;
    // The integrand magnitudes differ by twenty orders between channels and
    // coefficients, so the quadrature tolerance is taken relative to a scanned
    // scale max|f| * T of each integrand rather than as a bare absolute number.
    auto integrate_scaled = [T](auto&& f, double rel_tol) {
        double peak = 0.0;
        const int scan = 2049;
        for (int i = 0; i < scan; ++i)
            peak = std::max(peak, std::abs(f(T * i / (scan - 1))));
        if (peak == 0.0) return 0.0;
        return integrate_adaptive(f, 0.0, T, rel_tol * peak * T);
    };
    auto gain_f = [&](double t) { return pde_coefficients(p, t).gain; };
    auto spread_f = [&](double t) { return pde_coefficients(p, t).spreading; };
    auto disp_f = [&](double t) { return pde_coefficients(p, t).dispersion; };

    // The gain integrand carries +-O(10) ramp areas that cancel over the closed
    // cycle, so it gets a tighter tolerance than the positive-definite terms.
    out.gain_integral = integrate_scaled(gain_f, 1e-12);
    out.spreading_integral = integrate_scaled(spread_f, 1e-10);
    out.dispersion_integral = integrate_scaled(disp_f, 1e-10);

    // Adiabaticity scan: ramps must be slow against the instantaneous
    // normal-mode splitting or the dark-state treatment degrades.
    const double g2n = p.coupling * p.coupling * p.atom_count;
    double worst = 0.0;
    const int scan = 4001;
    for (int i = 0; i < scan; ++i) {
        const double t = T * i / (scan - 1);
        const ControlValue c = control_amplitude(p.schedule, t);
        const double measure = std::abs(c.derivative) / (g2n + c.amplitude * c.amplitude);
        worst = std::max(worst, measure);
    }
    if (worst > 0.1) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "adiabaticity: |dOmega/dt|/(g^2 N + Omega^2) reaches %.3g (> 0.1); "
                      "storage transfer may be unreliable", worst);
        out.warnings.emplace_back(buf);
    }

    out.chi.resize(out.grid.n_points);
    out.phase.resize(out.grid.n_points);
    double kept_sq = 0.0, total_sq = 0.0;
    for (int i = 0; i < out.grid.n_points; ++i) {
        const double w = out.grid.point(i);
        const double k = w / speed_of_light;
        const double att =
            out.gain_integral - k * k * speed_of_light * speed_of_light * out.spreading_integral;
        out.chi[i] = std::exp(att);
        out.phase[i] = k * k * k * speed_of_light * speed_of_light * speed_of_light *
                       out.dispersion_integral;
        if (!(out.chi[i] <= 1.0 + 1e-12))
            throw numeric_error("storage transfer: attenuation exceeds unity");
        const double wgt = trapezoid_weight(out.grid, i) * std::norm(input.amp[i]);
        kept_sq += wgt * out.chi[i] * out.chi[i];
        total_sq += wgt;
    }
    if (!(total_sq > 0.0))
        throw numeric_error("storage transfer: input mode has zero norm");
    kept_sq /= total_sq;
    kept_sq = std::clamp(kept_sq, 0.0, 1.0);
    out.kept_amplitude = std::sqrt(kept_sq);
    out.lost_amplitude = std::sqrt(1.0 - kept_sq);
    return out;
}

SampledMode apply_storage(const SampledMode& input, const StorageTransfer& t) {
    if (!input.grid.same_as(t.grid))
        throw config_error("apply_storage: mode and transfer grids differ");
    SampledMode out;
    out.grid = input.grid;
    out.amp.resize(input.amp.size());
    for (int i = 0; i < input.grid.n_points; ++i)
        out.amp[i] = input.amp[i] * std::polar(t.chi[i], t.phase[i]);
    return out;
}

std::pair<double, double> balance_losses(double kept_a, double kept_b) {
    if (!(kept_a > 0.0) || !(kept_b > 0.0))
        throw numeric_error("balance_losses: kept amplitudes must be positive");
    const double low = std::min(kept_a, kept_b);
    return {low / kept_a, low / kept_b};
}

DopplerRates doppler_dephasing(double temperature, double k_lower_leg,
                               double k_upper_leg, double atomic_mass) {
    if (temperature < 0.0)
        throw config_error("doppler_dephasing: temperature must be non-negative");
    if (!(atomic_mass > 0.0))
        throw config_error("doppler_dephasing: mass must be positive");
    const double dk = std::abs(k_lower_leg - k_upper_leg);
    const double thermal = k_boltzmann * temperature / atomic_mass; // m^2/s^2
    DopplerRates r;
    r.rate_linear = dk * thermal;
    r.rate_sqrt = dk * std::sqrt(thermal);
    r.note = "dephasing estimate is dimensionally ambiguous; rate_linear evaluates "
             "|delta_k|*kB*T/m literally, rate_sqrt uses the rms thermal velocity";
    return r;
}

} // namespace hqg
