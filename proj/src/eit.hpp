#pragma once

// Photon storage and retrieval in an atomic ensemble under a ramped control
// field. The stage is modeled as a spectral transfer acting on the input mode:
// each frequency component acquires a real attenuation chi(omega) and a phase
// phi(omega), accumulated over one store/hold/retrieve cycle of the control
// schedule. The wavevector entering the attenuation and dispersion terms is
// the detuning mapping k = omega / c, and the overall free-propagation phase
// k*v*T is dropped (co-moving frame), so chi and phi capture only distortion.

#include "spectral.hpp"

#include <string>
#include <utility>
#include <vector>

namespace hqg {

// Control Rabi amplitude Omega(t) (rad/s): high during write and read ramps,
// near zero during the hold window.
//   Omega(t) = peak * (2 + tanh(rate*(t - on_time)) - tanh(rate*(t - off_time))) / 2
// with off_time < on_time. The amplitude is clamped from below at
// floor_fraction * peak; the reported derivative is that of the clamped
// schedule (zero on the floor), which preserves the exact cancellation of the
// d(ln Omega) path integral over a full cycle.
struct ControlSchedule {
    double peak = 0.0;           // rad/s
    double rate = 0.0;           // 1/s, ramp steepness
    double off_time = 0.0;       // s, center of the switch-off ramp
    double on_time = 0.0;        // s, center of the switch-on ramp
    double total_time = 0.0;     // s, cycle length; amplitude evaluated on [0, total_time]
    double floor_fraction = 1e-6;
};

struct ControlValue {
    double amplitude;   // rad/s
    double derivative;  // rad/s^2
};

ControlValue control_amplitude(const ControlSchedule& s, double t);

struct EitChannelParams {
    ControlSchedule schedule;
    double coupling = 0.0;       // single-atom coupling g, rad/s
    double atom_count = 0.0;     // N
    double gamma_bc = 0.0;       // spin-wave decoherence, rad/s
    double gamma_ba = 0.0;       // optical coherence decay, rad/s
    double medium_length = 0.0;  // m
};

// Dark-state mixing fraction eta = g^2 N / (g^2 N + Omega^2) and the matching
// group velocity c * (1 - eta).
struct Mixing {
    double eta;
    double group_velocity; // m/s
};
Mixing mixing_eta(double control_amplitude, double coupling, double atom_count);

// Instantaneous coefficients of the moving-frame envelope equation
//   d(ln f)/dt = gain - k^2 c^2 * spreading + i k^3 c^3 * dispersion
// evaluated at time t of the schedule:
//   gain       = eta * (dOmega/dt / Omega - gamma_bc)
//   spreading  = (1 - eta)^2 * eta / Omega^2 * ((2 gamma_bc + gamma_ba) - 6 dOmega/dt / Omega)
//   dispersion = (1 - eta)^3 * eta / Omega^2
// The (1-eta) powers from the group-velocity factors are included here so the
// caller integrates the coefficients over time directly.
struct PdeCoefficients {
    double gain;        // 1/s
    double spreading;   // s  (multiplies k^2 c^2)
    double dispersion;  // s^2 (multiplies k^3 c^3)
};
PdeCoefficients pde_coefficients(const EitChannelParams& p, double t);

// Result of integrating the envelope equation over one full cycle, sampled on
// the grid of the input mode.
struct StorageTransfer {
    FrequencyGrid grid;
    std::vector<double> chi;    // amplitude attenuation per frequency, in (0, 1]
    std::vector<double> phase;  // accumulated dispersive phase per frequency
    double kept_amplitude = 0.0; // c1o: norm of the transmitted component of the input
    double lost_amplitude = 0.0; // c2o = sqrt(1 - c1o^2)
    double gain_integral = 0.0;       // integral of gain dt (<= 0 for lossy media)
    double spreading_integral = 0.0;  // integral of spreading dt
    double dispersion_integral = 0.0; // integral of dispersion dt
    std::vector<std::string> warnings; // adiabaticity and sampling diagnostics
};

// Integrates the cycle for the given channel and input mode. The three time
// integrals are evaluated with adaptive Simpson quadrature (absolute tolerance
// 1e-10 relative to the integrand scale); chi uses the identity
//   chi(omega) = exp(gain_integral - (omega/c)^2 c^2 * spreading_integral)
// and phase(omega) = (omega/c)^3 c^3 * dispersion_integral. Emits a warning
// when the adiabaticity measure |dOmega/dt| / (g^2 N + Omega^2) exceeds 0.1
// anywhere on the cycle.
StorageTransfer storage_transfer(const SampledMode& input, const EitChannelParams& p);

// Applies the transfer to a mode on the same grid; output is not renormalized,
// so its norm equals the kept amplitude for the mode the transfer was built from.
SampledMode apply_storage(const SampledMode& input, const StorageTransfer& t);

// Attenuates the better channel to the worse one: returns the multipliers
// (scale_a, scale_b) with min(kept_a, kept_b)/kept on the better channel and
// 1 on the worse, so both end up with equal kept amplitude.
std::pair<double, double> balance_losses(double kept_a, double kept_b);

// Residual motional dephasing rate for a spin wave written with a wavevector
// mismatch |delta_k| = |k_lower_leg - k_upper_leg| between the two optical
// legs. Two readings of the same estimate are returned because the literal
// form is dimensionally a wavenumber times a squared velocity: rate_linear
// evaluates |delta_k| * kB T / m as written (linear in T, zero at T = 0) and
// rate_sqrt reads the thermal factor as an rms velocity,
// |delta_k| * sqrt(kB T / m). Both are magnitudes; callers choose one and
// report the ambiguity; neither is silently preferred.
struct DopplerRates {
    double rate_linear; // 1/s
    double rate_sqrt;   // 1/s
    std::string note;
};
DopplerRates doppler_dephasing(double temperature, double k_lower_leg,
                               double k_upper_leg, double atomic_mass);

} // namespace hqg
