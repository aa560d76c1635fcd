#pragma once

// Microwave cavity reflection stage. The qubit-state-dependent response is a
// one-sided cavity (in/out coupling kappa, internal loss kappa_s) whose field
// couples with strength g to a two-level emitter when the emitter is present
// (occupied channel) and is bare otherwise. Frequency domain carries the
// linear transfer pair (C1 to the output, C2 to a lossy environment mode);
// time domain carries the mean-field equations used to validate linearity.
//
// Sign conventions are fixed by the steady-state solution
//   <a_c> = -2 sqrt(kappa) alpha gamma_s / (2 g^2 + kappa gamma_s):
// the drive enters as -sqrt(kappa) b_in, and consistency with C1 (which sends
// the empty lossless cavity to a pi reflection at resonance) then requires
//   b_out = b_in + sqrt(kappa) a_c.

#include "spectral.hpp"

#include <functional>
#include <string>
#include <vector>

namespace hqg {

struct CqedParams {
    double coupling = 0.0;   // g, rad/s; ignored (treated as 0) when not occupied
    double kappa = 0.0;      // external in/out rate, rad/s
    double kappa_s = 0.0;    // internal loss rate, rad/s
    double gamma_s = 0.0;    // emitter amplitude decay, rad/s
    bool occupied = false;
};

// g^2 / (kappa gamma_s); +infinity for a lossless emitter.
double cooperativity(const CqedParams& p);

// Sampled reflection/loss transfer pair on a grid. For kappa_s = 0 the loss
// channel is reported empty (c2 identically zero) and gamma_eff is +infinity;
// that sentinel combination only conserves probability when the occupied
// emitter is lossless as well (gamma_s * g = 0).
struct TransferPair {
    FrequencyGrid grid;
    std::vector<cplx> c1;
    std::vector<cplx> c2;
    double gamma_eff = 0.0; // rad/s, sqrt(gamma_s^2 + 2 g^2 gamma_s / kappa_s)
};

cplx transfer_c1(const CqedParams& p, double omega);
cplx transfer_c2(const CqedParams& p, double omega);
TransferPair transfer_functions(const FrequencyGrid& grid, const CqedParams& p);

// arg C1(0). Exactly pi for the empty lossless cavity; throws numeric_error
// at critical coupling of the empty cavity (kappa_s == kappa), where C1(0)=0.
double reflection_phase(const CqedParams& p);

// Lambda = integral |f(omega)|^2 conj(C1(omega)) d omega for a normalized
// input mode: the amplitude overlap between the reflected and incident
// temporal modes. A constant C1 = e^{i theta} gives Lambda = e^{-i theta};
// |1 + Lambda| measures the distance from an ideal pi-phase mirror.
cplx mode_overlap_lambda(const SampledMode& f, const TransferPair& t);

// integral |f|^2 |C1|^2 and |f|^2 |C2|^2 (P and Q); P + Q = 1 when the pair
// is complete.
double kept_fraction(const SampledMode& f, const TransferPair& t);
double lost_fraction(const SampledMode& f, const TransferPair& t);

// Mean-field trajectories on a uniform time grid. The full system evolves
//   a'  = -(kappa+kappa_s)/2 a - i g sigma - sqrt(kappa) b_in(t)
//   s'  = -gamma_s sigma + 2 i g a sigma_z
//   sz' = -2 gamma_s (sigma_z + 1/2) + i g (conj(a) sigma - a conj(sigma))
// from the vacuum state sigma_z(0) = -1/2. The linearized companion clamps
// sigma_z at -1/2 and is integrated jointly with the full system, so the two
// trajectories share step sizes and their difference isolates the
// nonlinearity instead of integrator noise.
struct MeanFieldTrajectory {
    std::vector<double> times;
    std::vector<cplx> input;       // b_in samples
    std::vector<cplx> cavity;      // a(t), full system
    std::vector<cplx> spin;        // sigma(t), full system
    std::vector<double> inversion; // sigma_z(t), full system
    std::vector<cplx> output;      // b_out(t), full system
    std::vector<cplx> cavity_lin;
    std::vector<cplx> spin_lin;
    std::vector<cplx> output_lin;
};

// Drive envelope helper: unit-L2-norm Gaussian with the same 1/e^2 intensity
// width convention as the optical pulse, so b_in = amplitude * envelope makes
// |amplitude|^2 the pulse photon number.
struct GaussianDrive {
    double amplitude = 0.0; // sqrt(photon number)
    double duration = 0.0;  // s
    double center = 0.0;    // s
};
cplx drive_value(const GaussianDrive& d, double t);

// Integrates the joint full/clamped system under the given drive; rel_tol
// must lie in [1e-12, 1e-6]. Samples on a uniform grid of n_samples points
// (at least 16, so sampled vectors resolve more than endpoint values).
MeanFieldTrajectory simulate_mean_field(const CqedParams& p,
                                        const std::function<cplx(double)>& b_in,
                                        double t0, double t1, int n_samples,
                                        double rel_tol = 1e-9,
                                        double field_scale_hint = 1.0);

// Largest deviation of sigma_z from -1/2 along the trajectory.
double inversion_drift(const MeanFieldTrajectory& t);

// Accumulated inversion drift expected from the linear response,
// 2 kappa gamma_s |amplitude|^2 / g^2, valid for a slow unit-norm pulse.
double linearization_drift_estimate(const CqedParams& p, double amplitude);

// Emitter-cavity coupling rate from the cavity geometry. The defining
// expression circulates in inequivalent forms, so all three readings are
// returned: the standard vacuum field sqrt(hbar w_c / (2 eps0 V_c)) * dipole
// * profile / hbar, the same without the factor 1/2 under the root, and a
// variant carrying a trailing division by kappa (dimensionally a ratio, not
// a rate).
struct CouplingRateReadings {
    double standard;     // rad/s
    double no_half;      // rad/s, sqrt(2) larger
    double over_kappa;   // standard / kappa
    std::string note;
};
CouplingRateReadings derive_coupling_rate(double cavity_omega, double mode_volume,
                                          double dipole_moment, double mode_profile,
                                          double kappa);

// Effective confinement volume between coplanar electrodes, (pi/2) w^2 L.
double coplanar_mode_volume(double electrode_distance, double cavity_length);

} // namespace hqg
