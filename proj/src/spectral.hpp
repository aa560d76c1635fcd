#pragma once

// Frequency-domain representation of temporal pulse modes. Everything in this
// project that touches a pulse shape goes through the uniform grids defined
// here, so that overlap integrals of different processing stages are taken on
// identical sample points.

#include <complex>
#include <functional>
#include <vector>

namespace hqg {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double speed_of_light = 299792458.0; // m/s

// Uniform grid of angular frequencies (rad/s), detunings from the carrier.
struct FrequencyGrid {
    double center = 0.0;  // rad/s
    double span = 0.0;    // rad/s, full width: points cover [center-span/2, center+span/2]
    int n_points = 0;     // >= 2

    double spacing() const { return span / (n_points - 1); }
    double point(int i) const { return center - 0.5 * span + spacing() * i; }
    bool same_as(const FrequencyGrid& other) const;
};

// Validates invariants (finite span > 0, n_points >= 2); throws config_error.
FrequencyGrid make_grid(double center, double span, int n_points);

// Grid sized for a pulse of the given duration: span = span_factor * (2*pi/duration),
// centered at zero detuning. Defaults give 16 bandwidths at 2049 points, which
// keeps two-fold refinement changes of overlap integrals below 1e-8.
FrequencyGrid grid_for_duration(double duration, int n_points = 2049,
                                double span_factor = 16.0);

// A temporal mode sampled on a frequency grid. amp[i] is the complex spectral
// amplitude at grid.point(i); normalization means sum(|amp|^2)*spacing == 1.
struct SampledMode {
    FrequencyGrid grid;
    std::vector<cplx> amp;
};

// Gaussian pulse of the given duration (full width at 1/e^2 intensity in the
// time domain) arriving at time `delay`. Spectrum is the unitary-convention
// transform of E(t) ~ exp(-4 (t-delay)^2 / duration^2), i.e. a Gaussian of
// rms angular width 2/duration carrying the linear phase exp(i*omega*delay).
// Returned mode is normalized on the grid. Throws config_error when the grid
// is too narrow (span < 8 bandwidths) or too coarse (spacing > bandwidth/16).
SampledMode make_gaussian_mode(const FrequencyGrid& grid, double duration,
                               double delay = 0.0);

// <a|b> = sum conj(a_i) b_i w_i with trapezoid weights; conjugate-linear in
// the first argument. Throws config_error on mismatched grids.
cplx inner_product(const SampledMode& a, const SampledMode& b);

double mode_norm(const SampledMode& m); // sqrt(<m|m>)

SampledMode normalized(const SampledMode& m); // throws numeric_error on zero norm

// New mode with amp[i] multiplied by filter(grid.point(i)).
SampledMode apply_pointwise(const SampledMode& m,
                            const std::function<cplx(double)>& filter);

// Trapezoid weight for sample i (spacing at interior points, half at the ends).
double trapezoid_weight(const FrequencyGrid& g, int i);

// Inverse transform to the time domain, f(t) = (2*pi)^{-1/2} * integral of
// amp(omega) * exp(-i*omega*t) d(omega), evaluated by direct quadrature at the
// requested times.
std::vector<cplx> time_samples(const SampledMode& m, const std::vector<double>& times);

} // namespace hqg
