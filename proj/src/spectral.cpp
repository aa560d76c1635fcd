#include "spectral.hpp"

#include "errors.hpp"

#include <cmath>

namespace hqg {

bool FrequencyGrid::same_as(const FrequencyGrid& other) const {
    return n_points == other.n_points && center == other.center && span == other.span;
}

FrequencyGrid make_grid(double center, double span, int n_points) {
    if (!(span > 0.0) || !std::isfinite(span) || !std::isfinite(center))
        throw config_error("frequency grid: span must be finite and positive");
    if (n_points < 2)
        throw config_error("frequency grid: need at least 2 points");
    return FrequencyGrid{center, span, n_points};
}

FrequencyGrid grid_for_duration(double duration, int n_points, double span_factor) {
    if (!(duration > 0.0))
        throw config_error("frequency grid: pulse duration must be positive");
    return make_grid(0.0, span_factor * (2.0 * pi / duration), n_points);
}

SampledMode make_gaussian_mode(const FrequencyGrid& grid, double duration, double delay) {
    if (!(duration > 0.0))
        throw config_error("gaussian mode: duration must be positive");
    const double bandwidth = 2.0 * pi / duration;
    if (grid.span < 8.0 * bandwidth)
        throw config_error("gaussian mode: grid span narrower than 8 pulse bandwidths");
    if (grid.spacing() > bandwidth / 16.0)
        throw config_error("gaussian mode: grid spacing coarser than bandwidth/16");

    // E(t) = exp(-4 t^2 / T^2) has |f(omega)|^2 ~ exp(-omega^2 T^2 / 8):
    // rms spectral width 2/T.
    const double sigma_sq = 4.0 / (duration * duration); // <omega^2> of |f|^2
    SampledMode m;
    m.grid = grid;
    m.amp.resize(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) {
        const double w = grid.point(i);
        const double mag = std::exp(-0.25 * w * w / sigma_sq);
        m.amp[i] = std::polar(mag, w * delay);
    }
    return normalized(m);
}

cplx inner_product(const SampledMode& a, const SampledMode& b) {
    if (!a.grid.same_as(b.grid))
        throw config_error("inner product: modes live on different grids");
    cplx acc = 0.0;
    for (int i = 0; i < a.grid.n_points; ++i)
        acc += std::conj(a.amp[i]) * b.amp[i] * trapezoid_weight(a.grid, i);
    return acc;
}

double mode_norm(const SampledMode& m) {
    double acc = 0.0;
    for (int i = 0; i < m.grid.n_points; ++i)
        acc += std::norm(m.amp[i]) * trapezoid_weight(m.grid, i);
    return std::sqrt(acc);
}

SampledMode normalized(const SampledMode& m) {
    const double n = mode_norm(m);
    if (!(n > 0.0) || !std::isfinite(n))
        throw numeric_error("cannot normalize a mode with zero or non-finite norm");
    SampledMode out = m;
    for (auto& a : out.amp) a /= n;
    return out;
}

SampledMode apply_pointwise(const SampledMode& m,
                            const std::function<cplx(double)>& filter) {
    SampledMode out;
    out.grid = m.grid;
    out.amp.resize(m.amp.size());
    for (int i = 0; i < m.grid.n_points; ++i)
        out.amp[i] = m.amp[i] * filter(m.grid.point(i));
    return out;
}

double trapezoid_weight(const FrequencyGrid& g, int i) {
    const double h = g.spacing();
    return (i == 0 || i == g.n_points - 1) ? 0.5 * h : h;
}

std::vector<cplx> time_samples(const SampledMode& m, const std::vector<double>& times) {
    std::vector<cplx> out(times.size());
    const double norm = 1.0 / std::sqrt(2.0 * pi);
    for (std::size_t j = 0; j < times.size(); ++j) {
        cplx acc = 0.0;
        for (int i = 0; i < m.grid.n_points; ++i) {
            const double w = m.grid.point(i);
            acc += m.amp[i] * std::polar(trapezoid_weight(m.grid, i), -w * times[j]);
        }
        out[j] = norm * acc;
    }
    return out;
}

} // namespace hqg
