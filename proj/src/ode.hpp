#pragma once

// Adaptive embedded Runge-Kutta integrator (Dormand-Prince 5(4)) with the
// standard fourth-order dense-output interpolant, used for the mean-field
// cavity equations. Step-size control is a PI controller on the mixed
// absolute/relative error norm.

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace hqg {

struct OdeOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-14;
    double initial_step = 0.0; // 0 = choose automatically
    std::size_t max_steps = 50'000'000;
};

// Integrates y' = rhs(t, y) from t0 to t1. The observer is called once for
// every entry of sample_times (ascending, inside [t0, t1]) with the dense
// interpolant; samples at t0 see the initial state. y holds the final state.
inline void integrate_dp5(
    int dim, const std::function<void(double, const double*, double*)>& rhs,
    double t0, double t1, std::vector<double>& y,
    const std::vector<double>& sample_times,
    const std::function<void(std::size_t, double, const double*)>& observer,
    const OdeOptions& opt = {}) {
    if ((int)y.size() != dim)
        throw numeric_error("ode: state dimension mismatch");
    if (!(t1 > t0))
        throw numeric_error("ode: need t1 > t0");

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    // Error weights: 5th-order solution minus the embedded 4th-order one.
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    // Dense-output weights (Hairer, Norsett, Wanner).
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0,
                            d7 = 69997945.0 / 29380423.0;

    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
    std::vector<double> ytmp(dim), ynew(dim);
    std::vector<double> r1(dim), r2(dim), r3(dim), r4(dim), r5(dim);

    std::size_t next_sample = 0;
    while (next_sample < sample_times.size() && sample_times[next_sample] <= t0) {
        observer(next_sample, t0, y.data());
        ++next_sample;
    }

    double t = t0;
    double h = opt.initial_step > 0.0 ? opt.initial_step : (t1 - t0) * 1e-4;
    double err_prev = 1.0;
    rhs(t, y.data(), k1.data());

    for (std::size_t step = 0; step < opt.max_steps; ++step) {
        if (t >= t1) break;
        h = std::min(h, t1 - t);
        if (h <= (t1 - t0) * 1e-15) {
            // Remaining interval is below resolvable width; flush samples.
            while (next_sample < sample_times.size()) {
                observer(next_sample, t1, y.data());
                ++next_sample;
            }
            t = t1;
            break;
        }

        for (int i = 0; i < dim; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, ytmp.data(), k2.data());
        for (int i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, ytmp.data(), k3.data());
        for (int i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, ytmp.data(), k4.data());
        for (int i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, ytmp.data(), k5.data());
        for (int i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                  a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, ytmp.data(), k6.data());
        for (int i = 0; i < dim; ++i)
            ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] +
                                  a75 * k5[i] + a76 * k6[i]);
        rhs(t + h, ynew.data(), k7.data());

        double err_sq = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                  e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double scale =
                opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err_sq += (e / scale) * (e / scale);
        }
        const double err = std::sqrt(err_sq / dim) + 1e-300;

        if (err <= 1.0) {
            // Accepted: serve dense-output samples inside (t, t+h].
            if (next_sample < sample_times.size() &&
                sample_times[next_sample] <= t + h) {
                for (int i = 0; i < dim; ++i) {
                    const double dy = ynew[i] - y[i];
                    r1[i] = y[i];
                    r2[i] = dy;
                    r3[i] = h * k1[i] - dy;
                    r4[i] = dy - h * k7[i] - r3[i];
                    r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] +
                                 d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
                }
                while (next_sample < sample_times.size() &&
                       sample_times[next_sample] <= t + h) {
                    const double th = (sample_times[next_sample] - t) / h;
                    const double th1 = 1.0 - th;
                    for (int i = 0; i < dim; ++i)
                        ytmp[i] = r1[i] + th * (r2[i] + th1 * (r3[i] +
                                   th * (r4[i] + th1 * r5[i])));
                    observer(next_sample, sample_times[next_sample], ytmp.data());
                    ++next_sample;
                }
            }
            t += h;
            y.swap(ynew);
            k1.swap(k7); // FSAL
            const double fac = 0.9 * std::pow(err, -0.7 / 5.0) *
                               std::pow(err_prev, 0.4 / 5.0);
            h *= std::clamp(fac, 0.2, 5.0);
            err_prev = err;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            if (!(h > 0.0) || t + h == t)
                throw numeric_error("ode: step size underflow");
        }
    }
    if (t < t1)
        throw numeric_error("ode: exceeded max step count");
}

} // namespace hqg
