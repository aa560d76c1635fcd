#pragma once

// Adaptive Simpson quadrature for the smooth scalar time integrals of the
// storage stage. Tolerance is absolute; recursion halves the interval until
// the standard 15x Richardson estimate of the local error is met.

#include "errors.hpp"

#include <cmath>

namespace hqg {

namespace detail {

inline double simpson_rule(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adapt(const F& f, double a, double fa, double b, double fb, double m,
             double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson_rule(a, m, fa, flm, fm);
    const double right = simpson_rule(m, b, fm, frm, fb);
    const double err = left + right - whole;
    if (std::abs(err) <= 15.0 * tol || depth <= 0)
        return left + right + err / 15.0;
    return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// integral of f over [a,b] with absolute tolerance tol.
template <class F>
double integrate_adaptive(const F& f, double a, double b, double tol = 1e-10,
                          int max_depth = 48) {
    if (!(b > a)) {
        if (b == a) return 0.0;
        throw numeric_error("adaptive quadrature: inverted interval");
    }
    const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    const double whole = detail::simpson_rule(a, b, fa, fm, fb);
    const double r = detail::adapt(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
    if (!std::isfinite(r))
        throw numeric_error("adaptive quadrature: non-finite result");
    return r;
}

} // namespace hqg
