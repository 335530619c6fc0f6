#pragma once

// Small deterministic numerical kernels: bracketed root finding and adaptive
// Simpson quadrature.

#include "displacemon/error.hpp"

#include <cmath>

namespace displacemon::numerics {

/// Bisection on [lo, hi] down to `xtol`, followed by a single Newton step.
/// f(lo) and f(hi) must have opposite signs.
template <class F, class DF>
double bisect_newton(F&& f, DF&& df, double lo, double hi, double xtol)
{
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if ((flo > 0) == (fhi > 0))
        throw NumericalError("bisect_newton: root is not bracketed");
    while (hi - lo > xtol) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if (fmid == 0.0)
            return mid;
        if ((fmid > 0) == (flo > 0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    const double slope = df(x);
    if (slope != 0.0) {
        const double polished = x - f(x) / slope;
        if (std::abs(f(polished)) <= std::abs(f(x)))
            x = polished;
    }
    return x;
}

namespace detail {

template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth, int min_depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0)
        throw NumericalError("adaptive_simpson: recursion limit reached before tolerance");
    if (min_depth <= 0 && std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, min_depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, min_depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance `tol`.
/// The first `min_depth` bisections are always taken, so periodic integrands
/// that happen to vanish on the coarse nodes are not accepted early.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol, int min_depth = 4,
                        int max_depth = 50)
{
    if (a == b)
        return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth, min_depth);
}

} // namespace displacemon::numerics
