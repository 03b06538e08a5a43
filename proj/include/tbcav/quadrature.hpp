// quadrature.hpp — adaptive Simpson integration over real or complex integrands.
#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "tbcav/errors.hpp"

namespace tbcav {

struct QuadratureOptions {
    double rel_tol = 1e-12;   // relative target against the whole-interval estimate
    double abs_floor = 1e-15; // tolerance never shrinks below this
    int max_depth = 40;       // bisection levels before giving up
};

namespace detail {

template <class T>
double quad_abs(const T& v) {
    return std::abs(v);
}

// One adaptive step: compare Simpson on [a,b] against the two-panel refinement.
// `fa/fm/fb` are cached endpoint/midpoint samples, `whole` the single-panel value.
template <class T, class F>
T simpson_adapt(const F& f, double a, double b, const T& fa, const T& fm, const T& fb,
                const T& whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const T flm = f(lm);
    const T frm = f(rm);
    const double h6 = (b - a) / 12.0;
    const T left = h6 * (fa + 4.0 * flm + fm);
    const T right = h6 * (fm + 4.0 * frm + fb);
    const T refined = left + right;
    const T err = refined - whole;
    // 15*eps: Richardson error estimate for Simpson; a touch loose to absorb roundoff.
    if (quad_abs(err) <= 15.0 * tol || b - a < 1e-300) {
        return refined + err / 15.0;
    }
    if (depth <= 0) {
        throw QuadratureNonConvergence("adaptive Simpson: max bisection depth reached");
    }
    return simpson_adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Integrate f over [a, b]. T is double or std::complex<double>; orientation is
// honoured (a > b yields the negated value).
template <class T = double, class F>
T integrate_adaptive(const F& f, double a, double b, QuadratureOptions opt = {}) {
    if (a == b) return T{};
    double lo = a, hi = b;
    double sign = 1.0;
    if (lo > hi) {
        std::swap(lo, hi);
        sign = -1.0;
    }
    const T fa = f(lo);
    const T fb = f(hi);
    const double m = 0.5 * (lo + hi);
    const T fm = f(m);
    const T whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    double tol = opt.rel_tol * detail::quad_abs(whole);
    if (tol < opt.abs_floor) tol = opt.abs_floor;
    return sign * detail::simpson_adapt(f, lo, hi, fa, fm, fb, whole, tol, opt.max_depth);
}

}  // namespace tbcav
