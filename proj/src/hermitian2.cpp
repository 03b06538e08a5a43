#include "tbcav/hermitian2.hpp"

#include <cmath>

namespace tbcav {

namespace {

// Eigenvector for eigenvalue e of [[a, c], [conj(c), b]]. The two row
// equations give the representatives (c, e-a) and (e-b, conj(c)); pick the one
// with the larger norm so the survivor is never built from a cancelling
// difference.
Eigen::Vector2cd representative(double a, Complex c, double b, double e) {
    const Eigen::Vector2cd r1{c, Complex{e - a, 0.0}};
    const Eigen::Vector2cd r2{Complex{e - b, 0.0}, std::conj(c)};
    return r1.squaredNorm() >= r2.squaredNorm() ? r1 : r2;
}

Eigen::Vector2cd gauge_fixed(Eigen::Vector2cd v, double second_sign) {
    v.normalize();
    const Complex z = v(1);
    if (std::abs(z) > 1e-14) {
        // Rotate the second component onto the real axis with the asked sign.
        v *= second_sign * std::conj(z) / std::abs(z);
    } else {
        const Complex w = v(0);
        v *= std::conj(w) / std::abs(w);
    }
    return v;
}

}  // namespace

EigenPair2 eigen_hermitian2(double a, Complex c, double b, double lower_gauge_sign) {
    const double mean = 0.5 * (a + b);
    const double half_gap = std::hypot(0.5 * (a - b), std::abs(c));
    EigenPair2 out;
    out.e1 = mean - half_gap;
    out.e2 = mean + half_gap;
    if (out.e2 - out.e1 < 1e-13 * std::max(1.0, std::abs(out.e1) + std::abs(out.e2))) {
        throw DegenerateSpectrum("2x2 spectrum is degenerate; eigenbasis not unique");
    }
    out.v1 = gauge_fixed(representative(a, c, b, out.e1), lower_gauge_sign);
    out.v2 = gauge_fixed(representative(a, c, b, out.e2), 1.0);
    return out;
}

}  // namespace tbcav
