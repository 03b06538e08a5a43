// hermitian2.hpp — closed-form eigensolver for 2x2 Hermitian matrices with a
// deterministic gauge, shared by the qubit and per-block eigen analyses.
#pragma once

#include "tbcav/state.hpp"

namespace tbcav {

struct EigenPair2 {
    double e1 = 0.0;  // lower eigenvalue
    double e2 = 0.0;  // upper eigenvalue
    Eigen::Vector2cd v1;
    Eigen::Vector2cd v2;
};

// Diagonalize [[a, c], [conj(c), b]] with a, b real. Eigenvalues are
// (a+b)/2 ∓ sqrt((a-b)^2/4 + |c|^2) with e1 <= e2. Eigenvectors are
// normalized and gauge-fixed: the second component is made real with sign
// `lower_gauge_sign` for v1 and +1 for v2; if that component vanishes the
// first component is made real positive instead.
//
// Throws DegenerateSpectrum when e2 - e1 < 1e-13 * max(1, |e1| + |e2|).
EigenPair2 eigen_hermitian2(double a, Complex c, double b, double lower_gauge_sign = 1.0);

}  // namespace tbcav
