// state.hpp — complex state vectors and small shared linear-algebra helpers.
#pragma once

#include <Eigen/Dense>
#include <complex>

#include "tbcav/errors.hpp"

namespace tbcav {

using StateVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Throw NormViolation unless |<psi|psi> - 1| <= tol.
inline void require_normalized(const StateVector& psi, double tol = 1e-10) {
    const double n2 = psi.squaredNorm();
    if (std::abs(n2 - 1.0) > tol) {
        throw NormViolation("state norm^2 = " + std::to_string(n2) +
                            " deviates from 1 beyond tolerance");
    }
}

// Kronecker product, row-major factor convention: (a ⊗ b)[i*rb + k][j*cb + l]
// = a(i,j) b(k,l), so the first factor owns the most significant index bits.
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
StateVector kron_vec(const StateVector& a, const StateVector& b);

}  // namespace tbcav
