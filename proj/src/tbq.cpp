#include "tbcav/tbq.hpp"

#include <cmath>

#include "tbcav/hermitian2.hpp"
#include "tbcav/quadrature.hpp"

namespace tbcav::tbq {

namespace {

EigenPair2 solve(const QubitParams& qp, double t) {
    const double a = qp.ep1.eval(t);
    const double b = qp.ep2.eval(t);
    const double al = qp.alpha.eval(t);
    const Complex c = qp.ts_mag.eval(t) * Complex{std::cos(al), std::sin(al)};
    // Lower eigenvector carries a negative site-2 component, the upper a
    // positive one (the Hadamard-relation sign convention).
    return eigen_hermitian2(a, c, b, -1.0);
}

}  // namespace

Eigen::Matrix2cd hamiltonian_at(const QubitParams& qp, double t) {
    const double al = qp.alpha.eval(t);
    const Complex ts = qp.ts_mag.eval(t) * Complex{std::cos(al), std::sin(al)};
    Eigen::Matrix2cd h;
    h << Complex{qp.ep1.eval(t), 0.0}, ts, std::conj(ts), Complex{qp.ep2.eval(t), 0.0};
    return h;
}

Spectrum eigenenergies(const QubitParams& qp, double t) {
    const double a = qp.ep1.eval(t);
    const double b = qp.ep2.eval(t);
    const double gap = std::hypot(0.5 * (a - b), qp.ts_mag.eval(t));
    return Spectrum{0.5 * (a + b) - gap, 0.5 * (a + b) + gap};
}

std::pair<StateVector, StateVector> eigenstates(const QubitParams& qp, double t) {
    const EigenPair2 p = solve(qp, t);
    return {p.v1, p.v2};
}

Eigen::Matrix2cd basis_change_matrix(const QubitParams& qp, double t) {
    const EigenPair2 p = solve(qp, t);
    Eigen::Matrix2cd s;
    s.row(0) = p.v1.transpose();
    s.row(1) = p.v2.transpose();
    return s;
}

StateVector adiabatic_evolve(const QubitParams& qp, Complex c_e1, Complex c_e2, double t0,
                             double t, double hbar) {
    const double norm2 = std::norm(c_e1) + std::norm(c_e2);
    if (std::abs(norm2 - 1.0) > 1e-10) {
        throw NormViolation("energy-basis coefficients are not normalized");
    }
    const double phi1 =
        integrate_adaptive([&](double s) { return eigenenergies(qp, s).e1; }, t0, t);
    const double phi2 =
        integrate_adaptive([&](double s) { return eigenenergies(qp, s).e2; }, t0, t);
    const auto [v1, v2] = eigenstates(qp, t);
    // e^{phi/(i hbar)} = e^{-i phi/hbar}
    const Complex g1{std::cos(phi1 / hbar), -std::sin(phi1 / hbar)};
    const Complex g2{std::cos(phi2 / hbar), -std::sin(phi2 / hbar)};
    return c_e1 * g1 * v1 + c_e2 * g2 * v2;
}

}  // namespace tbcav::tbq
