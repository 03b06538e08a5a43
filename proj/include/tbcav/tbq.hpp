// tbq.hpp — the isolated two-level position-based qubit: Hamiltonian,
// spectrum, eigenbasis, basis-change matrix, and adiabatic phase evolution.
#pragma once

#include <utility>

#include "tbcav/signal.hpp"
#include "tbcav/state.hpp"

namespace tbcav::tbq {

struct QubitParams {
    Signal ep1;     // site-1 on-site energy
    Signal ep2;     // site-2 on-site energy
    Signal ts_mag;  // hopping magnitude, >= 0
    Signal alpha;   // hopping phase (rad)
};

struct Spectrum {
    double e1 = 0.0;  // lower
    double e2 = 0.0;  // upper
};

// [[ep1, |ts| e^{+i alpha}], [|ts| e^{-i alpha}, ep2]] at time t.
Eigen::Matrix2cd hamiltonian_at(const QubitParams& qp, double t);

// (ep1+ep2)/2 ∓ sqrt((ep1-ep2)^2/4 + |ts|^2); always e1 <= e2.
Spectrum eigenenergies(const QubitParams& qp, double t);

// Orthonormal eigenpair (|E1>, |E2>); gauge: the site-2 component is real,
// negative for |E1> and positive for |E2>. Throws DegenerateSpectrum when the
// gap is below 1e-13 * max(1, |E1|+|E2|).
std::pair<StateVector, StateVector> eigenstates(const QubitParams& qp, double t);

// Rows are the eigenstates: S maps position-basis coordinates to the
// energy-basis expansion, S S^dag = I.
Eigen::Matrix2cd basis_change_matrix(const QubitParams& qp, double t);

// c_e1 e^{(1/i hbar) ∫E1 dt'} |E1(t)> + c_e2 e^{(1/i hbar) ∫E2 dt'} |E2(t)>
// in the position basis. Phase integrals use adaptive quadrature of the
// instantaneous eigenenergies. Exact only for constant parameters; for slowly
// varying ones this is the leading adiabatic approximation (no diabatic
// correction).
StateVector adiabatic_evolve(const QubitParams& qp, Complex c_e1, Complex c_e2, double t0,
                             double t, double hbar = 1.0);

}  // namespace tbcav::tbq
