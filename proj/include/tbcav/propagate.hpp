// propagate.hpp — block evolution operators three ways: the analytic 2x2
// closed form, the exponential of the integrated Hamiltonian, and an
// independent time-ordered product oracle; plus state propagation and
// instantaneous block eigenpairs.
#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "tbcav/cavity.hpp"
#include "tbcav/hermitian2.hpp"
#include "tbcav/signal.hpp"
#include "tbcav/state.hpp"
#include "tbcav/tbq.hpp"

namespace tbcav::prop {

// One 2x2 cavity block seen by a single qubit: site drives d1/d2 (signed mode
// signals), the level constant ec, and the qubit parameters. Matrix at t:
// [[ec + d1 + ep1, ts], [ts*, ec + d2 + ep2]].
struct BlockDrive {
    Signal d1;
    Signal d2;
    double ec = 0.0;
    tbq::QubitParams qp;
};

// A Hermitian block generator: H(t) plus its entrywise definite integral.
struct TimeDependentBlock {
    std::function<Eigen::MatrixXcd(double)> at;
    std::function<Eigen::MatrixXcd(double, double)> integral;
};

// Views of the two block sources as generators with closed-form integrals.
TimeDependentBlock drive_block(const BlockDrive& bd);
TimeDependentBlock cavity_block(std::shared_ptr<const cavity::BlockHamiltonian> bh, int n);

// Generator whose integral falls back to entrywise adaptive quadrature of
// `at`; for Hamiltonians with no closed-form signal structure.
TimeDependentBlock sampled_block(std::function<Eigen::MatrixXcd(double)> at,
                                 QuadratureOptions opt = {});

enum class Method { ClosedForm, ExpIntegral, TimeOrderedOracle };

// exp(m / (i hbar)) for Hermitian m, via eigendecomposition.
Eigen::MatrixXcd exp_hermitian(const Eigen::MatrixXcd& m, double hbar = 1.0);

// Analytic U(t, t0) for a 2x2 block: with A = ∫(ec+d1+ep1), B = ∫(ec+d2+ep2),
// τ = ∫|ts| e^{+iα}, R = √((A−B)² + 4|τ|²), the exact exponential
// exp((1/iħ)[[A, τ], [τ*, B]]) evaluated without a matrix eigensolver. The
// R→0 limit is handled by series.
Eigen::Matrix2cd closed_form_block(const BlockDrive& bd, double t0, double t,
                                   double hbar = 1.0);

// U = exp((∫H dt') / (i hbar)) — exact for commuting families only.
Eigen::MatrixXcd exp_of_integral_block(const TimeDependentBlock& block, double t0, double t,
                                       double hbar = 1.0);

// Midpoint-sampled product of short-step exponentials; second-order accurate
// ground truth, unitary for any step count.
Eigen::MatrixXcd time_ordered_oracle(const TimeDependentBlock& block, double t0, double t,
                                     long steps, double hbar = 1.0);

// 2^12 steps per unit of max|H|·|Δt|/ħ (max element over a sample grid),
// clamped to [2^12, 2^20].
long default_oracle_steps(const TimeDependentBlock& block, double t0, double t,
                          double hbar = 1.0);

struct Propagator {
    std::vector<Eigen::MatrixXcd> blocks;  // one unitary per cavity level
    double t0 = 0.0;
    double t1 = 0.0;
    Method method = Method::ExpIntegral;
};

// Apply each block unitary to its slice of psi0.
StateVector propagate_state(const Propagator& prop, const StateVector& psi0);

struct BlockEigen {
    double e1 = 0.0;
    double e2 = 0.0;
    StateVector v1;
    StateVector v2;
};

// Instantaneous eigenpairs of the block at time t; gauge: site-2 component
// real and positive for both vectors. Throws DegenerateSpectrum.
BlockEigen eigen_block(const BlockDrive& bd, double t);

}  // namespace tbcav::prop
