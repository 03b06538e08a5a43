// cavity.hpp — cavity level energies, oscillating mode signals, and the
// composite qubit(s)+cavity Hamiltonian, kept block diagonal in the cavity
// level index by construction.
#pragma once

#include <vector>

#include "tbcav/signal.hpp"
#include "tbcav/state.hpp"
#include "tbcav/tbq.hpp"

namespace tbcav::cavity {

// Convention for the mode signals E_fn(t). General: frequency ((n+1)/2)·ω,
// amplitude ∝ √((n+1)/2), sin for odd n / cos for even n. HarmonicSeries:
// frequency n·ω, amplitude ∝ √n, cos for odd n / sin for even n (the
// worked-example convention; config token "section2_examples").
enum class ModeParity { General, HarmonicSeries };

struct CavityParams {
    double omega = 1.0;    // angular frequency (rad/time)
    int n_levels = 1;      // retained cavity levels K
    double epsilon = 1.0;  // permittivity scale
    double hbar = 1.0;
    ModeParity mode_parity = ModeParity::General;
};

struct DipoleQubit {
    tbq::QubitParams params;
    double dipole_length = 0.0;     // distance between dot centers (x2 - x1)
    double charge = 1.0;            // carrier charge magnitude
    std::vector<double> couplings;  // geometric coefficients a_1..a_K
};

// Level energy E_cn = hbar * omega * (2n - 1) / 2, n in [1, n_levels].
double cavity_level_energy(const CavityParams& cav, int n);

// Oscillating mode signal E_fn(t) felt by qubit dq at cavity level n:
// a_n * (charge * dipole_length / 2) * sqrt((2/epsilon) * hbar * f) * trig(f * omega * t)
// with f and trig set by the parity convention above.
Signal mode_signal(const CavityParams& cav, const DipoleQubit& dq, int n);

// The composite Hamiltonian: K independent Hermitian blocks of size
// 2^{#subsystems}, each carrying its E_cn on the diagonal. The type cannot
// represent cavity cross-level entries, so block diagonality is structural.
class BlockHamiltonian {
public:
    // Hop between rows `row` < `col` with entry(row, col) = |ts| e^{+i alpha}.
    struct Hop {
        int row = 0;
        int col = 0;
        Signal ts_mag;
        Signal alpha;
    };
    struct Block {
        std::vector<Signal> diag;  // one Signal per basis state, E_cn included
        std::vector<Hop> hops;
    };

    BlockHamiltonian(int block_dim, std::vector<Block> blocks);

    int n_blocks() const { return static_cast<int>(blocks_.size()); }
    int block_dim() const { return block_dim_; }
    int total_dim() const { return n_blocks() * block_dim_; }

    // Matrix of block n (1-based) at time t; Hermitian by construction.
    Eigen::MatrixXcd block(int n, double t) const;

    // Entrywise ∫ block(n) dt over [t0, t1]: closed forms on the diagonal,
    // closed-form or quadrature hopping integrals off it.
    Eigen::MatrixXcd block_integral(int n, double t0, double t1) const;

    // Dense total_dim × total_dim matrix with the blocks on the diagonal.
    Eigen::MatrixXcd full_matrix(double t) const;

    const Block& block_spec(int n) const;

private:
    int block_dim_;
    std::vector<Block> blocks_;
};

// One qubit: K blocks [[E_cn - E_fn + E_p1, ts], [ts*, E_cn + E_fn + E_p2]].
BlockHamiltonian assemble_one_qubit(const CavityParams& cav, const DipoleQubit& dq);

// Two qubits: K blocks of size 4, tensor sum of the two qubit Hamiltonians
// plus the signed drive diagonal (-EfA-EfB, -EfA+EfB, +EfA-EfB, +EfA+EfB)
// plus E_cn.
BlockHamiltonian assemble_two_qubit(const CavityParams& cav, const DipoleQubit& dqA,
                                    const DipoleQubit& dqB);

// Any number of two-level subsystems; subsystem 0 owns the most significant
// bit of the in-block index. `max_amplitudes` caps n_levels * 2^m.
BlockHamiltonian assemble_general(const CavityParams& cav,
                                  const std::vector<DipoleQubit>& subsystems,
                                  long max_amplitudes = 1L << 20);

using tbcav::kron;

}  // namespace tbcav::cavity
