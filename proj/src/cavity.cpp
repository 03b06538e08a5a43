#include "tbcav/cavity.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace tbcav::cavity {

namespace {

void check_level(const CavityParams& cav, int n) {
    if (n < 1 || n > cav.n_levels) {
        throw IndexOutOfRange("cavity level " + std::to_string(n) + " outside [1, " +
                              std::to_string(cav.n_levels) + "]");
    }
}

void check_couplings(const CavityParams& cav, const DipoleQubit& dq) {
    if (static_cast<int>(dq.couplings.size()) != cav.n_levels) {
        throw ConfigMismatch("couplings length " + std::to_string(dq.couplings.size()) +
                             " != n_levels " + std::to_string(cav.n_levels));
    }
}

}  // namespace

double cavity_level_energy(const CavityParams& cav, int n) {
    check_level(cav, n);
    return cav.hbar * cav.omega * (2.0 * n - 1.0) / 2.0;
}

Signal mode_signal(const CavityParams& cav, const DipoleQubit& dq, int n) {
    check_level(cav, n);
    check_couplings(cav, dq);
    const bool odd = n % 2 == 1;
    double freq_units;  // frequency in units of omega
    Trig trig;
    if (cav.mode_parity == ModeParity::General) {
        freq_units = (n + 1) / 2.0;
        trig = odd ? Trig::Sin : Trig::Cos;
    } else {
        freq_units = n;
        trig = odd ? Trig::Cos : Trig::Sin;
    }
    const double amp = dq.couplings[n - 1] * (dq.charge * dq.dipole_length / 2.0) *
                       std::sqrt(2.0 / cav.epsilon * cav.hbar * freq_units * cav.omega);
    return Signal::sinusoid(amp, freq_units * cav.omega, 0.0, trig);
}

BlockHamiltonian::BlockHamiltonian(int block_dim, std::vector<Block> blocks)
    : block_dim_(block_dim), blocks_(std::move(blocks)) {
    for (const Block& b : blocks_) {
        if (static_cast<int>(b.diag.size()) != block_dim_) {
            throw DimensionMismatch("block diagonal length != block_dim");
        }
        for (const Hop& h : b.hops) {
            if (h.row < 0 || h.col <= h.row || h.col >= block_dim_) {
                throw DimensionMismatch("hop indices must satisfy 0 <= row < col < block_dim");
            }
        }
    }
}

const BlockHamiltonian::Block& BlockHamiltonian::block_spec(int n) const {
    if (n < 1 || n > n_blocks()) {
        throw IndexOutOfRange("block index " + std::to_string(n) + " outside [1, " +
                              std::to_string(n_blocks()) + "]");
    }
    return blocks_[n - 1];
}

Eigen::MatrixXcd BlockHamiltonian::block(int n, double t) const {
    const Block& b = block_spec(n);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(block_dim_, block_dim_);
    for (int i = 0; i < block_dim_; ++i) m(i, i) = b.diag[i].eval(t);
    for (const Hop& h : b.hops) {
        const double al = h.alpha.eval(t);
        const Complex ts = h.ts_mag.eval(t) * Complex{std::cos(al), std::sin(al)};
        m(h.row, h.col) = ts;
        m(h.col, h.row) = std::conj(ts);
    }
    return m;
}

Eigen::MatrixXcd BlockHamiltonian::block_integral(int n, double t0, double t1) const {
    const Block& b = block_spec(n);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(block_dim_, block_dim_);
    for (int i = 0; i < block_dim_; ++i) m(i, i) = b.diag[i].integrate(t0, t1);
    for (const Hop& h : b.hops) {
        const Complex ts = integrate_hopping(h.ts_mag, h.alpha, t0, t1);
        m(h.row, h.col) = ts;
        m(h.col, h.row) = std::conj(ts);
    }
    return m;
}

Eigen::MatrixXcd BlockHamiltonian::full_matrix(double t) const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(total_dim(), total_dim());
    for (int n = 1; n <= n_blocks(); ++n) {
        m.block((n - 1) * block_dim_, (n - 1) * block_dim_, block_dim_, block_dim_) =
            block(n, t);
    }
    return m;
}

BlockHamiltonian assemble_one_qubit(const CavityParams& cav, const DipoleQubit& dq) {
    check_couplings(cav, dq);
    std::vector<BlockHamiltonian::Block> blocks;
    blocks.reserve(cav.n_levels);
    for (int n = 1; n <= cav.n_levels; ++n) {
        const Signal ec = Signal::constant(cavity_level_energy(cav, n));
        const Signal ef = mode_signal(cav, dq, n);
        BlockHamiltonian::Block b;
        b.diag = {Signal::sum({ec, dq.params.ep1, ef.scaled(-1.0)}),
                  Signal::sum({ec, dq.params.ep2, ef.scaled(+1.0)})};
        b.hops = {{0, 1, dq.params.ts_mag, dq.params.alpha}};
        blocks.push_back(std::move(b));
    }
    return BlockHamiltonian(2, std::move(blocks));
}

BlockHamiltonian assemble_two_qubit(const CavityParams& cav, const DipoleQubit& dqA,
                                    const DipoleQubit& dqB) {
    check_couplings(cav, dqA);
    check_couplings(cav, dqB);
    std::vector<BlockHamiltonian::Block> blocks;
    blocks.reserve(cav.n_levels);
    for (int n = 1; n <= cav.n_levels; ++n) {
        const Signal ec = Signal::constant(cavity_level_energy(cav, n));
        const Signal efA = mode_signal(cav, dqA, n);
        const Signal efB = mode_signal(cav, dqB, n);
        BlockHamiltonian::Block b;
        // Basis order |siteA siteB>: indices 0..3 = 11, 12, 21, 22.
        b.diag = {Signal::sum({ec, dqA.params.ep1, dqB.params.ep1, efA.scaled(-1.0),
                               efB.scaled(-1.0)}),
                  Signal::sum({ec, dqA.params.ep1, dqB.params.ep2, efA.scaled(-1.0),
                               efB.scaled(+1.0)}),
                  Signal::sum({ec, dqA.params.ep2, dqB.params.ep1, efA.scaled(+1.0),
                               efB.scaled(-1.0)}),
                  Signal::sum({ec, dqA.params.ep2, dqB.params.ep2, efA.scaled(+1.0),
                               efB.scaled(+1.0)})};
        // Qubit A hops flip the high bit, qubit B hops the low bit.
        b.hops = {{0, 2, dqA.params.ts_mag, dqA.params.alpha},
                  {1, 3, dqA.params.ts_mag, dqA.params.alpha},
                  {0, 1, dqB.params.ts_mag, dqB.params.alpha},
                  {2, 3, dqB.params.ts_mag, dqB.params.alpha}};
        blocks.push_back(std::move(b));
    }
    return BlockHamiltonian(4, std::move(blocks));
}

BlockHamiltonian assemble_general(const CavityParams& cav,
                                  const std::vector<DipoleQubit>& subsystems,
                                  long max_amplitudes) {
    if (subsystems.empty()) {
        throw ConfigMismatch("assemble_general requires at least one subsystem");
    }
    for (const DipoleQubit& dq : subsystems) check_couplings(cav, dq);
    const int m = static_cast<int>(subsystems.size());
    if (m >= 62 || (static_cast<long>(cav.n_levels) << m) > max_amplitudes) {
        throw DimensionOverflow("state space exceeds the amplitude cap of " +
                                std::to_string(max_amplitudes));
    }
    const int dim = 1 << m;
    std::vector<BlockHamiltonian::Block> blocks;
    blocks.reserve(cav.n_levels);
    for (int n = 1; n <= cav.n_levels; ++n) {
        const Signal ec = Signal::constant(cavity_level_energy(cav, n));
        std::vector<Signal> efs;
        efs.reserve(m);
        for (const DipoleQubit& dq : subsystems) efs.push_back(mode_signal(cav, dq, n));
        BlockHamiltonian::Block b;
        b.diag.reserve(dim);
        for (int i = 0; i < dim; ++i) {
            // Term order (ec, on-site energies, drives) matches the
            // specialized assemblers so the sums accumulate identically.
            std::vector<Signal> terms;
            terms.reserve(1 + 2 * m);
            terms.push_back(ec);
            for (int q = 0; q < m; ++q) {
                const bool site2 = (i >> (m - 1 - q)) & 1;
                terms.push_back(site2 ? subsystems[q].params.ep2 : subsystems[q].params.ep1);
            }
            for (int q = 0; q < m; ++q) {
                const bool site2 = (i >> (m - 1 - q)) & 1;
                terms.push_back(efs[q].scaled(site2 ? +1.0 : -1.0));
            }
            b.diag.push_back(Signal::sum(std::move(terms)));
        }
        for (int q = 0; q < m; ++q) {
            const int stride = 1 << (m - 1 - q);
            for (int i = 0; i < dim; ++i) {
                if ((i & stride) == 0) {
                    b.hops.push_back(
                        {i, i + stride, subsystems[q].params.ts_mag, subsystems[q].params.alpha});
                }
            }
        }
        blocks.push_back(std::move(b));
    }
    return BlockHamiltonian(dim, std::move(blocks));
}

}  // namespace tbcav::cavity
