#include "tbcav/propagate.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace tbcav::prop {

namespace {

Eigen::Matrix2cd drive_matrix_at(const BlockDrive& bd, double t) {
    const double a = bd.ec + bd.d1.eval(t) + bd.qp.ep1.eval(t);
    const double b = bd.ec + bd.d2.eval(t) + bd.qp.ep2.eval(t);
    const double al = bd.qp.alpha.eval(t);
    const Complex ts = bd.qp.ts_mag.eval(t) * Complex{std::cos(al), std::sin(al)};
    Eigen::Matrix2cd m;
    m << Complex{a, 0.0}, ts, std::conj(ts), Complex{b, 0.0};
    return m;
}

Eigen::Matrix2cd drive_matrix_integral(const BlockDrive& bd, double t0, double t1) {
    const double a = bd.ec * (t1 - t0) + bd.d1.integrate(t0, t1) + bd.qp.ep1.integrate(t0, t1);
    const double b = bd.ec * (t1 - t0) + bd.d2.integrate(t0, t1) + bd.qp.ep2.integrate(t0, t1);
    const Complex tau = integrate_hopping(bd.qp.ts_mag, bd.qp.alpha, t0, t1);
    Eigen::Matrix2cd m;
    m << Complex{a, 0.0}, tau, std::conj(tau), Complex{b, 0.0};
    return m;
}

}  // namespace

TimeDependentBlock drive_block(const BlockDrive& bd) {
    return TimeDependentBlock{
        [bd](double t) { return Eigen::MatrixXcd(drive_matrix_at(bd, t)); },
        [bd](double t0, double t1) {
            return Eigen::MatrixXcd(drive_matrix_integral(bd, t0, t1));
        }};
}

TimeDependentBlock cavity_block(std::shared_ptr<const cavity::BlockHamiltonian> bh, int n) {
    bh->block_spec(n);  // validate the index once, eagerly
    return TimeDependentBlock{
        [bh, n](double t) { return bh->block(n, t); },
        [bh, n](double t0, double t1) { return bh->block_integral(n, t0, t1); }};
}

TimeDependentBlock sampled_block(std::function<Eigen::MatrixXcd(double)> at,
                                 QuadratureOptions opt) {
    auto integral = [at, opt](double t0, double t1) {
        const Eigen::MatrixXcd probe = at(0.5 * (t0 + t1));
        Eigen::MatrixXcd m(probe.rows(), probe.cols());
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = i; j < m.cols(); ++j) {
                const Complex v = integrate_adaptive<Complex>(
                    [&](double t) { return at(t)(i, j); }, t0, t1, opt);
                m(i, j) = v;
                if (j != i) m(j, i) = std::conj(v);
            }
        }
        return m;
    };
    return TimeDependentBlock{std::move(at), std::move(integral)};
}

Eigen::MatrixXcd exp_hermitian(const Eigen::MatrixXcd& m, double hbar) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    if (es.info() != Eigen::Success) {
        throw Error("Hermitian eigendecomposition failed");
    }
    const Eigen::VectorXd& lam = es.eigenvalues();
    Eigen::VectorXcd phases(lam.size());
    for (Eigen::Index k = 0; k < lam.size(); ++k) {
        const double x = lam(k) / hbar;
        phases(k) = Complex{std::cos(x), -std::sin(x)};
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::Matrix2cd closed_form_block(const BlockDrive& bd, double t0, double t, double hbar) {
    const double A =
        bd.ec * (t - t0) + bd.d1.integrate(t0, t) + bd.qp.ep1.integrate(t0, t);
    const double B =
        bd.ec * (t - t0) + bd.d2.integrate(t0, t) + bd.qp.ep2.integrate(t0, t);
    const Complex tau = integrate_hopping(bd.qp.ts_mag, bd.qp.alpha, t0, t);
    const double R = std::hypot(A - B, 2.0 * std::abs(tau));
    const double half = R / (2.0 * hbar);
    const double c = std::cos(half);
    // s = sin(R/2ħ)/R with the removable R→0 limit 1/(2ħ) taken by series.
    double s;
    if (R < 1e-8 * hbar) {
        s = (1.0 - half * half / 6.0) / (2.0 * hbar);
    } else {
        s = std::sin(half) / R;
    }
    const double mean = (A + B) / (2.0 * hbar);
    const Complex phase{std::cos(mean), -std::sin(mean)};
    const Complex is{0.0, s};
    Eigen::Matrix2cd u;
    u(0, 0) = phase * (c - is * (A - B));
    u(0, 1) = phase * (-2.0 * is * tau);
    u(1, 0) = phase * (-2.0 * is * std::conj(tau));
    u(1, 1) = phase * (c + is * (A - B));
    return u;
}

Eigen::MatrixXcd exp_of_integral_block(const TimeDependentBlock& block, double t0, double t,
                                       double hbar) {
    return exp_hermitian(block.integral(t0, t), hbar);
}

Eigen::MatrixXcd time_ordered_oracle(const TimeDependentBlock& block, double t0, double t,
                                     long steps, double hbar) {
    if (steps < 1) throw Error("time_ordered_oracle requires steps >= 1");
    const double dt = (t - t0) / static_cast<double>(steps);
    const Eigen::MatrixXcd first = block.at(t0 + 0.5 * dt);
    Eigen::MatrixXcd u = exp_hermitian(first * dt, hbar);
    for (long k = 2; k <= steps; ++k) {
        const double mid = t0 + (static_cast<double>(k) - 0.5) * dt;
        u = exp_hermitian(block.at(mid) * dt, hbar) * u;
    }
    return u;
}

long default_oracle_steps(const TimeDependentBlock& block, double t0, double t, double hbar) {
    constexpr int kProbes = 65;
    double max_h = 0.0;
    for (int k = 0; k < kProbes; ++k) {
        const double s = t0 + (t - t0) * k / (kProbes - 1.0);
        max_h = std::max(max_h, block.at(s).cwiseAbs().maxCoeff());
    }
    const double action = max_h * std::abs(t - t0) / hbar;
    const long units = std::max(1L, static_cast<long>(std::ceil(action)));
    return std::min(1L << 20, units * (1L << 12));
}

StateVector propagate_state(const Propagator& prop, const StateVector& psi0) {
    if (prop.blocks.empty()) throw DimensionMismatch("propagator has no blocks");
    const Eigen::Index bdim = prop.blocks.front().rows();
    for (const Eigen::MatrixXcd& u : prop.blocks) {
        if (u.rows() != bdim || u.cols() != bdim) {
            throw DimensionMismatch("propagator blocks have inconsistent dimensions");
        }
    }
    const Eigen::Index total = bdim * static_cast<Eigen::Index>(prop.blocks.size());
    if (psi0.size() != total) {
        throw DimensionMismatch("state dimension " + std::to_string(psi0.size()) +
                                " != blocks * block_dim = " + std::to_string(total));
    }
    require_normalized(psi0);
    StateVector out(total);
    for (std::size_t n = 0; n < prop.blocks.size(); ++n) {
        const Eigen::Index off = static_cast<Eigen::Index>(n) * bdim;
        out.segment(off, bdim) = prop.blocks[n] * psi0.segment(off, bdim);
    }
    return out;
}

BlockEigen eigen_block(const BlockDrive& bd, double t) {
    const Eigen::Matrix2cd h = drive_matrix_at(bd, t);
    const EigenPair2 p = eigen_hermitian2(h(0, 0).real(), h(0, 1), h(1, 1).real(), 1.0);
    BlockEigen out;
    out.e1 = p.e1;
    out.e2 = p.e2;
    out.v1 = p.v1;
    out.v2 = p.v2;
    return out;
}

}  // namespace tbcav::prop
