#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "tbcav/cavity.hpp"
#include "tbcav/errors.hpp"
#include "tbcav/propagate.hpp"

using tbcav::Complex;
using tbcav::Signal;
using tbcav::StateVector;
using tbcav::Trig;
using namespace tbcav::prop;

namespace {

constexpr double kPi = std::numbers::pi;

BlockDrive constant_drive(double ec, double d1, double d2, double ep1, double ep2, double ts,
                          double alpha) {
    BlockDrive bd;
    bd.ec = ec;
    bd.d1 = Signal::constant(d1);
    bd.d2 = Signal::constant(d2);
    bd.qp = {Signal::constant(ep1), Signal::constant(ep2), Signal::constant(ts),
             Signal::constant(alpha)};
    return bd;
}

BlockDrive random_time_dependent_drive(std::mt19937_64& rng) {
    BlockDrive bd;
    bd.ec = oracles::uniform(rng, -1.0, 1.0);
    bd.d1 = Signal::sinusoid(oracles::uniform(rng, -0.5, 0.5), oracles::uniform(rng, 0.3, 2.0),
                             oracles::uniform(rng, -kPi, kPi), Trig::Sin);
    bd.d2 = Signal::sinusoid(oracles::uniform(rng, -0.5, 0.5), oracles::uniform(rng, 0.3, 2.0),
                             oracles::uniform(rng, -kPi, kPi), Trig::Cos);
    bd.qp.ep1 = Signal::constant(oracles::uniform(rng, -1.0, 1.0));
    bd.qp.ep2 = Signal::sinusoid(oracles::uniform(rng, -0.4, 0.4),
                                 oracles::uniform(rng, 0.5, 1.5), 0.0, Trig::Sin);
    bd.qp.ts_mag = Signal::constant(oracles::uniform(rng, 0.05, 0.8));
    bd.qp.alpha = Signal::constant(oracles::uniform(rng, -kPi, kPi));
    return bd;
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
    return oracles::max_abs_diff(u * u.adjoint(),
                                 Eigen::MatrixXcd::Identity(u.rows(), u.cols()));
}

}  // namespace

TEST_CASE("closed form: zero elapsed time is the identity") {
    std::mt19937_64 rng(101);
    const BlockDrive bd = random_time_dependent_drive(rng);
    const auto u = closed_form_block(bd, 0.4, 0.4);
    CHECK(oracles::max_abs_diff(u, Eigen::Matrix2cd::Identity()) < 1e-15);
}

TEST_CASE("closed form: vanishing hopping gives pure phases") {
    const BlockDrive bd = constant_drive(0.5, -0.1, 0.1, 0.3, -0.2, 0.0, 0.0);
    const double dt = 1.7;
    const auto u = closed_form_block(bd, 0.0, dt);
    const double a = (0.5 - 0.1 + 0.3) * dt;
    const double b = (0.5 + 0.1 - 0.2) * dt;
    CHECK(std::abs(u(0, 0) - std::exp(Complex{0.0, -a})) < 1e-14);
    CHECK(std::abs(u(1, 1) - std::exp(Complex{0.0, -b})) < 1e-14);
    CHECK(std::abs(u(0, 1)) < 1e-15);
    CHECK(std::abs(u(1, 0)) < 1e-15);
}

TEST_CASE("closed form: a quarter period of pure hopping gives the -iX gate") {
    const BlockDrive bd = constant_drive(0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0);
    const auto u = closed_form_block(bd, 0.0, kPi / 2.0);
    Eigen::Matrix2cd expected;
    expected << Complex{0.0, 0.0}, Complex{0.0, -1.0}, Complex{0.0, -1.0}, Complex{0.0, 0.0};
    CHECK(oracles::max_abs_diff(u, expected) < 1e-14);

    Eigen::Matrix2cd h;
    h << 0.0, 1.0, 1.0, 0.0;
    CHECK(oracles::max_abs_diff(u, oracles::propagator_oracle(h, kPi / 2.0)) < 1e-13);
}

TEST_CASE("closed form handles the vanishing-gap limit by series") {
    // A == B and a tiny hopping integral drive R below the series threshold.
    const BlockDrive tiny = constant_drive(0.4, 0.0, 0.0, 0.1, 0.1, 1e-12, 0.3);
    const auto u = closed_form_block(tiny, 0.0, 1.0);
    Eigen::Matrix2cd h;
    h << Complex{0.5, 0.0}, 1e-12 * std::exp(Complex{0.0, 0.3}),
        1e-12 * std::exp(Complex{0.0, -0.3}), Complex{0.5, 0.0};
    CHECK(oracles::max_abs_diff(u, oracles::propagator_oracle(h, 1.0)) < 1e-15);

    // Just above the threshold the direct formula must agree smoothly.
    const BlockDrive small = constant_drive(0.4, 0.0, 0.0, 0.1, 0.1, 1e-7, 0.3);
    const auto u2 = closed_form_block(small, 0.0, 1.0);
    h(0, 1) = 1e-7 * std::exp(Complex{0.0, 0.3});
    h(1, 0) = std::conj(h(0, 1));
    CHECK(oracles::max_abs_diff(u2, oracles::propagator_oracle(h, 1.0)) < 1e-14);
}

TEST_CASE("closed form equals the exponential of the integrated block") {
    std::mt19937_64 rng(202);
    for (int k = 0; k < 25; ++k) {
        const BlockDrive bd = random_time_dependent_drive(rng);
        const double t0 = oracles::uniform(rng, -1.0, 0.0);
        const double t1 = t0 + oracles::uniform(rng, 0.2, 2.5);
        const auto u_closed = closed_form_block(bd, t0, t1);
        const auto u_exp = exp_of_integral_block(drive_block(bd), t0, t1);
        CHECK(oracles::max_abs_diff(u_closed, u_exp) < 1e-11);
        CHECK(unitarity_defect(u_closed) < 1e-12);
        CHECK(unitarity_defect(u_exp) < 1e-12);
    }
}

TEST_CASE("constant blocks: all methods agree with a Taylor-series exponential") {
    std::mt19937_64 rng(303);
    for (int k = 0; k < 20; ++k) {
        const BlockDrive bd = constant_drive(
            oracles::uniform(rng, -1.0, 1.0), oracles::uniform(rng, -0.5, 0.5),
            oracles::uniform(rng, -0.5, 0.5), oracles::uniform(rng, -1.0, 1.0),
            oracles::uniform(rng, -1.0, 1.0), oracles::uniform(rng, 0.0, 1.0),
            oracles::uniform(rng, -kPi, kPi));
        const double dt = oracles::uniform(rng, 0.1, 2.0);
        Eigen::Matrix2cd h;
        const double a = bd.ec + bd.d1.eval(0.0) + bd.qp.ep1.eval(0.0);
        const double b = bd.ec + bd.d2.eval(0.0) + bd.qp.ep2.eval(0.0);
        const double ts = bd.qp.ts_mag.eval(0.0);
        const double al = bd.qp.alpha.eval(0.0);
        h << Complex{a, 0.0}, ts * std::exp(Complex{0.0, al}), ts * std::exp(Complex{0.0, -al}),
            Complex{b, 0.0};
        const auto ref = oracles::propagator_oracle(h, dt);
        CHECK(oracles::max_abs_diff(closed_form_block(bd, 0.0, dt), ref) < 1e-12);
        CHECK(oracles::max_abs_diff(exp_of_integral_block(drive_block(bd), 0.0, dt), ref) <
              1e-12);
        // A single midpoint step is exact for a constant generator.
        CHECK(oracles::max_abs_diff(time_ordered_oracle(drive_block(bd), 0.0, dt, 1), ref) <
              1e-12);
    }
}

TEST_CASE("exp_hermitian matches the Taylor series on random Hermitian matrices") {
    std::mt19937_64 rng(404);
    for (int n : {2, 3, 4, 6}) {
        for (int k = 0; k < 10; ++k) {
            const Eigen::MatrixXcd h = oracles::random_hermitian(rng, n);
            CHECK(oracles::max_abs_diff(exp_hermitian(h), oracles::propagator_oracle(h, 1.0)) <
                  1e-12);
            CHECK(unitarity_defect(exp_hermitian(h)) < 1e-12);
        }
    }
    CHECK(oracles::max_abs_diff(exp_hermitian(Eigen::MatrixXcd::Zero(3, 3)),
                                Eigen::MatrixXcd::Identity(3, 3)) == 0.0);
}

TEST_CASE("commuting time dependence: exponential of the integral is exact") {
    // H(t) = g(t) H0 commutes with itself at all times, so the exponential of
    // the integrated Hamiltonian equals the time-ordered product.
    Eigen::Matrix2cd h0;
    h0 << 0.3, 0.4, 0.4, -0.3;
    const double amp = 0.45, w = 1.1;
    TimeDependentBlock block;
    block.at = [=](double t) -> Eigen::MatrixXcd {
        return (1.0 + amp * std::sin(w * t)) * h0;
    };
    block.integral = [=](double t0, double t1) -> Eigen::MatrixXcd {
        const double g = (t1 - t0) + amp / w * (std::cos(w * t0) - std::cos(w * t1));
        return g * h0;
    };
    const auto u_exp = exp_of_integral_block(block, 0.0, 2.0);
    const auto u_ref = time_ordered_oracle(block, 0.0, 2.0, 1L << 14);
    CHECK(oracles::max_abs_diff(u_exp, u_ref) < 1e-9);
}

TEST_CASE("time-ordered oracle converges at second order") {
    std::mt19937_64 rng(505);
    const BlockDrive bd = random_time_dependent_drive(rng);
    const auto block = drive_block(bd);
    const auto ref = time_ordered_oracle(block, 0.0, 2.0, 1L << 14);
    const double e10 = oracles::max_abs_diff(time_ordered_oracle(block, 0.0, 2.0, 1L << 10), ref);
    const double e11 = oracles::max_abs_diff(time_ordered_oracle(block, 0.0, 2.0, 1L << 11), ref);
    CHECK(e10 / e11 > 3.5);
    CHECK(e10 / e11 < 4.5);
    CHECK(unitarity_defect(ref) < 1e-12);
}

TEST_CASE("time-ordered oracle composes over a shared step grid") {
    std::mt19937_64 rng(606);
    const BlockDrive bd = random_time_dependent_drive(rng);
    const auto block = drive_block(bd);
    // 0 -> 0.75 -> 2 with a common step h = 2/4096 keeps the midpoint factor
    // sequences identical, so composition differs only by roundoff.
    const auto full = time_ordered_oracle(block, 0.0, 2.0, 4096);
    const auto first = time_ordered_oracle(block, 0.0, 0.75, 1536);
    const auto second = time_ordered_oracle(block, 0.75, 2.0, 2560);
    CHECK(oracles::max_abs_diff(full, second * first) < 1e-12);
}

TEST_CASE("exponential of the integral diverges from the truth as commutators grow") {
    // Scaling the oscillating site drive scales the commutator of the
    // Hamiltonian with itself at unequal times; the gap to the time-ordered
    // reference must shrink monotonically with it.
    std::vector<double> gaps;
    for (double scale : {0.8, 0.4, 0.2, 0.1}) {
        BlockDrive bd;
        bd.ec = 0.2;
        bd.d1 = Signal::sinusoid(scale * 0.5, 1.3, 0.0, Trig::Sin);
        bd.d2 = Signal::sinusoid(-scale * 0.5, 1.3, 0.0, Trig::Sin);
        bd.qp = {Signal::constant(0.0), Signal::constant(0.0), Signal::constant(0.4),
                 Signal::constant(0.0)};
        const auto block = drive_block(bd);
        const auto ref = time_ordered_oracle(block, 0.0, 2.0, 1L << 14);
        gaps.push_back(oracles::max_abs_diff(exp_of_integral_block(block, 0.0, 2.0), ref));
    }
    CHECK(gaps[0] > 1e-4);  // visibly wrong at full strength
    for (std::size_t i = 1; i < gaps.size(); ++i) CHECK(gaps[i] < gaps[i - 1]);
}

TEST_CASE("default oracle step count is clamped to its range") {
    const auto mild = drive_block(constant_drive(0.1, 0.0, 0.0, 0.05, -0.05, 0.1, 0.0));
    CHECK(default_oracle_steps(mild, 0.0, 1.0) == (1L << 12));
    const auto strong = drive_block(constant_drive(2000.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0));
    CHECK(default_oracle_steps(strong, 0.0, 1.0) == (1L << 20));
}

TEST_CASE("sampled block integrates by quadrature to the closed form") {
    std::mt19937_64 rng(707);
    const BlockDrive bd = random_time_dependent_drive(rng);
    const auto exact = drive_block(bd);
    const auto sampled = sampled_block(exact.at);
    CHECK(oracles::max_abs_diff(sampled.integral(0.2, 1.9), exact.integral(0.2, 1.9)) < 1e-10);
}

TEST_CASE("cavity block generator mirrors the assembled Hamiltonian") {
    tbcav::cavity::CavityParams cav;
    cav.omega = 1.2;
    cav.n_levels = 2;
    cav.epsilon = 2.0;
    tbcav::cavity::DipoleQubit a;
    a.params = {Signal::constant(0.3), Signal::constant(-0.2), Signal::constant(0.5),
                Signal::constant(0.4)};
    a.dipole_length = 1.5;
    a.couplings = {0.2, 0.1};
    auto bh = std::make_shared<const tbcav::cavity::BlockHamiltonian>(
        tbcav::cavity::assemble_general(cav, {a, a}));
    for (int n = 1; n <= 2; ++n) {
        const auto gen = cavity_block(bh, n);
        CHECK(oracles::max_abs_diff(gen.at(0.7), bh->block(n, 0.7)) == 0.0);
        CHECK(oracles::max_abs_diff(gen.integral(0.0, 1.3), bh->block_integral(n, 0.0, 1.3)) ==
              0.0);
    }
}

TEST_CASE("state propagation applies each block unitary to its slice") {
    Propagator prop;
    Eigen::Matrix2cd x;
    x << 0.0, 1.0, 1.0, 0.0;
    prop.blocks = {Eigen::MatrixXcd(x), Eigen::MatrixXcd(Eigen::Matrix2cd::Identity())};
    StateVector psi(4);
    psi << 1.0, 0.0, 0.0, 0.0;
    const StateVector out = propagate_state(prop, psi);
    CHECK(std::abs(out(1) - Complex{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(out(0)) < 1e-15);
    CHECK(std::abs(out(2)) < 1e-15);

    StateVector wrong(3);
    wrong << 1.0, 0.0, 0.0;
    CHECK_THROWS_AS((void)propagate_state(prop, wrong), tbcav::DimensionMismatch);
}

TEST_CASE("assembled 4x4 amplitudes expand as block-unitary component sums") {
    // One qubit in a two-level cavity: the full state update must equal the
    // explicit component expansion psi_1 = U1(0,0) g1 + U1(0,1) g2, ...,
    // psi_4 = U2(1,0) g3 + U2(1,1) g4 with Un the level-n block unitary.
    tbcav::cavity::CavityParams cav;
    cav.omega = 1.2;
    cav.n_levels = 2;
    cav.epsilon = 2.0;
    tbcav::cavity::DipoleQubit q;
    q.params = {Signal::constant(0.3), Signal::constant(-0.2), Signal::constant(0.5),
                Signal::constant(0.4)};
    q.dipole_length = 1.5;
    q.couplings = {0.2, 0.1};
    auto bh = std::make_shared<const tbcav::cavity::BlockHamiltonian>(
        tbcav::cavity::assemble_one_qubit(cav, q));

    Propagator prop;
    for (int n = 1; n <= 2; ++n) {
        prop.blocks.push_back(exp_of_integral_block(cavity_block(bh, n), 0.0, 0.9));
    }
    StateVector gamma(4);
    gamma << Complex{0.5, 0.1}, Complex{-0.3, 0.2}, Complex{0.4, -0.1}, Complex{0.2, 0.6};
    gamma.normalize();
    const StateVector out = propagate_state(prop, gamma);
    const auto& u1 = prop.blocks[0];
    const auto& u2 = prop.blocks[1];
    CHECK(std::abs(out(0) - (u1(0, 0) * gamma(0) + u1(0, 1) * gamma(1))) < 1e-10);
    CHECK(std::abs(out(1) - (u1(1, 0) * gamma(0) + u1(1, 1) * gamma(1))) < 1e-10);
    CHECK(std::abs(out(2) - (u2(0, 0) * gamma(2) + u2(0, 1) * gamma(3))) < 1e-10);
    CHECK(std::abs(out(3) - (u2(1, 0) * gamma(2) + u2(1, 1) * gamma(3))) < 1e-10);
    CHECK(std::abs(out.norm() - 1.0) < 1e-12);
}

TEST_CASE("block eigenpairs: level-shifted qubit spectrum and positive site-2 gauge") {
    const BlockDrive sym = constant_drive(1.5, 0.0, 0.0, 0.2, 0.2, 0.7, 0.0);
    const auto be = eigen_block(sym, 0.0);
    CHECK(be.e1 == doctest::Approx(1.5 + 0.2 - 0.7).epsilon(1e-14));
    CHECK(be.e2 == doctest::Approx(1.5 + 0.2 + 0.7).epsilon(1e-14));
    CHECK(be.v1(1).real() > 0.0);
    CHECK(be.v2(1).real() > 0.0);
    CHECK(std::abs(be.v1(1).imag()) < 1e-14);
    CHECK(std::abs(be.v2(1).imag()) < 1e-14);

    // With a constant drive Ef the energies close as
    // (2 ec + ep1 + ep2 -/+ sqrt((2 Ef - ep1 + ep2)^2 + 4 |ts|^2)) / 2.
    std::mt19937_64 rng(808);
    for (int k = 0; k < 100; ++k) {
        const double ec = oracles::uniform(rng, -1.0, 2.0);
        const double ef = oracles::uniform(rng, -0.8, 0.8);
        const double ep1 = oracles::uniform(rng, -1.0, 1.0);
        const double ep2 = oracles::uniform(rng, -1.0, 1.0);
        const double ts = oracles::uniform(rng, 0.05, 1.0);
        const double al = oracles::uniform(rng, -kPi, kPi);
        const BlockDrive bd = constant_drive(ec, -ef, ef, ep1, ep2, ts, al);
        const auto eb = eigen_block(bd, 0.3);
        const double root = std::sqrt(std::pow(2.0 * ef - ep1 + ep2, 2) + 4.0 * ts * ts);
        const double e1 = (2.0 * ec + ep1 + ep2 - root) / 2.0;
        const double e2 = (2.0 * ec + ep1 + ep2 + root) / 2.0;
        CHECK(eb.e1 == doctest::Approx(e1).epsilon(1e-12));
        CHECK(eb.e2 == doctest::Approx(e2).epsilon(1e-12));

        Eigen::Matrix2cd h;
        h << Complex{ec - ef + ep1, 0.0}, ts * std::exp(Complex{0.0, al}),
            ts * std::exp(Complex{0.0, -al}), Complex{ec + ef + ep2, 0.0};
        CHECK((h * eb.v1 - eb.e1 * eb.v1).norm() < 1e-11);
        CHECK((h * eb.v2 - eb.e2 * eb.v2).norm() < 1e-11);
    }
}

TEST_CASE("literal transcription of the coefficient-form propagator entries") {
    // The diagonal entries written as e^{-i(R+A+B)/2hbar} [E(R -/+ D) + (R +/- D)]/(2R)
    // with E = e^{iR/hbar} reduce to the canonical exponential; check the
    // transcription against the production closed form on a constant block.
    const double ec = 0.5, ef = 0.2, ep1 = 0.3, ep2 = -0.1, ts = 0.5, al = 0.2;
    const BlockDrive bd = constant_drive(ec, -ef, ef, ep1, ep2, ts, al);
    const double dt = 1.3;
    const double a = (ec - ef + ep1) * dt;
    const double b = (ec + ef + ep2) * dt;
    const double d = a - b;
    const double r = std::sqrt(d * d + 4.0 * ts * ts * dt * dt);
    const Complex e = std::exp(Complex{0.0, r});
    const Complex front = std::exp(Complex{0.0, -(r + a + b) / 2.0});
    const Complex u11 = front * (e * (r - d) + (r + d)) / (2.0 * r);
    const Complex u22 = front * (r * (1.0 + e) + d * (e - 1.0)) / (2.0 * r);

    const auto u = closed_form_block(bd, 0.0, dt);
    CHECK(std::abs(u(0, 0) - u11) < 1e-13);
    CHECK(std::abs(u(1, 1) - u22) < 1e-13);
    CHECK(std::abs(std::abs(u(0, 1)) - 2.0 * ts * dt * std::abs(std::sin(r / 2.0)) / r) <
          1e-13);
}
