// signal.hpp — scalar time signals with exact closed-form integrals.
//
// A Signal is a constant, a sinusoid a*trig(w t + phi), or a finite sum of
// signals. Evaluation and definite integration are exact (no quadrature), so
// Hamiltonian matrix elements built from Signals integrate in closed form.
#pragma once

#include <complex>
#include <optional>
#include <variant>
#include <vector>

#include "tbcav/quadrature.hpp"

namespace tbcav {

enum class Trig { Sin, Cos };

class Signal {
public:
    struct Constant {
        double value = 0.0;
    };
    struct Sinusoid {
        double amplitude = 0.0;
        double omega = 0.0;
        double phase = 0.0;
        Trig kind = Trig::Sin;
    };
    struct Sum {
        std::vector<Signal> terms;
    };

    Signal() : node_(Constant{0.0}) {}

    static Signal constant(double value);
    static Signal sinusoid(double amplitude, double omega, double phase, Trig kind);
    static Signal sum(std::vector<Signal> terms);

    // Value at time t.
    double eval(double t) const;

    // Definite integral over [t0, t1]; antisymmetric under swapping bounds.
    double integrate(double t0, double t1) const;

    // New signal with every amplitude/value multiplied by factor.
    Signal scaled(double factor) const;
    Signal negated() const { return scaled(-1.0); }

    // The constant value if the signal is structurally constant (a Constant
    // node, or a Sum of constants); nullopt otherwise.
    std::optional<double> as_constant() const;

    const std::variant<Constant, Sinusoid, Sum>& node() const { return node_; }

private:
    std::variant<Constant, Sinusoid, Sum> node_;
};

// ∫ |ts|(t) e^{i α(t)} dt over [t0, t1] by adaptive quadrature. Used for the
// hopping entry of a time-dependent two-site Hamiltonian when the phase varies.
std::complex<double> integrate_hopping(const Signal& ts_mag, const Signal& alpha, double t0,
                                       double t1, QuadratureOptions opt = {});

}  // namespace tbcav
