#include "tbcav/signal.hpp"

#include <cmath>
#include <utility>

namespace tbcav {

Signal Signal::constant(double value) {
    Signal s;
    s.node_ = Constant{value};
    return s;
}

Signal Signal::sinusoid(double amplitude, double omega, double phase, Trig kind) {
    Signal s;
    s.node_ = Sinusoid{amplitude, omega, phase, kind};
    return s;
}

Signal Signal::sum(std::vector<Signal> terms) {
    Signal s;
    s.node_ = Sum{std::move(terms)};
    return s;
}

double Signal::eval(double t) const {
    struct Visitor {
        double t;
        double operator()(const Constant& c) const { return c.value; }
        double operator()(const Sinusoid& s) const {
            const double arg = s.omega * t + s.phase;
            return s.amplitude * (s.kind == Trig::Sin ? std::sin(arg) : std::cos(arg));
        }
        double operator()(const Sum& sum) const {
            double acc = 0.0;
            for (const Signal& term : sum.terms) acc += term.eval(t);
            return acc;
        }
    };
    return std::visit(Visitor{t}, node_);
}

double Signal::integrate(double t0, double t1) const {
    struct Visitor {
        double t0, t1;
        double operator()(const Constant& c) const { return c.value * (t1 - t0); }
        double operator()(const Sinusoid& s) const {
            if (s.omega == 0.0) {
                // Degenerate frequency: the integrand is the constant
                // a*trig(phase).
                const double v =
                    s.kind == Trig::Sin ? std::sin(s.phase) : std::cos(s.phase);
                return s.amplitude * v * (t1 - t0);
            }
            const double a0 = s.omega * t0 + s.phase;
            const double a1 = s.omega * t1 + s.phase;
            if (s.kind == Trig::Sin) {
                // ∫ sin = -cos/ω
                return s.amplitude * (std::cos(a0) - std::cos(a1)) / s.omega;
            }
            // ∫ cos = sin/ω
            return s.amplitude * (std::sin(a1) - std::sin(a0)) / s.omega;
        }
        double operator()(const Sum& sum) const {
            double acc = 0.0;
            for (const Signal& term : sum.terms) acc += term.integrate(t0, t1);
            return acc;
        }
    };
    return std::visit(Visitor{t0, t1}, node_);
}

Signal Signal::scaled(double factor) const {
    struct Visitor {
        double factor;
        Signal operator()(const Constant& c) const {
            return Signal::constant(factor * c.value);
        }
        Signal operator()(const Sinusoid& s) const {
            return Signal::sinusoid(factor * s.amplitude, s.omega, s.phase, s.kind);
        }
        Signal operator()(const Sum& sum) const {
            std::vector<Signal> terms;
            terms.reserve(sum.terms.size());
            for (const Signal& term : sum.terms) terms.push_back(term.scaled(factor));
            return Signal::sum(std::move(terms));
        }
    };
    return std::visit(Visitor{factor}, node_);
}

std::optional<double> Signal::as_constant() const {
    struct Visitor {
        std::optional<double> operator()(const Signal::Constant& c) const {
            return c.value;
        }
        std::optional<double> operator()(const Signal::Sinusoid&) const {
            return std::nullopt;
        }
        std::optional<double> operator()(const Signal::Sum& sum) const {
            double acc = 0.0;
            for (const Signal& term : sum.terms) {
                const auto v = term.as_constant();
                if (!v) return std::nullopt;
                acc += *v;
            }
            return acc;
        }
    };
    return std::visit(Visitor{}, node_);
}

std::complex<double> integrate_hopping(const Signal& ts_mag, const Signal& alpha, double t0,
                                       double t1, QuadratureOptions opt) {
    // Constant phase factors out of the integral and the magnitude integrates
    // in closed form; otherwise fall back to quadrature.
    if (const auto a = alpha.as_constant()) {
        const std::complex<double> phase{std::cos(*a), std::sin(*a)};
        return phase * ts_mag.integrate(t0, t1);
    }
    const auto f = [&](double t) {
        const double a = alpha.eval(t);
        return ts_mag.eval(t) * std::complex<double>{std::cos(a), std::sin(a)};
    };
    return integrate_adaptive<std::complex<double>>(f, t0, t1, opt);
}

}  // namespace tbcav
