#include "tbcav/scenario.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

namespace tbcav::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) fail(path + "." + key, "unknown field");
    }
}

double get_number(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) fail(path + "." + key, "missing required number");
    if (!obj[key].is_number()) fail(path + "." + key, "expected a number");
    return obj[key].get<double>();
}

double get_number_or(const json& obj, const std::string& key, const std::string& path,
                     double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) fail(path + "." + key, "expected a number");
    return obj[key].get<double>();
}

Signal get_signal_or_zero(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) return Signal::constant(0.0);
    return parse_signal(obj[key], path + "." + key);
}

}  // namespace

const std::vector<std::string>& output_groups() {
    static const std::vector<std::string> groups = {
        "amplitudes", "site_probabilities", "cavity_populations", "reduced_cavity",
        "entropy"};
    return groups;
}

Signal parse_signal(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected a signal object");
    if (!j.contains("kind") || !j["kind"].is_string()) {
        fail(path, "signal needs a string 'kind'");
    }
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "constant") {
        check_keys(j, {"kind", "value"}, path);
        return Signal::constant(get_number(j, "value", path));
    }
    if (kind == "sinusoid") {
        check_keys(j, {"kind", "amplitude", "omega", "phase", "fn"}, path);
        const double amp = get_number(j, "amplitude", path);
        const double omega = get_number(j, "omega", path);
        const double phase = get_number_or(j, "phase", path, 0.0);
        std::string fn = "sin";
        if (j.contains("fn")) {
            if (!j["fn"].is_string()) fail(path + ".fn", "expected \"sin\" or \"cos\"");
            fn = j["fn"].get<std::string>();
        }
        if (fn != "sin" && fn != "cos") fail(path + ".fn", "expected \"sin\" or \"cos\"");
        return Signal::sinusoid(amp, omega, phase, fn == "sin" ? Trig::Sin : Trig::Cos);
    }
    if (kind == "sum") {
        check_keys(j, {"kind", "terms"}, path);
        if (!j.contains("terms") || !j["terms"].is_array()) {
            fail(path + ".terms", "expected an array of signals");
        }
        std::vector<Signal> terms;
        terms.reserve(j["terms"].size());
        for (std::size_t k = 0; k < j["terms"].size(); ++k) {
            terms.push_back(
                parse_signal(j["terms"][k], path + ".terms[" + std::to_string(k) + "]"));
        }
        return Signal::sum(std::move(terms));
    }
    fail(path + ".kind", "unknown signal kind '" + kind + "'");
}

ordered_json signal_json(const Signal& s) {
    struct Visitor {
        ordered_json operator()(const Signal::Constant& c) const {
            return ordered_json{{"kind", "constant"}, {"value", c.value}};
        }
        ordered_json operator()(const Signal::Sinusoid& sn) const {
            return ordered_json{{"kind", "sinusoid"},
                                {"amplitude", sn.amplitude},
                                {"omega", sn.omega},
                                {"phase", sn.phase},
                                {"fn", sn.kind == Trig::Sin ? "sin" : "cos"}};
        }
        ordered_json operator()(const Signal::Sum& sum) const {
            ordered_json terms = ordered_json::array();
            for (const Signal& term : sum.terms) terms.push_back(signal_json(term));
            return ordered_json{{"kind", "sum"}, {"terms", std::move(terms)}};
        }
    };
    return std::visit(Visitor{}, s.node());
}

Scenario parse_scenario(const json& doc) {
    if (!doc.is_object()) throw ConfigError("scenario: top level must be a JSON object");
    check_keys(doc,
               {"cavity", "qubits", "initial_state", "time", "propagator", "drive_reading",
                "outputs"},
               "scenario");
    Scenario s;

    if (!doc.contains("cavity") || !doc["cavity"].is_object()) {
        throw ConfigError("cavity: missing required object");
    }
    const json& cav = doc["cavity"];
    check_keys(cav, {"omega", "n_levels", "epsilon", "hbar", "mode_parity"}, "cavity");
    s.cav.omega = get_number(cav, "omega", "cavity");
    if (s.cav.omega <= 0.0) fail("cavity.omega", "must be > 0");
    if (!cav.contains("n_levels") || !cav["n_levels"].is_number_integer()) {
        fail("cavity.n_levels", "missing required integer");
    }
    s.cav.n_levels = cav["n_levels"].get<int>();
    if (s.cav.n_levels < 1) fail("cavity.n_levels", "must be >= 1");
    s.cav.epsilon = get_number_or(cav, "epsilon", "cavity", 1.0);
    if (s.cav.epsilon <= 0.0) fail("cavity.epsilon", "must be > 0");
    s.cav.hbar = get_number_or(cav, "hbar", "cavity", 1.0);
    if (s.cav.hbar <= 0.0) fail("cavity.hbar", "must be > 0");
    if (cav.contains("mode_parity")) {
        const std::string parity = cav["mode_parity"].is_string()
                                       ? cav["mode_parity"].get<std::string>()
                                       : std::string{};
        if (parity == "general") {
            s.cav.mode_parity = cavity::ModeParity::General;
        } else if (parity == "section2_examples") {
            s.cav.mode_parity = cavity::ModeParity::HarmonicSeries;
        } else {
            fail("cavity.mode_parity", "expected \"general\" or \"section2_examples\"");
        }
    }

    if (!doc.contains("qubits") || !doc["qubits"].is_array() || doc["qubits"].empty()) {
        throw ConfigError("qubits: need a nonempty array");
    }
    for (std::size_t q = 0; q < doc["qubits"].size(); ++q) {
        const std::string path = "qubits[" + std::to_string(q) + "]";
        const json& jq = doc["qubits"][q];
        if (!jq.is_object()) fail(path, "expected an object");
        check_keys(jq,
                   {"ep1", "ep2", "ts_mag", "alpha", "dipole_length", "charge", "couplings"},
                   path);
        cavity::DipoleQubit dq;
        dq.params.ep1 = get_signal_or_zero(jq, "ep1", path);
        dq.params.ep2 = get_signal_or_zero(jq, "ep2", path);
        dq.params.ts_mag = get_signal_or_zero(jq, "ts_mag", path);
        dq.params.alpha = get_signal_or_zero(jq, "alpha", path);
        dq.dipole_length = get_number_or(jq, "dipole_length", path, 0.0);
        if (dq.dipole_length < 0.0) fail(path + ".dipole_length", "must be >= 0");
        dq.charge = get_number_or(jq, "charge", path, 1.0);
        if (jq.contains("couplings")) {
            if (!jq["couplings"].is_array()) fail(path + ".couplings", "expected an array");
            for (const json& v : jq["couplings"]) {
                if (!v.is_number()) fail(path + ".couplings", "entries must be numbers");
                dq.couplings.push_back(v.get<double>());
            }
        } else {
            dq.couplings.assign(s.cav.n_levels, 0.0);
        }
        if (static_cast<int>(dq.couplings.size()) != s.cav.n_levels) {
            throw ConfigMismatch(path + ".couplings: length " +
                                 std::to_string(dq.couplings.size()) + " != n_levels " +
                                 std::to_string(s.cav.n_levels));
        }
        s.qubits.push_back(std::move(dq));
    }

    if (!doc.contains("time") || !doc["time"].is_object()) {
        throw ConfigError("time: missing required object");
    }
    const json& jt = doc["time"];
    check_keys(jt, {"t0", "t1", "samples"}, "time");
    s.time.t0 = get_number_or(jt, "t0", "time", 0.0);
    s.time.t1 = get_number(jt, "t1", "time");
    if (!jt.contains("samples") || !jt["samples"].is_number_integer()) {
        fail("time.samples", "missing required integer");
    }
    s.time.samples = jt["samples"].get<long>();
    if (s.time.samples < 2) fail("time.samples", "must be >= 2");
    if (!(s.time.t1 > s.time.t0)) fail("time.t1", "must be > t0");
    if (s.time.t0 + (s.time.t1 - s.time.t0) / static_cast<double>(s.time.samples) ==
        s.time.t0) {
        fail("time", "span is below one representable sample step");
    }

    if (doc.contains("propagator")) {
        const json& jp = doc["propagator"];
        if (!jp.is_object()) fail("propagator", "expected an object");
        check_keys(jp, {"method", "oracle_steps"}, "propagator");
        if (jp.contains("method")) {
            const std::string m =
                jp["method"].is_string() ? jp["method"].get<std::string>() : std::string{};
            if (m == "closed_form") {
                s.propagator.method = prop::Method::ClosedForm;
            } else if (m == "exp_integral") {
                s.propagator.method = prop::Method::ExpIntegral;
            } else if (m == "oracle") {
                s.propagator.method = prop::Method::TimeOrderedOracle;
            } else {
                fail("propagator.method",
                     "expected \"closed_form\", \"exp_integral\" or \"oracle\"");
            }
        }
        if (jp.contains("oracle_steps")) {
            if (!jp["oracle_steps"].is_number_integer() ||
                jp["oracle_steps"].get<long>() < 1) {
                fail("propagator.oracle_steps", "must be a positive integer");
            }
            s.propagator.oracle_steps = jp["oracle_steps"].get<long>();
        }
    }

    if (doc.contains("drive_reading")) {
        const std::string d = doc["drive_reading"].is_string()
                                  ? doc["drive_reading"].get<std::string>()
                                  : std::string{};
        if (d == "section2_signed") {
            s.drive_reading = DriveReading::SignedPerLevel;
        } else if (d == "section4_independent") {
            s.drive_reading = DriveReading::IndependentPair;
        } else {
            fail("drive_reading", "expected \"section2_signed\" or \"section4_independent\"");
        }
    }
    if (s.drive_reading == DriveReading::IndependentPair) {
        if (s.qubits.size() != 1) {
            fail("drive_reading", "section4_independent supports exactly one qubit");
        }
        if (s.cav.n_levels < 2) {
            fail("drive_reading", "section4_independent needs n_levels >= 2");
        }
    }

    const long block_dim = 1L << s.qubits.size();
    const long total = block_dim * s.cav.n_levels;
    if (s.qubits.size() >= 62 || total > (1L << 20)) {
        throw DimensionOverflow("scenario state space exceeds 2^20 amplitudes");
    }

    if (doc.contains("initial_state")) {
        const json& ji = doc["initial_state"];
        if (ji.is_string()) {
            const std::string text = ji.get<std::string>();
            std::istringstream in(text);
            std::string name;
            in >> name;
            if (name == "ground_block1") {
                s.initial.kind = InitialState::Kind::GroundBlock1;
            } else if (name == "site1_level1") {
                s.initial.kind = InitialState::Kind::Site1Level1;
            } else if (name == "energy_superposition") {
                s.initial.kind = InitialState::Kind::EnergySuperposition;
                if (!(in >> s.initial.c_e1 >> s.initial.c_e2)) {
                    fail("initial_state", "energy_superposition needs two coefficients");
                }
                if (s.qubits.size() != 1) {
                    fail("initial_state", "energy_superposition supports exactly one qubit");
                }
                const double n2 =
                    s.initial.c_e1 * s.initial.c_e1 + s.initial.c_e2 * s.initial.c_e2;
                if (std::abs(n2 - 1.0) > 1e-8) {
                    fail("initial_state", "energy coefficients are not normalized");
                }
            } else {
                fail("initial_state", "unknown preset '" + name + "'");
            }
            std::string rest;
            if (in >> rest) fail("initial_state", "trailing token '" + rest + "'");
        } else if (ji.is_object()) {
            check_keys(ji, {"amplitudes"}, "initial_state");
            if (!ji.contains("amplitudes") || !ji["amplitudes"].is_array()) {
                fail("initial_state.amplitudes", "expected an array");
            }
            for (std::size_t k = 0; k < ji["amplitudes"].size(); ++k) {
                const json& a = ji["amplitudes"][k];
                const std::string path = "initial_state.amplitudes[" + std::to_string(k) + "]";
                if (a.is_number()) {
                    s.initial.amplitudes.emplace_back(a.get<double>(), 0.0);
                } else if (a.is_array() && a.size() == 2 && a[0].is_number() &&
                           a[1].is_number()) {
                    s.initial.amplitudes.emplace_back(a[0].get<double>(), a[1].get<double>());
                } else {
                    fail(path, "expected a number or [re, im] pair");
                }
            }
            s.initial.kind = InitialState::Kind::Amplitudes;
            if (static_cast<long>(s.initial.amplitudes.size()) != total) {
                fail("initial_state.amplitudes",
                     "length " + std::to_string(s.initial.amplitudes.size()) +
                         " != state dimension " + std::to_string(total));
            }
            double n2 = 0.0;
            for (const Complex& a : s.initial.amplitudes) n2 += std::norm(a);
            if (n2 < 1e-20) fail("initial_state.amplitudes", "state has zero norm");
            const double norm = std::sqrt(n2);
            if (std::abs(norm - 1.0) > 1e-12) {
                std::cerr << "warning: initial_state.amplitudes renormalized (norm was "
                          << norm << ")\n";
            }
            for (Complex& a : s.initial.amplitudes) a /= norm;
        } else {
            fail("initial_state", "expected a preset string or {\"amplitudes\": [...]}");
        }
    }

    if (doc.contains("outputs")) {
        if (!doc["outputs"].is_array()) fail("outputs", "expected an array of group names");
        std::set<std::string> requested;
        for (const json& g : doc["outputs"]) {
            if (!g.is_string()) fail("outputs", "entries must be strings");
            const std::string name = g.get<std::string>();
            bool known = false;
            for (const std::string& known_name : output_groups()) {
                known = known || known_name == name;
            }
            if (!known) fail("outputs", "unknown group '" + name + "'");
            requested.insert(name);
        }
        for (const std::string& name : output_groups()) {
            if (requested.count(name)) s.outputs.push_back(name);
        }
    } else {
        s.outputs = output_groups();
    }

    // ts_mag must stay nonnegative over the run; probe a uniform grid.
    for (std::size_t q = 0; q < s.qubits.size(); ++q) {
        const Signal& ts = s.qubits[q].params.ts_mag;
        for (int k = 0; k <= 256; ++k) {
            const double t = s.time.t0 + (s.time.t1 - s.time.t0) * k / 256.0;
            if (ts.eval(t) < 0.0) {
                fail("qubits[" + std::to_string(q) + "].ts_mag",
                     "negative at t = " + std::to_string(t));
            }
        }
    }

    return s;
}

Scenario load_scenario(const std::string& file_path) {
    std::ifstream in(file_path);
    if (!in) throw ConfigError("cannot open scenario file: " + file_path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("scenario JSON parse error: " + std::string(e.what()));
    }
    return parse_scenario(doc);
}

nlohmann::ordered_json resolved_json(const Scenario& s) {
    ordered_json doc;
    doc["cavity"] = {
        {"omega", s.cav.omega},
        {"n_levels", s.cav.n_levels},
        {"epsilon", s.cav.epsilon},
        {"hbar", s.cav.hbar},
        {"mode_parity",
         s.cav.mode_parity == cavity::ModeParity::General ? "general" : "section2_examples"}};
    doc["qubits"] = ordered_json::array();
    for (const cavity::DipoleQubit& dq : s.qubits) {
        ordered_json jq;
        jq["ep1"] = signal_json(dq.params.ep1);
        jq["ep2"] = signal_json(dq.params.ep2);
        jq["ts_mag"] = signal_json(dq.params.ts_mag);
        jq["alpha"] = signal_json(dq.params.alpha);
        jq["dipole_length"] = dq.dipole_length;
        jq["charge"] = dq.charge;
        jq["couplings"] = dq.couplings;
        doc["qubits"].push_back(std::move(jq));
    }
    switch (s.initial.kind) {
        case InitialState::Kind::Site1Level1:
            doc["initial_state"] = "site1_level1";
            break;
        case InitialState::Kind::GroundBlock1:
            doc["initial_state"] = "ground_block1";
            break;
        case InitialState::Kind::EnergySuperposition: {
            std::ostringstream text;
            text << std::setprecision(17) << "energy_superposition " << s.initial.c_e1 << " "
                 << s.initial.c_e2;
            doc["initial_state"] = text.str();
            break;
        }
        case InitialState::Kind::Amplitudes: {
            ordered_json amps = ordered_json::array();
            for (const Complex& a : s.initial.amplitudes) {
                amps.push_back(ordered_json::array({a.real(), a.imag()}));
            }
            doc["initial_state"] = ordered_json{{"amplitudes", std::move(amps)}};
            break;
        }
    }
    doc["time"] = {{"t0", s.time.t0}, {"t1", s.time.t1}, {"samples", s.time.samples}};
    ordered_json jp;
    switch (s.propagator.method) {
        case prop::Method::ClosedForm:
            jp["method"] = "closed_form";
            break;
        case prop::Method::ExpIntegral:
            jp["method"] = "exp_integral";
            break;
        case prop::Method::TimeOrderedOracle:
            jp["method"] = "oracle";
            break;
    }
    if (s.propagator.oracle_steps) {
        jp["oracle_steps"] = *s.propagator.oracle_steps;
    } else {
        jp["oracle_steps"] = nullptr;
    }
    doc["propagator"] = std::move(jp);
    doc["drive_reading"] = s.drive_reading == DriveReading::SignedPerLevel
                               ? "section2_signed"
                               : "section4_independent";
    doc["outputs"] = s.outputs;
    return doc;
}

}  // namespace tbcav::cli
