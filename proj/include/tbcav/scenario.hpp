// scenario.hpp — declarative scenario configuration: JSON parsing with strict
// validation, defaults expansion, and signal (de)serialization.
#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "tbcav/cavity.hpp"
#include "tbcav/propagate.hpp"
#include "tbcav/signal.hpp"
#include "tbcav/state.hpp"

namespace tbcav::cli {

struct TimeGrid {
    double t0 = 0.0;
    double t1 = 1.0;
    long samples = 2;
};

// How the per-block diagonal drives are read off the mode signals.
// SignedPerLevel (config "section2_signed"): block n gets ∓E_fn on sites 1/2.
// IndependentPair (config "section4_independent"): every block gets −E_f1 on
// site 1 and +E_f2 on site 2 (single-qubit scenarios only).
enum class DriveReading { SignedPerLevel, IndependentPair };

struct PropagatorChoice {
    prop::Method method = prop::Method::ExpIntegral;
    std::optional<long> oracle_steps;
};

struct InitialState {
    enum class Kind { Amplitudes, GroundBlock1, Site1Level1, EnergySuperposition };
    Kind kind = Kind::Site1Level1;
    std::vector<Complex> amplitudes;  // Kind::Amplitudes, already renormalized
    double c_e1 = 0.0;                // Kind::EnergySuperposition coefficients
    double c_e2 = 0.0;
};

struct Scenario {
    cavity::CavityParams cav;
    std::vector<cavity::DipoleQubit> qubits;
    InitialState initial;
    TimeGrid time;
    PropagatorChoice propagator;
    DriveReading drive_reading = DriveReading::SignedPerLevel;
    std::vector<std::string> outputs;  // observable column groups, canonical order
};

// All recognised output column groups, in emission order.
const std::vector<std::string>& output_groups();

// Parse one signal record {"kind": "constant"|"sinusoid"|"sum", ...}.
// `path` prefixes error messages.
Signal parse_signal(const nlohmann::json& j, const std::string& path);
nlohmann::ordered_json signal_json(const Signal& s);

// Parse and validate a whole scenario document. Throws ConfigError (or a
// subclass) with the offending field in the message.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::string& file_path);

// The scenario with every default expanded, as embedded in run summaries.
nlohmann::ordered_json resolved_json(const Scenario& s);

}  // namespace tbcav::cli
