// run.hpp — scenario execution: eigen reports, time-series simulation with
// summary statistics, parameter sweeps, and deterministic file emission.
#pragma once

#include <string>
#include <vector>

#include "tbcav/scenario.hpp"

namespace tbcav::cli {

struct TimeSeries {
    std::vector<std::string> columns;       // leading "time", then observables
    std::vector<std::vector<double>> rows;  // one row per sample
};

struct SimulationResult {
    TimeSeries series;
    nlohmann::ordered_json summary;
};

// Round-trip decimal rendering: 17 significant digits, '.' decimal separator,
// locale-independent.
std::string format_double(double v);

// Per-block instantaneous eigenpairs and residuals at time t.
nlohmann::ordered_json run_eigen(const Scenario& s, double t);

// Propagate over the sample grid t_k = t0 + k (t1 - t0) / samples,
// k = 0 .. samples-1 (half-open grid: an integer number of periods fits the
// span exactly), and evaluate the requested observables at every sample.
SimulationResult run_simulate(const Scenario& s);

// Serialize and write `<out_dir>/timeseries.csv` and `<out_dir>/summary.json`.
void write_outputs(const SimulationResult& r, const std::string& out_dir);
std::string series_csv(const TimeSeries& ts);

struct SweepSpec {
    std::string param_path;      // dotted path into the scenario JSON
    std::vector<double> values;  // one simulation per value, in order
};

struct SweepResult {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Run the scenario once per sweep value, substituting the value at
// `param_path` in the raw document. Rows keep input order; runs execute
// concurrently. Throws UnknownParameterPath if the path does not name a
// number in the document.
SweepResult run_sweep(const nlohmann::json& doc, const SweepSpec& spec);
std::string sweep_csv(const SweepResult& r);

}  // namespace tbcav::cli
