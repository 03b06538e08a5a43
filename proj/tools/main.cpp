// tbcav command-line front end: scenario-driven eigen reports, time-series
// simulation, and parameter sweeps with deterministic CSV/JSON artifacts.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "tbcav/run.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

tbcav::cli::Scenario load_with_overrides(const std::string& path,
                                         const std::string& propagator_flag,
                                         long oracle_steps_flag) {
    tbcav::cli::Scenario s = tbcav::cli::load_scenario(path);
    if (!propagator_flag.empty()) {
        if (propagator_flag == "closed_form") {
            s.propagator.method = tbcav::prop::Method::ClosedForm;
        } else if (propagator_flag == "exp_integral") {
            s.propagator.method = tbcav::prop::Method::ExpIntegral;
        } else if (propagator_flag == "oracle") {
            s.propagator.method = tbcav::prop::Method::TimeOrderedOracle;
        } else {
            throw tbcav::ConfigError(
                "--propagator: expected closed_form, exp_integral or oracle");
        }
    }
    if (oracle_steps_flag > 0) s.propagator.oracle_steps = oracle_steps_flag;
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tight-binding qubit + quantum cavity simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    std::string propagator_flag;
    long oracle_steps_flag = 0;
    double eigen_time = 0.0;
    std::string sweep_param;
    std::vector<double> sweep_values;

    CLI::App* simulate = app.add_subcommand("simulate", "run a scenario time evolution");
    simulate->add_option("scenario", scenario_path, "scenario JSON file")->required();
    simulate->add_option("--out", out_dir, "output directory (timeseries.csv, summary.json)");
    simulate->add_option("--propagator", propagator_flag,
                         "closed_form | exp_integral | oracle");
    simulate->add_option("--oracle-steps", oracle_steps_flag,
                         "total time-ordered steps across the run");

    CLI::App* eigen = app.add_subcommand("eigen", "report per-block eigenpairs at a time");
    eigen->add_option("scenario", scenario_path, "scenario JSON file")->required();
    eigen->add_option("--time", eigen_time, "evaluation time")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "simulate once per parameter value");
    sweep->add_option("scenario", scenario_path, "scenario JSON file")->required();
    sweep->add_option("--param", sweep_param, "dotted path to a number in the scenario")
        ->required();
    sweep->add_option("--values", sweep_values, "comma-separated parameter values")
        ->required()
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (simulate->parsed()) {
            const tbcav::cli::Scenario s =
                load_with_overrides(scenario_path, propagator_flag, oracle_steps_flag);
            const tbcav::cli::SimulationResult r = tbcav::cli::run_simulate(s);
            tbcav::cli::write_outputs(r, out_dir);
        } else if (eigen->parsed()) {
            const tbcav::cli::Scenario s = load_with_overrides(scenario_path, "", 0);
            std::cout << tbcav::cli::run_eigen(s, eigen_time).dump(2) << '\n';
        } else if (sweep->parsed()) {
            nlohmann::json doc;
            {
                std::ifstream in(scenario_path);
                if (!in) {
                    throw tbcav::ConfigError("cannot open scenario file: " + scenario_path);
                }
                try {
                    doc = nlohmann::json::parse(in);
                } catch (const nlohmann::json::parse_error& e) {
                    throw tbcav::ConfigError("scenario JSON parse error: " +
                                             std::string(e.what()));
                }
            }
            const tbcav::cli::SweepResult r =
                tbcav::cli::run_sweep(doc, {sweep_param, sweep_values});
            std::cout << tbcav::cli::sweep_csv(r);
        }
    } catch (const tbcav::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const tbcav::DimensionOverflow& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const tbcav::Error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
