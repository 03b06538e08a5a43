#include "tbcav/run.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <memory>
#include <utility>

#include "tbcav/observe.hpp"

namespace tbcav::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Block construction from a scenario

// A scenario's Hamiltonian as propagator inputs: generators for every cavity
// block, plus the 2x2 closed-form drives when the scenario has one qubit.
struct BlockSet {
    std::vector<prop::TimeDependentBlock> generators;  // size n_levels
    std::vector<prop::BlockDrive> drives;              // single-qubit only
    int block_dim = 0;
};

BlockSet build_blocks(const Scenario& s) {
    BlockSet bs;
    bs.block_dim = 1 << s.qubits.size();
    if (s.qubits.size() == 1) {
        const cavity::DipoleQubit& dq = s.qubits.front();
        for (int n = 1; n <= s.cav.n_levels; ++n) {
            prop::BlockDrive bd;
            bd.ec = cavity::cavity_level_energy(s.cav, n);
            bd.qp = dq.params;
            if (s.drive_reading == DriveReading::SignedPerLevel) {
                const Signal ef = cavity::mode_signal(s.cav, dq, n);
                bd.d1 = ef.scaled(-1.0);
                bd.d2 = ef;
            } else {
                bd.d1 = cavity::mode_signal(s.cav, dq, 1).scaled(-1.0);
                bd.d2 = cavity::mode_signal(s.cav, dq, 2);
            }
            bs.generators.push_back(prop::drive_block(bd));
            bs.drives.push_back(std::move(bd));
        }
    } else {
        auto bh = std::make_shared<const cavity::BlockHamiltonian>(
            cavity::assemble_general(s.cav, s.qubits));
        for (int n = 1; n <= s.cav.n_levels; ++n) {
            bs.generators.push_back(prop::cavity_block(bh, n));
        }
    }
    return bs;
}

// Deterministic gauge for a dense eigensolver column: rotate the largest
// component (first one on ties) onto the positive real axis.
Eigen::VectorXcd gauge_largest_real(Eigen::VectorXcd v) {
    Eigen::Index pick = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > best + 1e-15) {
            best = std::abs(v(i));
            pick = i;
        }
    }
    const Complex z = v(pick);
    if (std::abs(z) > 0.0) v *= std::conj(z) / std::abs(z);
    return v;
}

StateVector initial_state(const Scenario& s, const BlockSet& bs) {
    const long total = static_cast<long>(bs.block_dim) * s.cav.n_levels;
    StateVector psi = StateVector::Zero(total);
    switch (s.initial.kind) {
        case InitialState::Kind::Site1Level1:
            psi(0) = 1.0;
            break;
        case InitialState::Kind::Amplitudes:
            for (long i = 0; i < total; ++i) psi(i) = s.initial.amplitudes[i];
            break;
        case InitialState::Kind::GroundBlock1:
            if (!bs.drives.empty()) {
                psi.head(2) = prop::eigen_block(bs.drives.front(), s.time.t0).v1;
            } else {
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
                    bs.generators.front().at(s.time.t0));
                if (es.info() != Eigen::Success) {
                    throw Error("eigendecomposition of block 1 failed");
                }
                psi.head(bs.block_dim) = gauge_largest_real(es.eigenvectors().col(0));
            }
            break;
        case InitialState::Kind::EnergySuperposition: {
            const prop::BlockEigen eb = prop::eigen_block(bs.drives.front(), s.time.t0);
            Eigen::Vector2cd head = s.initial.c_e1 * eb.v1 + s.initial.c_e2 * eb.v2;
            head.normalize();
            psi.head(2) = head;
            break;
        }
    }
    return psi;
}

std::vector<double> sample_times(const TimeGrid& grid) {
    std::vector<double> times(grid.samples);
    const double dt = (grid.t1 - grid.t0) / static_cast<double>(grid.samples);
    for (long k = 0; k < grid.samples; ++k) {
        times[k] = grid.t0 + static_cast<double>(k) * dt;
    }
    return times;
}

// Unitaries U(t0 -> t_k) for every block and sample. The closed-form and
// exp-integral methods evaluate each sample independently from the exact
// integrals; the oracle composes per-interval step products.
std::vector<std::vector<Eigen::MatrixXcd>> trajectory_unitaries(
    const Scenario& s, const BlockSet& bs, const std::vector<double>& times) {
    const int n_blocks = s.cav.n_levels;
    const double hbar = s.cav.hbar;
    std::vector<std::vector<Eigen::MatrixXcd>> us(
        times.size(), std::vector<Eigen::MatrixXcd>(n_blocks));
    try {
        switch (s.propagator.method) {
            case prop::Method::ClosedForm: {
                if (bs.drives.empty()) {
                    throw ConfigError(
                        "propagator.method: closed_form supports single-qubit scenarios "
                        "only");
                }
                for (std::size_t k = 0; k < times.size(); ++k) {
                    for (int n = 0; n < n_blocks; ++n) {
                        us[k][n] = prop::closed_form_block(bs.drives[n], times.front(),
                                                           times[k], hbar);
                    }
                }
                break;
            }
            case prop::Method::ExpIntegral: {
                for (std::size_t k = 0; k < times.size(); ++k) {
                    for (int n = 0; n < n_blocks; ++n) {
                        us[k][n] = prop::exp_of_integral_block(bs.generators[n],
                                                               times.front(), times[k], hbar);
                    }
                }
                break;
            }
            case prop::Method::TimeOrderedOracle: {
                long total_steps = 0;
                if (s.propagator.oracle_steps) {
                    total_steps = *s.propagator.oracle_steps;
                } else {
                    for (int n = 0; n < n_blocks; ++n) {
                        total_steps = std::max(
                            total_steps, prop::default_oracle_steps(bs.generators[n],
                                                                    times.front(),
                                                                    s.time.t1, hbar));
                    }
                }
                const long intervals = static_cast<long>(times.size()) - 1;
                const long per_interval =
                    std::max(1L, (total_steps + intervals - 1) / intervals);
                for (int n = 0; n < n_blocks; ++n) {
                    us[0][n] = Eigen::MatrixXcd::Identity(bs.block_dim, bs.block_dim);
                    for (std::size_t k = 1; k < times.size(); ++k) {
                        us[k][n] = prop::time_ordered_oracle(bs.generators[n], times[k - 1],
                                                             times[k], per_interval, hbar) *
                                   us[k - 1][n];
                    }
                }
                break;
            }
        }
    } catch (const QuadratureNonConvergence& e) {
        throw QuadratureNonConvergence(
            std::string(e.what()) +
            " (while integrating the qubit hopping signals ts_mag/alpha over the run)");
    }
    return us;
}

void append_columns(std::vector<std::string>& cols, const Scenario& s,
                    const std::string& group, int total_dim) {
    const int n_qubits = static_cast<int>(s.qubits.size());
    const int k_levels = s.cav.n_levels;
    if (group == "amplitudes") {
        for (int i = 1; i <= total_dim; ++i) {
            cols.push_back("amp" + std::to_string(i) + "_re");
            cols.push_back("amp" + std::to_string(i) + "_im");
        }
    } else if (group == "site_probabilities") {
        for (int q = 1; q <= n_qubits; ++q) {
            cols.push_back("q" + std::to_string(q) + "_p_x1");
            cols.push_back("q" + std::to_string(q) + "_p_x2");
        }
    } else if (group == "cavity_populations") {
        for (int n = 1; n <= k_levels; ++n) {
            cols.push_back("p_cav" + std::to_string(n));
        }
    } else if (group == "reduced_cavity") {
        for (int i = 1; i <= k_levels; ++i) {
            for (int j = 1; j <= k_levels; ++j) {
                const std::string base =
                    "rho_cav_" + std::to_string(i) + "_" + std::to_string(j);
                cols.push_back(base + "_re");
                cols.push_back(base + "_im");
            }
        }
    } else if (group == "entropy") {
        cols.push_back("entropy_cav");
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

ordered_json run_eigen(const Scenario& s, double t) {
    const BlockSet bs = build_blocks(s);
    ordered_json report;
    report["time"] = t;
    report["block_dim"] = bs.block_dim;
    report["blocks"] = ordered_json::array();
    for (int n = 1; n <= s.cav.n_levels; ++n) {
        ordered_json jb;
        jb["block"] = n;
        jb["cavity_level_energy"] = cavity::cavity_level_energy(s.cav, n);
        std::vector<double> energies;
        std::vector<Eigen::VectorXcd> states;
        if (!bs.drives.empty()) {
            const prop::BlockEigen eb = prop::eigen_block(bs.drives[n - 1], t);
            energies = {eb.e1, eb.e2};
            states = {eb.v1, eb.v2};
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
                bs.generators[n - 1].at(t));
            if (es.info() != Eigen::Success) {
                throw Error("eigendecomposition of block " + std::to_string(n) + " failed");
            }
            for (int k = 0; k < bs.block_dim; ++k) {
                energies.push_back(es.eigenvalues()(k));
                states.push_back(gauge_largest_real(es.eigenvectors().col(k)));
            }
        }
        const Eigen::MatrixXcd h = bs.generators[n - 1].at(t);
        jb["energies"] = energies;
        jb["states"] = ordered_json::array();
        jb["residuals"] = ordered_json::array();
        for (std::size_t k = 0; k < states.size(); ++k) {
            ordered_json jv = ordered_json::array();
            for (Eigen::Index i = 0; i < states[k].size(); ++i) {
                jv.push_back(ordered_json::array(
                    {states[k](i).real(), states[k](i).imag()}));
            }
            jb["states"].push_back(std::move(jv));
            jb["residuals"].push_back((h * states[k] - energies[k] * states[k]).norm());
        }
        report["blocks"].push_back(std::move(jb));
    }
    return report;
}

SimulationResult run_simulate(const Scenario& s) {
    const BlockSet bs = build_blocks(s);
    const int total_dim = bs.block_dim * s.cav.n_levels;
    const StateVector psi0 = initial_state(s, bs);
    const std::vector<double> times = sample_times(s.time);
    const auto us = trajectory_unitaries(s, bs, times);

    std::vector<int> factor_dims{s.cav.n_levels};
    for (std::size_t q = 0; q < s.qubits.size(); ++q) factor_dims.push_back(2);

    SimulationResult result;
    result.series.columns.push_back("time");
    for (const std::string& group : s.outputs) {
        append_columns(result.series.columns, s, group, total_dim);
    }

    std::vector<std::pair<double, double>> x1_series(times.size());
    std::vector<double> initial_populations;
    double max_norm_drift = 0.0;
    double max_pop_drift = 0.0;
    double final_entropy = 0.0;
    StateVector psi_final;

    for (std::size_t k = 0; k < times.size(); ++k) {
        prop::Propagator pk{us[k], times.front(), times[k], s.propagator.method};
        const StateVector psi = prop::propagate_state(pk, psi0);
        if (k + 1 == times.size()) psi_final = psi;
        const obs::DensityMatrix rho = obs::density_from_state(psi, factor_dims);

        max_norm_drift = std::max(max_norm_drift, std::abs(psi.norm() - 1.0));
        std::vector<double> pops(s.cav.n_levels);
        for (int n = 1; n <= s.cav.n_levels; ++n) {
            pops[n - 1] = obs::cavity_population(rho, n);
        }
        if (k == 0) initial_populations = pops;
        for (int n = 0; n < s.cav.n_levels; ++n) {
            max_pop_drift =
                std::max(max_pop_drift, std::abs(pops[n] - initial_populations[n]));
        }
        const obs::DensityMatrix rho_cav = obs::reduce(rho, 0);
        const double entropy = obs::von_neumann_entropy(rho_cav);
        if (k + 1 == times.size()) final_entropy = entropy;
        x1_series[k] = {times[k], obs::site_probability(rho, 1, 1)};

        std::vector<double> row;
        row.reserve(result.series.columns.size());
        row.push_back(times[k]);
        for (const std::string& group : s.outputs) {
            if (group == "amplitudes") {
                for (int i = 0; i < total_dim; ++i) {
                    row.push_back(psi(i).real());
                    row.push_back(psi(i).imag());
                }
            } else if (group == "site_probabilities") {
                for (int q = 1; q <= static_cast<int>(s.qubits.size()); ++q) {
                    row.push_back(obs::site_probability(rho, q, 1));
                    row.push_back(obs::site_probability(rho, q, 2));
                }
            } else if (group == "cavity_populations") {
                for (int n = 0; n < s.cav.n_levels; ++n) row.push_back(pops[n]);
            } else if (group == "reduced_cavity") {
                for (int i = 0; i < s.cav.n_levels; ++i) {
                    for (int j = 0; j < s.cav.n_levels; ++j) {
                        row.push_back(rho_cav.mat(i, j).real());
                        row.push_back(rho_cav.mat(i, j).imag());
                    }
                }
            } else if (group == "entropy") {
                row.push_back(entropy);
            }
        }
        result.series.rows.push_back(std::move(row));
    }

    ordered_json summary;
    summary["scenario"] = resolved_json(s);
    try {
        summary["rabi_omega"] = obs::rabi_frequency_estimate(x1_series);
    } catch (const NoOscillation&) {
        summary["rabi_omega"] = nullptr;
    }
    summary["max_norm_drift"] = max_norm_drift;
    summary["max_cavity_population_drift"] = max_pop_drift;
    summary["final_entropy"] = final_entropy;
    if (s.propagator.method == prop::Method::ExpIntegral) {
        // Independent check: a time-ordered reference propagation to the last
        // sample time, compared amplitude by amplitude.
        StateVector ref = StateVector::Zero(total_dim);
        prop::Propagator pr;
        pr.t0 = times.front();
        pr.t1 = times.back();
        pr.method = prop::Method::TimeOrderedOracle;
        for (int n = 0; n < s.cav.n_levels; ++n) {
            const long steps = prop::default_oracle_steps(bs.generators[n], times.front(),
                                                          times.back(), s.cav.hbar);
            pr.blocks.push_back(prop::time_ordered_oracle(bs.generators[n], times.front(),
                                                          times.back(), steps, s.cav.hbar));
        }
        ref = prop::propagate_state(pr, psi0);
        summary["oracle_reference_deviation"] = (psi_final - ref).cwiseAbs().maxCoeff();
    }
    result.summary = std::move(summary);
    return result;
}

std::string series_csv(const TimeSeries& ts) {
    std::string out;
    for (std::size_t c = 0; c < ts.columns.size(); ++c) {
        if (c) out += ',';
        out += ts.columns[c];
    }
    out += '\n';
    for (const std::vector<double>& row : ts.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

void write_outputs(const SimulationResult& r, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream csv(std::filesystem::path(out_dir) / "timeseries.csv",
                          std::ios::binary);
        if (!csv) throw Error("cannot write timeseries.csv under " + out_dir);
        csv << series_csv(r.series);
    }
    {
        std::ofstream js(std::filesystem::path(out_dir) / "summary.json", std::ios::binary);
        if (!js) throw Error("cannot write summary.json under " + out_dir);
        js << r.summary.dump(2) << '\n';
    }
}

SweepResult run_sweep(const json& doc, const SweepSpec& spec) {
    // Resolve the dotted path down to a numeric leaf once, on the base
    // document, so a bad path fails before any run starts.
    std::vector<std::string> tokens;
    {
        std::string token;
        std::istringstream in(spec.param_path);
        while (std::getline(in, token, '.')) tokens.push_back(token);
    }
    if (tokens.empty()) throw UnknownParameterPath("empty sweep parameter path");
    const auto substitute = [&tokens, &spec](json base, double value) {
        json* node = &base;
        for (const std::string& tok : tokens) {
            if (node->is_object()) {
                if (!node->contains(tok)) {
                    throw UnknownParameterPath("sweep path token '" + tok +
                                               "' not found in " + spec.param_path);
                }
                node = &(*node)[tok];
            } else if (node->is_array()) {
                std::size_t idx = 0;
                try {
                    idx = std::stoul(tok);
                } catch (const std::exception&) {
                    throw UnknownParameterPath("sweep path token '" + tok +
                                               "' is not an array index in " +
                                               spec.param_path);
                }
                if (idx >= node->size()) {
                    throw UnknownParameterPath("sweep path index " + tok +
                                               " out of range in " + spec.param_path);
                }
                node = &(*node)[idx];
            } else {
                throw UnknownParameterPath("sweep path descends into a scalar at '" + tok +
                                           "' in " + spec.param_path);
            }
        }
        if (!node->is_number()) {
            throw UnknownParameterPath("sweep path " + spec.param_path +
                                       " does not name a number");
        }
        *node = value;
        return base;
    };
    substitute(doc, 0.0);  // validate the path against the base document

    SweepResult out;
    out.columns = {"value", "rabi_omega", "max_norm_drift", "max_cavity_population_drift",
                   "final_entropy"};
    std::vector<std::future<std::vector<double>>> futures;
    futures.reserve(spec.values.size());
    for (const double value : spec.values) {
        futures.push_back(std::async(std::launch::async, [&substitute, &doc, value] {
            const Scenario s = parse_scenario(substitute(doc, value));
            const SimulationResult r = run_simulate(s);
            const ordered_json& sm = r.summary;
            const double rabi = sm["rabi_omega"].is_null()
                                    ? std::numeric_limits<double>::quiet_NaN()
                                    : sm["rabi_omega"].get<double>();
            return std::vector<double>{value, rabi, sm["max_norm_drift"].get<double>(),
                                       sm["max_cavity_population_drift"].get<double>(),
                                       sm["final_entropy"].get<double>()};
        }));
    }
    for (auto& f : futures) out.rows.push_back(f.get());
    return out;
}

std::string sweep_csv(const SweepResult& r) {
    TimeSeries ts;
    ts.columns = r.columns;
    ts.rows = r.rows;
    return series_csv(ts);
}

}  // namespace tbcav::cli
