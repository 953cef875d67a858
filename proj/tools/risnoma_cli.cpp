// SPDX-License-Identifier: Apache-2.0
//
// risnoma: sum-rate optimization for RIS-assisted NOMA D2D links
// Copyright (C) 2026 The risnoma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Command-line front end: Monte Carlo runs, convergence traces, RIS-size
// sweeps and brute-force comparisons.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "risnoma/alternating.hpp"
#include "risnoma/experiments.hpp"
#include "risnoma/oracle.hpp"

namespace {

using namespace risnoma;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct CommonOptions {
    std::string config_path;
    std::string seed_range;
    std::string out;
    int jobs = 0;
    bool print_config = false;
    std::vector<std::string> settings;
};

void add_common(CLI::App* app, CommonOptions& o) {
    app->add_option("--config", o.config_path, "key = value configuration file");
    app->add_option("--seed-range", o.seed_range, "seeds as begin:end (end exclusive)");
    app->add_option("--out", o.out, "output CSV path (default: stdout)");
    app->add_option("--jobs", o.jobs, "worker threads for independent seeds")->check(CLI::PositiveNumber);
    app->add_flag("--print-config", o.print_config, "print the effective configuration and exit");
    app->add_option("--set", o.settings, "override one setting, key=value (repeatable)");
}

ExperimentConfig build_config(ExperimentConfig cfg, const CommonOptions& o) {
    if (!o.config_path.empty()) {
        load_config(o.config_path, cfg);
    }
    for (const auto& s : o.settings) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("--set expects key=value, got '" + s + "'");
        }
        apply_setting(cfg, detail::trim(s.substr(0, eq)), detail::trim(s.substr(eq + 1)));
    }
    if (!o.seed_range.empty()) {
        std::tie(cfg.seed_begin, cfg.seed_end) = parse_seed_range(o.seed_range);
    }
    if (!o.out.empty()) {
        cfg.output_path = o.out;
    }
    if (o.jobs > 0) {
        cfg.jobs = o.jobs;
    }
    cfg.validate();
    return cfg;
}

/// Writes through `emit` to the configured path or stdout.
template <typename Emit>
void with_output(const std::string& path, Emit&& emit) {
    if (path.empty() || path == "-") {
        emit(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out = open_output(path);
    emit(out);
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

int report_feasibility(std::size_t feasible, std::size_t total) {
    std::fprintf(stderr, "%zu of %zu rows feasible\n", feasible, total);
    return feasible == 0 ? kExitRuntime : kExitOk;
}

int cmd_results(const ExperimentConfig& cfg) {
    std::optional<std::ofstream> file;
    if (!cfg.output_path.empty() && cfg.output_path != "-") {
        file = open_output(cfg.output_path);
    }
    const auto rows = run_experiment(cfg);
    if (file) {
        write_csv(rows, *file);
    } else {
        write_csv(rows, std::cout);
    }
    std::size_t ok = 0;
    for (const auto& r : rows) {
        ok += r.feasible ? 1 : 0;
    }
    return report_feasibility(ok, rows.size());
}

int cmd_converge(const ExperimentConfig& cfg) {
    std::optional<std::ofstream> file;
    if (!cfg.output_path.empty() && cfg.output_path != "-") {
        file = open_output(cfg.output_path);
    }
    const auto points = run_convergence_trace(cfg);
    if (file) {
        write_trace_csv(points, *file);
    } else {
        write_trace_csv(points, std::cout);
    }
    return points.empty() ? kExitRuntime : kExitOk;
}

struct OracleRow {
    std::string suite;
    std::uint64_t seed;
    double algorithm;
    double reference;
    double algorithm_ms;
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

int cmd_oracle(const ExperimentConfig& base, const std::string& suite) {
    const bool all = suite == "all";
    std::vector<OracleRow> rows;
    for (std::uint64_t seed = base.seed_begin; seed < base.seed_end; ++seed) {
        if (all || suite == "power") {
            const SystemParams p = base.system_params(base.p_max_dbm, 6);
            const auto ch = generate_channels(p, base.geometry, seed);
            const auto phases = PhaseVector::zeros(p.K);
            const auto t0 = std::chrono::steady_clock::now();
            const auto r = optimize_power(ch, phases, p, {p.p_max, p.fixed_lambda_i, 1.0 - p.fixed_lambda_i});
            const double ms = elapsed_ms(t0);
            const auto grid = oracle::power_grid(ch, phases, p);
            rows.push_back({"power", seed, r.report.sum_rate, static_cast<double>(grid.sum_rate), ms});
        }
        if (all || suite == "joint" || suite == "phase") {
            const SystemParams p = base.system_params(base.p_max_dbm, 4);
            const auto ch = generate_channels(p, base.geometry, seed);
            const auto t0 = std::chrono::steady_clock::now();
            const Solution sol = maximize_sum_rate(ch, p);
            const double ms = elapsed_ms(t0);
            if (all || suite == "joint") {
                const auto joint = oracle::joint_search(ch, p);
                rows.push_back({"joint", seed, sol.report.sum_rate, static_cast<double>(joint.sum_rate), ms});
            }
            if (all || suite == "phase") {
                const auto t1 = std::chrono::steady_clock::now();
                const PhaseResult ph = optimize_phases(ch, sol.pa, p, PhaseVector::zeros(p.K));
                const double ms1 = elapsed_ms(t1);
                const auto search = oracle::phase_search(ch, sol.pa, p);
                rows.push_back({"phase", seed, sinr_all(ch, sol.pa, ph.phases, p).sum_rate,
                                static_cast<double>(search.sum_rate), ms1});
            }
        }
        if (all || suite == "oma") {
            const SystemParams p = base.system_params(base.p_max_dbm, base.sizes().front());
            const auto ch = generate_channels(p, base.geometry, seed);
            const auto phases = PhaseVector::zeros(p.K);
            const auto t0 = std::chrono::steady_clock::now();
            const double pw = oma_power(compute_gains(ch, phases, p), p);
            const double ms = elapsed_ms(t0);
            const auto grid = oracle::oma_power_grid(ch, phases, p);
            const double alg = pw > 0.0 ? oma_report(compute_gains(ch, phases, p), pw, p).sum_rate : 0.0;
            rows.push_back({"oma_power", seed, alg, static_cast<double>(grid.sum_rate), ms});
        }
    }
    with_output(base.output_path, [&](std::ostream& out) {
        out << "suite,seed,algorithm,reference,ratio,algorithm_ms\n";
        for (const auto& r : rows) {
            const double ratio = r.reference > 0.0 ? r.algorithm / r.reference : 1.0;
            out << r.suite << ',' << r.seed << ',' << format_number(r.algorithm) << ',' << format_number(r.reference)
                << ',' << format_number(ratio) << ',' << format_number(base.record_timing ? r.algorithm_ms : 0.0)
                << "\n";
        }
    });
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sum-rate optimization for RIS-assisted NOMA D2D links under a UAV cellular link"};
    app.require_subcommand(1);

    CommonOptions run_opts, conv_opts, k_opts, oracle_opts;
    std::string suite = "all";
    CLI::App* run = app.add_subcommand("run", "Monte Carlo comparison of the three schemes over DT power");
    CLI::App* conv = app.add_subcommand("converge", "accepted sum rate per outer iteration");
    CLI::App* sweep_k = app.add_subcommand("sweep-k", "sum rate over DT power for several RIS sizes");
    CLI::App* orc = app.add_subcommand("oracle", "compare the optimizers against brute-force search");
    add_common(run, run_opts);
    add_common(conv, conv_opts);
    add_common(sweep_k, k_opts);
    add_common(orc, oracle_opts);
    orc->add_option("--suite", suite, "power, joint, phase, oma or all")
        ->check(CLI::IsMember({"power", "joint", "phase", "oma", "all"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        ExperimentConfig cfg;
        CommonOptions* opts = nullptr;
        if (*run) {
            cfg.sweep = SweepKind::dt_power;
            cfg.sweep_values = {5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
            cfg.seed_end = 100;
            opts = &run_opts;
        } else if (*conv) {
            cfg.sweep = SweepKind::dt_power;
            cfg.sweep_values = {5.0, 15.0};
            cfg.schemes = {Scheme::proposed};
            cfg.seed_end = 20;
            opts = &conv_opts;
        } else if (*sweep_k) {
            cfg.sweep = SweepKind::ris_elements;
            cfg.sweep_values = {10.0, 15.0, 20.0};
            cfg.dt_powers_dbm = {5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
            cfg.schemes = {Scheme::proposed};
            cfg.seed_end = 100;
            opts = &k_opts;
        } else {
            cfg.seed_end = 20;
            opts = &oracle_opts;
        }
        cfg = build_config(cfg, *opts);
        if (opts->print_config) {
            print_config(cfg, std::cout);
            return kExitOk;
        }
        if (*conv) {
            return cmd_converge(cfg);
        }
        if (*orc) {
            return cmd_oracle(cfg, suite);
        }
        return cmd_results(cfg);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const IoError& e) {
        std::fprintf(stderr, "output error: %s\n", e.what());
        return kExitConfig;
    } catch (const InvalidInput& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return kExitRuntime;
    }
}
