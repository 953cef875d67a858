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

#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "risnoma/experiments.hpp"
#include "risnoma/oracle.hpp"

using namespace risnoma;

namespace {

ExperimentConfig tiny() {
    ExperimentConfig cfg;
    cfg.ris_elements = {6};
    cfg.sweep_values = {10.0, 20.0};
    cfg.seed_begin = 3;
    cfg.seed_end = 5;
    return cfg;
}

std::string csv(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    write_csv(rows, out);
    return out.str();
}

}  // namespace

TEST(Config, PrintParseRoundTrip) {
    ExperimentConfig cfg;
    cfg.params.n_rand = 17;
    cfg.geometry.ris = {1.5, -2.0, 3.25};
    cfg.sweep = SweepKind::ris_elements;
    cfg.sweep_values = {10, 15};
    cfg.schemes = {Scheme::oma, Scheme::proposed};
    cfg.gamma_min_db = 12.5;
    std::ostringstream first;
    print_config(cfg, first);

    ExperimentConfig back;
    std::istringstream in(first.str());
    parse_config(in, back);
    std::ostringstream second;
    print_config(back, second);
    EXPECT_EQ(first.str(), second.str());
    EXPECT_EQ(back.params.n_rand, 17);
    EXPECT_EQ(back.sweep, SweepKind::ris_elements);
    EXPECT_DOUBLE_EQ(back.geometry.ris.z, 3.25);
}

TEST(Config, CommentsAndWhitespace) {
    ExperimentConfig cfg;
    std::istringstream in("# header\n\n  system.gamma_min_db = 15   # lower floor\nexperiment.seeds=2:6\n");
    parse_config(in, cfg);
    EXPECT_DOUBLE_EQ(cfg.gamma_min_db, 15.0);
    EXPECT_EQ(cfg.seed_begin, 2u);
    EXPECT_EQ(cfg.seed_end, 6u);
}

TEST(Config, RejectsBadInput) {
    ExperimentConfig cfg;
    EXPECT_THROW(apply_setting(cfg, "solver.no_such_key", "1"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "solver.n_rand", "abc"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "experiment.schemes", "proposed, tdma"), ConfigError);
    EXPECT_THROW(parse_seed_range("5:5"), ConfigError);
    EXPECT_THROW(parse_seed_range("9:2"), ConfigError);
    EXPECT_THROW(parse_seed_range("x"), ConfigError);
    std::istringstream missing_eq("system.gamma_min_db 3\n");
    EXPECT_THROW(parse_config(missing_eq, cfg), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/dir/cfg.txt", cfg), ConfigError);

    ExperimentConfig bad;
    bad.schemes.clear();
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = ExperimentConfig{};
    bad.sweep = SweepKind::ris_elements;
    bad.sweep_values = {2.5};
    EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Config, SingleSeedRange) {
    const auto [a, b] = parse_seed_range("7");
    EXPECT_EQ(a, 7u);
    EXPECT_EQ(b, 8u);
}

TEST(Csv, GoldenHeader) {
    EXPECT_EQ(std::string(kCsvHeader),
              "seed,scheme,sweep_value,dt_power_dbm,ris_elements,sum_rate,rate_cu,iterations_used,feasible,wall_time_ms");
    EXPECT_EQ(std::string(kTraceHeader), "seed,dt_power_dbm,iteration,sum_rate");
    ResultRow r;
    r.seed = 4;
    r.scheme = Scheme::oma;
    r.sweep_value = 12.5;
    r.dt_power_dbm = 12.5;
    r.ris_elements = 20;
    r.sum_rate = 0.1;
    r.rate_cu = 6.75;
    r.iterations_used = 3;
    r.feasible = true;
    EXPECT_EQ(csv({r}), std::string(kCsvHeader) + "\n4,oma,12.5,12.5,20,0.1,6.75,3,1,0\n");
}

TEST(Csv, NumbersRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456.789, -0.0}) {
        EXPECT_EQ(std::stod(format_number(v)), v);
    }
}

TEST(Experiment, OneRowPerTriple) {
    ExperimentConfig cfg;
    cfg.ris_elements = {4};
    cfg.schemes = {Scheme::proposed};
    const auto rows = run_experiment(cfg);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].scheme, Scheme::proposed);

    const auto many = run_experiment(tiny());
    EXPECT_EQ(many.size(), 2u * 2u * 3u);
    EXPECT_TRUE(std::is_sorted(many.begin(), many.end(), row_less));
    for (const auto& r : many) {
        EXPECT_GE(r.sum_rate, 0.0);
        EXPECT_EQ(r.wall_time_ms, 0.0);
    }
}

TEST(Experiment, DeterministicAcrossRunsAndJobs) {
    ExperimentConfig cfg = tiny();
    const std::string a = csv(run_experiment(cfg));
    const std::string b = csv(run_experiment(cfg));
    cfg.jobs = 3;
    const std::string c = csv(run_experiment(cfg));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
}

TEST(Experiment, RowsAreIndependentlyReproducible) {
    const ExperimentConfig cfg = tiny();
    const auto rows = run_experiment(cfg);
    for (const auto& r : rows) {
        ExperimentConfig one = cfg;
        one.seed_begin = r.seed;
        one.seed_end = r.seed + 1;
        one.sweep_values = {r.sweep_value};
        one.schemes = {r.scheme};
        const auto again = run_experiment(one);
        ASSERT_EQ(again.size(), 1u);
        EXPECT_EQ(format_number(again[0].sum_rate), format_number(r.sum_rate));
    }
}

TEST(Experiment, FeasibleRowsMeetQosOnRecomputation) {
    const ExperimentConfig cfg = tiny();
    for (const auto& r : run_experiment(cfg)) {
        if (!r.feasible) {
            continue;
        }
        const SystemParams p = cfg.system_params(r.dt_power_dbm, r.ris_elements);
        EXPECT_GE(r.rate_cu, std::log2(1.0 + p.gamma_min) - 1e-9);
    }
}

TEST(Experiment, SweepOverRisSize) {
    ExperimentConfig cfg;
    cfg.sweep = SweepKind::ris_elements;
    cfg.sweep_values = {2, 4};
    cfg.dt_powers_dbm = {10, 20};
    cfg.schemes = {Scheme::proposed};
    const auto rows = run_experiment(cfg);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].ris_elements, 2);
    EXPECT_EQ(rows[3].ris_elements, 4);
    EXPECT_DOUBLE_EQ(rows[3].sweep_value, 4.0);
}

TEST(Experiment, UnwritableOutputFailsFast) {
    EXPECT_THROW(open_output("/nonexistent/dir/out.csv"), IoError);
}

TEST(Experiment, SumRateIncreasesWithDtPower) {
    ExperimentConfig cfg;
    cfg.sweep_values = {5, 15, 25};
    cfg.seed_begin = 0;
    cfg.seed_end = 100;
    const auto rows = run_experiment(cfg);
    std::map<std::pair<Scheme, double>, double> mean;
    for (const auto& r : rows) {
        mean[{r.scheme, r.dt_power_dbm}] += r.sum_rate / 100.0;
    }
    for (Scheme s : cfg.schemes) {
        EXPECT_LT((mean[{s, 5.0}]), (mean[{s, 15.0}])) << to_string(s);
        EXPECT_LT((mean[{s, 15.0}]), (mean[{s, 25.0}])) << to_string(s);
    }
}

TEST(Trace, ConsistentWithRowsAndMonotone) {
    ExperimentConfig cfg;
    cfg.ris_elements = {6};
    cfg.sweep_values = {5, 15};
    cfg.seed_begin = 0;
    cfg.seed_end = 20;
    cfg.schemes = {Scheme::proposed};
    const auto trace = run_convergence_trace(cfg);
    const auto rows = run_experiment(cfg);

    std::map<std::pair<std::uint64_t, double>, std::vector<TracePoint>> by_run;
    for (const auto& t : trace) {
        by_run[{t.seed, t.dt_power_dbm}].push_back(t);
    }
    ASSERT_EQ(by_run.size(), rows.size());
    double final5 = 0.0, final15 = 0.0;
    for (const auto& r : rows) {
        const auto& t = by_run.at({r.seed, r.dt_power_dbm});
        ASSERT_FALSE(t.empty());
        for (std::size_t i = 1; i < t.size(); ++i) {
            EXPECT_GE(t[i].sum_rate, t[i - 1].sum_rate);
        }
        EXPECT_EQ(t.back().sum_rate, r.sum_rate);
        (r.dt_power_dbm == 5.0 ? final5 : final15) += t.back().sum_rate;
    }
    EXPECT_GT(final15, final5);

    std::ostringstream out;
    write_trace_csv(trace, out);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')), kTraceHeader);
}
