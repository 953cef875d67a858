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

#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "risnoma/alternating.hpp"
#include "risnoma/channel.hpp"
#include "risnoma/params.hpp"

namespace risnoma {

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Output cannot be written.
class IoError : public Error {
public:
    using Error::Error;
};

enum class Scheme { proposed, fixed, oma };
enum class SweepKind { dt_power, ris_elements, iterations };

inline const char* to_string(Scheme s) {
    switch (s) {
    case Scheme::proposed: return "proposed";
    case Scheme::fixed: return "fixed";
    case Scheme::oma: return "oma";
    }
    return "?";
}

inline const char* to_string(SweepKind s) {
    switch (s) {
    case SweepKind::dt_power: return "dt_power";
    case SweepKind::ris_elements: return "ris_elements";
    case SweepKind::iterations: return "iterations";
    }
    return "?";
}

/// Shortest round-trip decimal text, independent of the locale.
inline std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct ExperimentConfig {
    SystemParams params;
    Geometry geometry;

    // power-like settings kept in the units they are configured in
    double p_max_dbm = 30.0;
    double q_c_dbm = 30.0;
    double sigma2_dbm = -174.0;
    double gamma_min_db = 20.0;

    std::uint64_t seed_begin = 0;
    std::uint64_t seed_end = 1;  ///< exclusive
    SweepKind sweep = SweepKind::dt_power;
    std::vector<double> sweep_values{30.0};
    std::vector<double> dt_powers_dbm{30.0};  ///< used when the sweep is not over DT power
    std::vector<int> ris_elements{20};        ///< used when the sweep is not over K
    std::vector<Scheme> schemes{Scheme::proposed, Scheme::fixed, Scheme::oma};
    std::string output_path;
    bool record_timing = false;
    int jobs = 1;

    /// Solver parameters for one (DT power, K) operating point.
    SystemParams system_params(double dt_power_dbm, int k) const {
        SystemParams p = params;
        p.p_max = dbm_to_watts(dt_power_dbm);
        p.q_c = dbm_to_watts(q_c_dbm);
        p.sigma2 = dbm_to_watts(sigma2_dbm);
        p.gamma_min = db_to_linear(gamma_min_db);
        p.K = k;
        return p;
    }

    std::vector<double> powers() const { return sweep == SweepKind::dt_power ? sweep_values : dt_powers_dbm; }

    std::vector<int> sizes() const {
        if (sweep != SweepKind::ris_elements) {
            return ris_elements;
        }
        std::vector<int> k;
        for (double v : sweep_values) {
            k.push_back(static_cast<int>(v));
        }
        return k;
    }

    void validate() const {
        if (seed_end <= seed_begin) {
            throw ConfigError("empty seed range");
        }
        if (sweep_values.empty() || dt_powers_dbm.empty() || ris_elements.empty()) {
            throw ConfigError("sweep values must be nonempty");
        }
        if (schemes.empty()) {
            throw ConfigError("at least one scheme is required");
        }
        if (jobs < 1) {
            throw ConfigError("jobs must be at least 1");
        }
        for (double v : sweep_values) {
            if (!std::isfinite(v)) {
                throw ConfigError("non-finite sweep value");
            }
            if (sweep != SweepKind::dt_power && (v < 1.0 || v != std::floor(v))) {
                throw ConfigError("sweep over " + std::string(to_string(sweep)) + " needs positive integers");
            }
        }
        for (int k : sizes()) {
            if (k < 1) {
                throw ConfigError("ris_elements must be positive");
            }
        }
        try {
            geometry.validate();
            for (double pw : powers()) {
                for (int k : sizes()) {
                    system_params(pw, k).validate();
                }
            }
        } catch (const InvalidInput& e) {
            throw ConfigError(e.what());
        }
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        out.push_back(trim(item));
    }
    return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw ConfigError(key + ": not a number: '" + v + "'");
    }
    return out;
}

inline std::int64_t parse_int(const std::string& key, const std::string& v) {
    std::int64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ConfigError(key + ": not an integer: '" + v + "'");
    }
    return out;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ConfigError(key + ": not a nonnegative integer: '" + v + "'");
    }
    return out;
}

inline int parse_count(const std::string& key, const std::string& v) {
    const std::int64_t n = parse_int(key, v);
    if (n < 0 || n > 1000000) {
        throw ConfigError(key + ": out of range: " + v);
    }
    return static_cast<int>(n);
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        return false;
    }
    throw ConfigError(key + ": not a boolean: '" + v + "'");
}

inline Point3 parse_point(const std::string& key, const std::string& v) {
    const auto parts = split(v, ',');
    if (parts.size() != 3) {
        throw ConfigError(key + ": expected x, y, z");
    }
    return {parse_double(key, parts[0]), parse_double(key, parts[1]), parse_double(key, parts[2])};
}

inline std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& p : split(v, ',')) {
        out.push_back(parse_double(key, p));
    }
    if (out.empty()) {
        throw ConfigError(key + ": empty list");
    }
    return out;
}

inline std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? ", " : "") + format_number(v[i]);
    }
    return s;
}

inline std::string point_text(const Point3& p) {
    return format_number(p.x) + ", " + format_number(p.y) + ", " + format_number(p.z);
}

}  // namespace detail

/// Parses "begin:end" (end exclusive) or a single seed.
inline std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
    const auto parts = detail::split(text, ':');
    if (parts.size() == 1) {
        const auto s = detail::parse_uint("seed range", parts[0]);
        return {s, s + 1};
    }
    if (parts.size() != 2) {
        throw ConfigError("seed range must be begin:end");
    }
    const auto b = detail::parse_uint("seed range", parts[0]);
    const auto e = detail::parse_uint("seed range", parts[1]);
    if (e <= b) {
        throw ConfigError("seed range " + text + " is empty");
    }
    return {b, e};
}

/// Applies one dotted key. Unknown keys are errors.
inline void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    using namespace detail;
    SystemParams& p = cfg.params;
    Geometry& g = cfg.geometry;
    const std::map<std::string, std::function<void(const std::string&)>> table{
        {"system.ris_elements", [&](const std::string& v) { cfg.ris_elements = {parse_count(key, v)}; }},
        {"system.dt_power_dbm", [&](const std::string& v) { cfg.p_max_dbm = parse_double(key, v); cfg.dt_powers_dbm = {cfg.p_max_dbm}; }},
        {"system.uav_power_dbm", [&](const std::string& v) { cfg.q_c_dbm = parse_double(key, v); }},
        {"system.noise_dbm", [&](const std::string& v) { cfg.sigma2_dbm = parse_double(key, v); }},
        {"system.gamma_min_db", [&](const std::string& v) { cfg.gamma_min_db = parse_double(key, v); }},
        {"solver.sca_max_iter", [&](const std::string& v) { p.sca_max_iter = parse_count(key, v); }},
        {"solver.ao_max_iter", [&](const std::string& v) { p.ao_max_iter = parse_count(key, v); }},
        {"solver.dc_max_iter", [&](const std::string& v) { p.dc_max_iter = parse_count(key, v); }},
        {"solver.tol", [&](const std::string& v) { p.tol = parse_double(key, v); }},
        {"solver.dual_max_iter", [&](const std::string& v) { p.dual_max_iter = parse_count(key, v); }},
        {"solver.dual_step", [&](const std::string& v) { p.dual_step = parse_double(key, v); }},
        {"solver.dual_init", [&](const std::string& v) { p.dual_init = parse_double(key, v); }},
        {"solver.p_floor_ratio", [&](const std::string& v) { p.p_floor_ratio = parse_double(key, v); }},
        {"solver.lambda_floor", [&](const std::string& v) { p.lambda_floor = parse_double(key, v); }},
        {"solver.literal_cubic", [&](const std::string& v) { p.literal_cubic = parse_bool(key, v); }},
        {"solver.include_direct_links", [&](const std::string& v) { p.include_direct_links = parse_bool(key, v); }},
        {"solver.n_rand", [&](const std::string& v) { p.n_rand = parse_count(key, v); }},
        {"solver.fw_steps", [&](const std::string& v) { p.fw_steps = parse_count(key, v); }},
        {"solver.sdp_tol", [&](const std::string& v) { p.sdp_tol = parse_double(key, v); }},
        {"solver.sdp_max_iter", [&](const std::string& v) { p.sdp_max_iter = parse_count(key, v); }},
        {"solver.over_relaxation", [&](const std::string& v) { p.over_relaxation = parse_double(key, v); }},
        {"solver.randomization_seed", [&](const std::string& v) { p.randomization_seed = parse_uint(key, v); }},
        {"baseline.fixed_lambda_i", [&](const std::string& v) { p.fixed_lambda_i = parse_double(key, v); }},
        {"baseline.oma_slot_i", [&](const std::string& v) { p.oma_slot_i = parse_double(key, v); }},
        {"geometry.uav", [&](const std::string& v) { g.uav = parse_point(key, v); }},
        {"geometry.dt", [&](const std::string& v) { g.dt = parse_point(key, v); }},
        {"geometry.cu", [&](const std::string& v) { g.cu = parse_point(key, v); }},
        {"geometry.dr_i", [&](const std::string& v) { g.dr_i = parse_point(key, v); }},
        {"geometry.dr_j", [&](const std::string& v) { g.dr_j = parse_point(key, v); }},
        {"geometry.ris", [&](const std::string& v) { g.ris = parse_point(key, v); }},
        {"geometry.ref_loss_db", [&](const std::string& v) { g.ref_loss_db = parse_double(key, v); }},
        {"geometry.shared_ris_drop_links", [&](const std::string& v) { g.shared_ris_drop_links = parse_bool(key, v); }},
        {"experiment.seeds", [&](const std::string& v) { std::tie(cfg.seed_begin, cfg.seed_end) = parse_seed_range(v); }},
        {"experiment.sweep",
         [&](const std::string& v) {
             if (v == "dt_power") {
                 cfg.sweep = SweepKind::dt_power;
             } else if (v == "ris_elements") {
                 cfg.sweep = SweepKind::ris_elements;
             } else if (v == "iterations") {
                 cfg.sweep = SweepKind::iterations;
             } else {
                 throw ConfigError(key + ": unknown sweep '" + v + "'");
             }
         }},
        {"experiment.sweep_values", [&](const std::string& v) { cfg.sweep_values = parse_list(key, v); }},
        {"experiment.dt_powers_dbm", [&](const std::string& v) { cfg.dt_powers_dbm = parse_list(key, v); }},
        {"experiment.ris_elements",
         [&](const std::string& v) {
             cfg.ris_elements.clear();
             for (const auto& s : split(v, ',')) {
                 cfg.ris_elements.push_back(parse_count(key, s));
             }
         }},
        {"experiment.schemes",
         [&](const std::string& v) {
             cfg.schemes.clear();
             for (const auto& s : split(v, ',')) {
                 if (s == "proposed") {
                     cfg.schemes.push_back(Scheme::proposed);
                 } else if (s == "fixed") {
                     cfg.schemes.push_back(Scheme::fixed);
                 } else if (s == "oma") {
                     cfg.schemes.push_back(Scheme::oma);
                 } else {
                     throw ConfigError(key + ": unknown scheme '" + s + "'");
                 }
             }
             std::sort(cfg.schemes.begin(), cfg.schemes.end());
             cfg.schemes.erase(std::unique(cfg.schemes.begin(), cfg.schemes.end()), cfg.schemes.end());
         }},
        {"experiment.output", [&](const std::string& v) { cfg.output_path = v; }},
        {"experiment.record_timing", [&](const std::string& v) { cfg.record_timing = parse_bool(key, v); }},
        {"experiment.jobs", [&](const std::string& v) { cfg.jobs = parse_count(key, v); }},
    };
    if (const auto it = table.find(key); it != table.end()) {
        it->second(value);
        return;
    }
    // geometry.<link class>.exponent / .rician_k_db
    for (int c = 0; c < kLinkClassCount; ++c) {
        const std::string prefix = std::string("geometry.") + to_string(static_cast<LinkClass>(c)) + ".";
        if (key == prefix + "exponent") {
            g.links[static_cast<std::size_t>(c)].exponent = parse_double(key, value);
            return;
        }
        if (key == prefix + "rician_k_db") {
            const double db = parse_double(key, value);
            g.links[static_cast<std::size_t>(c)].rician_k = std::isinf(db) ? 0.0 : db_to_linear(db);
            return;
        }
        if (key == prefix + "rayleigh") {
            if (parse_bool(key, value)) {
                g.links[static_cast<std::size_t>(c)].rician_k = 0.0;
            }
            return;
        }
    }
    throw ConfigError("unknown key '" + key + "'");
}

/// Reads "key = value" lines; '#' starts a comment.
inline void parse_config(std::istream& in, ExperimentConfig& cfg) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        try {
            apply_setting(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
}

inline void load_config(const std::string& path, ExperimentConfig& cfg) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path);
    }
    parse_config(in, cfg);
}

/// Effective configuration in the same format `parse_config` reads.
inline void print_config(const ExperimentConfig& cfg, std::ostream& out) {
    using detail::join;
    using detail::point_text;
    const SystemParams& p = cfg.params;
    const Geometry& g = cfg.geometry;
    auto b = [](bool v) { return v ? "true" : "false"; };
    out << "system.dt_power_dbm = " << format_number(cfg.p_max_dbm) << "\n"
        << "system.uav_power_dbm = " << format_number(cfg.q_c_dbm) << "\n"
        << "system.noise_dbm = " << format_number(cfg.sigma2_dbm) << "\n"
        << "system.gamma_min_db = " << format_number(cfg.gamma_min_db) << "\n"
        << "solver.sca_max_iter = " << p.sca_max_iter << "\n"
        << "solver.ao_max_iter = " << p.ao_max_iter << "\n"
        << "solver.dc_max_iter = " << p.dc_max_iter << "\n"
        << "solver.tol = " << format_number(p.tol) << "\n"
        << "solver.dual_max_iter = " << p.dual_max_iter << "\n"
        << "solver.dual_step = " << format_number(p.dual_step) << "\n"
        << "solver.dual_init = " << format_number(p.dual_init) << "\n"
        << "solver.p_floor_ratio = " << format_number(p.p_floor_ratio) << "\n"
        << "solver.lambda_floor = " << format_number(p.lambda_floor) << "\n"
        << "solver.literal_cubic = " << b(p.literal_cubic) << "\n"
        << "solver.include_direct_links = " << b(p.include_direct_links) << "\n"
        << "solver.n_rand = " << p.n_rand << "\n"
        << "solver.fw_steps = " << p.fw_steps << "\n"
        << "solver.sdp_tol = " << format_number(p.sdp_tol) << "\n"
        << "solver.sdp_max_iter = " << p.sdp_max_iter << "\n"
        << "solver.over_relaxation = " << format_number(p.over_relaxation) << "\n"
        << "solver.randomization_seed = " << p.randomization_seed << "\n"
        << "baseline.fixed_lambda_i = " << format_number(p.fixed_lambda_i) << "\n"
        << "baseline.oma_slot_i = " << format_number(p.oma_slot_i) << "\n"
        << "geometry.uav = " << point_text(g.uav) << "\n"
        << "geometry.dt = " << point_text(g.dt) << "\n"
        << "geometry.cu = " << point_text(g.cu) << "\n"
        << "geometry.dr_i = " << point_text(g.dr_i) << "\n"
        << "geometry.dr_j = " << point_text(g.dr_j) << "\n"
        << "geometry.ris = " << point_text(g.ris) << "\n"
        << "geometry.ref_loss_db = " << format_number(g.ref_loss_db) << "\n"
        << "geometry.shared_ris_drop_links = " << b(g.shared_ris_drop_links) << "\n";
    for (int c = 0; c < kLinkClassCount; ++c) {
        const LinkModel& m = g.links[static_cast<std::size_t>(c)];
        const std::string prefix = std::string("geometry.") + to_string(static_cast<LinkClass>(c)) + ".";
        out << prefix << "exponent = " << format_number(m.exponent) << "\n";
        if (m.rician_k > 0.0) {
            out << prefix << "rician_k_db = " << format_number(linear_to_db(m.rician_k)) << "\n";
        } else {
            out << prefix << "rayleigh = true\n";
        }
    }
    std::vector<double> ks(cfg.ris_elements.begin(), cfg.ris_elements.end());
    std::vector<Scheme> ordered = cfg.schemes;
    std::sort(ordered.begin(), ordered.end());
    ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());
    std::string schemes;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        schemes += (i ? ", " : "") + std::string(to_string(ordered[i]));
    }
    out << "experiment.seeds = " << cfg.seed_begin << ":" << cfg.seed_end << "\n"
        << "experiment.sweep = " << to_string(cfg.sweep) << "\n"
        << "experiment.sweep_values = " << join(cfg.sweep_values) << "\n"
        << "experiment.dt_powers_dbm = " << join(cfg.dt_powers_dbm) << "\n"
        << "experiment.ris_elements = " << join(ks) << "\n"
        << "experiment.schemes = " << schemes << "\n"
        << "experiment.output = " << cfg.output_path << "\n"
        << "experiment.record_timing = " << b(cfg.record_timing) << "\n"
        << "experiment.jobs = " << cfg.jobs << "\n";
}

struct ResultRow {
    std::uint64_t seed = 0;
    Scheme scheme = Scheme::proposed;
    double sweep_value = 0.0;
    double dt_power_dbm = 0.0;
    int ris_elements = 0;
    double sum_rate = 0.0;
    double rate_cu = 0.0;
    int iterations_used = 0;
    bool feasible = false;
    double wall_time_ms = 0.0;
    std::vector<std::pair<int, double>> trajectory;  ///< not written to the results CSV
};

inline constexpr const char* kCsvHeader =
    "seed,scheme,sweep_value,dt_power_dbm,ris_elements,sum_rate,rate_cu,iterations_used,feasible,wall_time_ms";

inline bool row_less(const ResultRow& a, const ResultRow& b) {
    return std::tie(a.seed, a.sweep_value, a.dt_power_dbm, a.ris_elements, a.scheme) <
           std::tie(b.seed, b.sweep_value, b.dt_power_dbm, b.ris_elements, b.scheme);
}

inline void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
    out << kCsvHeader << "\n";
    for (const auto& r : rows) {
        out << r.seed << ',' << to_string(r.scheme) << ',' << format_number(r.sweep_value) << ','
            << format_number(r.dt_power_dbm) << ',' << r.ris_elements << ',' << format_number(r.sum_rate) << ','
            << format_number(r.rate_cu) << ',' << r.iterations_used << ',' << (r.feasible ? 1 : 0) << ','
            << format_number(r.wall_time_ms) << "\n";
    }
}

inline Solution run_scheme(Scheme s, const ChannelRealization& ch, const SystemParams& params) {
    switch (s) {
    case Scheme::proposed: return maximize_sum_rate(ch, params);
    case Scheme::fixed: return run_baseline_fixed(ch, params);
    case Scheme::oma: return run_baseline_oma(ch, params);
    }
    throw InvalidInput("unknown scheme");
}

/// Runs `count` independent tasks on up to `jobs` threads.
inline void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            task(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                    next = count;
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

/// Opens the output before any computation so a bad path fails fast.
inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    return out;
}

/// One row per (seed, sweep point, scheme), sorted. Deterministic given
/// `cfg` unless timing is recorded.
inline std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    struct Task {
        std::uint64_t seed;
        int k;
        double sweep_value;
        std::vector<double> powers;
        int ao_max_iter;
    };
    std::vector<Task> tasks;
    for (std::uint64_t seed = cfg.seed_begin; seed < cfg.seed_end; ++seed) {
        switch (cfg.sweep) {
        case SweepKind::dt_power:
            for (int k : cfg.sizes()) {
                for (double pw : cfg.sweep_values) {
                    tasks.push_back({seed, k, pw, {pw}, cfg.params.ao_max_iter});
                }
            }
            break;
        case SweepKind::ris_elements:
            for (double kv : cfg.sweep_values) {
                tasks.push_back({seed, static_cast<int>(kv), kv, cfg.dt_powers_dbm, cfg.params.ao_max_iter});
            }
            break;
        case SweepKind::iterations:
            for (int k : cfg.sizes()) {
                for (double it : cfg.sweep_values) {
                    tasks.push_back({seed, k, it, cfg.dt_powers_dbm, static_cast<int>(it)});
                }
            }
            break;
        }
    }

    std::vector<std::vector<ResultRow>> per_task(tasks.size());
    parallel_for(tasks.size(), cfg.jobs, [&](std::size_t idx) {
        const Task& t = tasks[idx];
        const SystemParams base = cfg.system_params(cfg.p_max_dbm, t.k);
        const ChannelRealization ch = generate_channels(base, cfg.geometry, t.seed);
        for (double pw : t.powers) {
            SystemParams params = cfg.system_params(pw, t.k);
            params.ao_max_iter = t.ao_max_iter;
            for (Scheme s : cfg.schemes) {
                const auto start = std::chrono::steady_clock::now();
                const Solution sol = run_scheme(s, ch, params);
                const auto stop = std::chrono::steady_clock::now();
                ResultRow row;
                row.seed = t.seed;
                row.scheme = s;
                row.sweep_value = t.sweep_value;
                row.dt_power_dbm = pw;
                row.ris_elements = t.k;
                row.sum_rate = sol.report.sum_rate;
                row.rate_cu = sol.report.rate_cu;
                row.iterations_used = sol.iterations;
                row.feasible = sol.feasible;
                row.wall_time_ms =
                    cfg.record_timing ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;
                row.trajectory = sol.trajectory;
                per_task[idx].push_back(std::move(row));
            }
        }
    });

    std::vector<ResultRow> rows;
    for (auto& v : per_task) {
        for (auto& r : v) {
            rows.push_back(std::move(r));
        }
    }
    std::stable_sort(rows.begin(), rows.end(), row_less);
    return rows;
}

struct TracePoint {
    std::uint64_t seed = 0;
    double dt_power_dbm = 0.0;
    int iteration = 0;
    double sum_rate = 0.0;
};

inline constexpr const char* kTraceHeader = "seed,dt_power_dbm,iteration,sum_rate";

/// Accepted outer-iterate sum rates of the proposed scheme at each
/// configured DT power.
inline std::vector<TracePoint> run_convergence_trace(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    c.schemes = {Scheme::proposed};
    std::vector<TracePoint> out;
    for (const auto& row : run_experiment(c)) {
        for (const auto& [it, rate] : row.trajectory) {
            out.push_back({row.seed, row.dt_power_dbm, it, rate});
        }
    }
    return out;
}

inline void write_trace_csv(const std::vector<TracePoint>& points, std::ostream& out) {
    out << kTraceHeader << "\n";
    for (const auto& p : points) {
        out << p.seed << ',' << format_number(p.dt_power_dbm) << ',' << p.iteration << ',' << format_number(p.sum_rate)
            << "\n";
    }
}

}  // namespace risnoma
