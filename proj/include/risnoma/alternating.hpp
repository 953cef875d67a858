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
#include <cmath>
#include <utility>
#include <vector>

#include "risnoma/beamforming.hpp"
#include "risnoma/channel.hpp"
#include "risnoma/params.hpp"
#include "risnoma/phases.hpp"
#include "risnoma/power_alloc.hpp"
#include "risnoma/rates.hpp"

namespace risnoma {

struct PhaseSolveRecord {
    double extracted = 0.0;
    double relaxed = 0.0;
    bool feasible = false;
};

struct Solution {
    PowerAllocation pa;
    PhaseVector phases;
    RateReport report;
    std::vector<std::pair<int, double>> trajectory;  ///< (round, accepted sum rate)
    bool converged = false;
    bool feasible = false;
    int iterations = 0;
    std::vector<PhaseSolveRecord> phase_solves;
};

namespace detail {

inline void record(Solution& s, const PhaseResult& r) {
    s.phase_solves.push_back({r.objective, r.relaxed_objective, r.feasible});
}

/// Accepted iterates keep a relative CU margin of 1e-12 so that the floor
/// survives recomputation in a different evaluation order.
inline bool improves(const RateReport& candidate, double current_rate, const SystemParams& params) {
    return candidate.qos_feasible && candidate.sinr_cu >= params.gamma_min * (1.0 + 1e-12) &&
           candidate.sum_rate > current_rate;
}

/// Largest power not above the budget that meets the QoS floor, or a
/// negative value when only powers below the floor would.
inline double backed_off_power(const ChannelRealization& ch, const PhaseVector& phases, const SystemParams& params) {
    const double cap = qos_power_cap(compute_gains(ch, phases, params), params);
    if (cap < params.p_floor()) {
        return -1.0;
    }
    return std::min(params.p_max, cap);
}

/// Starting phases that admit a QoS-feasible power. The all-zero phases are
/// used when they do; otherwise the phase subproblem is solved at the power
/// floor, whose feasibility phase maximizes the CU margin.
inline std::pair<PhaseVector, bool> feasible_start(const ChannelRealization& ch, const PowerAllocation& pa,
                                                   const SystemParams& params, Solution& s) {
    PhaseVector phases = PhaseVector::zeros(ch.size());
    if (backed_off_power(ch, phases, params) > 0.0) {
        return {phases, true};
    }
    const PowerAllocation low{params.p_floor(), pa.lambda_i, pa.lambda_j};
    const PhaseResult r = optimize_phases(ch, low, params, phases);
    record(s, r);
    if (r.feasible && backed_off_power(ch, r.phases, params) > 0.0) {
        return {r.phases, true};
    }
    return {phases, false};
}

inline Solution infeasible_solution(const ChannelRealization& ch, const PowerAllocation& pa, PhaseVector phases,
                                    const SystemParams& params, Solution s) {
    s.pa = {0.0, pa.lambda_i, pa.lambda_j};
    s.phases = std::move(phases);
    s.report = sinr_all(ch, s.pa, s.phases, params);
    s.feasible = false;
    s.converged = false;
    s.trajectory.emplace_back(0, s.report.sum_rate);
    return s;
}

}  // namespace detail

/// Alternating optimization of the NOMA power split and the RIS phases.
/// A round is kept only when the full-SINR sum rate improves.
inline Solution maximize_sum_rate(const ChannelRealization& ch, const SystemParams& params) {
    params.validate();
    Solution s;
    const PowerAllocation nominal{params.p_max, params.fixed_lambda_i, 1.0 - params.fixed_lambda_i};
    auto [phases, ok] = detail::feasible_start(ch, nominal, params, s);
    if (!ok) {
        return detail::infeasible_solution(ch, nominal, phases, params, std::move(s));
    }
    PowerAllocation pa = nominal;
    pa.p_t = detail::backed_off_power(ch, phases, params);
    RateReport report = sinr_all(ch, pa, phases, params);
    s.trajectory.emplace_back(0, report.sum_rate);

    for (int round = 1; round <= params.ao_max_iter; ++round) {
        s.iterations = round;
        const PowerResult pr = optimize_power(ch, phases, params, pa);
        const PowerAllocation pa_new = pr.feasible ? pr.pa : pa;
        const PhaseResult ph = optimize_phases(ch, pa_new, params, phases);
        detail::record(s, ph);

        RateReport best = report;
        PowerAllocation best_pa = pa;
        PhaseVector best_phases = phases;
        const RateReport power_only = sinr_all(ch, pa_new, phases, params);
        if (detail::improves(power_only, best.sum_rate, params)) {
            best = power_only;
            best_pa = pa_new;
        }
        if (ph.feasible) {
            const RateReport both = sinr_all(ch, pa_new, ph.phases, params);
            if (detail::improves(both, best.sum_rate, params)) {
                best = both;
                best_pa = pa_new;
                best_phases = ph.phases;
            }
        }

        const double gain = best.sum_rate - report.sum_rate;
        if (gain <= 0.0) {
            s.converged = true;
            break;
        }
        pa = best_pa;
        phases = best_phases;
        report = best;
        s.trajectory.emplace_back(round, report.sum_rate);
        if (gain < params.tol) {
            s.converged = true;
            break;
        }
    }

    s.pa = pa;
    s.phases = phases;
    s.report = report;
    s.feasible = report.qos_feasible;
    return s;
}

/// Fixed NOMA split at the largest QoS-compliant power, phases optimized.
/// The power is re-derived after each phase update.
inline Solution run_baseline_fixed(const ChannelRealization& ch, const SystemParams& params) {
    params.validate();
    Solution s;
    const PowerAllocation nominal{params.p_max, params.fixed_lambda_i, 1.0 - params.fixed_lambda_i};
    auto [phases, ok] = detail::feasible_start(ch, nominal, params, s);
    if (!ok) {
        return detail::infeasible_solution(ch, nominal, phases, params, std::move(s));
    }
    PowerAllocation pa = nominal;
    pa.p_t = detail::backed_off_power(ch, phases, params);
    RateReport report = sinr_all(ch, pa, phases, params);
    s.trajectory.emplace_back(0, report.sum_rate);

    for (int round = 1; round <= params.ao_max_iter; ++round) {
        s.iterations = round;
        const PhaseResult ph = optimize_phases(ch, pa, params, phases);
        detail::record(s, ph);
        double gain = 0.0;
        if (ph.feasible) {
            PowerAllocation next = pa;
            const double p = detail::backed_off_power(ch, ph.phases, params);
            if (p > 0.0) {
                next.p_t = p;
                const RateReport r = sinr_all(ch, next, ph.phases, params);
                if (detail::improves(r, report.sum_rate, params)) {
                    gain = r.sum_rate - report.sum_rate;
                    pa = next;
                    phases = ph.phases;
                    report = r;
                    s.trajectory.emplace_back(round, report.sum_rate);
                }
            }
        }
        if (gain < params.tol) {
            s.converged = true;
            break;
        }
    }

    s.pa = pa;
    s.phases = phases;
    s.report = report;
    s.feasible = report.qos_feasible;
    return s;
}

/// Time-division report: DR_i is served alone for a fraction `slot_i` of the
/// time and DR_j for the rest, each at the full power p.
inline RateReport oma_report(const EffectiveGains& g, double p, const SystemParams& params) {
    const double tau = params.oma_slot_i;
    const double cu = g.G_c / (p * g.H_c + params.sigma2);
    const double si = p * g.H_i / (g.G_i + params.sigma2);
    const double sj = p * g.H_j / (g.G_j + params.sigma2);
    return RateReport::from_sinrs(cu, si, sj, params.gamma_min, tau, 1.0 - tau);
}

/// Golden-section search for the OMA power on [p_floor, min(p_max, QoS cap)].
inline double oma_power(const EffectiveGains& g, const SystemParams& params) {
    const double cap = qos_power_cap(g, params);
    if (cap < params.p_floor()) {
        return -1.0;
    }
    const double lo = params.p_floor();
    const double hi = std::min(params.p_max, cap);
    const double t = detail::golden_max([&](double tt) { return oma_report(g, lo + tt, params).sum_rate; }, hi - lo, 80);
    return lo + t;
}

/// Orthogonal (time-division) D2D baseline with optimized power and phases.
/// Phases are designed for each receiver alone and the better common
/// configuration is kept.
inline Solution run_baseline_oma(const ChannelRealization& ch, const SystemParams& params) {
    params.validate();
    Solution s;
    const double tau = params.oma_slot_i;
    const PowerAllocation nominal{params.p_max, tau, 1.0 - tau};
    auto [phases, ok] = detail::feasible_start(ch, {params.p_max, 1.0, 0.0}, params, s);
    if (!ok) {
        return detail::infeasible_solution(ch, nominal, phases, params, std::move(s));
    }
    const BeamformingModel model = make_model(ch, params);

    double p = oma_power(compute_gains(ch, phases, params), params);
    RateReport report = oma_report(compute_gains(ch, phases, params), p, params);
    s.trajectory.emplace_back(0, report.sum_rate);

    for (int round = 1; round <= params.ao_max_iter; ++round) {
        s.iterations = round;
        const double p_new = oma_power(compute_gains(ch, phases, params), params);
        RateReport best = report;
        double best_p = p;
        PhaseVector best_phases = phases;
        if (p_new > 0.0) {
            const RateReport r = oma_report(compute_gains(ch, phases, params), p_new, params);
            if (detail::improves(r, best.sum_rate, params)) {
                best = r;
                best_p = p_new;
            }
        }
        const double p_design = p_new > 0.0 ? p_new : p;
        const LiftedMatrices lm = build_lifted(model, {p_design, 1.0, 0.0}, params);
        const TraceConstraint qos = qos_constraint(lm, params);
        for (Receiver rx : {Receiver::dri, Receiver::drj}) {
            const double w = rx == Receiver::dri ? tau : 1.0 - tau;
            if (w <= 0.0) {
                continue;
            }
            const PhaseResult ph = optimize_lifted(single_user_objective(model, rx, p_design, w, params), qos, phases, params);
            detail::record(s, ph);
            if (!ph.feasible) {
                continue;
            }
            const EffectiveGains g = compute_gains(ch, ph.phases, params);
            for (double cand : {p_design, oma_power(g, params)}) {
                if (cand <= 0.0) {
                    continue;
                }
                const RateReport r = oma_report(g, cand, params);
                if (detail::improves(r, best.sum_rate, params)) {
                    best = r;
                    best_p = cand;
                    best_phases = ph.phases;
                }
            }
        }

        const double gain = best.sum_rate - report.sum_rate;
        if (gain <= 0.0) {
            s.converged = true;
            break;
        }
        p = best_p;
        phases = best_phases;
        report = best;
        s.trajectory.emplace_back(round, report.sum_rate);
        if (gain < params.tol) {
            s.converged = true;
            break;
        }
    }

    s.pa = {p, tau, 1.0 - tau};
    s.phases = phases;
    s.report = report;
    s.feasible = report.qos_feasible;
    return s;
}

}  // namespace risnoma
