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
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "risnoma/channel.hpp"
#include "risnoma/common.hpp"
#include "risnoma/params.hpp"
#include "risnoma/phases.hpp"
#include "risnoma/polynomial.hpp"
#include "risnoma/rates.hpp"

namespace risnoma {

/// Multipliers of the QoS, power-budget and lambda constraints.
struct DualVariables {
    double eta1 = 1.0;
    double eta2 = 1.0;
    double eta3 = 1.0;
};

// The Lagrangian handled here is, with lambda_j = 1 - lambda_i,
//
//   L = Rbar_i + Rbar_j + eta1 (1 - gamma_min (p (lambda_i + lambda_j) H_c + sigma2) / G_c)
//                       + eta2 (1 - p / p_max) + eta3 (1 - lambda_i)
//
// Each constraint is divided by a positive constant (G_c, p_max) so that the
// multipliers are dimensionless; this rescales eta and leaves the KKT points
// unchanged.

namespace detail {

/// Weight of the power terms in dL/dp: eta1 gamma_min H_c / G_c + eta2 / p_max.
inline double power_price(const EffectiveGains& g, const DualVariables& duals, const SystemParams& params) {
    const double qos = g.G_c > 0.0 ? duals.eta1 * params.gamma_min * g.H_c / g.G_c : 0.0;
    return qos + duals.eta2 / params.p_max;
}

inline ScaPair pair_or_zero(double gamma) {
    const auto c = sca_pair(gamma);
    return c ? *c : ScaPair{};
}

}  // namespace detail

/// Surrogate Lagrangian at (p, lambda_i) with lambda_j = 1 - lambda_i.
inline double surrogate_lagrangian(const EffectiveGains& g, const ScaCoefficients& sca, const DualVariables& duals,
                                   double p, double lambda_i, const SystemParams& params) {
    const double lambda_j = 1.0 - lambda_i;
    const double gi = p * lambda_i * g.H_i / (g.G_i + params.sigma2);
    const double gj = p * lambda_j * g.H_j / (p * lambda_i * g.H_j + g.G_j + params.sigma2);
    double value = 0.0;
    // a user with a zero surrogate weight contributes its beta only
    value += sca.alpha_i > 0.0 ? sca.alpha_i * std::log2(gi) + sca.beta_i : sca.beta_i;
    value += sca.alpha_j > 0.0 ? sca.alpha_j * std::log2(gj) + sca.beta_j : sca.beta_j;
    const double qos = g.G_c > 0.0 ? 1.0 - params.gamma_min * (p * g.H_c + params.sigma2) / g.G_c : 0.0;
    value += duals.eta1 * qos + duals.eta2 * (1.0 - p / params.p_max) + duals.eta3 * (1.0 - lambda_i);
    return value;
}

/// Coefficients (A, B, C) of the stationarity condition A p^2 + B p + C = 0
/// obtained from dL/dp = 0 after clearing denominators.
struct PowerQuadratic {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

inline PowerQuadratic power_quadratic(const EffectiveGains& g, const ScaCoefficients& sca, const DualVariables& duals,
                                      double lambda_i, const SystemParams& params) {
    const double ai = sca.alpha_i / kLn2;
    const double aj = sca.alpha_j / kLn2;
    const double price = detail::power_price(g, duals, params);
    const double d = g.G_j + params.sigma2;
    return {price * lambda_i * g.H_j, -ai * lambda_i * g.H_j + price * d, -(ai + aj) * d};
}

/// dL/dp, used for residual checks.
inline double power_gradient(const EffectiveGains& g, const ScaCoefficients& sca, const DualVariables& duals, double p,
                             double lambda_i, const SystemParams& params) {
    const double ai = sca.alpha_i / kLn2;
    const double aj = sca.alpha_j / kLn2;
    const double d = g.G_j + params.sigma2;
    return (ai + aj) / p - aj * lambda_i * g.H_j / (p * lambda_i * g.H_j + d) - detail::power_price(g, duals, params);
}

/// Cubic c3 x^3 + c2 x^2 + c1 x + c0 in lambda_i from dL/dlambda_i = 0.
///
/// The default form is dL/dlambda_i multiplied by lambda_i (1 - lambda_i)
/// (p lambda_i H_j + G_j + sigma2). `literal_cubic` selects the term-by-term
/// grouping, which is the same polynomial times -p H_j with the SCA weights
/// taken in natural-log units.
inline std::array<double, 4> lambda_cubic(const EffectiveGains& g, const ScaCoefficients& sca, const DualVariables& duals,
                                          double p, const SystemParams& params) {
    const double h = p * g.H_j;
    const double d = g.G_j + params.sigma2;
    const double eta3 = duals.eta3;
    if (params.literal_cubic) {
        const double ai = sca.alpha_i;
        const double aj = sca.alpha_j;
        const double Hj = g.H_j;
        const double Gj = g.G_j;
        const double s2 = params.sigma2;
        return {-Hj * Hj * eta3 * p * p, Hj * p * (ai * Hj * p - eta3 * (Gj - Hj * p + s2)),
                Hj * p * (ai * (Gj - Hj * p + s2) + aj * (Gj + Hj * p + s2) + eta3 * (Gj + s2)),
                Hj * p * (-ai * Gj - ai * s2)};
    }
    const double ai = sca.alpha_i / kLn2;
    const double aj = sca.alpha_j / kLn2;
    return {eta3 * h, -ai * h + eta3 * (d - h), ai * (h - d) - aj * d - aj * h - eta3 * d, ai * d};
}

/// dL/dlambda_i with lambda_j = 1 - lambda_i.
inline double lambda_gradient(const EffectiveGains& g, const ScaCoefficients& sca, const DualVariables& duals, double p,
                              double lambda_i, const SystemParams& params) {
    const double ai = sca.alpha_i / kLn2;
    const double aj = sca.alpha_j / kLn2;
    const double h = p * g.H_j;
    const double d = g.G_j + params.sigma2;
    return ai / lambda_i - aj / (1.0 - lambda_i) - aj * h / (h * lambda_i + d) - duals.eta3;
}

namespace detail {

/// Among the roots inside [lo, hi] and the two endpoints, the point with the
/// largest objective. Endpoints are always candidates because the surrogate
/// Lagrangian is not concave in lambda_i.
template <typename Objective>
double best_candidate(const std::vector<double>& roots, double lo, double hi, Objective&& objective,
                      bool* interior = nullptr) {
    double best = lo;
    double best_value = objective(lo);
    if (interior) {
        *interior = false;
    }
    auto consider = [&](double x, bool is_root) {
        const double v = objective(x);
        if (v > best_value) {
            best_value = v;
            best = x;
            if (interior) {
                *interior = is_root;
            }
        }
    };
    consider(hi, false);
    for (double r : roots) {
        if (std::isfinite(r) && r > lo && r < hi) {
            consider(r, true);
        }
    }
    return best;
}

}  // namespace detail

struct PowerStep {
    double p_t = 0.0;
    bool interior = false;   ///< an unclamped stationary point was selected
    bool no_real_root = false;
};

/// Closed-form DT power for fixed lambda_i: the real roots of the quadratic
/// stationarity condition, compared with the budget endpoints under the
/// surrogate Lagrangian.
inline PowerStep solve_p_t(const EffectiveGains& g, const ScaCoefficients& sca, const DualVariables& duals,
                           double lambda_i, const SystemParams& params) {
    require(lambda_i > 0.0 && lambda_i <= 1.0, "solve_p_t: lambda_i must lie in (0, 1]");
    const PowerQuadratic q = power_quadratic(g, sca, duals, lambda_i, params);
    const double scale = std::max({std::abs(q.a), std::abs(q.b), std::abs(q.c)});
    std::vector<double> roots;
    PowerStep step;
    if (scale > 0.0) {
        const double a = q.a / scale;
        const double b = q.b / scale;
        const double c = q.c / scale;
        roots = poly::quadratic_roots(std::abs(a) <= 1e-14 ? 0.0 : a, b, c);
        step.no_real_root = roots.empty();
        for (double& r : roots) {
            r = poly::polish({a, b, c}, r);
        }
    }
    auto objective = [&](double p) { return surrogate_lagrangian(g, sca, duals, p, lambda_i, params); };
    step.p_t = detail::best_candidate(roots, params.p_floor(), params.p_max, objective, &step.interior);
    return step;
}

struct LambdaStep {
    double lambda_i = 0.0;
    bool interior = false;
    bool stagnated = false;  ///< the stationarity polynomial vanished identically
};

/// Closed-form lambda_i for fixed power from the real roots of the cubic.
inline LambdaStep solve_lambda_i(const EffectiveGains& g, const ScaCoefficients& sca, const DualVariables& duals,
                                 double p_t, const SystemParams& params, double current) {
    require(p_t > 0.0, "solve_lambda_i: p_t must be positive");
    const auto c = lambda_cubic(g, sca, duals, p_t, params);
    LambdaStep step;
    if (c[0] == 0.0 && c[1] == 0.0 && c[2] == 0.0 && c[3] == 0.0) {
        step.lambda_i = current;
        step.stagnated = true;
        return step;
    }
    const auto roots = poly::cubic_roots(c[0], c[1], c[2], c[3]);
    const double lo = params.lambda_floor;
    const double hi = 1.0 - params.lambda_floor;
    auto objective = [&](double x) { return surrogate_lagrangian(g, sca, duals, p_t, x, params); };
    step.lambda_i = detail::best_candidate(roots, lo, hi, objective, &step.interior);
    return step;
}

/// Constraint slacks (QoS, budget, lambda) normalized as in the Lagrangian.
inline std::array<double, 3> constraint_slacks(const EffectiveGains& g, const PowerAllocation& pa,
                                               const SystemParams& params) {
    const double total = pa.p_t * (pa.lambda_i + pa.lambda_j);
    const double qos = g.G_c > 0.0 ? 1.0 - params.gamma_min * (total * g.H_c + params.sigma2) / g.G_c : -1.0;
    return {qos, 1.0 - total / params.p_max, 1.0 - pa.lambda_i};
}

/// Projected subgradient step eta <- max(0, eta - s slack) with s = step / sqrt(iter).
inline DualVariables update_duals(const DualVariables& duals, const EffectiveGains& g, const PowerAllocation& pa,
                                  const SystemParams& params, int iter, double step) {
    require(iter >= 1, "update_duals: iter must be positive");
    const auto slack = constraint_slacks(g, pa, params);
    const double s = step / std::sqrt(static_cast<double>(iter));
    return {std::max(0.0, duals.eta1 - s * slack[0]), std::max(0.0, duals.eta2 - s * slack[1]),
            std::max(0.0, duals.eta3 - s * slack[2])};
}

inline DualVariables update_duals(const DualVariables& duals, const EffectiveGains& g, const PowerAllocation& pa,
                                  const SystemParams& params, int iter) {
    return update_duals(duals, g, pa, params, iter, params.dual_step);
}

struct PowerResult {
    PowerAllocation pa;
    RateReport report;
    bool feasible = false;
    bool converged = false;
    int iterations = 0;
    std::vector<double> trajectory;  ///< true sum rate of accepted SCA iterates
};

namespace detail {

/// Clamp to the floors, the budget and the QoS power cap; lambda_j = 1 - lambda_i.
inline PowerAllocation restore_feasibility(PowerAllocation pa, double cap, const SystemParams& params) {
    const double hi = std::min(params.p_max, cap);
    pa.p_t = std::clamp(pa.p_t, params.p_floor(), std::max(params.p_floor(), hi));
    pa.lambda_i = std::clamp(pa.lambda_i, params.lambda_floor, 1.0 - params.lambda_floor);
    pa.lambda_j = 1.0 - pa.lambda_i;
    return pa;
}

}  // namespace detail

/// Power allocation for fixed RIS phases: SCA outer loop, closed-form
/// primal updates and projected dual subgradient inner loop. Accepted
/// iterates never lower the true sum rate; a rejected round halves the dual
/// step.
inline PowerResult optimize_power(const ChannelRealization& ch, const PhaseVector& phases, const SystemParams& params,
                                  const PowerAllocation& init) {
    params.validate();
    const EffectiveGains g = compute_gains(ch, phases, params);
    const double cap = qos_power_cap(g, params);

    PowerResult result;
    if (cap < params.p_floor()) {
        // nothing satisfies the QoS floor; fall back to the least interfering point
        result.pa = detail::restore_feasibility({params.p_floor(), init.lambda_i, init.lambda_j}, params.p_floor(), params);
        result.report = sinrs_from_gains(g, result.pa, params);
        result.feasible = false;
        return result;
    }

    auto true_rate = [&](const PowerAllocation& pa) { return sinrs_from_gains(g, pa, params).sum_rate; };

    PowerAllocation current = detail::restore_feasibility(init, cap, params);
    double current_rate = true_rate(current);
    result.trajectory.push_back(current_rate);

    DualVariables duals{params.dual_init, params.dual_init, params.dual_init};
    double step = params.dual_step;
    int dual_iter = 0;
    int stalled = 0;

    for (int outer = 1; outer <= params.sca_max_iter; ++outer) {
        result.iterations = outer;
        const RateReport rep = sinrs_from_gains(g, current, params);
        const ScaPair ci = detail::pair_or_zero(rep.sinr_dri);
        const ScaPair cj = detail::pair_or_zero(rep.sinr_drj);
        const ScaCoefficients sca{ci.alpha, ci.beta, cj.alpha, cj.beta};
        if (sca.alpha_i == 0.0 && sca.alpha_j == 0.0) {
            // no D2D signal reaches either receiver; every allocation is equivalent
            result.converged = true;
            break;
        }

        PowerAllocation iterate = current;
        PowerAllocation best = current;
        double best_rate = current_rate;
        for (int inner = 0; inner < params.dual_max_iter; ++inner) {
            const PowerStep ps = solve_p_t(g, sca, duals, iterate.lambda_i, params);
            const LambdaStep ls = solve_lambda_i(g, sca, duals, ps.p_t, params, iterate.lambda_i);
            const PowerAllocation next{ps.p_t, ls.lambda_i, 1.0 - ls.lambda_i};
            const DualVariables next_duals = update_duals(duals, g, next, params, ++dual_iter, step);

            const PowerAllocation projected = detail::restore_feasibility(next, cap, params);
            const double r = true_rate(projected);
            if (r > best_rate) {
                best_rate = r;
                best = projected;
            }
            const bool settled = std::abs(next.p_t - iterate.p_t) <= 1e-12 * params.p_max &&
                                 std::abs(next.lambda_i - iterate.lambda_i) <= 1e-12 &&
                                 std::abs(next_duals.eta1 - duals.eta1) + std::abs(next_duals.eta2 - duals.eta2) +
                                         std::abs(next_duals.eta3 - duals.eta3) <=
                                     1e-12;
            iterate = next;
            duals = next_duals;
            if (settled || ls.stagnated) {
                break;
            }
        }

        if (best_rate > current_rate) {
            const double gain = best_rate - current_rate;
            current = best;
            current_rate = best_rate;
            result.trajectory.push_back(current_rate);
            if (gain < params.tol) {
                result.converged = true;
                break;
            }
        } else {
            // no iterate of this round beat the incumbent
            step *= 0.5;
            if (++stalled >= 3) {
                result.converged = true;
                break;
            }
        }
    }

    result.pa = current;
    result.report = sinrs_from_gains(g, current, params);
    result.feasible = result.report.qos_feasible;
    return result;
}

}  // namespace risnoma
