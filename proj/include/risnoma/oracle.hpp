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

// Brute-force reference solvers. They share only the data types with the
// optimizers and evaluate every rate in long double from the raw links.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "risnoma/channel.hpp"
#include "risnoma/params.hpp"
#include "risnoma/phases.hpp"
#include "risnoma/rates.hpp"

namespace risnoma::oracle {

using LComplex = std::complex<long double>;

struct LinkSet {
    // order: uav->cu, uav->dri, uav->drj, dt->cu, dt->dri, dt->drj
    LComplex direct[6];
    std::vector<LComplex> cascade[6];
};

inline LinkSet link_set(const ChannelRealization& ch) {
    LinkSet s;
    const Complex d[6] = {ch.direct_uav_cu, ch.direct_uav_dri, ch.direct_uav_drj,
                          ch.direct_dt_cu,  ch.direct_dt_dri,  ch.direct_dt_drj};
    const ComplexVector* in[6] = {&ch.uav_to_ris, &ch.uav_to_ris, &ch.uav_to_ris,
                                  &ch.dt_to_ris,  &ch.dt_to_ris,  &ch.dt_to_ris};
    const ComplexVector* out[6] = {&ch.ris_to_uav_path.cu, &ch.ris_to_uav_path.dri, &ch.ris_to_uav_path.drj,
                                   &ch.ris_to.cu,          &ch.ris_to.dri,          &ch.ris_to.drj};
    for (int l = 0; l < 6; ++l) {
        s.direct[l] = LComplex(d[l].real(), d[l].imag());
        for (Eigen::Index k = 0; k < in[l]->size(); ++k) {
            const Complex c = (*in[l])(k) * (*out[l])(k);
            s.cascade[l].emplace_back(c.real(), c.imag());
        }
    }
    return s;
}

/// Gains (uav->cu, uav->dri, uav->drj, dt->cu, dt->dri, dt->drj) without transmit power.
struct Gains {
    long double v[6];
};

inline Gains gains(const LinkSet& s, const std::vector<long double>& theta) {
    Gains g{};
    for (int l = 0; l < 6; ++l) {
        LComplex sum = s.direct[l];
        for (std::size_t k = 0; k < theta.size(); ++k) {
            sum += s.cascade[l][k] * std::polar(1.0L, theta[k]);
        }
        g.v[l] = std::norm(sum);
    }
    return g;
}

struct Sinrs {
    long double cu, dri, drj;
};

inline Sinrs sinrs(const Gains& g, long double p, long double li, long double lj, const SystemParams& params) {
    const long double q = params.q_c;
    const long double s2 = params.sigma2;
    Sinrs r;
    r.cu = q * g.v[0] / (p * (li + lj) * g.v[3] + s2);
    r.dri = p * li * g.v[4] / (q * g.v[1] + s2);
    r.drj = p * lj * g.v[5] / (p * li * g.v[5] + q * g.v[2] + s2);
    return r;
}

inline long double sum_rate(const Sinrs& s) { return std::log2(1.0L + s.dri) + std::log2(1.0L + s.drj); }

inline bool qos_ok(const Sinrs& s, const SystemParams& params) {
    return s.cu >= static_cast<long double>(params.gamma_min);
}

inline std::vector<long double> thetas(const PhaseVector& phases) {
    std::vector<long double> t;
    for (int k = 0; k < phases.size(); ++k) {
        t.push_back(phases[k]);
    }
    return t;
}

/// Full-SINR evaluation of one operating point.
inline Sinrs evaluate(const ChannelRealization& ch, const PowerAllocation& pa, const PhaseVector& phases,
                      const SystemParams& params) {
    return sinrs(gains(link_set(ch), thetas(phases)), pa.p_t, pa.lambda_i, pa.lambda_j, params);
}

struct GridPoint {
    long double sum_rate = -1.0L;
    double p_t = 0.0;
    double lambda_i = 0.0;
    bool found = false;
};

inline double grid_value(double lo, double hi, int idx, int n) {
    return n == 1 ? hi : lo + (hi - lo) * static_cast<double>(idx) / static_cast<double>(n - 1);
}

/// Best QoS-feasible point of an n x n grid over P_t in [0, p_max] and
/// lambda_i in [0, 1] with lambda_j = 1 - lambda_i, phases fixed.
inline GridPoint power_grid(const ChannelRealization& ch, const PhaseVector& phases, const SystemParams& params,
                            int n = 200) {
    const Gains g = gains(link_set(ch), thetas(phases));
    GridPoint best;
    for (int a = 0; a < n; ++a) {
        const double p = grid_value(0.0, params.p_max, a, n);
        for (int b = 0; b < n; ++b) {
            const double li = grid_value(0.0, 1.0, b, n);
            const Sinrs s = sinrs(g, p, li, 1.0L - li, params);
            if (!qos_ok(s, params)) {
                continue;
            }
            const long double r = sum_rate(s);
            if (r > best.sum_rate) {
                best = {r, p, li, true};
            }
        }
    }
    return best;
}

/// Iterates every assignment of `levels` uniformly spaced phases to K
/// elements, calling f(theta, gains).
template <typename F>
void for_each_discrete_phase(const LinkSet& s, int k, int levels, F&& f) {
    std::vector<std::vector<LComplex>> rot(static_cast<std::size_t>(levels));
    for (int q = 0; q < levels; ++q) {
        const long double th = 2.0L * std::numbers::pi_v<long double> * q / levels;
        for (int l = 0; l < 6; ++l) {
            for (int e = 0; e < k; ++e) {
                rot[static_cast<std::size_t>(q)].push_back(s.cascade[l][static_cast<std::size_t>(e)] *
                                                           std::polar(1.0L, th));
            }
        }
    }
    std::vector<int> digit(static_cast<std::size_t>(k), 0);
    std::vector<long double> theta(static_cast<std::size_t>(k), 0.0L);
    while (true) {
        Gains g{};
        for (int l = 0; l < 6; ++l) {
            LComplex sum = s.direct[l];
            for (int e = 0; e < k; ++e) {
                sum += rot[static_cast<std::size_t>(digit[static_cast<std::size_t>(e)])][static_cast<std::size_t>(l * k + e)];
            }
            g.v[l] = std::norm(sum);
        }
        for (int e = 0; e < k; ++e) {
            theta[static_cast<std::size_t>(e)] = 2.0L * std::numbers::pi_v<long double> * digit[static_cast<std::size_t>(e)] / levels;
        }
        f(theta, g);
        int e = 0;
        while (e < k && ++digit[static_cast<std::size_t>(e)] == levels) {
            digit[static_cast<std::size_t>(e)] = 0;
            ++e;
        }
        if (e == k) {
            break;
        }
    }
}

struct PhasePoint {
    long double sum_rate = -1.0L;
    std::vector<long double> theta;
    bool found = false;
};

/// Exhaustive discrete phase search at a fixed power allocation.
inline PhasePoint phase_search(const ChannelRealization& ch, const PowerAllocation& pa, const SystemParams& params,
                               int levels = 16) {
    PhasePoint best;
    for_each_discrete_phase(link_set(ch), ch.size(), levels, [&](const std::vector<long double>& th, const Gains& g) {
        const Sinrs s = sinrs(g, pa.p_t, pa.lambda_i, pa.lambda_j, params);
        if (!qos_ok(s, params)) {
            return;
        }
        const long double r = sum_rate(s);
        if (r > best.sum_rate) {
            best = {r, th, true};
        }
    });
    return best;
}

struct JointPoint {
    long double sum_rate = -1.0L;
    double p_t = 0.0;
    double lambda_i = 0.0;
    std::vector<long double> theta;
    bool found = false;
};

/// Joint search: discrete phases x n x n power grid. With the split fixed
/// both D2D SINRs increase with P_t and the CU SINR decreases, so for each
/// phase assignment and split the best grid power is the largest one that
/// keeps the CU feasible; only that row is scanned.
inline JointPoint joint_search(const ChannelRealization& ch, const SystemParams& params, int levels = 16, int n = 200) {
    JointPoint best;
    long double best_product = 0.0L;
    for_each_discrete_phase(link_set(ch), ch.size(), levels, [&](const std::vector<long double>& th, const Gains& g) {
        int a = n - 1;
        while (a >= 0 && !qos_ok(sinrs(g, grid_value(0.0, params.p_max, a, n), 0.5L, 0.5L, params), params)) {
            --a;
        }
        if (a < 0) {
            return;
        }
        const double p = grid_value(0.0, params.p_max, a, n);
        for (int b = 0; b < n; ++b) {
            const double li = grid_value(0.0, 1.0, b, n);
            const Sinrs s = sinrs(g, p, li, 1.0L - li, params);
            // log2(1+a) + log2(1+b) ordered by (1+a)(1+b)
            const long double prod = (1.0L + s.dri) * (1.0L + s.drj);
            if (!best.found || prod > best_product) {
                best_product = prod;
                best = {0.0L, p, li, th, true};
            }
        }
    });
    if (best.found) {
        best.sum_rate = std::log2(best_product);
    }
    return best;
}

/// Time-division rate at power p for fixed phases, and its best grid power.
inline long double oma_rate(const Gains& g, long double p, const SystemParams& params) {
    const long double tau = params.oma_slot_i;
    const long double q = params.q_c;
    const long double s2 = params.sigma2;
    return tau * std::log2(1.0L + p * g.v[4] / (q * g.v[1] + s2)) +
           (1.0L - tau) * std::log2(1.0L + p * g.v[5] / (q * g.v[2] + s2));
}

inline GridPoint oma_power_grid(const ChannelRealization& ch, const PhaseVector& phases, const SystemParams& params,
                                int n = 10000) {
    const Gains g = gains(link_set(ch), thetas(phases));
    GridPoint best;
    for (int a = 0; a < n; ++a) {
        const double p = grid_value(0.0, params.p_max, a, n);
        if (!qos_ok(sinrs(g, p, 0.5L, 0.5L, params), params)) {
            continue;
        }
        const long double r = oma_rate(g, p, params);
        if (r > best.sum_rate) {
            best = {r, p, params.oma_slot_i, true};
        }
    }
    return best;
}

}  // namespace risnoma::oracle
