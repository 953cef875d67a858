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
#include <limits>
#include <optional>

#include "risnoma/channel.hpp"
#include "risnoma/common.hpp"
#include "risnoma/params.hpp"
#include "risnoma/phases.hpp"

namespace risnoma {

/// DT power and the NOMA split between DR_i (strong) and DR_j (weak).
struct PowerAllocation {
    double p_t = 0.0;
    double lambda_i = 0.0;
    double lambda_j = 0.0;

    /// Checks 0 <= p_t <= p_max, 0 <= lambda <= 1, lambda_i + lambda_j <= 1.
    bool valid(double p_max, double slack = 1e-12) const {
        return p_t >= 0.0 && p_t <= p_max * (1.0 + slack) && lambda_i >= 0.0 && lambda_i <= 1.0 && lambda_j >= 0.0 &&
               lambda_j <= 1.0 && lambda_i + lambda_j <= 1.0 + slack;
    }
};

/// Squared composite channel magnitudes for one phase configuration.
/// H_x are DT -> x gains; G_x = q_c |UAV -> x|^2 include the UAV power.
struct EffectiveGains {
    double H_i = 0.0;
    double H_j = 0.0;
    double H_c = 0.0;
    double G_i = 0.0;
    double G_j = 0.0;
    double G_c = 0.0;
};

inline EffectiveGains compute_gains(const ChannelRealization& ch, const PhaseVector& phases, const SystemParams& params) {
    EffectiveGains g;
    g.H_i = composite_gain(ch, Transmitter::dt, Receiver::dri, phases);
    g.H_j = composite_gain(ch, Transmitter::dt, Receiver::drj, phases);
    g.H_c = composite_gain(ch, Transmitter::dt, Receiver::cu, phases);
    g.G_i = params.q_c * composite_gain(ch, Transmitter::uav, Receiver::dri, phases);
    g.G_j = params.q_c * composite_gain(ch, Transmitter::uav, Receiver::drj, phases);
    g.G_c = params.q_c * composite_gain(ch, Transmitter::uav, Receiver::cu, phases);
    return g;
}

/// SINRs, rates and QoS status of one operating point. Rates are in bps/Hz;
/// `share_*` is the fraction of time a receiver is served (1 under NOMA).
struct RateReport {
    double sinr_cu = 0.0;
    double sinr_dri = 0.0;
    double sinr_drj = 0.0;
    double rate_cu = 0.0;
    double rate_dri = 0.0;
    double rate_drj = 0.0;
    double sum_rate = 0.0;
    double share_dri = 1.0;
    double share_drj = 1.0;
    bool qos_feasible = false;

    static RateReport from_sinrs(double cu, double dri, double drj, double gamma_min, double share_i = 1.0,
                                 double share_j = 1.0) {
        RateReport r;
        r.sinr_cu = cu;
        r.sinr_dri = dri;
        r.sinr_drj = drj;
        r.share_dri = share_i;
        r.share_drj = share_j;
        r.rate_cu = std::log2(1.0 + cu);
        r.rate_dri = share_i * std::log2(1.0 + dri);
        r.rate_drj = share_j * std::log2(1.0 + drj);
        r.sum_rate = r.rate_dri + r.rate_drj;
        r.qos_feasible = cu >= gamma_min;
        return r;
    }
};

inline double sinr_cu_from_gains(const EffectiveGains& g, const PowerAllocation& pa, const SystemParams& params) {
    return g.G_c / (pa.p_t * (pa.lambda_i + pa.lambda_j) * g.H_c + params.sigma2);
}

/// NOMA SINRs. DR_i decodes after SIC; DR_j sees DR_i's stream as
/// interference, and its own signal uses lambda_j.
inline RateReport sinrs_from_gains(const EffectiveGains& g, const PowerAllocation& pa, const SystemParams& params) {
    const double cu = sinr_cu_from_gains(g, pa, params);
    const double dri = pa.p_t * pa.lambda_i * g.H_i / (g.G_i + params.sigma2);
    const double drj = pa.p_t * pa.lambda_j * g.H_j / (pa.p_t * pa.lambda_i * g.H_j + g.G_j + params.sigma2);
    return RateReport::from_sinrs(cu, dri, drj, params.gamma_min);
}

inline RateReport sinr_all(const ChannelRealization& ch, const PowerAllocation& pa, const PhaseVector& phases,
                           const SystemParams& params) {
    return sinrs_from_gains(compute_gains(ch, phases, params), pa, params);
}

/// Largest total D2D power p (i.e. p_t (lambda_i + lambda_j)) that keeps the CU
/// at or above gamma_min. Infinity when the DT does not reach the CU; negative
/// when the floor is unreachable even at zero D2D power.
inline double qos_power_cap(const EffectiveGains& g, const SystemParams& params) {
    if (g.H_c <= 0.0) {
        return g.G_c >= params.gamma_min * params.sigma2 ? std::numeric_limits<double>::infinity() : -1.0;
    }
    double cap = (g.G_c / params.gamma_min - params.sigma2) / g.H_c;
    if (cap <= 0.0) {
        return cap;
    }
    // shave a relative 1e-9 so the floor survives rounding in any evaluation order
    cap *= 1.0 - 1e-9;
    while (cap > 0.0 && g.G_c / (cap * g.H_c + params.sigma2) < params.gamma_min) {
        cap = std::nextafter(cap, 0.0);
    }
    return cap;
}

/// Tangent lower bound alpha log2(gamma) + beta of log2(1 + gamma).
struct ScaCoefficients {
    double alpha_i = 0.0;
    double beta_i = 0.0;
    double alpha_j = 0.0;
    double beta_j = 0.0;
};

struct ScaPair {
    double alpha = 0.0;
    double beta = 0.0;
};

/// nullopt when gamma is not a finite positive number (the surrogate needs log2 gamma).
inline std::optional<ScaPair> sca_pair(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        return std::nullopt;
    }
    ScaPair p;
    p.alpha = gamma / (1.0 + gamma);
    p.beta = std::log2(1.0 + gamma) - p.alpha * std::log2(gamma);
    return p;
}

inline double sca_surrogate(const ScaPair& c, double gamma) { return c.alpha * std::log2(gamma) + c.beta; }

/// nullopt marks a degenerate point (a zero D2D SINR); callers lift the
/// allocation off the floor before asking again.
inline std::optional<ScaCoefficients> sca_coefficients(const RateReport& report) {
    const auto ci = sca_pair(report.sinr_dri);
    const auto cj = sca_pair(report.sinr_drj);
    if (!ci || !cj) {
        return std::nullopt;
    }
    return ScaCoefficients{ci->alpha, ci->beta, cj->alpha, cj->beta};
}

}  // namespace risnoma
