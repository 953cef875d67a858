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
#include <random>
#include <vector>

#include "risnoma/channel.hpp"
#include "risnoma/common.hpp"
#include "risnoma/params.hpp"
#include "risnoma/phases.hpp"
#include "risnoma/rates.hpp"
#include "risnoma/sdp_solver.hpp"

namespace risnoma {

/// Transmitter -> RIS -> receiver cascades (Hadamard products of the two hops).
/// With psi = conj(e^{j theta}), |psi^H cascade|^2 equals the reflected-path gain.
struct CascadedVectors {
    ComplexVector g_bar_c;    ///< UAV -> RIS -> CU
    ComplexVector h_bar_i;    ///< DT -> RIS -> DR_i
    ComplexVector h_bar_j;    ///< DT -> RIS -> DR_j
    ComplexVector h_prime_j;  ///< DT -> RIS -> DR_j (NOMA interference path)
    ComplexVector g_prime_i;  ///< UAV -> RIS -> DR_i
    ComplexVector g_prime_j;  ///< UAV -> RIS -> DR_j
    ComplexVector h_prime_c;  ///< DT -> RIS -> CU

    int size() const { return static_cast<int>(g_bar_c.size()); }
};

inline CascadedVectors build_cascades(const ChannelRealization& ch) {
    const int k = ch.size();
    require_same_size(ch.dt_to_ris.size(), k, "build_cascades dt_to_ris");
    for (const ComplexVector* v : {&ch.ris_to.cu, &ch.ris_to.dri, &ch.ris_to.drj, &ch.ris_to_uav_path.cu,
                                   &ch.ris_to_uav_path.dri, &ch.ris_to_uav_path.drj}) {
        require_same_size(v->size(), k, "build_cascades drop link");
    }
    CascadedVectors cv;
    cv.g_bar_c = ch.uav_to_ris.cwiseProduct(ch.ris_to_uav_path.cu);
    cv.h_bar_i = ch.dt_to_ris.cwiseProduct(ch.ris_to.dri);
    cv.h_bar_j = ch.dt_to_ris.cwiseProduct(ch.ris_to.drj);
    cv.h_prime_j = cv.h_bar_j;
    cv.g_prime_i = ch.uav_to_ris.cwiseProduct(ch.ris_to_uav_path.dri);
    cv.g_prime_j = ch.uav_to_ris.cwiseProduct(ch.ris_to_uav_path.drj);
    cv.h_prime_c = ch.dt_to_ris.cwiseProduct(ch.ris_to.cu);
    return cv;
}

/// |psi^H v|^2 for the given phases.
inline double reflected_gain(const ComplexVector& v, const PhaseVector& phases) {
    require_same_size(v.size(), phases.size(), "reflected_gain");
    return std::norm(phases.psi().dot(v));
}

struct ReducedSinrs {
    double cu = 0.0;
    double dri = 0.0;
    double drj = 0.0;
};

/// SINRs through the RIS only (direct links removed).
inline ReducedSinrs reduced_sinrs(const CascadedVectors& cv, const PowerAllocation& pa, const PhaseVector& phases,
                                  const SystemParams& params) {
    const double s2 = params.sigma2;
    ReducedSinrs r;
    r.cu = params.q_c * reflected_gain(cv.g_bar_c, phases) /
           (pa.p_t * (pa.lambda_i + pa.lambda_j) * reflected_gain(cv.h_prime_c, phases) + s2);
    r.dri = pa.p_t * pa.lambda_i * reflected_gain(cv.h_bar_i, phases) /
            (params.q_c * reflected_gain(cv.g_prime_i, phases) + s2);
    r.drj = pa.p_t * pa.lambda_j * reflected_gain(cv.h_bar_j, phases) /
            (pa.p_t * pa.lambda_i * reflected_gain(cv.h_prime_j, phases) + params.q_c * reflected_gain(cv.g_prime_j, phases) +
             s2);
    return r;
}

/// Cascades plus the direct coefficients, which are appended as entry K of
/// each augmented vector w = [cascade; direct]. With v = [psi; 1],
/// v^H w = direct + sum_k e^{j theta_k} cascade_k.
struct BeamformingModel {
    CascadedVectors cv;
    Complex uav_cu{}, uav_dri{}, uav_drj{}, dt_cu{}, dt_dri{}, dt_drj{};

    int size() const { return cv.size(); }

    ComplexVector augment(const ComplexVector& cascade, Complex direct) const {
        ComplexVector w(cascade.size() + 1);
        w.head(cascade.size()) = cascade;
        w(cascade.size()) = direct;
        return w;
    }
};

/// Model for the phase subproblem; direct links are zeroed unless
/// `params.include_direct_links`.
inline BeamformingModel make_model(const ChannelRealization& ch, const SystemParams& params) {
    BeamformingModel m;
    m.cv = build_cascades(ch);
    if (params.include_direct_links) {
        m.uav_cu = ch.direct_uav_cu;
        m.uav_dri = ch.direct_uav_dri;
        m.uav_drj = ch.direct_uav_drj;
        m.dt_cu = ch.direct_dt_cu;
        m.dt_dri = ch.direct_dt_dri;
        m.dt_drj = ch.direct_dt_drj;
    }
    return m;
}

/// v v^H with v = [psi; 1].
inline HermitianMatrix lift(const PhaseVector& phases) {
    ComplexVector v(phases.size() + 1);
    v.head(phases.size()) = phases.psi();
    v(phases.size()) = 1.0;
    return HermitianMatrix::outer(v);
}

/// Power-scaled outer products of the augmented vectors, (K+1) x (K+1).
struct LiftedMatrices {
    HermitianMatrix H_i_mat;  ///< p lambda_i h_i h_i^H
    HermitianMatrix H_j_mat;  ///< p lambda_j h_j h_j^H
    HermitianMatrix H_hat_j;  ///< p lambda_i h_j h_j^H (NOMA interference at DR_j)
    HermitianMatrix G_hat_j;  ///< q_c g_j g_j^H
    HermitianMatrix G_c_mat;  ///< q_c g_c g_c^H
    HermitianMatrix H_hat_c;  ///< p (lambda_i + lambda_j) h_c h_c^H
    HermitianMatrix G_hat_i;  ///< q_c g_i g_i^H
};

inline LiftedMatrices build_lifted(const BeamformingModel& m, const PowerAllocation& pa, const SystemParams& params) {
    const ComplexVector hi = m.augment(m.cv.h_bar_i, m.dt_dri);
    const ComplexVector hj = m.augment(m.cv.h_bar_j, m.dt_drj);
    const ComplexVector hc = m.augment(m.cv.h_prime_c, m.dt_cu);
    const ComplexVector gi = m.augment(m.cv.g_prime_i, m.uav_dri);
    const ComplexVector gj = m.augment(m.cv.g_prime_j, m.uav_drj);
    const ComplexVector gc = m.augment(m.cv.g_bar_c, m.uav_cu);
    return {HermitianMatrix::outer(hi, pa.p_t * pa.lambda_i),
            HermitianMatrix::outer(hj, pa.p_t * pa.lambda_j),
            HermitianMatrix::outer(hj, pa.p_t * pa.lambda_i),
            HermitianMatrix::outer(gj, params.q_c),
            HermitianMatrix::outer(gc, params.q_c),
            HermitianMatrix::outer(hc, pa.p_t * (pa.lambda_i + pa.lambda_j)),
            HermitianMatrix::outer(gi, params.q_c)};
}

/// weight * [log2(Tr(X total) + sigma2) - log2(Tr(X interference) + sigma2)],
/// i.e. weight * log2(1 + SINR) in lifted form.
struct RateTerm {
    HermitianMatrix total;
    HermitianMatrix interference;
    double weight = 1.0;
};

/// Difference-of-concave objective in the lifted variable.
struct DcObjective {
    std::vector<RateTerm> terms;
    double sigma2 = 0.0;

    double value(const HermitianMatrix& x) const {
        double v = 0.0;
        for (const auto& t : terms) {
            v += t.weight * (std::log2(t.total.trace_product(x) + sigma2) - std::log2(t.interference.trace_product(x) + sigma2));
        }
        return v;
    }

    /// Gradient with respect to X under <A, B> = Re Tr(A B).
    HermitianMatrix gradient(const HermitianMatrix& x) const {
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(x.dim(), x.dim());
        for (const auto& t : terms) {
            g += t.weight / ((t.total.trace_product(x) + sigma2) * kLn2) * t.total.matrix();
            g -= t.weight / ((t.interference.trace_product(x) + sigma2) * kLn2) * t.interference.matrix();
        }
        return HermitianMatrix(g, 1e-9);
    }
};

/// The NOMA sum-rate objective at a fixed power allocation.
inline DcObjective noma_objective(const LiftedMatrices& lm, const SystemParams& params) {
    DcObjective f;
    f.sigma2 = params.sigma2;
    f.terms.push_back({lm.H_i_mat + lm.G_hat_i, lm.G_hat_i, 1.0});
    f.terms.push_back({lm.H_j_mat + lm.H_hat_j + lm.G_hat_j, lm.H_hat_j + lm.G_hat_j, 1.0});
    return f;
}

/// Tr(X (G_c - gamma_min H_hat_c)) >= gamma_min sigma2.
inline TraceConstraint qos_constraint(const LiftedMatrices& lm, const SystemParams& params) {
    return {lm.G_c_mat - lm.H_hat_c * params.gamma_min, params.gamma_min * params.sigma2};
}

/// Single-receiver objective (one OMA slot): weight log2(1 + p |h|^2 / (|g|^2 q_c + sigma2)).
inline DcObjective single_user_objective(const BeamformingModel& m, Receiver rx, double p_t, double weight,
                                         const SystemParams& params) {
    require(rx != Receiver::cu, "single_user_objective: receiver must be a D2D node");
    const bool i = rx == Receiver::dri;
    const HermitianMatrix sig = HermitianMatrix::outer(m.augment(i ? m.cv.h_bar_i : m.cv.h_bar_j, i ? m.dt_dri : m.dt_drj), p_t);
    const HermitianMatrix itf =
        HermitianMatrix::outer(m.augment(i ? m.cv.g_prime_i : m.cv.g_prime_j, i ? m.uav_dri : m.uav_drj), params.q_c);
    DcObjective f;
    f.sigma2 = params.sigma2;
    f.terms.push_back({sig + itf, itf, weight});
    return f;
}

/// The DC subproblem around an expansion point Psi_0: the subtracted
/// log2(Tr(X M) + sigma2) terms are replaced by their tangent planes, which
/// gives a concave minorant of the objective that is tight at Psi_0. `sdp`
/// carries the constraints and, as its linear objective, the minorant's
/// gradient at Psi_0.
struct DcSubproblem {
    DcObjective objective;
    HermitianMatrix expansion_point;
    std::vector<double> t0;  ///< Tr(Psi_0 M) + sigma2 of each subtracted term
    SdpProblem sdp;

    double surrogate(const HermitianMatrix& x) const {
        double v = 0.0;
        for (std::size_t k = 0; k < objective.terms.size(); ++k) {
            const auto& t = objective.terms[k];
            const double lin = std::log2(t0[k]) +
                               (t.interference.trace_product(x) - t.interference.trace_product(expansion_point)) /
                                   (t0[k] * kLn2);
            v += t.weight * (std::log2(t.total.trace_product(x) + objective.sigma2) - lin);
        }
        return v;
    }

    HermitianMatrix surrogate_gradient(const HermitianMatrix& x) const {
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(x.dim(), x.dim());
        for (std::size_t k = 0; k < objective.terms.size(); ++k) {
            const auto& t = objective.terms[k];
            g += t.weight / ((t.total.trace_product(x) + objective.sigma2) * kLn2) * t.total.matrix();
            g -= t.weight / (t0[k] * kLn2) * t.interference.matrix();
        }
        return HermitianMatrix(g, 1e-9);
    }
};

inline DcSubproblem build_sdp(const DcObjective& f, const std::optional<TraceConstraint>& qos,
                              const HermitianMatrix& psi0) {
    DcSubproblem sub;
    sub.objective = f;
    sub.expansion_point = psi0;
    for (const auto& t : f.terms) {
        const double t0 = t.interference.trace_product(psi0) + f.sigma2;
        if (!(t0 > 0.0)) {
            throw SolverError("build_sdp: non-positive expansion value");
        }
        sub.t0.push_back(t0);
    }
    sub.sdp.objective = sub.surrogate_gradient(psi0);
    if (qos) {
        sub.sdp.inequalities.push_back(*qos);
    }
    const int n = psi0.dim();
    for (int k = 0; k + 1 < n; ++k) {
        sub.sdp.unit_diagonal.push_back(k);
    }
    sub.sdp.schur_block = true;
    return sub;
}

/// NOMA subproblem at a fixed power allocation.
inline DcSubproblem build_sdp(const BeamformingModel& m, const PowerAllocation& pa, const SystemParams& params,
                              const HermitianMatrix& psi0) {
    const LiftedMatrices lm = build_lifted(m, pa, params);
    return build_sdp(noma_objective(lm, params), qos_constraint(lm, params), psi0);
}

/// Lifted solution split into Psi and the auxiliary column of the Schur block.
struct BeamformingMatrix {
    HermitianMatrix full;
    HermitianMatrix psi_mat;
    ComplexVector aux_vector;

    static BeamformingMatrix from_lifted(const HermitianMatrix& x) { return {x, ::risnoma::psi_block(x), ::risnoma::aux_vector(x)}; }
};

namespace detail {

/// Unit-modulus phases from a lifted-space vector x = [psi; s]: psi_k / s
/// when s carries weight, psi_k alone otherwise (the objective then has no
/// direct terms and a global rotation is irrelevant).
inline PhaseVector phases_from_lifted_vector(const ComplexVector& x) {
    const Eigen::Index k = x.size() - 1;
    const Complex s = x(k);
    ComplexVector coeffs(k);
    const bool use_ref = std::abs(s) > 1e-9 * x.norm();
    for (Eigen::Index e = 0; e < k; ++e) {
        const Complex psi = use_ref ? x(e) / s : x(e);
        // theta_k = -arg(psi_k)
        coeffs(e) = std::conj(psi);
    }
    return PhaseVector::from_coefficients(coeffs);
}

inline double qos_margin(const std::optional<TraceConstraint>& qos, const HermitianMatrix& x) {
    return qos ? qos->a.trace_product(x) - qos->b : 0.0;
}

}  // namespace detail

struct ExtractionResult {
    PhaseVector phases;
    double objective = -std::numeric_limits<double>::infinity();
    double qos_margin = 0.0;
    bool feasible = false;
};

/// Rank-one recovery: the leading eigenvector plus `n_rand` Gaussian samples
/// x ~ CN(0, X), each projected to unit modulus, plus any `extra` phase
/// vectors. Returns the QoS-feasible candidate with the best objective, or
/// the one with the largest QoS margin when none is feasible.
inline ExtractionResult extract_rank_one(const HermitianMatrix& x, const DcObjective& f,
                                         const std::optional<TraceConstraint>& qos, int n_rand, std::uint64_t seed,
                                         const std::vector<PhaseVector>& extra = {}) {
    std::vector<PhaseVector> candidates;
    candidates.push_back(detail::phases_from_lifted_vector(leading_eigenpair(x).first));
    if (n_rand > 0) {
        const GaussianSampler sampler(x);
        std::mt19937_64 rng(seed);
        for (int r = 0; r < n_rand; ++r) {
            candidates.push_back(detail::phases_from_lifted_vector(sampler(rng)));
        }
    }
    candidates.insert(candidates.end(), extra.begin(), extra.end());

    ExtractionResult best_feasible;
    ExtractionResult best_margin;
    best_margin.qos_margin = -std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) {
        const HermitianMatrix l = lift(c);
        const double margin = detail::qos_margin(qos, l);
        const double value = f.value(l);
        if (margin >= 0.0) {
            if (!best_feasible.feasible || value > best_feasible.objective) {
                best_feasible = {c, value, margin, true};
            }
        } else if (margin > best_margin.qos_margin) {
            best_margin = {c, value, margin, false};
        }
    }
    return best_feasible.feasible ? best_feasible : best_margin;
}

/// NOMA wrapper taking the Schur-block matrix.
inline PhaseVector extract_rank_one(const BeamformingMatrix& psi, const BeamformingModel& m, const PowerAllocation& pa,
                                    const SystemParams& params, int n_rand) {
    const LiftedMatrices lm = build_lifted(m, pa, params);
    return extract_rank_one(psi.full, noma_objective(lm, params), qos_constraint(lm, params), n_rand,
                            params.randomization_seed)
        .phases;
}

struct PhaseResult {
    PhaseVector phases;
    double objective = 0.0;          ///< subproblem objective of the returned phases
    double relaxed_objective = 0.0;  ///< best objective over relaxation-feasible matrices
    bool feasible = false;
    int dc_iterations = 0;
    int sdp_solves = 0;
    std::vector<double> dc_trace;  ///< objective of accepted lifted iterates
    BeamformingMatrix relaxed;
};

namespace detail {

/// Maximizes a concave function on [0, hi] by golden-section search.
template <typename F>
double golden_max(F&& f, double hi, int iters = 48) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 0.0;
    double b = hi;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc < fd) {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        } else {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        }
    }
    // endpoints compete with the bracket midpoint
    double best = 0.5 * (a + b);
    double fbest = f(best);
    for (double t : {0.0, hi}) {
        const double ft = f(t);
        if (ft > fbest) {
            fbest = ft;
            best = t;
        }
    }
    return best;
}

/// Affine pieces a + t b of every trace that enters the surrogate along
/// Y + t (V - Y); keeps line searches O(#terms) per evaluation.
struct LineModel {
    std::vector<std::pair<double, double>> total;
    std::vector<std::pair<double, double>> interference;
};

inline double surrogate_on_line(const DcSubproblem& sub, const LineModel& lm, double t) {
    double v = 0.0;
    const double s2 = sub.objective.sigma2;
    for (std::size_t k = 0; k < sub.objective.terms.size(); ++k) {
        const auto& term = sub.objective.terms[k];
        const double tot = lm.total[k].first + t * lm.total[k].second;
        const double itf = lm.interference[k].first + t * lm.interference[k].second;
        const double itf0 = term.interference.trace_product(sub.expansion_point);
        v += term.weight * (std::log2(tot + s2) - (std::log2(sub.t0[k]) + (itf - itf0) / (sub.t0[k] * kLn2)));
    }
    return v;
}

}  // namespace detail

/// DC / SDR engine shared by every phase subproblem: repeated SDP steps on
/// the concave minorant, then rank-one extraction. The returned phases
/// never score below `init` on `f` when `init` satisfies the constraint.
inline PhaseResult optimize_lifted(const DcObjective& f, const std::optional<TraceConstraint>& qos,
                                   const PhaseVector& init, const SystemParams& params) {
    SdpOptions opt;
    opt.tol = params.sdp_tol;
    opt.max_iter = params.sdp_max_iter;
    opt.over_relaxation = params.over_relaxation;

    PhaseResult out;
    const int n = init.size() + 1;
    HermitianMatrix x0 = lift(init);
    const double init_margin = detail::qos_margin(qos, x0);

    if (init_margin < 0.0) {
        // feasibility phase: maximize the QoS margin over the relaxation
        SdpProblem phase1;
        phase1.objective = qos->a;
        for (int k = 0; k + 1 < n; ++k) {
            phase1.unit_diagonal.push_back(k);
        }
        phase1.schur_block = true;
        const SdpSolution s = solve(phase1, opt, &x0);
        ++out.sdp_solves;
        if (s.stats.infeasible || detail::qos_margin(qos, s.x) < 0.0) {
            out.phases = init;
            out.objective = f.value(x0);
            out.relaxed_objective = out.objective;
            out.relaxed = BeamformingMatrix::from_lifted(x0);
            out.feasible = false;
            return out;
        }
        x0 = s.x;
    }

    double f0 = f.value(x0);
    out.dc_trace.push_back(f0);
    std::optional<HermitianMatrix> warm;

    auto run_dc = [&]() {
        for (int it = 1; it <= params.dc_max_iter; ++it) {
            ++out.dc_iterations;
            DcSubproblem sub = build_sdp(f, qos, x0);
            HermitianMatrix y = x0;
            for (int step = 0; step < params.fw_steps; ++step) {
                if (step > 0) {
                    sub.sdp.objective = sub.surrogate_gradient(y);
                }
                const SdpSolution s = solve(sub.sdp, opt, warm ? &*warm : nullptr);
                ++out.sdp_solves;
                if (s.stats.infeasible) {
                    break;
                }
                warm = s.x;
                const HermitianMatrix& v = s.x;
                // largest step keeping the QoS half-space satisfied
                double t_max = 1.0;
                if (qos) {
                    const double my = detail::qos_margin(qos, y);
                    const double mv = detail::qos_margin(qos, v);
                    if (mv < 0.0) {
                        t_max = my > 0.0 ? my / (my - mv) : 0.0;
                    }
                }
                if (t_max <= 0.0) {
                    break;
                }
                detail::LineModel lm;
                for (const auto& term : sub.objective.terms) {
                    const double ty = term.total.trace_product(y);
                    const double iy = term.interference.trace_product(y);
                    lm.total.emplace_back(ty, term.total.trace_product(v) - ty);
                    lm.interference.emplace_back(iy, term.interference.trace_product(v) - iy);
                }
                const double t = detail::golden_max([&](double tt) { return detail::surrogate_on_line(sub, lm, tt); },
                                                    t_max);
                if (t <= 0.0) {
                    break;
                }
                y = HermitianMatrix(y.matrix() + t * (v.matrix() - y.matrix()), 1e-9);
            }
            const double fy = f.value(y);
            if (fy > f0) {
                const double gain = fy - f0;
                x0 = y;
                f0 = fy;
                out.dc_trace.push_back(f0);
                if (gain < params.tol) {
                    break;
                }
            } else {
                break;
            }
        }
    };

    run_dc();

    std::vector<PhaseVector> extra{init};
    ExtractionResult best = extract_rank_one(x0, f, qos, params.n_rand, params.randomization_seed, extra);
    // A feasible extracted point is itself feasible for the relaxation; when it
    // beats the relaxed iterate, continue the DC ascent from its lift.
    for (int restart = 0; restart < 3 && best.feasible && best.objective > f0; ++restart) {
        x0 = lift(best.phases);
        f0 = best.objective;
        out.dc_trace.push_back(f0);
        run_dc();
        extra.push_back(best.phases);
        best = extract_rank_one(x0, f, qos, params.n_rand, params.randomization_seed, extra);
    }
    if (best.feasible && best.objective > f0) {
        x0 = lift(best.phases);
        f0 = best.objective;
        out.dc_trace.push_back(f0);
    }

    out.phases = best.phases;
    out.objective = best.objective;
    out.feasible = best.feasible;
    out.relaxed_objective = f0;
    out.relaxed = BeamformingMatrix::from_lifted(x0);
    return out;
}

/// Passive beamforming for a fixed NOMA power allocation.
inline PhaseResult optimize_phases(const ChannelRealization& ch, const PowerAllocation& pa, const SystemParams& params,
                                   const PhaseVector& init) {
    require_same_size(init.size(), ch.size(), "optimize_phases init");
    const BeamformingModel m = make_model(ch, params);
    const LiftedMatrices lm = build_lifted(m, pa, params);
    return optimize_lifted(noma_objective(lm, params), qos_constraint(lm, params), init, params);
}

}  // namespace risnoma
