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

#include <random>

#include "risnoma/power_alloc.hpp"

using namespace risnoma;

namespace {

struct Instance {
    ChannelRealization ch;
    EffectiveGains g;
    ScaCoefficients sca;
};

Instance instance(std::uint64_t seed, const SystemParams& p) {
    Instance in;
    in.ch = generate_channels(p, Geometry{}, seed);
    in.g = compute_gains(in.ch, PhaseVector::zeros(p.K), p);
    const RateReport r = sinrs_from_gains(in.g, {0.5 * p.p_max, 0.6, 0.4}, p);
    in.sca = *sca_coefficients(r);
    return in;
}

SystemParams small() {
    SystemParams p;
    p.K = 6;
    return p;
}

// best feasible sum rate on an n x n grid, fixed phases
double grid_best(const EffectiveGains& g, const SystemParams& p, int n) {
    double best = 0.0;
    for (int a = 0; a < n; ++a) {
        const double pt = p.p_max * a / (n - 1);
        for (int b = 0; b < n; ++b) {
            const double li = static_cast<double>(b) / (n - 1);
            const RateReport r = sinrs_from_gains(g, {pt, li, 1.0 - li}, p);
            if (r.qos_feasible) {
                best = std::max(best, r.sum_rate);
            }
        }
    }
    return best;
}

}  // namespace

TEST(SolvePt, SyntheticQuadraticRoot) {
    const auto r = poly::quadratic_roots(1.0, 0.0, -4.0);
    const double x = detail::best_candidate(r, 0.0, 10.0, [](double v) { return -(v - 2.0) * (v - 2.0); });
    EXPECT_DOUBLE_EQ(x, 2.0);
}

TEST(SolvePt, ZeroDualsGiveBudget) {
    const SystemParams p = small();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Instance in = instance(seed, p);
        const DualVariables zero{0.0, 0.0, 0.0};
        const PowerStep s = solve_p_t(in.g, in.sca, zero, 0.6, p);
        EXPECT_DOUBLE_EQ(s.p_t, p.p_max);
        // confirmed by a line search: the surrogate Lagrangian increases in p
        double prev = -1e300;
        for (int k = 0; k <= 1000; ++k) {
            const double pt = p.p_floor() + (p.p_max - p.p_floor()) * k / 1000.0;
            const double v = surrogate_lagrangian(in.g, in.sca, zero, pt, 0.6, p);
            EXPECT_GT(v, prev);
            prev = v;
        }
    }
}

TEST(SolvePt, MatchesGridArgmax) {
    const SystemParams p = small();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Instance in = instance(seed, p);
        const DualVariables duals{3.0 * u(rng), 3.0 * u(rng), 3.0 * u(rng)};
        const double li = 0.1 + 0.8 * u(rng);
        const PowerStep s = solve_p_t(in.g, in.sca, duals, li, p);
        double best_p = 0.0, best_v = -1e300;
        const int n = 10000;
        for (int k = 0; k < n; ++k) {
            const double pt = p.p_floor() + (p.p_max - p.p_floor()) * k / (n - 1);
            const double v = surrogate_lagrangian(in.g, in.sca, duals, pt, li, p);
            if (v > best_v) {
                best_v = v;
                best_p = pt;
            }
        }
        EXPECT_GE(surrogate_lagrangian(in.g, in.sca, duals, s.p_t, li, p), best_v - 1e-12);
        EXPECT_NEAR(s.p_t, best_p, p.p_max / (n - 1));
    }
}

TEST(SolvePt, InteriorRootIsStationary) {
    const SystemParams p = small();
    const Instance in = instance(4, p);
    // large power price pushes the optimum inside the budget
    const DualVariables duals{0.0, 50.0, 0.0};
    const PowerStep s = solve_p_t(in.g, in.sca, duals, 0.5, p);
    ASSERT_TRUE(s.interior);
    EXPECT_LT(s.p_t, p.p_max);
    const double scale = (in.sca.alpha_i + in.sca.alpha_j) / kLn2 / s.p_t;
    EXPECT_LE(std::abs(power_gradient(in.g, in.sca, duals, s.p_t, 0.5, p)) / scale, 1e-9);
}

TEST(SolveLambda, CubicOutsideIntervalPicksBetterEndpoint) {
    const auto roots = poly::cubic_roots(1.0, 0.0, -1.0, 0.0);
    ASSERT_EQ(roots.size(), 3u);
    bool interior = true;
    const double x = detail::best_candidate(roots, 0.05, 0.95, [](double v) { return v; }, &interior);
    EXPECT_DOUBLE_EQ(x, 0.95);
    EXPECT_FALSE(interior);
    const double y = detail::best_candidate(roots, 0.05, 0.95, [](double v) { return -v; });
    EXPECT_DOUBLE_EQ(y, 0.05);
}

TEST(SolveLambda, MatchesGridArgmax) {
    const SystemParams p = small();
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Instance in = instance(seed, p);
        const DualVariables duals{u(rng), u(rng), 5.0 * u(rng)};
        const double pt = p.p_max * (0.05 + 0.95 * u(rng));
        const LambdaStep s = solve_lambda_i(in.g, in.sca, duals, pt, p, 0.5);
        double best_l = 0.0, best_v = -1e300;
        const int n = 10000;
        for (int k = 0; k < n; ++k) {
            const double l = p.lambda_floor + (1.0 - 2.0 * p.lambda_floor) * k / (n - 1);
            const double v = surrogate_lagrangian(in.g, in.sca, duals, pt, l, p);
            if (v > best_v) {
                best_v = v;
                best_l = l;
            }
        }
        EXPECT_GE(surrogate_lagrangian(in.g, in.sca, duals, pt, s.lambda_i, p), best_v - 1e-12);
        EXPECT_NEAR(s.lambda_i, best_l, 1.0 / (n - 1));
    }
}

TEST(SolveLambda, CubicRootsAreStationary) {
    const SystemParams p = small();
    const Instance in = instance(8, p);
    for (double eta3 : {0.0, 0.5, 2.0}) {
        const DualVariables duals{0.0, 0.0, eta3};
        const auto c = lambda_cubic(in.g, in.sca, duals, 0.7, p);
        for (double r : poly::cubic_roots(c[0], c[1], c[2], c[3])) {
            if (r <= 0.0 || r >= 1.0) {
                continue;
            }
            const double ai = in.sca.alpha_i / kLn2;
            EXPECT_LE(std::abs(lambda_gradient(in.g, in.sca, duals, 0.7, r, p)) / (ai / r + eta3), 1e-9);
        }
    }
}

TEST(SolveLambda, LiteralCubicHasTheSameRoots) {
    SystemParams p = small();
    const Instance in = instance(3, p);
    const DualVariables duals{0.2, 0.3, 1.5};
    const auto a = lambda_cubic(in.g, in.sca, duals, 0.8, p);
    p.literal_cubic = true;
    auto literal = in.sca;
    // the literal grouping carries the weights in natural-log units
    literal.alpha_i /= kLn2;
    literal.alpha_j /= kLn2;
    const auto b = lambda_cubic(in.g, literal, duals, 0.8, p);
    const auto ra = poly::cubic_roots(a[0], a[1], a[2], a[3]);
    const auto rb = poly::cubic_roots(b[0], b[1], b[2], b[3]);
    ASSERT_EQ(ra.size(), rb.size());
    for (std::size_t k = 0; k < ra.size(); ++k) {
        EXPECT_NEAR(ra[k], rb[k], 1e-9 * std::max(1.0, std::abs(ra[k])));
    }
}

TEST(Duals, SlackConstraintsKeepZero) {
    SystemParams p = small();
    EffectiveGains g;
    g.G_c = 1.0;
    g.H_c = 1e-6;
    p.sigma2 = 1e-6;
    const DualVariables d = update_duals({0.0, 0.0, 0.0}, g, {0.5, 0.4, 0.6}, p, 1);
    EXPECT_EQ(d.eta1, 0.0);
    EXPECT_EQ(d.eta2, 0.0);
    EXPECT_EQ(d.eta3, 0.0);
}

TEST(Duals, QosViolationRaisesEta1) {
    SystemParams p = small();
    EffectiveGains g;
    g.G_c = 1.0;
    g.H_c = 1.0;
    p.sigma2 = 1e-3;
    const double delta_power = 0.5;  // far above the QoS cap of about 0.01
    const DualVariables d = update_duals({0.2, 0.2, 0.2}, g, {delta_power, 0.5, 0.5}, p, 3);
    EXPECT_GT(d.eta1, 0.2);
}

TEST(Duals, TwoStepHandTrace) {
    SystemParams p = small();
    p.gamma_min = 100.0;
    p.sigma2 = 1e-3;
    p.p_max = 1.0;
    EffectiveGains g;
    g.G_c = 1.0;
    const PowerAllocation pa{0.5, 0.8, 0.2};
    // slacks: qos 1 - 100 * 1e-3 = 0.9, budget 0.5, lambda 0.2
    DualVariables d = update_duals({1.0, 1.0, 1.0}, g, pa, p, 1, 1.0);
    EXPECT_NEAR(d.eta1, 0.1, 1e-15);
    EXPECT_NEAR(d.eta2, 0.5, 1e-15);
    EXPECT_NEAR(d.eta3, 0.8, 1e-15);
    d = update_duals(d, g, pa, p, 2, 1.0);
    EXPECT_EQ(d.eta1, 0.0);
    EXPECT_NEAR(d.eta2, 0.5 - 0.5 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(d.eta3, 0.8 - 0.2 / std::sqrt(2.0), 1e-15);
}

TEST(OptimizePower, NoCellularInterferenceUsesFullBudget) {
    SystemParams p = small();
    p.gamma_min = 1e-30;
    auto ch = generate_channels(p, Geometry{}, 5);
    ch.direct_uav_dri = ch.direct_uav_drj = Complex();
    ch.ris_to_uav_path.dri.setZero();
    ch.ris_to_uav_path.drj.setZero();
    const PowerResult r = optimize_power(ch, PhaseVector::zeros(p.K), p, {0.3, 0.3, 0.7});
    EXPECT_TRUE(r.feasible);
    EXPECT_NEAR(r.pa.p_t, p.p_max, 1e-12);
    const double best = grid_best(compute_gains(ch, PhaseVector::zeros(p.K), p), p, 200);
    EXPECT_GE(r.report.sum_rate, 0.99 * best);
}

TEST(OptimizePower, TrajectoryNeverDecreases) {
    const SystemParams p = small();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto ch = generate_channels(p, Geometry{}, seed);
        const PowerResult r = optimize_power(ch, PhaseVector::zeros(p.K), p, {p.p_max, 0.3, 0.7});
        for (std::size_t k = 1; k < r.trajectory.size(); ++k) {
            EXPECT_GE(r.trajectory[k], r.trajectory[k - 1]);
        }
        EXPECT_DOUBLE_EQ(r.trajectory.back(), r.report.sum_rate);
        EXPECT_TRUE(r.pa.valid(p.p_max));
        EXPECT_NEAR(r.pa.lambda_i + r.pa.lambda_j, 1.0, 1e-15);
    }
}

TEST(OptimizePower, OptimalInitDoesNotDecrease) {
    const SystemParams p = small();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto ch = generate_channels(p, Geometry{}, seed);
        const PhaseVector z = PhaseVector::zeros(p.K);
        const PowerResult first = optimize_power(ch, z, p, {p.p_max, 0.3, 0.7});
        const PowerResult again = optimize_power(ch, z, p, first.pa);
        EXPECT_GE(again.report.sum_rate, first.report.sum_rate);
    }
}

TEST(OptimizePower, WithinTwoPercentOfGrid) {
    const SystemParams p = small();
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const auto ch = generate_channels(p, Geometry{}, 500 + seed);
        const PhaseVector z = PhaseVector::zeros(p.K);
        const PowerResult r = optimize_power(ch, z, p, {p.p_max, 0.3, 0.7});
        ASSERT_TRUE(r.feasible);
        EXPECT_TRUE(r.report.qos_feasible);
        EXPECT_GE(r.report.sum_rate, 0.98 * grid_best(compute_gains(ch, z, p), p, 200));
    }
}

TEST(OptimizePower, InfeasibleQosIsFlagged) {
    SystemParams p = small();
    auto ch = generate_channels(p, Geometry{}, 1);
    ch.direct_uav_cu = Complex();
    ch.ris_to_uav_path.cu.setZero();
    const PowerResult r = optimize_power(ch, PhaseVector::zeros(p.K), p, {p.p_max, 0.3, 0.7});
    EXPECT_FALSE(r.feasible);
    EXPECT_FALSE(r.report.qos_feasible);
}
