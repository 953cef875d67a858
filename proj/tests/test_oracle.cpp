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

#include "risnoma/oracle.hpp"

using namespace risnoma;

TEST(Oracle, EvaluationMatchesLibraryRates) {
    SystemParams p;
    p.K = 12;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto ch = generate_channels(p, Geometry{}, seed);
        std::vector<double> t(12);
        for (double& v : t) {
            v = u(rng);
        }
        const PhaseVector ph(t);
        const PowerAllocation pa{0.3, 0.35, 0.65};
        const RateReport r = sinr_all(ch, pa, ph, p);
        const oracle::Sinrs o = oracle::evaluate(ch, pa, ph, p);
        EXPECT_NEAR(r.sinr_cu, static_cast<double>(o.cu), 1e-10 * r.sinr_cu);
        EXPECT_NEAR(r.sinr_dri, static_cast<double>(o.dri), 1e-10 * r.sinr_dri);
        EXPECT_NEAR(r.sinr_drj, static_cast<double>(o.drj), 1e-10 * r.sinr_drj);
        EXPECT_NEAR(r.sum_rate, static_cast<double>(oracle::sum_rate(o)), 1e-10);
    }
}

TEST(Oracle, GridEndpoints) {
    EXPECT_EQ(oracle::grid_value(0.0, 2.0, 0, 5), 0.0);
    EXPECT_EQ(oracle::grid_value(0.0, 2.0, 4, 5), 2.0);
    EXPECT_EQ(oracle::grid_value(0.0, 2.0, 0, 1), 2.0);
}

TEST(Oracle, PowerGridOptimumIsFeasibleAndDominatesGrid) {
    SystemParams p;
    p.K = 4;
    const auto ch = generate_channels(p, Geometry{}, 9);
    const PhaseVector zero = PhaseVector::zeros(4);
    const oracle::GridPoint best = oracle::power_grid(ch, zero, p, 50);
    ASSERT_TRUE(best.found);
    const PowerAllocation pa{best.p_t, best.lambda_i, 1.0 - best.lambda_i};
    EXPECT_TRUE(oracle::qos_ok(oracle::evaluate(ch, pa, zero, p), p));
    EXPECT_NEAR(static_cast<double>(best.sum_rate), sinr_all(ch, pa, zero, p).sum_rate, 1e-9);
    for (int a = 0; a < 50; a += 7) {
        for (int b = 0; b < 50; b += 7) {
            const double li = oracle::grid_value(0.0, 1.0, b, 50);
            const PowerAllocation q{oracle::grid_value(0.0, p.p_max, a, 50), li, 1.0 - li};
            const oracle::Sinrs s = oracle::evaluate(ch, q, zero, p);
            if (oracle::qos_ok(s, p)) {
                EXPECT_LE(oracle::sum_rate(s), best.sum_rate);
            }
        }
    }
}

TEST(Oracle, DiscretePhaseEnumeration) {
    SystemParams p;
    p.K = 3;
    const auto ch = generate_channels(p, Geometry{}, 5);
    const oracle::LinkSet links = oracle::link_set(ch);
    int count = 0;
    oracle::for_each_discrete_phase(links, 3, 4, [&](const std::vector<long double>& t, const oracle::Gains& g) {
        ASSERT_EQ(t.size(), 3u);
        const oracle::Gains direct = oracle::gains(links, t);
        for (int l = 0; l < 6; ++l) {
            EXPECT_NEAR(static_cast<double>(g.v[l]), static_cast<double>(direct.v[l]), 1e-12 * static_cast<double>(direct.v[l]));
        }
        ++count;
    });
    EXPECT_EQ(count, 64);
}

TEST(Oracle, PhaseSearchBeatsEveryLevelItVisits) {
    SystemParams p;
    p.K = 2;
    const auto ch = generate_channels(p, Geometry{}, 4);
    const PowerAllocation pa{1e-3, 0.8, 0.2};
    const oracle::PhasePoint best = oracle::phase_search(ch, pa, p, 8);
    ASSERT_TRUE(best.found);
    for (int a = 0; a < 8; ++a) {
        for (int b = 0; b < 8; ++b) {
            const PhaseVector ph({kTwoPi * a / 8.0, kTwoPi * b / 8.0});
            const oracle::Sinrs s = oracle::evaluate(ch, pa, ph, p);
            if (oracle::qos_ok(s, p)) {
                EXPECT_LE(oracle::sum_rate(s), best.sum_rate + 1e-12L);
            }
        }
    }
}
