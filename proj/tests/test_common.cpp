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

#include <cmath>

#include "risnoma/common.hpp"
#include "risnoma/params.hpp"
#include "risnoma/phases.hpp"

using namespace risnoma;

TEST(Units, DecibelRoundTrip) {
    EXPECT_DOUBLE_EQ(db_to_linear(20.0), 100.0);
    EXPECT_DOUBLE_EQ(dbm_to_watts(30.0), 1.0);
    EXPECT_NEAR(dbm_to_watts(-174.0), 3.981071705534973e-21, 1e-33);
    for (double v : {-174.0, -30.0, 0.0, 17.5, 30.0}) {
        EXPECT_NEAR(watts_to_dbm(dbm_to_watts(v)), v, 1e-12);
        EXPECT_NEAR(linear_to_db(db_to_linear(v)), v, 1e-12);
    }
}

TEST(Params, DefaultsAreValid) {
    const SystemParams p;
    EXPECT_NO_THROW(p.validate());
    EXPECT_EQ(p.K, 20);
    EXPECT_DOUBLE_EQ(p.gamma_min, 100.0);
    EXPECT_DOUBLE_EQ(p.p_max, 1.0);
    EXPECT_DOUBLE_EQ(p.q_c, 1.0);
    EXPECT_GT(p.sigma2, 0.0);
}

TEST(Params, RejectsBadValues) {
    SystemParams p;
    p.K = 0;
    EXPECT_THROW(p.validate(), InvalidInput);
    p = {};
    p.sigma2 = -1.0;
    EXPECT_THROW(p.validate(), InvalidInput);
    p = {};
    p.over_relaxation = 2.0;
    EXPECT_THROW(p.validate(), InvalidInput);
    p = {};
    p.fixed_lambda_i = 1.0;
    EXPECT_THROW(p.validate(), InvalidInput);
}

TEST(PhaseVector, WrapsIntoPrincipalRange) {
    const PhaseVector v({-0.5, 7.0, kTwoPi, 0.0});
    for (int k = 0; k < v.size(); ++k) {
        EXPECT_GE(v[k], 0.0);
        EXPECT_LT(v[k], kTwoPi);
    }
    EXPECT_NEAR(v[0], kTwoPi - 0.5, 1e-15);
    EXPECT_NEAR(v[1], 7.0 - kTwoPi, 1e-15);
    EXPECT_NEAR(v[2], 0.0, 1e-15);
}

TEST(PhaseVector, CoefficientsHaveUnitModulus) {
    const PhaseVector v({0.1, 1.2, 2.3, 3.4, 4.5, 5.6});
    const ComplexVector c = v.coefficients();
    for (int k = 0; k < v.size(); ++k) {
        EXPECT_NEAR(std::abs(c(k)), 1.0, 1e-15);
        EXPECT_NEAR(std::arg(c(k) * std::conj(std::polar(1.0, v[k]))), 0.0, 1e-15);
    }
    EXPECT_TRUE(v.psi().isApprox(c.conjugate()));
}

TEST(PhaseVector, FromCoefficientsDiscardsMagnitude) {
    ComplexVector c(3);
    c << Complex(2.0, 0.0), Complex(0.0, 0.5), Complex(-3.0, -3.0);
    const PhaseVector v = PhaseVector::from_coefficients(c);
    EXPECT_NEAR(v[0], 0.0, 1e-15);
    EXPECT_NEAR(v[1], kTwoPi / 4.0, 1e-15);
    EXPECT_NEAR(v[2], 5.0 * kTwoPi / 8.0, 1e-15);
}

TEST(PhaseVector, RotationShiftsEveryAngle) {
    const PhaseVector v({0.0, 1.0, 6.0});
    const PhaseVector r = v.rotated(1.0);
    EXPECT_NEAR(r[0], 1.0, 1e-15);
    EXPECT_NEAR(r[1], 2.0, 1e-15);
    EXPECT_NEAR(r[2], 7.0 - kTwoPi, 1e-15);
}
