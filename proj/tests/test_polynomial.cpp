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

#include <Eigen/Eigenvalues>

#include "risnoma/polynomial.hpp"

using namespace risnoma;

namespace {

// real eigenvalues of the companion matrix
std::vector<double> companion_roots(double a, double b, double c, double d) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    m(0, 0) = -b / a;
    m(0, 1) = -c / a;
    m(0, 2) = -d / a;
    m(1, 0) = 1.0;
    m(2, 1) = 1.0;
    const Eigen::EigenSolver<Eigen::Matrix3d> es(m);
    std::vector<double> r;
    for (int k = 0; k < 3; ++k) {
        const auto ev = es.eigenvalues()(k);
        if (std::abs(ev.imag()) <= 1e-9 * std::max(1.0, std::abs(ev))) {
            r.push_back(ev.real());
        }
    }
    std::sort(r.begin(), r.end());
    return r;
}

}  // namespace

TEST(Polynomial, EvaluateAndDerivative) {
    const std::vector<double> c{2.0, -3.0, 0.0, 5.0};
    EXPECT_DOUBLE_EQ(poly::evaluate(c, 2.0), 9.0);
    EXPECT_DOUBLE_EQ(poly::derivative(c, 2.0), 12.0);
}

TEST(Polynomial, Quadratic) {
    auto r = poly::quadratic_roots(1.0, 0.0, -4.0);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_DOUBLE_EQ(r[0], -2.0);
    EXPECT_DOUBLE_EQ(r[1], 2.0);
    EXPECT_TRUE(poly::quadratic_roots(1.0, 0.0, 4.0).empty());
    r = poly::quadratic_roots(0.0, 2.0, -4.0);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_DOUBLE_EQ(r[0], 2.0);
    // tiny product of roots, no cancellation
    r = poly::quadratic_roots(1.0, -1e8, 1.0);
    EXPECT_NEAR(r[0], 1e-8, 1e-22);
}

TEST(Polynomial, CubicKnownRoots) {
    auto r = poly::cubic_roots(1.0, 0.0, -1.0, 0.0);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_NEAR(r[0], -1.0, 1e-14);
    EXPECT_NEAR(r[1], 0.0, 1e-14);
    EXPECT_NEAR(r[2], 1.0, 1e-14);
    r = poly::cubic_roots(1.0, -6.0, 11.0, -6.0);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_NEAR(r[0], 1.0, 1e-13);
    EXPECT_NEAR(r[1], 2.0, 1e-13);
    EXPECT_NEAR(r[2], 3.0, 1e-13);
    r = poly::cubic_roots(1.0, 0.0, 1.0, 1.0);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_NEAR(r[0], -0.6823278038280193, 1e-14);
}

TEST(Polynomial, CubicRepeatedRoots) {
    auto r = poly::cubic_roots(1.0, -3.0, 3.0, -1.0);
    ASSERT_FALSE(r.empty());
    for (double x : r) {
        EXPECT_NEAR(x, 1.0, 1e-5);
    }
    // (x - 1)^2 (x + 2)
    r = poly::cubic_roots(1.0, 0.0, -3.0, 2.0);
    ASSERT_GE(r.size(), 2u);
    EXPECT_NEAR(r.front(), -2.0, 1e-12);
    EXPECT_NEAR(r.back(), 1.0, 1e-7);
}

TEST(Polynomial, CubicHomogeneity) {
    const auto a = poly::cubic_roots(2.0, -1.0, -5.0, 0.3);
    for (double s : {1e-12, 0.5, 7.0, 1e9}) {
        const auto b = poly::cubic_roots(2.0 * s, -1.0 * s, -5.0 * s, 0.3 * s);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            EXPECT_NEAR(a[k], b[k], 1e-13 * std::max(1.0, std::abs(a[k])));
        }
    }
}

TEST(Polynomial, CubicDegreeDrop) {
    auto r = poly::cubic_roots(0.0, 1.0, 0.0, -9.0);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_DOUBLE_EQ(r[1], 3.0);
    r = poly::cubic_roots(0.0, 0.0, 2.0, -1.0);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_DOUBLE_EQ(r[0], 0.5);
    EXPECT_TRUE(poly::cubic_roots(0.0, 0.0, 0.0, 0.0).empty());
    EXPECT_TRUE(poly::cubic_roots(0.0, 0.0, 0.0, 3.0).empty());
}

TEST(Polynomial, CubicMatchesCompanionEigenvalues) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    for (int trial = 0; trial < 500; ++trial) {
        const double a = n(rng), b = n(rng), c = n(rng), d = n(rng);
        const auto got = poly::cubic_roots(a, b, c, d);
        const auto want = companion_roots(a, b, c, d);
        ASSERT_EQ(got.size(), want.size()) << a << ' ' << b << ' ' << c << ' ' << d;
        for (std::size_t k = 0; k < got.size(); ++k) {
            EXPECT_NEAR(got[k], want[k], 1e-8 * std::max(1.0, std::abs(want[k])));
            EXPECT_NEAR(poly::evaluate({a, b, c, d}, got[k]), 0.0, 1e-10 * std::max(1.0, std::pow(std::abs(got[k]), 3)));
        }
    }
}
