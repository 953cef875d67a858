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
#include <vector>

#include "risnoma/common.hpp"

namespace risnoma::poly {

/// Value of sum_k c[k] x^(n-k), highest degree first.
inline double evaluate(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (double ck : c) {
        v = v * x + ck;
    }
    return v;
}

inline double derivative(const std::vector<double>& c, double x) {
    const std::size_t n = c.size();
    double v = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        v = v * x + c[k] * static_cast<double>(n - 1 - k);
    }
    return v;
}

/// A few Newton steps; keeps the input when a step does not reduce |p(x)|.
inline double polish(const std::vector<double>& c, double x) {
    for (int it = 0; it < 4; ++it) {
        const double d = derivative(c, x);
        if (d == 0.0) {
            break;
        }
        const double next = x - evaluate(c, x) / d;
        if (!std::isfinite(next) || std::abs(evaluate(c, next)) >= std::abs(evaluate(c, x))) {
            break;
        }
        x = next;
    }
    return x;
}

/// Real roots of b x + c.
inline std::vector<double> linear_roots(double b, double c) {
    if (b == 0.0) {
        return {};
    }
    return {-c / b};
}

/// Real roots of a x^2 + b x + c (cancellation-free form).
inline std::vector<double> quadratic_roots(double a, double b, double c) {
    if (a == 0.0) {
        return linear_roots(b, c);
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) {
        return {};
    }
    if (disc == 0.0) {
        return {-b / (2.0 * a)};
    }
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    std::vector<double> r;
    if (q != 0.0) {
        r = {q / a, c / q};
    } else {
        r = {0.0};
    }
    std::sort(r.begin(), r.end());
    return r;
}

/// Real roots of a x^3 + b x^2 + c x + d. Leading coefficients that are
/// negligible against the largest one drop the degree. An identically zero
/// polynomial yields no roots.
inline std::vector<double> cubic_roots(double a, double b, double c, double d) {
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    if (scale == 0.0) {
        return {};
    }
    a /= scale;
    b /= scale;
    c /= scale;
    d /= scale;
    constexpr double kNegligible = 1e-14;
    if (std::abs(a) <= kNegligible) {
        if (std::abs(b) <= kNegligible) {
            return std::abs(c) <= kNegligible ? std::vector<double>{} : linear_roots(c, d);
        }
        return quadratic_roots(b, c, d);
    }
    // monic x^3 + p2 x^2 + p1 x + p0, depressed by x = t - p2/3
    const double p2 = b / a;
    const double p1 = c / a;
    const double p0 = d / a;
    const double q = (p2 * p2 - 3.0 * p1) / 9.0;
    const double r = (p2 * (2.0 * p2 * p2 - 9.0 * p1) + 27.0 * p0) / 54.0;
    const double shift = p2 / 3.0;
    std::vector<double> roots;
    const double q3 = q * q * q;
    if (r * r < q3) {
        const double t = std::acos(std::clamp(r / std::sqrt(q3), -1.0, 1.0));
        const double m = -2.0 * std::sqrt(q);
        roots = {m * std::cos(t / 3.0) - shift, m * std::cos((t + kTwoPi) / 3.0) - shift,
                 m * std::cos((t - kTwoPi) / 3.0) - shift};
    } else {
        const double big = -std::copysign(std::cbrt(std::abs(r) + std::sqrt(r * r - q3)), r);
        const double small = big == 0.0 ? 0.0 : q / big;
        roots = {big + small - shift};
        // double root when the discriminant vanishes
        if (big == small || std::abs(big - small) <= 1e-12 * std::max(1.0, std::abs(big))) {
            roots.push_back(-0.5 * (big + small) - shift);
        }
    }
    const std::vector<double> coeffs{a, b, c, d};
    for (double& x : roots) {
        x = polish(coeffs, x);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

}  // namespace risnoma::poly
