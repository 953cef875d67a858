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

#include <cmath>
#include <vector>

#include "risnoma/common.hpp"

namespace risnoma {

/// RIS phase configuration. The surface applies e^{j theta_k} on element k;
/// angles are kept wrapped to [0, 2 pi) so every coefficient has unit modulus.
class PhaseVector {
public:
    PhaseVector() = default;

    explicit PhaseVector(std::vector<double> theta) : theta_(std::move(theta)) {
        for (double& t : theta_) {
            t = wrap(t);
        }
    }

    static PhaseVector zeros(int k) { return PhaseVector(std::vector<double>(static_cast<std::size_t>(k), 0.0)); }

    /// Angles taken from arg(c_k); magnitudes of c are discarded.
    static PhaseVector from_coefficients(const ComplexVector& c) {
        std::vector<double> theta(static_cast<std::size_t>(c.size()));
        for (Eigen::Index k = 0; k < c.size(); ++k) {
            theta[static_cast<std::size_t>(k)] = std::arg(c(k));
        }
        return PhaseVector(std::move(theta));
    }

    int size() const { return static_cast<int>(theta_.size()); }
    double operator[](int k) const { return theta_[static_cast<std::size_t>(k)]; }
    const std::vector<double>& theta() const { return theta_; }

    /// Reflection coefficients e^{j theta_k}.
    ComplexVector coefficients() const {
        ComplexVector c(size());
        for (int k = 0; k < size(); ++k) {
            c(k) = std::polar(1.0, theta_[static_cast<std::size_t>(k)]);
        }
        return c;
    }

    /// The conjugated coefficient vector psi, so that psi^H x = sum_k e^{j theta_k} x_k.
    ComplexVector psi() const { return coefficients().conjugate(); }

    /// Adds a constant to every angle.
    PhaseVector rotated(double offset) const {
        std::vector<double> t = theta_;
        for (double& v : t) {
            v += offset;
        }
        return PhaseVector(std::move(t));
    }

    friend bool operator==(const PhaseVector&, const PhaseVector&) = default;

private:
    static double wrap(double t) {
        double w = std::fmod(t, kTwoPi);
        if (w < 0.0) {
            w += kTwoPi;
        }
        // fmod of a value just below 2 pi can round back up to 2 pi
        return w >= kTwoPi ? 0.0 : w;
    }

    std::vector<double> theta_;
};

}  // namespace risnoma
