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

#include <cstdint>
#include <string>

#include "risnoma/common.hpp"

namespace risnoma {

/// Every tunable of the model and of the solvers. Powers are linear watts,
/// thresholds linear ratios.
struct SystemParams {
    double q_c = dbm_to_watts(30.0);        ///< UAV transmit power toward the CU
    double p_max = dbm_to_watts(30.0);      ///< DT power budget
    double sigma2 = dbm_to_watts(-174.0);   ///< noise variance
    double gamma_min = db_to_linear(20.0);  ///< CU SINR floor
    int K = 20;                             ///< number of RIS elements

    int sca_max_iter = 40;
    int ao_max_iter = 20;
    int dc_max_iter = 20;
    double tol = 1e-4;

    // power allocation
    int dual_max_iter = 100;
    double dual_step = 0.5;
    double dual_init = 1.0;
    double p_floor_ratio = 1e-6;
    double lambda_floor = 1e-3;
    bool literal_cubic = false;

    // passive beamforming
    bool include_direct_links = true;
    int n_rand = 100;
    int fw_steps = 1;
    double sdp_tol = 1e-4;
    int sdp_max_iter = 5000;
    double over_relaxation = 1.6;
    std::uint64_t randomization_seed = 0x5eedULL;

    // benchmark schemes
    double fixed_lambda_i = 0.3;
    double oma_slot_i = 0.5;

    double p_floor() const { return p_floor_ratio * p_max; }

    void validate() const {
        require(q_c > 0.0 && p_max > 0.0 && sigma2 > 0.0, "powers and noise variance must be positive");
        require(gamma_min > 0.0, "gamma_min must be positive");
        require(K >= 1, "K must be at least 1");
        require(sca_max_iter >= 1 && ao_max_iter >= 1 && dc_max_iter >= 1 && dual_max_iter >= 1,
                "iteration caps must be positive");
        require(tol > 0.0 && tol < 1.0, "tol must lie in (0, 1)");
        require(dual_step > 0.0 && dual_init >= 0.0, "dual step must be positive and init nonnegative");
        require(p_floor_ratio > 0.0 && p_floor_ratio < 1.0, "p_floor_ratio must lie in (0, 1)");
        require(lambda_floor > 0.0 && lambda_floor < 0.5, "lambda_floor must lie in (0, 0.5)");
        require(n_rand >= 0 && fw_steps >= 1, "n_rand >= 0 and fw_steps >= 1 required");
        require(sdp_tol > 0.0 && sdp_max_iter >= 1, "bad SDP settings");
        require(over_relaxation > 0.0 && over_relaxation < 2.0, "over_relaxation must lie in (0, 2)");
        require(fixed_lambda_i > 0.0 && fixed_lambda_i < 1.0, "fixed_lambda_i must lie in (0, 1)");
        require(oma_slot_i > 0.0 && oma_slot_i < 1.0, "oma_slot_i must lie in (0, 1)");
    }
};

}  // namespace risnoma
