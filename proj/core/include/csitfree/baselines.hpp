// SPDX-License-Identifier: Apache-2.0
//
// csitfree: link-level simulator for CSIT-free mmWave MU-MISO downlink
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

#ifndef CSITFREE_BASELINES_HPP
#define CSITFREE_BASELINES_HPP

#include "csitfree/config.hpp"
#include "csitfree/signal_core.hpp"

#include <string>
#include <vector>

namespace csitfree
{
    struct BaselineResult
    {
        std::string method;                     // ZF, MRT, perfect_limit, no_doppler
        std::vector<std::vector<double>> sinr;  // [k][l], linear
        std::vector<double> user_se;            // mean_l log2(1 + gamma), per user
        double sum_se = 0.0;                    // sum_k user_se[k]
        bool degenerate = false;

        // Recomputes user_se and sum_se from sinr.
        void finalize();
    };

    struct Beams
    {
        CMatrix W;               // N x K, unit-norm columns (zero where flagged)
        bool degenerate = false; // rank-deficient H or a zero channel
    };

    // H has one user channel h_k^T per row (K x N).
    // W = pinv(H) with singular values below 1e-10 * sigma_max dropped, columns normalized.
    Beams zf_precoder(const CMatrix &H);

    // Column k = conj(h_k) / |h_k|.
    Beams mrt_precoder(const CMatrix &H);

    // gamma_k = p |h_k^T w_k|^2 / (p sum_{j != k} |h_k^T w_j|^2 + sigma^2), capped.
    std::vector<double> baseline_sinr(const CMatrix &W, const CMatrix &H, double user_power, double noise_power,
                                      double sinr_cap);

    // Per-user transmit power of the CSIT baselines.
    double baseline_user_power(const SystemConfig &cfg);

    // Total radiated power sum_k p_user |w_k|^2.
    double radiated_power(const CMatrix &W, double user_power);

    // Largest |h_k^T w_j|, j != k.
    double max_leakage(const CMatrix &W, const CMatrix &H);

} // namespace csitfree

#endif
