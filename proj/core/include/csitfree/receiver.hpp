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

#ifndef CSITFREE_RECEIVER_HPP
#define CSITFREE_RECEIVER_HPP

#include "csitfree/signal_core.hpp"
#include "csitfree/transmitter.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace csitfree
{
    // Observations of one user: row l holds y_{k,l} = [y_{k,l,1} .. y_{k,l,N}].
    struct Observation
    {
        CMatrix y; // L x N
        std::size_t user = 0;

        std::size_t subcarriers() const noexcept { return static_cast<std::size_t>(y.rows()); }
        std::size_t blocks() const noexcept { return static_cast<std::size_t>(y.cols()); }
    };

    struct SinrBreakdown
    {
        double desired = 0.0;
        double interference = 0.0;
        double noise = 0.0;
        double gamma = 0.0;
    };

    // Three-way split of one combined sample c_{k,l,n}.
    //   coefficients[m] = r_n (d o U_{m+1}^T h): equals g u for m + 1 = n and g v_{m+1} otherwise,
    //   where r_n = a^H(theta_hat) U_n^* diag(d^*(theta_hat)) is the combining row.
    // The complex terms use the transmitted symbols and the realized noise, so
    // desired_term + interference_term + noise_term equals the combiner output.
    // `sinr` uses expected powers: unit-power symbols and E|z~|^2 = sigma^2 |r_n|^2 / |g_hat|^2.
    struct Decomposition
    {
        std::vector<cd> coefficients;
        cd desired_term{};
        cd interference_term{};
        cd noise_term{};
        SinrBreakdown sinr;
    };

    struct EstimationResult
    {
        std::size_t q_star = 1;     // 1-based codebook index
        double angle = 0.0;         // Delta_{q*}
        std::vector<cd> g_hat;      // per subcarrier at q*, includes the sqrt(p_{N-1}) scaling
        std::vector<double> R_hat;  // per candidate, bits/s/Hz
    };

    struct Detection
    {
        CMatrix soft;                                // L x K, c_{k,l,n} / (sqrt(N) sqrt(p_n / p_{N-1}))
        std::vector<std::vector<std::size_t>> hard;  // [l][n] QPSK indices
    };

    // Complex multiplications spent by an instrumented routine.
    struct MultiplicationCounter
    {
        std::uint64_t count = 0;
        void add(std::uint64_t n) noexcept { count += n; }
    };

    // y_{l,n} = d_n h^T x_{l,n} + z_n over the N blocks of one subcarrier.
    CVector observe(const CpDftBank &bank, const CVector &channel, const CVector &doppler, const CVector &symbols,
                    const PowerAllocation &power, const CVector &noise);

    // r_n = a^H U_n^* diag(d^*), returned as a column so that c = r.transpose() * y.
    CVector combining_row(const CpDftBank &bank, std::size_t slot, const CVector &steering, const CVector &doppler);

    // c = a^H U_n^* diag(d^*) y / g_hat. Throws std::domain_error when g_hat == 0.
    cd combine(const CVector &y, std::size_t slot, cd g_hat, const SteeringVector &steering,
               const DopplerVector &doppler, const CpDftBank &bank);

    // Genie split of c_{k,l,n}. `channel` is the block-1 channel, `true_doppler` its per-block
    // phase progression, `noise` the per-block noise (empty for noiseless).
    Decomposition decompose_terms(const CpDftBank &bank, const CVector &channel, const CVector &true_doppler,
                                  const CVector &symbols, const PowerAllocation &power, const CVector &noise,
                                  double noise_power, std::size_t slot, cd g_hat, const CVector &steering,
                                  const CVector &doppler, double sinr_cap);

    // g_hat_q = c_{N-1}(1, Delta_q) / (sqrt(N) s(N-1))
    cd estimate_gain(const CVector &y, const SteeringVector &steering, const DopplerVector &doppler, cd pilot,
                     const CpDftBank &bank);

    // |ref|^2 / |c_N - ref|^2 with ref = sqrt(N) s(N) (times sqrt(p_N/p_{N-1}) for unequal power).
    // A vanishing residual, or a ratio above the cap, returns the cap.
    double estimate_sinr(cd combined, cd reference, double sinr_cap);

    // Smallest q maximizing R_hat, 1-based.
    std::size_t select_aod(std::span<const double> R_hat);

    // (1/L) sum log2(1 + gamma_l)
    double spectral_efficiency(std::span<const double> sinr);

    // Precomputed steering halves of the pilot-slot combining rows, shared by every user:
    // rows[l][q] = conj(U_n^T a_l(Delta_q)) for n = N-1 and N.
    class PilotCombinerTable
    {
    public:
        PilotCombinerTable(const CpDftBank &bank, std::span<const double> wavenumbers, std::size_t Q, double spacing);

        std::size_t resolution() const noexcept { return angles_.size(); }
        const std::vector<double> &angles() const noexcept { return angles_; }
        const CVector &row_first(std::size_t l, std::size_t q) const { return first_[l][q]; }  // slot N-1
        const CVector &row_second(std::size_t l, std::size_t q) const { return second_[l][q]; } // slot N

    private:
        std::vector<double> angles_;
        std::vector<std::vector<CVector>> first_;
        std::vector<std::vector<CVector>> second_;
    };

    struct PilotContext
    {
        cd first = kPilotSymbol;  // s(N-1)
        cd second = kPilotSymbol; // s(N)
        double power_first = 1.0; // p_{N-1}
        double power_second = 1.0; // p_N
        double sinr_cap = 1e8;
    };

    // Joint gain / AoD / Doppler search over the codebook. `doppler_steps[l][q]` is the per-block
    // phase increment of d_l(Delta_q); all zeros disables Doppler compensation.
    EstimationResult estimate_channel(const Observation &obs, const PilotCombinerTable &table,
                                      const std::vector<std::vector<double>> &doppler_steps, const PilotContext &pilots);

    // Same search written directly from the combiner definition, with multiplications counted.
    // Per subcarrier the two pilot-slot matrices U_n^* diag(y) are formed once (2 N^2); every
    // candidate then needs, for each pilot slot, one N x N matrix-vector product with d^* and one
    // length-N inner product with a^*.
    EstimationResult estimate_channel_counted(const Observation &obs, const Codebooks &codebooks,
                                              const CpDftBank &bank, const PilotContext &pilots,
                                              MultiplicationCounter &counter);

    Detection detect_symbols(const Observation &obs, std::span<const cd> g_hat, std::span<const CVector> steering,
                             std::span<const CVector> doppler, std::size_t data_slots, const PowerAllocation &power,
                             const CpDftBank &bank);

    // Per-block phase increments nu_l T_b v cos(phi - Delta_q), [l][q].
    std::vector<std::vector<double>> doppler_step_table(std::span<const double> wavenumbers,
                                                        std::span<const double> angles, double block_duration,
                                                        double speed, double heading);

    CVector doppler_from_step(double step, std::size_t N);

} // namespace csitfree

#endif
