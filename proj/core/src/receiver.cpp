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

#include "csitfree/receiver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace csitfree
{
    namespace
    {
        void check_slot(std::size_t slot, std::size_t N, const char *where)
        {
            if (slot < 1 || slot > N)
                throw std::invalid_argument(std::string(where) + ": slot " + std::to_string(slot) + " outside [1, " +
                                            std::to_string(N) + "].");
        }

        // sum_j a_j b_j without conjugation
        cd dot_plain(const CVector &a, const CVector &b)
        {
            return (a.array() * b.array()).sum();
        }

        double pilot_power_ratio(const PilotContext &p)
        {
            return p.power_first == p.power_second ? 1.0 : std::sqrt(p.power_second / p.power_first);
        }

        // Scores one candidate from its two pilot-slot combiner outputs (g_hat = 1).
        std::pair<cd, double> score_candidate(cd c_first, cd c_second, double sqrt_n, const PilotContext &pilots,
                                              double ratio)
        {
            const cd g_hat = c_first / (sqrt_n * pilots.first);
            if (g_hat == cd{0.0, 0.0})
                return {g_hat, 0.0};
            const cd reference = sqrt_n * pilots.second * ratio;
            return {g_hat, estimate_sinr(c_second / g_hat, reference, pilots.sinr_cap)};
        }
    } // namespace

    CVector observe(const CpDftBank &bank, const CVector &channel, const CVector &doppler, const CVector &symbols,
                    const PowerAllocation &power, const CVector &noise)
    {
        const std::size_t N = bank.size();
        if (static_cast<std::size_t>(channel.size()) != N || static_cast<std::size_t>(doppler.size()) != N)
            throw std::invalid_argument("observe: channel and Doppler vectors must have length N.");
        CVector y(static_cast<Eigen::Index>(N));
        for (std::size_t n = 1; n <= N; ++n)
        {
            const CVector x = precode_block(symbols, power, n, bank);
            const auto j = static_cast<Eigen::Index>(n - 1);
            y(j) = doppler(j) * channel.transpose() * x;
            if (noise.size() > 0)
                y(j) += noise(j);
        }
        return y;
    }

    CVector combining_row(const CpDftBank &bank, std::size_t slot, const CVector &steering, const CVector &doppler)
    {
        check_slot(slot, bank.size(), "combining_row");
        const CMatrix &Un = bank.cp_dft(slot).matrix();
        return (Un.transpose() * steering).conjugate().cwiseProduct(doppler.conjugate());
    }

    cd combine(const CVector &y, std::size_t slot, cd g_hat, const SteeringVector &steering,
               const DopplerVector &doppler, const CpDftBank &bank)
    {
        if (g_hat == cd{0.0, 0.0})
            throw std::domain_error("combine: channel gain estimate is zero.");
        if (y.size() != static_cast<Eigen::Index>(bank.size()))
            throw std::invalid_argument("combine: observation must have length N.");
        const CVector r = combining_row(bank, slot, steering.entries, doppler.entries);
        return dot_plain(r, y) / g_hat;
    }

    Decomposition decompose_terms(const CpDftBank &bank, const CVector &channel, const CVector &true_doppler,
                                  const CVector &symbols, const PowerAllocation &power, const CVector &noise,
                                  double noise_power, std::size_t slot, cd g_hat, const CVector &steering,
                                  const CVector &doppler, double sinr_cap)
    {
        const std::size_t N = bank.size();
        check_slot(slot, N, "decompose_terms");
        if (g_hat == cd{0.0, 0.0})
            throw std::domain_error("decompose_terms: channel gain estimate is zero.");

        const CVector r = combining_row(bank, slot, steering, doppler);
        const CVector weighted = r.cwiseProduct(true_doppler);
        // U_m^T h is a permutation of U^T h: (U_m^T h)_j = (U^T h)_{C(j,m)}
        const CVector b = bank.dft().matrix().transpose() * channel;
        const double sqrt_n = std::sqrt(static_cast<double>(N));

        Decomposition out;
        out.coefficients.resize(N);
        double interference = 0.0;
        for (std::size_t m = 1; m <= N; ++m)
        {
            cd coef{};
            for (std::size_t j = 1; j <= N; ++j)
                coef += weighted(static_cast<Eigen::Index>(j - 1)) *
                        b(static_cast<Eigen::Index>(circulant_index(j, m, N) - 1));
            out.coefficients[m - 1] = coef;

            const double pm = power.p[m - 1];
            const cd term = coef * std::sqrt(pm) * symbols(static_cast<Eigen::Index>(m - 1)) / (g_hat * sqrt_n);
            const double expected = std::norm(coef) * pm / (std::norm(g_hat) * static_cast<double>(N));
            if (m == slot)
            {
                out.desired_term = term;
                out.sinr.desired = expected;
            }
            else
            {
                out.interference_term += term;
                interference += expected;
            }
        }
        out.sinr.interference = interference;
        if (noise.size() > 0)
            out.noise_term = dot_plain(r, noise) / g_hat;
        out.sinr.noise = noise_power * r.squaredNorm() / std::norm(g_hat);

        const double denom = out.sinr.interference + out.sinr.noise;
        out.sinr.gamma = (denom <= 0.0 || out.sinr.desired >= sinr_cap * denom) ? sinr_cap : out.sinr.desired / denom;
        return out;
    }

    cd estimate_gain(const CVector &y, const SteeringVector &steering, const DopplerVector &doppler, cd pilot,
                     const CpDftBank &bank)
    {
        if (pilot == cd{0.0, 0.0})
            throw std::invalid_argument("estimate_gain: pilot symbol must be nonzero.");
        const std::size_t N = bank.size();
        const cd c = combine(y, N - 1, cd{1.0, 0.0}, steering, doppler, bank);
        return c / (std::sqrt(static_cast<double>(N)) * pilot);
    }

    double estimate_sinr(cd combined, cd reference, double sinr_cap)
    {
        const double residual = std::norm(combined - reference);
        const double signal = std::norm(reference);
        if (residual <= 0.0 || signal >= sinr_cap * residual)
            return sinr_cap;
        return signal / residual;
    }

    std::size_t select_aod(std::span<const double> R_hat)
    {
        if (R_hat.empty())
            throw std::invalid_argument("select_aod: no candidates.");
        std::size_t best = 0;
        for (std::size_t q = 1; q < R_hat.size(); ++q)
            if (R_hat[q] > R_hat[best])
                best = q;
        return best + 1;
    }

    double spectral_efficiency(std::span<const double> sinr)
    {
        if (sinr.empty())
            return 0.0;
        double sum = 0.0;
        for (double g : sinr)
            sum += std::log2(1.0 + g);
        return sum / static_cast<double>(sinr.size());
    }

    PilotCombinerTable::PilotCombinerTable(const CpDftBank &bank, std::span<const double> wavenumbers, std::size_t Q,
                                           double spacing)
        : angles_(codebook_angles(Q))
    {
        const std::size_t N = bank.size();
        const CMatrix &U1 = bank.cp_dft(N - 1).matrix();
        const CMatrix &U2 = bank.cp_dft(N).matrix();
        first_.resize(wavenumbers.size());
        second_.resize(wavenumbers.size());
        for (std::size_t l = 0; l < wavenumbers.size(); ++l)
        {
            first_[l].reserve(Q);
            second_[l].reserve(Q);
            for (double angle : angles_)
            {
                const CVector a = array_response(angle, wavenumbers[l], N, spacing).entries;
                first_[l].push_back((U1.transpose() * a).conjugate());
                second_[l].push_back((U2.transpose() * a).conjugate());
            }
        }
    }

    CVector doppler_from_step(double step, std::size_t N)
    {
        CVector d(static_cast<Eigen::Index>(N));
        for (std::size_t n = 0; n < N; ++n)
            d(static_cast<Eigen::Index>(n)) = std::polar(1.0, step * static_cast<double>(n));
        return d;
    }

    std::vector<std::vector<double>> doppler_step_table(std::span<const double> wavenumbers,
                                                        std::span<const double> angles, double block_duration,
                                                        double speed, double heading)
    {
        std::vector<std::vector<double>> steps(wavenumbers.size(), std::vector<double>(angles.size()));
        for (std::size_t l = 0; l < wavenumbers.size(); ++l)
            for (std::size_t q = 0; q < angles.size(); ++q)
                steps[l][q] = wavenumbers[l] * block_duration * speed * std::cos(heading - angles[q]);
        return steps;
    }

    EstimationResult estimate_channel(const Observation &obs, const PilotCombinerTable &table,
                                      const std::vector<std::vector<double>> &doppler_steps, const PilotContext &pilots)
    {
        const std::size_t L = obs.subcarriers();
        const std::size_t N = obs.blocks();
        const std::size_t Q = table.resolution();
        if (doppler_steps.size() != L)
            throw std::invalid_argument("estimate_channel: Doppler table does not match the subcarrier count.");

        const double sqrt_n = std::sqrt(static_cast<double>(N));
        const double ratio = pilot_power_ratio(pilots);

        EstimationResult out;
        out.R_hat.assign(Q, 0.0);
        std::vector<std::vector<cd>> gains(L, std::vector<cd>(Q));
        CVector e(static_cast<Eigen::Index>(N));

        for (std::size_t l = 0; l < L; ++l)
        {
            const CVector y = obs.y.row(static_cast<Eigen::Index>(l)).transpose();
            for (std::size_t q = 0; q < Q; ++q)
            {
                // conj(d_n) = w^(n-1) with w = exp(-j step)
                const cd w = std::polar(1.0, -doppler_steps[l][q]);
                cd rot{1.0, 0.0};
                for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(N); ++j)
                {
                    e(j) = rot * y(j);
                    rot *= w;
                }
                const cd c_first = dot_plain(table.row_first(l, q), e);
                const cd c_second = dot_plain(table.row_second(l, q), e);
                auto [g_hat, gamma] = score_candidate(c_first, c_second, sqrt_n, pilots, ratio);
                gains[l][q] = g_hat;
                out.R_hat[q] += std::log2(1.0 + gamma);
            }
        }
        for (double &r : out.R_hat)
            r /= static_cast<double>(L);

        out.q_star = select_aod(out.R_hat);
        out.angle = table.angles()[out.q_star - 1];
        out.g_hat.resize(L);
        for (std::size_t l = 0; l < L; ++l)
            out.g_hat[l] = gains[l][out.q_star - 1];
        return out;
    }

    EstimationResult estimate_channel_counted(const Observation &obs, const Codebooks &codebooks,
                                              const CpDftBank &bank, const PilotContext &pilots,
                                              MultiplicationCounter &counter)
    {
        const std::size_t L = obs.subcarriers();
        const std::size_t N = obs.blocks();
        const std::size_t Q = codebooks.resolution;
        const auto n = static_cast<Eigen::Index>(N);
        if (codebooks.subcarriers() != L || bank.size() != N)
            throw std::invalid_argument("estimate_channel_counted: codebook or bank size mismatch.");

        const double sqrt_n = std::sqrt(static_cast<double>(N));
        const double ratio = pilot_power_ratio(pilots);
        const CMatrix U1c = bank.cp_dft(N - 1).matrix().conjugate();
        const CMatrix U2c = bank.cp_dft(N).matrix().conjugate();

        EstimationResult out;
        out.R_hat.assign(Q, 0.0);
        std::vector<std::vector<cd>> gains(L, std::vector<cd>(Q));

        CMatrix M1(n, n), M2(n, n);
        CVector z(n);
        for (std::size_t l = 0; l < L; ++l)
        {
            // U_n^* diag(y) for both pilot slots
            for (Eigen::Index j = 0; j < n; ++j)
            {
                const cd yj = obs.y(static_cast<Eigen::Index>(l), j);
                for (Eigen::Index i = 0; i < n; ++i)
                {
                    M1(i, j) = U1c(i, j) * yj;
                    M2(i, j) = U2c(i, j) * yj;
                }
            }
            counter.add(2 * N * N);

            for (std::size_t q = 0; q < Q; ++q)
            {
                const CVector &a = codebooks.steering[l][q].entries;
                const CVector &d = codebooks.doppler[l][q].entries;
                cd c[2];
                const CMatrix *Ms[2] = {&M1, &M2};
                for (int s = 0; s < 2; ++s)
                {
                    for (Eigen::Index i = 0; i < n; ++i)
                    {
                        cd acc{};
                        for (Eigen::Index j = 0; j < n; ++j)
                            acc += (*Ms[s])(i, j) * std::conj(d(j));
                        z(i) = acc;
                    }
                    counter.add(N * N);
                    cd acc{};
                    for (Eigen::Index i = 0; i < n; ++i)
                        acc += std::conj(a(i)) * z(i);
                    counter.add(N);
                    c[s] = acc;
                }
                auto [g_hat, gamma] = score_candidate(c[0], c[1], sqrt_n, pilots, ratio);
                gains[l][q] = g_hat;
                out.R_hat[q] += std::log2(1.0 + gamma);
            }
        }
        for (double &r : out.R_hat)
            r /= static_cast<double>(L);

        out.q_star = select_aod(out.R_hat);
        out.angle = codebooks.angles[out.q_star - 1];
        out.g_hat.resize(L);
        for (std::size_t l = 0; l < L; ++l)
            out.g_hat[l] = gains[l][out.q_star - 1];
        return out;
    }

    Detection detect_symbols(const Observation &obs, std::span<const cd> g_hat, std::span<const CVector> steering,
                             std::span<const CVector> doppler, std::size_t data_slots, const PowerAllocation &power,
                             const CpDftBank &bank)
    {
        const std::size_t L = obs.subcarriers();
        const std::size_t N = bank.size();
        if (g_hat.size() != L || steering.size() != L || doppler.size() != L)
            throw std::invalid_argument("detect_symbols: per-subcarrier inputs must have length L.");
        if (data_slots > N)
            throw std::invalid_argument("detect_symbols: more data slots than blocks.");

        const double sqrt_n = std::sqrt(static_cast<double>(N));
        const double p_ref = power.p[N - 2];
        Detection det;
        det.soft.resize(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(data_slots));
        det.hard.assign(L, std::vector<std::size_t>(data_slots));
        for (std::size_t l = 0; l < L; ++l)
        {
            if (g_hat[l] == cd{0.0, 0.0})
                throw std::domain_error("detect_symbols: channel gain estimate is zero.");
            const CVector y = obs.y.row(static_cast<Eigen::Index>(l)).transpose();
            for (std::size_t n = 1; n <= data_slots; ++n)
            {
                const CVector r = combining_row(bank, n, steering[l], doppler[l]);
                const cd c = dot_plain(r, y) / g_hat[l];
                const double scale = p_ref == power.p[n - 1] ? sqrt_n : sqrt_n * std::sqrt(power.p[n - 1] / p_ref);
                const cd soft = c / scale;
                det.soft(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(n - 1)) = soft;
                det.hard[l][n - 1] = qpsk::nearest(soft);
            }
        }
        return det;
    }

} // namespace csitfree
