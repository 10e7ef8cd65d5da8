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

#include "csitfree/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace csitfree
{
    TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial_index)
    {
        const std::uint64_t s = seed ^ trial_index;
        std::seed_seq seq{static_cast<std::uint32_t>(s & 0xffffffffu), static_cast<std::uint32_t>(s >> 32)};
        engine_.seed(seq);
    }

    double TrialRng::uniform(double lo, double hi)
    {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    cd TrialRng::complex_normal(double variance)
    {
        const double sd = std::sqrt(variance / 2.0);
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return {sd * re, sd * im};
    }

    std::size_t TrialRng::uniform_index(std::size_t n)
    {
        if (n == 0)
            throw std::invalid_argument("uniform_index: empty range");
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }

    double UserGeometry::doppler_step(double wavenumber, double block_duration) const noexcept
    {
        return wavenumber * block_duration * speed * std::cos(heading - aod);
    }

    std::pair<double, double> rician_weights(double kappa)
    {
        if (std::isinf(kappa))
            return {1.0, 0.0};
        return {std::sqrt(kappa / (kappa + 1.0)), std::sqrt(1.0 / (kappa + 1.0))};
    }

    std::vector<UserGeometry> sample_geometry(TrialRng &rng, const SystemConfig &cfg)
    {
        std::vector<UserGeometry> users(cfg.users);
        for (auto &u : users)
        {
            u.distance = rng.uniform(cfg.r_min_m, cfg.r_max_m);
            u.aod = rng.uniform(-kPi / 2.0, kPi / 2.0);
            u.heading = cfg.worst_case_heading ? u.aod : rng.uniform(0.0, 2.0 * kPi);
            u.speed = cfg.speed_mps;
        }
        return users;
    }

    ChannelRealization realize_channel(TrialRng &rng, std::span<const UserGeometry> geometry, const SystemConfig &cfg,
                                       std::span<const double> wavenumbers)
    {
        ChannelRealization ch;
        const std::size_t K = geometry.size();
        const std::size_t L = wavenumbers.size();
        const auto N = static_cast<Eigen::Index>(cfg.antennas);
        std::tie(ch.los_weight, ch.nlos_weight) = rician_weights(cfg.kappa);

        ch.gain.assign(K, std::vector<cd>(L));
        ch.phase.assign(K, std::vector<double>(L));
        ch.los.assign(K, std::vector<CVector>(L));
        ch.nlos.assign(K, std::vector<CVector>(L));
        ch.composite.assign(K, std::vector<CVector>(L));

        for (std::size_t k = 0; k < K; ++k)
        {
            const double r = geometry[k].distance;
            const double nlos_var = cfg.nlos_variance == NlosVariance::InverseSquare ? 1.0 / (r * r) : 1.0 / r;
            for (std::size_t l = 0; l < L; ++l)
            {
                const double vartheta = rng.uniform(0.0, 2.0 * kPi);
                const cd g = std::polar(1.0 / r, vartheta);
                ch.phase[k][l] = vartheta;
                ch.gain[k][l] = g;
                ch.los[k][l] = g * array_response(geometry[k].aod, wavenumbers[l], cfg.antennas, cfg.spacing()).entries;

                CVector nlos(N);
                for (Eigen::Index i = 0; i < N; ++i)
                    nlos(i) = rng.complex_normal(nlos_var);
                ch.nlos[k][l] = std::move(nlos);

                if (ch.nlos_weight == 0.0)
                    ch.composite[k][l] = ch.los[k][l];
                else
                    ch.composite[k][l] = ch.los_weight * ch.los[k][l] + ch.nlos_weight * ch.nlos[k][l];
            }
        }
        return ch;
    }

    std::vector<std::vector<CVector>> evolve_block(const ChannelRealization &realization, std::size_t block,
                                                   std::span<const UserGeometry> geometry,
                                                   std::span<const double> wavenumbers, const SystemConfig &cfg)
    {
        if (block < 1 || block > cfg.antennas)
            throw std::invalid_argument("evolve_block: block index outside [1, N].");
        const double Tb = cfg.block_duration();
        std::vector<std::vector<CVector>> out(realization.users());
        for (std::size_t k = 0; k < realization.users(); ++k)
        {
            out[k].resize(realization.subcarriers());
            for (std::size_t l = 0; l < realization.subcarriers(); ++l)
            {
                const double phase = geometry[k].doppler_step(wavenumbers[l], Tb) * static_cast<double>(block - 1);
                out[k][l] = std::polar(1.0, phase) * realization.composite[k][l];
            }
        }
        return out;
    }

    cd draw_noise(TrialRng &rng, double variance)
    {
        if (variance < 0.0)
            throw std::invalid_argument("draw_noise: variance must be non-negative.");
        // Always consume two normals so the stream layout does not depend on sigma^2.
        const cd z = rng.complex_normal(variance);
        return variance == 0.0 ? cd{0.0, 0.0} : z;
    }

    CVector draw_noise(TrialRng &rng, double variance, std::size_t length)
    {
        CVector z(static_cast<Eigen::Index>(length));
        for (Eigen::Index i = 0; i < z.size(); ++i)
            z(i) = draw_noise(rng, variance);
        return z;
    }

} // namespace csitfree
