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

#ifndef CSITFREE_CHANNEL_HPP
#define CSITFREE_CHANNEL_HPP

#include "csitfree/config.hpp"
#include "csitfree/signal_core.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace csitfree
{
    // Per-trial random stream. The engine is seeded from seed XOR trial_index so every
    // trial is reproducible on its own and trials can run in any order.
    class TrialRng
    {
    public:
        explicit TrialRng(std::uint64_t seed, std::uint64_t trial_index = 0);

        double uniform(double lo, double hi);
        // Circularly-symmetric complex Gaussian with total variance `variance`.
        cd complex_normal(double variance);
        std::size_t uniform_index(std::size_t n); // [0, n)

        std::mt19937_64 &engine() noexcept { return engine_; }

    private:
        std::mt19937_64 engine_;
        std::normal_distribution<double> normal_{0.0, 1.0};
    };

    struct UserGeometry
    {
        double aod = 0.0;      // theta_k, rad, [-pi/2, pi/2)
        double heading = 0.0;  // phi_k, rad
        double speed = 0.0;    // v_k, m/s
        double distance = 0.0; // r_k, m

        // Per-block Doppler phase increment nu * T_b * v * cos(phi - theta).
        double doppler_step(double wavenumber, double block_duration) const noexcept;
    };

    struct ChannelRealization
    {
        // Indexed [k][l].
        std::vector<std::vector<cd>> gain;          // g_{k,l} = e^{j vartheta} / r_k
        std::vector<std::vector<double>> phase;     // vartheta_{k,l}
        std::vector<std::vector<CVector>> los;      // g a_l(theta_k)
        std::vector<std::vector<CVector>> nlos;     // unweighted NLoS draw
        std::vector<std::vector<CVector>> composite; // sqrt(k/(k+1)) los + sqrt(1/(k+1)) nlos
        double los_weight = 1.0;
        double nlos_weight = 0.0;

        std::size_t users() const noexcept { return gain.size(); }
        std::size_t subcarriers() const noexcept { return gain.empty() ? 0 : gain.front().size(); }
    };

    // sqrt(kappa/(kappa+1)) and sqrt(1/(kappa+1)); kappa = +inf gives (1, 0).
    std::pair<double, double> rician_weights(double kappa);

    std::vector<UserGeometry> sample_geometry(TrialRng &rng, const SystemConfig &cfg);

    ChannelRealization realize_channel(TrialRng &rng, std::span<const UserGeometry> geometry, const SystemConfig &cfg,
                                       std::span<const double> wavenumbers);

    // h_{k,l,n} for every (k,l): composite channel rotated by the LoS Doppler phase of block n (1-based).
    std::vector<std::vector<CVector>> evolve_block(const ChannelRealization &realization, std::size_t block,
                                                   std::span<const UserGeometry> geometry,
                                                   std::span<const double> wavenumbers, const SystemConfig &cfg);

    cd draw_noise(TrialRng &rng, double variance);
    CVector draw_noise(TrialRng &rng, double variance, std::size_t length);

} // namespace csitfree

#endif
