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

#ifndef CSITFREE_TEST_HELPERS_HPP
#define CSITFREE_TEST_HELPERS_HPP

#include "csitfree/receiver.hpp"
#include "csitfree/signal_core.hpp"
#include "csitfree/transmitter.hpp"

#include <cmath>
#include <random>

namespace csitfree::test
{
    inline double carrier_wavenumber(double fc = 28e9) { return 2.0 * kPi * fc / kSpeedOfLight; }
    inline double half_wavelength(double fc = 28e9) { return kSpeedOfLight / fc / 2.0; }

    // One subcarrier of a single-user, pure-LoS link with every other slot filled by random QPSK.
    struct LosLink
    {
        std::size_t N;
        CpDftBank bank;
        double nu = carrier_wavenumber();
        double spacing = half_wavelength();
        double Tb = 80.0 / 6.25e6;
        double theta = 0.0;
        double speed = 0.0;
        double heading = 0.0;
        cd g{0.01, 0.0};
        PowerAllocation power;
        CVector s;

        LosLink(std::size_t n, std::mt19937_64 &rng, double p = 1.0)
            : N(n), bank(n), power(PowerAllocation::equal(n, p)), s(static_cast<Eigen::Index>(n))
        {
            std::uniform_int_distribution<std::size_t> pick(0, 3);
            for (Eigen::Index i = 0; i < s.size(); ++i)
                s(i) = qpsk::symbol(pick(rng));
            s(s.size() - 2) = kPilotSymbol;
            s(s.size() - 1) = kPilotSymbol;
        }

        CVector steering() const { return array_response(theta, nu, N, spacing).entries; }
        CVector channel() const { return g * steering(); }
        double step() const { return nu * Tb * speed * std::cos(heading - theta); }
        CVector doppler() const { return doppler_from_step(step(), N); }
        CVector observe(const CVector &noise = CVector()) const
        {
            return csitfree::observe(bank, channel(), doppler(), s, power, noise.size() ? noise : CVector::Zero(N));
        }
    };
} // namespace csitfree::test

#endif
