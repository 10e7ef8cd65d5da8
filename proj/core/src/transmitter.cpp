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

#include "csitfree/transmitter.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace csitfree
{
    namespace qpsk
    {
        const std::array<cd, 4> &points()
        {
            static const std::array<cd, 4> pts = [] {
                const double a = 1.0 / std::sqrt(2.0);
                return std::array<cd, 4>{cd{a, a}, cd{-a, a}, cd{a, -a}, cd{-a, -a}};
            }();
            return pts;
        }

        cd symbol(std::size_t index)
        {
            if (index >= 4)
                throw std::invalid_argument("qpsk::symbol: index must be in [0, 3].");
            return points()[index];
        }

        std::size_t nearest(cd value)
        {
            const std::size_t b0 = value.real() < 0.0 ? 1 : 0;
            const std::size_t b1 = value.imag() < 0.0 ? 1 : 0;
            return b0 | (b1 << 1);
        }
    } // namespace qpsk

    PowerAllocation PowerAllocation::equal(std::size_t N, double watts)
    {
        return PowerAllocation{std::vector<double>(N, watts)};
    }

    RVector PowerAllocation::amplitudes() const
    {
        RVector a(static_cast<Eigen::Index>(p.size()));
        for (std::size_t i = 0; i < p.size(); ++i)
            a(static_cast<Eigen::Index>(i)) = std::sqrt(p[i]);
        return a;
    }

    double PowerAllocation::mean() const
    {
        if (p.empty())
            return 0.0;
        return std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(p.size());
    }

    Frame assemble_frame(TrialRng &rng, const SystemConfig &cfg)
    {
        const std::size_t N = cfg.antennas;
        const std::size_t K = cfg.users;
        if (N < 3 || K > N - 2)
            throw ConfigError("assemble_frame: K = " + std::to_string(K) + " users need N >= K + 2 slots, N = " +
                              std::to_string(N));

        Frame f;
        const auto L = static_cast<Eigen::Index>(cfg.subcarriers);
        f.symbols = CMatrix::Zero(L, static_cast<Eigen::Index>(N));
        f.data_index.assign(cfg.subcarriers, std::vector<std::size_t>(K));
        for (Eigen::Index l = 0; l < L; ++l)
        {
            for (std::size_t k = 0; k < K; ++k)
            {
                const std::size_t idx = rng.uniform_index(4);
                f.data_index[static_cast<std::size_t>(l)][k] = idx;
                f.symbols(l, static_cast<Eigen::Index>(k)) = qpsk::symbol(idx);
            }
            // Unserved slots carry filler symbols so E[s s^H] = I holds for any K <= N - 2.
            for (std::size_t n = K; n < N - 2; ++n)
                f.symbols(l, static_cast<Eigen::Index>(n)) = qpsk::symbol(rng.uniform_index(4));
            f.symbols(l, static_cast<Eigen::Index>(N - 2)) = f.pilots[0];
            f.symbols(l, static_cast<Eigen::Index>(N - 1)) = f.pilots[1];
        }
        return f;
    }

    CVector precode_block(const CVector &symbols, const PowerAllocation &power, std::size_t block, const CpDftBank &bank)
    {
        const std::size_t N = bank.size();
        if (static_cast<std::size_t>(symbols.size()) != N || power.p.size() != N)
            throw std::invalid_argument("precode_block: symbol and power vectors must have length N = " +
                                        std::to_string(N));
        const CMatrix &F = bank.precoder(block).matrix();
        const CVector scaled = power.amplitudes().cast<cd>().cwiseProduct(symbols);
        return (F * scaled) / std::sqrt(static_cast<double>(N));
    }

} // namespace csitfree
