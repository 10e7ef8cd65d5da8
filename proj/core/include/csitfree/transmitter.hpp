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

#ifndef CSITFREE_TRANSMITTER_HPP
#define CSITFREE_TRANSMITTER_HPP

#include "csitfree/channel.hpp"
#include "csitfree/config.hpp"
#include "csitfree/signal_core.hpp"

#include <array>
#include <string>
#include <vector>

namespace csitfree
{
    // Unit-power QPSK, Gray mapped: index b1 b0 -> ((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2).
    namespace qpsk
    {
        const std::array<cd, 4> &points();
        cd symbol(std::size_t index);
        std::size_t nearest(cd value);
    } // namespace qpsk

    inline constexpr cd kPilotSymbol{1.0, 0.0};

    struct PowerAllocation
    {
        std::vector<double> p; // watts per symbol slot, length N

        static PowerAllocation equal(std::size_t N, double watts);
        RVector amplitudes() const; // sqrt(p)
        double mean() const;        // sum_n p_n / N, the expected per-block radiated power
    };

    // Row l holds s_l. Slots 1..K carry user data, slots N-1 and N the pilots, anything in between
    // random filler symbols.
    struct Frame
    {
        CMatrix symbols; // L x N
        std::vector<std::vector<std::size_t>> data_index; // [l][k] QPSK index of s_l(k+1)
        std::string constellation = "QPSK";
        std::array<cd, 2> pilots{kPilotSymbol, kPilotSymbol};

        std::size_t subcarriers() const noexcept { return static_cast<std::size_t>(symbols.rows()); }
        std::size_t slots() const noexcept { return static_cast<std::size_t>(symbols.cols()); }
    };

    Frame assemble_frame(TrialRng &rng, const SystemConfig &cfg);

    // x_{l,n} = F_n diag(sqrt(p)) s_l / sqrt(N), block n 1-based.
    CVector precode_block(const CVector &symbols, const PowerAllocation &power, std::size_t block, const CpDftBank &bank);

} // namespace csitfree

#endif
