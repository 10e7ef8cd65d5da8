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
#include "csitfree/config.hpp"
#include "csitfree/experiment.hpp"
#include "csitfree/receiver.hpp"
#include "csitfree/signal_core.hpp"
#include "csitfree/transmitter.hpp"

#include <benchmark/benchmark.h>

using namespace csitfree;

namespace
{
    struct Setup
    {
        SystemConfig cfg;
        std::vector<double> nu;
        CpDftBank bank;
        Observation obs;
        PilotContext pilots;

        explicit Setup(std::size_t Q) : bank(10)
        {
            cfg.codebook_size = Q;
            nu = cfg.wavenumbers();
            const PowerAllocation power = PowerAllocation::equal(cfg.antennas, dbm_to_watt(25.0));
            pilots.power_first = pilots.power_second = power.p[0];
            TrialRng rng(cfg.seed);
            const Frame frame = assemble_frame(rng, cfg);
            obs.y.resize(static_cast<Eigen::Index>(cfg.subcarriers), static_cast<Eigen::Index>(cfg.antennas));
            for (std::size_t l = 0; l < cfg.subcarriers; ++l)
            {
                const CVector h = 0.01 * array_response(0.3, nu[l], cfg.antennas, cfg.spacing()).entries;
                const CVector d = doppler_from_step(nu[l] * cfg.block_duration() * 39.0, cfg.antennas);
                obs.y.row(static_cast<Eigen::Index>(l)) =
                    observe(bank, h, d, frame.symbols.row(static_cast<Eigen::Index>(l)).transpose(), power,
                            draw_noise(rng, dbm_to_watt(-30.0), cfg.antennas))
                        .transpose();
            }
        }
    };

    void BM_EstimateFast(benchmark::State &state)
    {
        const Setup s(static_cast<std::size_t>(state.range(0)));
        const PilotCombinerTable table(s.bank, s.nu, s.cfg.codebook_size, s.cfg.spacing());
        const auto steps = doppler_step_table(s.nu, table.angles(), s.cfg.block_duration(), 39.0, 0.3);
        for (auto _ : state)
            benchmark::DoNotOptimize(estimate_channel(s.obs, table, steps, s.pilots));
    }
    BENCHMARK(BM_EstimateFast)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

    void BM_EstimateCounted(benchmark::State &state)
    {
        const Setup s(static_cast<std::size_t>(state.range(0)));
        const Codebooks cb = build_codebooks(s.cfg.codebook_size, s.nu, s.cfg.antennas, s.cfg.spacing(),
                                             s.cfg.block_duration(), 39.0, 0.3);
        for (auto _ : state)
        {
            MultiplicationCounter counter;
            benchmark::DoNotOptimize(estimate_channel_counted(s.obs, cb, s.bank, s.pilots, counter));
        }
    }
    BENCHMARK(BM_EstimateCounted)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

    void BM_CpDftBank(benchmark::State &state)
    {
        for (auto _ : state)
            benchmark::DoNotOptimize(CpDftBank(static_cast<std::size_t>(state.range(0))));
    }
    BENCHMARK(BM_CpDftBank)->Arg(10)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

    void BM_RunTrial(benchmark::State &state)
    {
        SystemConfig cfg;
        apply_preset(cfg, state.range(0) == 0 ? "smoke" : "paper");
        const Simulator sim(cfg);
        std::uint64_t index = 0;
        for (auto _ : state)
            benchmark::DoNotOptimize(sim.run_trial(index++));
    }
    BENCHMARK(BM_RunTrial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
} // namespace

BENCHMARK_MAIN();
