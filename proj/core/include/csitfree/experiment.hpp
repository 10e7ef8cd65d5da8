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

#ifndef CSITFREE_EXPERIMENT_HPP
#define CSITFREE_EXPERIMENT_HPP

#include "csitfree/baselines.hpp"
#include "csitfree/channel.hpp"
#include "csitfree/config.hpp"
#include "csitfree/receiver.hpp"
#include "csitfree/signal_core.hpp"
#include "csitfree/transmitter.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace csitfree
{
    inline constexpr std::string_view kVersion = "csitfree 0.1.0";

    // Report order of the compared schemes.
    inline constexpr std::array<std::string_view, 5> kMethods = {"proposed", "perfect_limit", "no_doppler", "ZF", "MRT"};

    // Genie-SINR result of one method in one trial, plus receiver-side extras.
    struct MethodOutcome : BaselineResult
    {
        double sum_se_estimated = std::numeric_limits<double>::quiet_NaN(); // pilot-based SINR, CSIT-free methods only
        std::size_t symbol_errors = 0;
        std::size_t symbols = 0; // 0 for the CSIT baselines
    };

    struct TrialReport
    {
        std::uint64_t index = 0;
        std::vector<UserGeometry> geometry;
        std::vector<std::size_t> q_star; // proposed estimator, per user
        std::vector<MethodOutcome> methods; // kMethods order

        const MethodOutcome &method(std::string_view name) const;
        bool degenerate() const;
    };

    // Per-configuration state shared by every trial: CP-DFT bank, wavenumbers and pilot combiner rows.
    class Simulator
    {
    public:
        explicit Simulator(SystemConfig cfg);

        const SystemConfig &config() const noexcept { return cfg_; }
        const CpDftBank &bank() const noexcept { return bank_; }
        const std::vector<double> &wavenumbers() const noexcept { return nu_; }
        const PilotCombinerTable &table() const noexcept { return table_; }

        // Geometry drawn from the trial stream.
        TrialReport run_trial(std::uint64_t index) const;
        // Caller-supplied geometry; gains, NLoS, symbols and noise still come from the trial stream.
        TrialReport run_trial(std::uint64_t index, std::span<const UserGeometry> geometry) const;

    private:
        TrialReport run(std::uint64_t index, TrialRng &rng, std::vector<UserGeometry> geometry) const;

        SystemConfig cfg_;
        CpDftBank bank_;
        std::vector<double> nu_;
        PilotCombinerTable table_;
        PowerAllocation power_;
    };

    struct UserSeSummary
    {
        double min = 0.0;
        double median = 0.0;
        double mean = 0.0;
        double max = 0.0;
    };

    struct MethodSummary
    {
        std::string method;
        double mean_sum_se = 0.0;
        double stderr_sum_se = 0.0;
        double mean_sum_se_scaled = 0.0; // x K / N
        double stderr_sum_se_scaled = 0.0;
        std::optional<double> mean_sum_se_estimated;
        std::size_t trials = 0;
        std::size_t degenerate_trials = 0;
        std::optional<double> symbol_error_rate;
        UserSeSummary user_se;
    };

    struct SweepPoint
    {
        double value = 0.0;
        std::vector<MethodSummary> methods; // kMethods order
    };

    struct SweepReport
    {
        SweepVariable variable = SweepVariable::KappaDb;
        std::vector<SweepPoint> points;
        SystemConfig base;
        std::uint64_t seed = 0;
        std::size_t trials = 0;
        std::string version{kVersion};
        std::uint64_t complexity = 0;                // formula count for (L, Q, N) of the base config
        std::vector<std::vector<TrialReport>> detail; // [point][trial], filled only on request

        std::size_t rows() const noexcept;
    };

    struct SweepOptions
    {
        std::size_t threads = 1; // 0 means hardware concurrency
        bool keep_trials = false;
    };

    // Runs trials 0..count-1 of one config; results indexed by trial, independent of thread count.
    std::vector<TrialReport> run_trials(const Simulator &sim, std::size_t count, std::size_t threads);

    SweepPoint summarize(double value, std::span<const TrialReport> trials, const SystemConfig &cfg);

    SweepReport run_sweep(const SweepSpec &spec, const SweepOptions &options = {});

    // (2L + LQ) N^2 + LQ N
    std::uint64_t complexity_count(std::uint64_t L, std::uint64_t Q, std::uint64_t N);

} // namespace csitfree

#endif
