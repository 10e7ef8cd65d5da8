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

#ifndef CSITFREE_CONFIG_HPP
#define CSITFREE_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace csitfree
{
    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    enum class WavenumberMode
    {
        PerSubcarrier, // nu_l = 2 pi f_l / c on a centered grid
        Carrier        // nu_l = 2 pi f_c / c for every subcarrier
    };

    // Variance of each NLoS entry as a function of distance r.
    enum class NlosVariance
    {
        Inverse,      // 1/r
        InverseSquare // 1/r^2, same average power as the LoS component
    };

    enum class BaselinePower
    {
        EqualTotal,  // sum_n p_n / N split over K users
        EqualPerUser // every user beam carries p_1
    };

    // Physical and experiment constants. Defaults reproduce the reference scenario:
    // 28 GHz, 6.25 MHz, 64 subcarriers, CP 16, N = 10, K = 8, v = 39 m/s, -30 dBm noise,
    // Q = 256, users in [100, 200] m, 25 dBm per slot, 1000 trials.
    struct SystemConfig
    {
        double carrier_hz = 28e9;
        double bandwidth_hz = 6.25e6;
        std::size_t subcarriers = 64;  // L
        std::size_t cp_length = 16;    // L_CP
        std::size_t antennas = 10;     // N, also the number of data blocks
        std::size_t users = 8;         // K
        std::size_t codebook_size = 256; // Q
        double kappa = 100.0;          // linear Rician factor, +inf for pure LoS
        double noise_power_w = 1e-6;   // sigma^2
        std::vector<double> power_w;   // p_1..p_N; empty means 25 dBm in every slot
        double antenna_spacing_m = 0.0; // d_c; 0 means half a carrier wavelength
        double speed_mps = 39.0;
        double r_min_m = 100.0;
        double r_max_m = 200.0;
        std::size_t trials = 1000;
        std::uint64_t seed = 1;
        bool worst_case_heading = true;
        WavenumberMode wavenumber_mode = WavenumberMode::PerSubcarrier;
        NlosVariance nlos_variance = NlosVariance::Inverse;
        BaselinePower baseline_power = BaselinePower::EqualTotal;
        double sinr_cap_db = 80.0;

        double block_duration() const noexcept; // T_b = (L + L_CP) / B
        double spacing() const noexcept;        // resolved d_c
        double sinr_cap() const noexcept;       // linear
        std::vector<double> powers() const;     // resolved p, length N
        std::vector<double> wavenumbers() const; // nu_l, length L

        // Throws ConfigError naming the offending field.
        void validate() const;
    };

    enum class SweepVariable
    {
        KappaDb,
        PowerDbm,
        Speed,
        CodebookSize
    };

    struct SweepSpec
    {
        SweepVariable variable = SweepVariable::KappaDb;
        std::vector<double> values{-10.0, 0.0, 10.0, 20.0, 30.0, 40.0};
        std::size_t trials = 1000;
        SystemConfig base;

        void validate() const;
    };

    struct LoadedConfig
    {
        SystemConfig system;
        SweepSpec sweep;
    };

    double dbm_to_watt(double dbm) noexcept;
    double watt_to_dbm(double watt) noexcept;
    double db_to_linear(double db) noexcept;

    // Parses "25 dBm", "0.3 W", "-30dBm" or a plain number (watts).
    double parse_power(std::string_view text);

    std::string to_string(SweepVariable v);
    SweepVariable parse_sweep_variable(std::string_view text);

    // Applies a named preset ("paper" or "smoke") on top of cfg.
    void apply_preset(SystemConfig &cfg, std::string_view preset);

    // Applies one sweep value to a copy of the base config.
    SystemConfig apply_sweep_value(const SystemConfig &base, SweepVariable v, double value);

    // Serializes cfg in the schema accepted by parse_config; parsing it back yields an equal config.
    std::string to_json(const SystemConfig &cfg);

    // JSON document; an empty file yields the defaults.
    LoadedConfig parse_config(std::string_view text);
    LoadedConfig load_config(const std::filesystem::path &path);

} // namespace csitfree

#endif
