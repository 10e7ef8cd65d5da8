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

#include "csitfree/config.hpp"
#include "csitfree/signal_core.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace csitfree
{
    namespace
    {
        constexpr double kDefaultPowerDbm = 25.0;

        std::string trim(std::string_view s)
        {
            auto b = s.find_first_not_of(" \t\r\n");
            if (b == std::string_view::npos)
                return {};
            auto e = s.find_last_not_of(" \t\r\n");
            return std::string(s.substr(b, e - b + 1));
        }

        std::string lower(std::string s)
        {
            std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            return s;
        }

        [[noreturn]] void fail(const std::string &field, const std::string &why)
        {
            throw ConfigError("config field '" + field + "': " + why);
        }
    } // namespace

    double dbm_to_watt(double dbm) noexcept { return std::pow(10.0, (dbm - 30.0) / 10.0); }
    double watt_to_dbm(double watt) noexcept { return 10.0 * std::log10(watt) + 30.0; }
    double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }

    double parse_power(std::string_view text)
    {
        std::string s = trim(text);
        std::string low = lower(s);
        double scale_dbm = std::numeric_limits<double>::quiet_NaN();
        std::string number = s;
        if (low.size() >= 3 && low.ends_with("dbm"))
        {
            number = trim(s.substr(0, s.size() - 3));
            scale_dbm = 1.0;
        }
        else if (!low.empty() && low.back() == 'w')
            number = trim(s.substr(0, s.size() - 1));

        double value = 0.0;
        const char *first = number.data();
        const char *last = number.data() + number.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last || number.empty())
            throw ConfigError("cannot parse power value '" + s + "'");
        return std::isnan(scale_dbm) ? value : dbm_to_watt(value);
    }

    double SystemConfig::block_duration() const noexcept
    {
        return static_cast<double>(subcarriers + cp_length) / bandwidth_hz;
    }

    double SystemConfig::spacing() const noexcept
    {
        return antenna_spacing_m > 0.0 ? antenna_spacing_m : 0.5 * kSpeedOfLight / carrier_hz;
    }

    double SystemConfig::sinr_cap() const noexcept { return db_to_linear(sinr_cap_db); }

    std::vector<double> SystemConfig::powers() const
    {
        if (power_w.empty())
            return std::vector<double>(antennas, dbm_to_watt(kDefaultPowerDbm));
        return power_w;
    }

    std::vector<double> SystemConfig::wavenumbers() const
    {
        std::vector<double> nu(subcarriers);
        const double L = static_cast<double>(subcarriers);
        for (std::size_t l = 1; l <= subcarriers; ++l)
        {
            double f = carrier_hz;
            if (wavenumber_mode == WavenumberMode::PerSubcarrier)
                f += (static_cast<double>(l) - 1.0 - L / 2.0) * bandwidth_hz / L;
            nu[l - 1] = 2.0 * kPi * f / kSpeedOfLight;
        }
        return nu;
    }

    void SystemConfig::validate() const
    {
        if (!(carrier_hz > 0.0))
            fail("carrier_hz", "must be positive");
        if (!(bandwidth_hz > 0.0))
            fail("bandwidth_hz", "must be positive");
        if (subcarriers == 0)
            fail("subcarriers", "must be at least 1");
        if (antennas < 3)
            fail("antennas", "must be at least 3 (two pilot slots plus one data slot)");
        if (users == 0)
            fail("users", "must be at least 1");
        if (users > antennas - 2)
            fail("users", "K = " + std::to_string(users) + " exceeds N - 2 = " + std::to_string(antennas - 2));
        if (codebook_size == 0)
            fail("codebook_size", "must be at least 1");
        if (!(kappa > 0.0))
            fail("kappa", "must be positive");
        if (!(noise_power_w >= 0.0) || std::isinf(noise_power_w))
            fail("noise_power", "must be finite and non-negative");
        if (!power_w.empty() && power_w.size() != antennas)
            fail("power", "expected " + std::to_string(antennas) + " entries, got " + std::to_string(power_w.size()));
        for (double p : powers())
            if (!(p > 0.0) || std::isinf(p))
                fail("power", "all slot powers must be positive and finite");
        if (antenna_spacing_m < 0.0)
            fail("antenna_spacing_m", "must be non-negative");
        if (!(speed_mps >= 0.0))
            fail("speed_mps", "must be non-negative");
        if (!(r_min_m > 0.0) || !(r_max_m >= r_min_m))
            fail("cell_radius_m", "need 0 < r_min <= r_max");
        if (trials == 0)
            fail("trials", "must be at least 1");
        if (!std::isfinite(sinr_cap_db))
            fail("sinr_cap_db", "must be finite");
    }

    void SweepSpec::validate() const
    {
        if (values.empty())
            fail("sweep.values", "must not be empty");
        if (trials == 0)
            fail("sweep.trials", "must be at least 1");
        base.validate();
        for (double v : values)
            apply_sweep_value(base, variable, v).validate();
    }

    std::string to_string(SweepVariable v)
    {
        switch (v)
        {
        case SweepVariable::KappaDb:
            return "kappa_db";
        case SweepVariable::PowerDbm:
            return "p_dbm";
        case SweepVariable::Speed:
            return "v";
        case SweepVariable::CodebookSize:
            return "Q";
        }
        return "unknown";
    }

    SweepVariable parse_sweep_variable(std::string_view text)
    {
        const std::string s = lower(trim(text));
        if (s == "kappa" || s == "kappa_db")
            return SweepVariable::KappaDb;
        if (s == "p" || s == "p_dbm" || s == "power")
            return SweepVariable::PowerDbm;
        if (s == "v" || s == "speed")
            return SweepVariable::Speed;
        if (s == "q" || s == "codebook_size")
            return SweepVariable::CodebookSize;
        throw ConfigError("unknown sweep variable '" + std::string(text) + "' (expected kappa, p_dbm, v or Q)");
    }

    void apply_preset(SystemConfig &cfg, std::string_view preset)
    {
        const std::string p = lower(trim(preset));
        if (p == "paper")
        {
            cfg.subcarriers = 64;
            cfg.codebook_size = 256;
            cfg.trials = 1000;
        }
        else if (p == "smoke")
        {
            cfg.subcarriers = 16;
            cfg.codebook_size = 64;
            cfg.trials = 50;
        }
        else
            throw ConfigError("unknown preset '" + std::string(preset) + "' (expected paper or smoke)");
    }

    SystemConfig apply_sweep_value(const SystemConfig &base, SweepVariable v, double value)
    {
        SystemConfig cfg = base;
        switch (v)
        {
        case SweepVariable::KappaDb:
            cfg.kappa = std::isinf(value) && value > 0 ? value : db_to_linear(value);
            break;
        case SweepVariable::PowerDbm:
            cfg.power_w.assign(cfg.antennas, dbm_to_watt(value));
            break;
        case SweepVariable::Speed:
            cfg.speed_mps = value;
            break;
        case SweepVariable::CodebookSize:
            if (!(value >= 1.0) || value != std::floor(value))
                fail("sweep.values", "codebook size must be a positive integer");
            cfg.codebook_size = static_cast<std::size_t>(value);
            break;
        }
        return cfg;
    }

    namespace
    {
        using nlohmann::json;

        double get_number(const json &j, const std::string &field)
        {
            if (!j.is_number())
                fail(field, "expected a number");
            return j.get<double>();
        }

        std::size_t get_count(const json &j, const std::string &field)
        {
            if (!j.is_number_integer() && !j.is_number_unsigned())
                fail(field, "expected a non-negative integer");
            auto v = j.get<std::int64_t>();
            if (v < 0)
                fail(field, "expected a non-negative integer");
            return static_cast<std::size_t>(v);
        }

        double get_power(const json &j, const std::string &field)
        {
            try
            {
                if (j.is_number())
                    return j.get<double>();
                if (j.is_string())
                    return parse_power(j.get<std::string>());
            }
            catch (const ConfigError &e)
            {
                fail(field, e.what());
            }
            fail(field, "expected a number (W) or a string such as \"25 dBm\"");
        }

        double get_kappa_db(const json &j, const std::string &field)
        {
            if (j.is_string() && lower(j.get<std::string>()) == "inf")
                return std::numeric_limits<double>::infinity();
            return get_number(j, field);
        }

        void parse_system(const json &j, SystemConfig &cfg)
        {
            static const std::vector<std::string> known = {
                "carrier_hz", "bandwidth_hz", "subcarriers", "cp_length", "antennas", "users", "codebook_size",
                "kappa", "kappa_db", "noise_power", "power", "antenna_spacing_m", "speed_mps", "cell_radius_m",
                "trials", "seed", "worst_case_heading", "wavenumber_mode", "nlos_variance", "baseline_power",
                "sinr_cap_db", "preset", "sweep"};
            for (const auto &[key, _] : j.items())
                if (std::find(known.begin(), known.end(), key) == known.end())
                    fail(key, "unknown field");

            if (j.contains("preset"))
            {
                if (!j["preset"].is_string())
                    fail("preset", "expected a string");
                apply_preset(cfg, j["preset"].get<std::string>());
            }
            if (j.contains("carrier_hz"))
                cfg.carrier_hz = get_number(j["carrier_hz"], "carrier_hz");
            if (j.contains("bandwidth_hz"))
                cfg.bandwidth_hz = get_number(j["bandwidth_hz"], "bandwidth_hz");
            if (j.contains("subcarriers"))
                cfg.subcarriers = get_count(j["subcarriers"], "subcarriers");
            if (j.contains("cp_length"))
                cfg.cp_length = get_count(j["cp_length"], "cp_length");
            if (j.contains("antennas"))
                cfg.antennas = get_count(j["antennas"], "antennas");
            if (j.contains("users"))
                cfg.users = get_count(j["users"], "users");
            if (j.contains("codebook_size"))
                cfg.codebook_size = get_count(j["codebook_size"], "codebook_size");
            if (j.contains("kappa") && j.contains("kappa_db"))
                fail("kappa", "give either kappa or kappa_db, not both");
            if (j.contains("kappa"))
                cfg.kappa = get_number(j["kappa"], "kappa");
            if (j.contains("kappa_db"))
            {
                double db = get_kappa_db(j["kappa_db"], "kappa_db");
                cfg.kappa = std::isinf(db) ? db : db_to_linear(db);
            }
            if (j.contains("noise_power"))
                cfg.noise_power_w = get_power(j["noise_power"], "noise_power");
            if (j.contains("power"))
            {
                const json &p = j["power"];
                if (p.is_array())
                {
                    cfg.power_w.clear();
                    for (std::size_t i = 0; i < p.size(); ++i)
                        cfg.power_w.push_back(get_power(p[i], "power[" + std::to_string(i) + "]"));
                }
                else
                    cfg.power_w.assign(cfg.antennas, get_power(p, "power"));
            }
            if (j.contains("antenna_spacing_m"))
                cfg.antenna_spacing_m = get_number(j["antenna_spacing_m"], "antenna_spacing_m");
            if (j.contains("speed_mps"))
                cfg.speed_mps = get_number(j["speed_mps"], "speed_mps");
            if (j.contains("cell_radius_m"))
            {
                const json &r = j["cell_radius_m"];
                if (!r.is_array() || r.size() != 2)
                    fail("cell_radius_m", "expected [r_min, r_max]");
                cfg.r_min_m = get_number(r[0], "cell_radius_m[0]");
                cfg.r_max_m = get_number(r[1], "cell_radius_m[1]");
            }
            if (j.contains("trials"))
                cfg.trials = get_count(j["trials"], "trials");
            if (j.contains("seed"))
            {
                if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
                    fail("seed", "expected an unsigned integer");
                cfg.seed = j["seed"].get<std::uint64_t>();
            }
            if (j.contains("worst_case_heading"))
            {
                if (!j["worst_case_heading"].is_boolean())
                    fail("worst_case_heading", "expected true or false");
                cfg.worst_case_heading = j["worst_case_heading"].get<bool>();
            }
            if (j.contains("wavenumber_mode"))
            {
                const auto s = j["wavenumber_mode"].is_string() ? lower(j["wavenumber_mode"].get<std::string>()) : "";
                if (s == "per_subcarrier")
                    cfg.wavenumber_mode = WavenumberMode::PerSubcarrier;
                else if (s == "carrier")
                    cfg.wavenumber_mode = WavenumberMode::Carrier;
                else
                    fail("wavenumber_mode", "expected \"per_subcarrier\" or \"carrier\"");
            }
            if (j.contains("nlos_variance"))
            {
                const auto s = j["nlos_variance"].is_string() ? lower(j["nlos_variance"].get<std::string>()) : "";
                if (s == "inverse_square")
                    cfg.nlos_variance = NlosVariance::InverseSquare;
                else if (s == "inverse")
                    cfg.nlos_variance = NlosVariance::Inverse;
                else
                    fail("nlos_variance", "expected \"inverse_square\" or \"inverse\"");
            }
            if (j.contains("baseline_power"))
            {
                const auto s = j["baseline_power"].is_string() ? lower(j["baseline_power"].get<std::string>()) : "";
                if (s == "equal_total")
                    cfg.baseline_power = BaselinePower::EqualTotal;
                else if (s == "equal_per_user")
                    cfg.baseline_power = BaselinePower::EqualPerUser;
                else
                    fail("baseline_power", "expected \"equal_total\" or \"equal_per_user\"");
            }
            if (j.contains("sinr_cap_db"))
                cfg.sinr_cap_db = get_number(j["sinr_cap_db"], "sinr_cap_db");
        }
    } // namespace

    std::string to_json(const SystemConfig &cfg)
    {
        json j;
        j["carrier_hz"] = cfg.carrier_hz;
        j["bandwidth_hz"] = cfg.bandwidth_hz;
        j["subcarriers"] = cfg.subcarriers;
        j["cp_length"] = cfg.cp_length;
        j["antennas"] = cfg.antennas;
        j["users"] = cfg.users;
        j["codebook_size"] = cfg.codebook_size;
        if (std::isinf(cfg.kappa))
            j["kappa_db"] = "inf";
        else
            j["kappa"] = cfg.kappa;
        j["noise_power"] = cfg.noise_power_w;
        j["power"] = cfg.powers();
        j["antenna_spacing_m"] = cfg.antenna_spacing_m;
        j["speed_mps"] = cfg.speed_mps;
        j["cell_radius_m"] = {cfg.r_min_m, cfg.r_max_m};
        j["trials"] = cfg.trials;
        j["seed"] = cfg.seed;
        j["worst_case_heading"] = cfg.worst_case_heading;
        j["wavenumber_mode"] = cfg.wavenumber_mode == WavenumberMode::Carrier ? "carrier" : "per_subcarrier";
        j["nlos_variance"] = cfg.nlos_variance == NlosVariance::Inverse ? "inverse" : "inverse_square";
        j["baseline_power"] = cfg.baseline_power == BaselinePower::EqualPerUser ? "equal_per_user" : "equal_total";
        j["sinr_cap_db"] = cfg.sinr_cap_db;
        return j.dump();
    }

    LoadedConfig parse_config(std::string_view text)
    {
        LoadedConfig out;
        if (trim(text).empty())
        {
            out.sweep.base = out.system;
            out.sweep.trials = out.system.trials;
            return out;
        }

        json j;
        try
        {
            j = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.is_object())
            throw ConfigError("config root must be a JSON object");

        parse_system(j, out.system);
        out.sweep.trials = out.system.trials;

        if (j.contains("sweep"))
        {
            const json &s = j["sweep"];
            if (!s.is_object())
                fail("sweep", "expected an object");
            for (const auto &[key, _] : s.items())
                if (key != "variable" && key != "values" && key != "trials")
                    fail("sweep." + key, "unknown field");
            if (s.contains("variable"))
            {
                if (!s["variable"].is_string())
                    fail("sweep.variable", "expected a string");
                try
                {
                    out.sweep.variable = parse_sweep_variable(s["variable"].get<std::string>());
                }
                catch (const ConfigError &e)
                {
                    fail("sweep.variable", e.what());
                }
            }
            if (s.contains("values"))
            {
                if (!s["values"].is_array())
                    fail("sweep.values", "expected an array of numbers");
                out.sweep.values.clear();
                for (std::size_t i = 0; i < s["values"].size(); ++i)
                    out.sweep.values.push_back(get_number(s["values"][i], "sweep.values[" + std::to_string(i) + "]"));
            }
            if (s.contains("trials"))
                out.sweep.trials = get_count(s["trials"], "sweep.trials");
        }

        out.system.validate();
        out.sweep.base = out.system;
        return out;
    }

    LoadedConfig load_config(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ConfigError("cannot open config file '" + path.string() + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        try
        {
            return parse_config(ss.str());
        }
        catch (const ConfigError &e)
        {
            throw ConfigError(path.string() + ": " + e.what());
        }
    }

} // namespace csitfree
