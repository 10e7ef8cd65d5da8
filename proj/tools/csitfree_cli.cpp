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
#include "csitfree/experiment.hpp"
#include "csitfree/report.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace
{
    struct SimulateArgs
    {
        std::string config;
        std::string sweep;
        std::string out;
        std::string format;
        std::optional<std::uint64_t> seed;
        std::optional<std::size_t> trials;
        std::string preset;
        std::size_t threads = 1;
        std::vector<double> values;
        bool quiet = false;
    };

    int simulate(const SimulateArgs &args)
    {
        csitfree::LoadedConfig loaded;
        if (!args.config.empty())
            loaded = csitfree::load_config(args.config);
        else
            loaded = csitfree::parse_config("");

        csitfree::SweepSpec spec = loaded.sweep;
        csitfree::SystemConfig &cfg = spec.base;
        if (!args.preset.empty())
        {
            csitfree::apply_preset(cfg, args.preset);
            spec.trials = cfg.trials;
        }
        if (!args.sweep.empty())
            spec.variable = csitfree::parse_sweep_variable(args.sweep);
        if (!args.values.empty())
            spec.values = args.values;
        if (args.seed)
            cfg.seed = *args.seed;
        if (args.trials)
        {
            cfg.trials = *args.trials;
            spec.trials = *args.trials;
        }
        cfg.validate();
        spec.validate();

        csitfree::ReportFormat format = csitfree::ReportFormat::Csv;
        if (!args.format.empty())
            format = csitfree::parse_report_format(args.format);
        else if (std::filesystem::path(args.out).extension() == ".json")
            format = csitfree::ReportFormat::Json;

        const csitfree::SweepReport report = csitfree::run_sweep(spec, {args.threads, false});
        csitfree::write_report(report, args.out, format);

        if (!args.quiet)
        {
            std::cout << "sweep " << csitfree::to_string(spec.variable) << ": " << spec.values.size() << " points x "
                      << spec.trials << " trials, seed " << cfg.seed << "\n";
            for (const auto &p : report.points)
            {
                std::cout << "  " << csitfree::format_double(p.value);
                for (const auto &m : p.methods)
                    std::cout << "  " << m.method << "=" << csitfree::format_double(m.mean_sum_se);
                std::cout << "\n";
            }
            std::cout << "wrote " << args.out << "\n";
        }
        return 0;
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Link-level simulator for CSIT-free mmWave MU-MISO downlink with CP-DFT precoding"};
    app.set_version_flag("--version", std::string(csitfree::kVersion));
    app.require_subcommand(1);

    SimulateArgs sim;
    auto *simulate_cmd = app.add_subcommand("simulate", "Run a Monte Carlo sweep and write a CSV or JSON report");
    simulate_cmd->add_option("--config", sim.config, "JSON configuration file")->check(CLI::ExistingFile);
    simulate_cmd->add_option("--sweep", sim.sweep, "Swept variable: kappa, p_dbm, v or Q");
    simulate_cmd->add_option("--out", sim.out, "Output path")->required();
    simulate_cmd->add_option("--format", sim.format, "csv or json (default from extension)")
        ->check(CLI::IsMember({"csv", "json"}));
    simulate_cmd->add_option("--seed", sim.seed, "Base seed");
    simulate_cmd->add_option("--trials", sim.trials, "Trials per sweep point")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--preset", sim.preset, "paper or smoke")->check(CLI::IsMember({"paper", "smoke"}));
    simulate_cmd->add_option("--threads", sim.threads, "Worker threads, 0 for all cores");
    simulate_cmd->add_option("--values", sim.values, "Sweep values, overriding the config")->delimiter(',');
    simulate_cmd->add_flag("--quiet", sim.quiet, "Suppress the console summary");

    std::uint64_t L = 0, Q = 0, N = 0;
    auto *complexity_cmd = app.add_subcommand("complexity", "Complex multiplications of the estimator");
    complexity_cmd->add_option("--L", L, "Subcarriers")->required();
    complexity_cmd->add_option("--Q", Q, "Codebook size")->required();
    complexity_cmd->add_option("--N", N, "Antennas")->required();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*simulate_cmd)
            return simulate(sim);
        if (*complexity_cmd)
        {
            std::cout << csitfree::complexity_count(L, Q, N) << "\n";
            return 0;
        }
    }
    catch (const csitfree::ConfigError &e)
    {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    }
    catch (const csitfree::ReportError &e)
    {
        std::cerr << "output error: " << e.what() << "\n";
        return 3;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
