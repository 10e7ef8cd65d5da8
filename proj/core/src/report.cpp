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

#include "csitfree/report.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>

namespace csitfree
{
    using nlohmann::ordered_json;

    namespace
    {
        // Non-finite numbers are stored as strings; JSON has no literal for them.
        ordered_json number(double v)
        {
            if (std::isfinite(v))
                return v;
            return format_double(v);
        }

        double read_number(const ordered_json &j, const char *field)
        {
            if (j.is_number())
                return j.get<double>();
            if (j.is_string())
            {
                const auto s = j.get<std::string>();
                if (s == "inf")
                    return std::numeric_limits<double>::infinity();
                if (s == "-inf")
                    return -std::numeric_limits<double>::infinity();
                if (s == "nan")
                    return std::numeric_limits<double>::quiet_NaN();
            }
            throw ReportError(std::string("report field '") + field + "' is not a number");
        }

        const ordered_json &need(const ordered_json &j, const char *field)
        {
            if (!j.contains(field))
                throw ReportError(std::string("report is missing field '") + field + "'");
            return j.at(field);
        }
    } // namespace

    ReportFormat parse_report_format(std::string_view text)
    {
        if (text == "csv")
            return ReportFormat::Csv;
        if (text == "json")
            return ReportFormat::Json;
        throw ReportError("unknown report format '" + std::string(text) + "' (expected csv or json)");
    }

    std::string format_double(double value)
    {
        if (std::isnan(value))
            return "nan";
        if (std::isinf(value))
            return value > 0 ? "inf" : "-inf";
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, value);
        return std::string(buf, res.ptr);
    }

    std::string to_csv(const SweepReport &report)
    {
        std::string out(kCsvHeader);
        out += '\n';
        const std::string var = to_string(report.variable);
        for (const auto &p : report.points)
        {
            for (const auto &m : p.methods)
            {
                out += var;
                out += ',' + format_double(p.value);
                out += ',' + m.method;
                out += ',' + format_double(m.mean_sum_se);
                out += ',' + format_double(m.stderr_sum_se);
                out += ',' + std::to_string(m.trials);
                out += ',' + std::to_string(report.seed);
                out += ',' + format_double(m.mean_sum_se_scaled);
                out += ',' + format_double(m.stderr_sum_se_scaled);
                out += ',' + (m.mean_sum_se_estimated ? format_double(*m.mean_sum_se_estimated) : std::string());
                out += ',' + (m.symbol_error_rate ? format_double(*m.symbol_error_rate) : std::string());
                out += ',' + std::to_string(m.degenerate_trials);
                out += '\n';
            }
        }
        return out;
    }

    std::string to_json(const SweepReport &report)
    {
        ordered_json j;
        j["version"] = report.version;
        j["seed"] = report.seed;
        j["trials"] = report.trials;
        j["sweep_var"] = to_string(report.variable);
        j["complexity_count"] = report.complexity;
        j["baseline_power"] =
            report.base.baseline_power == BaselinePower::EqualPerUser ? "equal_per_user" : "equal_total";
        j["notes"] = {"kappa swept in dB",
                      "sum-SE from genie SINR; mean_sum_se_estimated from pilot-based SINR",
                      "scaled columns multiply by K/N",
                      "ZF and MRT use the block-1 channel with perfect CSIT"};
        j["config"] = ordered_json::parse(to_json(report.base));

        ordered_json rows = ordered_json::array();
        for (const auto &p : report.points)
        {
            for (const auto &m : p.methods)
            {
                ordered_json r;
                r["sweep_value"] = number(p.value);
                r["method"] = m.method;
                r["mean_sum_se"] = number(m.mean_sum_se);
                r["stderr"] = number(m.stderr_sum_se);
                r["mean_sum_se_scaled"] = number(m.mean_sum_se_scaled);
                r["stderr_scaled"] = number(m.stderr_sum_se_scaled);
                r["mean_sum_se_estimated"] =
                    m.mean_sum_se_estimated ? number(*m.mean_sum_se_estimated) : ordered_json(nullptr);
                r["symbol_error_rate"] = m.symbol_error_rate ? number(*m.symbol_error_rate) : ordered_json(nullptr);
                r["trials"] = m.trials;
                r["degenerate_trials"] = m.degenerate_trials;
                r["user_se"] = {{"min", number(m.user_se.min)},
                                {"median", number(m.user_se.median)},
                                {"mean", number(m.user_se.mean)},
                                {"max", number(m.user_se.max)}};
                rows.push_back(std::move(r));
            }
        }
        j["rows"] = std::move(rows);
        return j.dump(2) + "\n";
    }

    SweepReport report_from_json(std::string_view text)
    {
        ordered_json j;
        try
        {
            j = ordered_json::parse(text);
        }
        catch (const ordered_json::parse_error &e)
        {
            throw ReportError(std::string("report is not valid JSON: ") + e.what());
        }

        SweepReport report;
        report.version = need(j, "version").get<std::string>();
        report.seed = need(j, "seed").get<std::uint64_t>();
        report.trials = need(j, "trials").get<std::size_t>();
        report.variable = parse_sweep_variable(need(j, "sweep_var").get<std::string>());
        report.complexity = need(j, "complexity_count").get<std::uint64_t>();
        report.base = parse_config(need(j, "config").dump()).system;

        for (const auto &r : need(j, "rows"))
        {
            const double value = read_number(need(r, "sweep_value"), "sweep_value");
            if (report.points.empty() || report.points.back().value != value)
                report.points.push_back(SweepPoint{value, {}});

            MethodSummary m;
            m.method = need(r, "method").get<std::string>();
            m.mean_sum_se = read_number(need(r, "mean_sum_se"), "mean_sum_se");
            m.stderr_sum_se = read_number(need(r, "stderr"), "stderr");
            m.mean_sum_se_scaled = read_number(need(r, "mean_sum_se_scaled"), "mean_sum_se_scaled");
            m.stderr_sum_se_scaled = read_number(need(r, "stderr_scaled"), "stderr_scaled");
            if (!need(r, "mean_sum_se_estimated").is_null())
                m.mean_sum_se_estimated = read_number(r["mean_sum_se_estimated"], "mean_sum_se_estimated");
            if (!need(r, "symbol_error_rate").is_null())
                m.symbol_error_rate = read_number(r["symbol_error_rate"], "symbol_error_rate");
            m.trials = need(r, "trials").get<std::size_t>();
            m.degenerate_trials = need(r, "degenerate_trials").get<std::size_t>();
            const auto &u = need(r, "user_se");
            m.user_se = {read_number(need(u, "min"), "user_se.min"), read_number(need(u, "median"), "user_se.median"),
                         read_number(need(u, "mean"), "user_se.mean"), read_number(need(u, "max"), "user_se.max")};
            report.points.back().methods.push_back(std::move(m));
        }
        return report;
    }

    void write_report(const SweepReport &report, const std::filesystem::path &path, ReportFormat format)
    {
        const std::string body = format == ReportFormat::Csv ? to_csv(report) : to_json(report);
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ReportError("cannot open '" + path.string() + "' for writing");
        out.write(body.data(), static_cast<std::streamsize>(body.size()));
        out.flush();
        if (!out)
            throw ReportError("write to '" + path.string() + "' failed");
    }

} // namespace csitfree
