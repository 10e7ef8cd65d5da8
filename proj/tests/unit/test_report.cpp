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

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace csitfree;

namespace
{
    SweepSpec small_spec()
    {
        SweepSpec spec;
        spec.base.subcarriers = 4;
        spec.base.antennas = 5;
        spec.base.users = 3;
        spec.base.codebook_size = 16;
        spec.base.seed = 77;
        spec.trials = 4;
        return spec;
    }

    std::string slurp(const std::filesystem::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    std::size_t count_lines(const std::string &s)
    {
        return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
    }
} // namespace

TEST_CASE("number formatting", "[report]")
{
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-10.0) == "-10");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("CSV layout", "[report]")
{
    const SweepReport r = run_sweep(small_spec());
    const std::string csv = to_csv(r);
    CHECK(csv.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    CHECK(count_lines(csv) == 31);
    CHECK(csv.find("kappa_db,-10,proposed,") != std::string::npos);
    CHECK(csv.find("kappa_db,40,MRT,") != std::string::npos);
    CHECK(csv.find(",4,77,") != std::string::npos);
}

TEST_CASE("reruns with the same seed are byte-identical", "[report]")
{
    const auto dir = std::filesystem::temp_directory_path();
    const auto a = dir / "csitfree_report_a.csv";
    const auto b = dir / "csitfree_report_b.csv";
    write_report(run_sweep(small_spec(), {1, false}), a, ReportFormat::Csv);
    write_report(run_sweep(small_spec(), {4, false}), b, ReportFormat::Csv);
    CHECK(slurp(a) == slurp(b));
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST_CASE("JSON round-trip", "[report]")
{
    SweepSpec spec = small_spec();
    spec.values = {0.0, 20.0};
    const SweepReport r = run_sweep(spec);
    const SweepReport back = report_from_json(to_json(r));
    CHECK(back.version == std::string(kVersion));
    CHECK(back.seed == 77);
    CHECK(back.trials == 4);
    CHECK(back.complexity == r.complexity);
    CHECK(back.variable == r.variable);
    CHECK(back.base.antennas == 5);
    REQUIRE(back.points.size() == 2);
    for (std::size_t p = 0; p < 2; ++p)
    {
        CHECK(back.points[p].value == r.points[p].value);
        REQUIRE(back.points[p].methods.size() == 5);
        for (std::size_t m = 0; m < 5; ++m)
        {
            const auto &x = back.points[p].methods[m];
            const auto &y = r.points[p].methods[m];
            CHECK(x.method == y.method);
            CHECK(x.mean_sum_se == y.mean_sum_se);
            CHECK(x.stderr_sum_se == y.stderr_sum_se);
            CHECK(x.mean_sum_se_scaled == y.mean_sum_se_scaled);
            CHECK(x.mean_sum_se_estimated == y.mean_sum_se_estimated);
            CHECK(x.symbol_error_rate == y.symbol_error_rate);
            CHECK(x.user_se.median == y.user_se.median);
        }
    }
    CHECK(to_json(back) == to_json(r));
}

TEST_CASE("report errors", "[report]")
{
    CHECK(parse_report_format("csv") == ReportFormat::Csv);
    CHECK(parse_report_format("json") == ReportFormat::Json);
    CHECK_THROWS_AS(parse_report_format("xlsx"), ReportError);
    CHECK_THROWS_AS(report_from_json("{"), ReportError);
    CHECK_THROWS_AS(report_from_json("{}"), ReportError);

    SweepSpec spec = small_spec();
    spec.values = {0.0};
    spec.trials = 1;
    const SweepReport r = run_sweep(spec);
    const std::filesystem::path bad = "/nonexistent-dir/out.csv";
    try
    {
        write_report(r, bad, ReportFormat::Csv);
        FAIL("expected a ReportError");
    }
    catch (const ReportError &e)
    {
        CHECK(std::string(e.what()).find(bad.string()) != std::string::npos);
    }
}
