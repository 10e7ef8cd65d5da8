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

#ifndef CSITFREE_REPORT_HPP
#define CSITFREE_REPORT_HPP

#include "csitfree/experiment.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace csitfree
{
    enum class ReportFormat
    {
        Csv,
        Json
    };

    class ReportError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    ReportFormat parse_report_format(std::string_view text);

    // CSV columns, in order. The first seven are the stable core schema; plotting reads columns by name.
    inline constexpr std::string_view kCsvHeader = "sweep_var,sweep_value,method,mean_sum_se,stderr,trials,seed,"
                                                   "mean_sum_se_scaled,stderr_scaled,mean_sum_se_estimated,"
                                                   "symbol_error_rate,degenerate_trials";

    // Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite values.
    std::string format_double(double value);

    std::string to_csv(const SweepReport &report);
    std::string to_json(const SweepReport &report);

    // Parses the JSON form back. Per-trial detail is not serialized.
    SweepReport report_from_json(std::string_view text);

    // Writes the report; throws ReportError naming the path on I/O failure.
    void write_report(const SweepReport &report, const std::filesystem::path &path, ReportFormat format);

} // namespace csitfree

#endif
