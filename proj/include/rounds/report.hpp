/*
 * Copyright 2026 The rounds-lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "rounds/experiment.hpp"

namespace rounds {

enum class ReportFormat { Csv, Svg };

ReportFormat parse_format(const std::string& text);

/// Column order of the CSV output.
inline constexpr const char* kCsvHeader =
    "problem,n,k,p,mode,trials,seed,mean_queries,ci95,success_rate,"
    "thm1_lo,thm1_hi,thm2_lo,thm2_hi,thm3,thm4,thm5,pass";

/// Header plus one line per row. Measurements absent from formula rows are
/// left empty. Throws std::invalid_argument for an empty report.
void write_csv(const BoundReport& report, std::ostream& out);

/// Standalone SVG: the two search bands against p, with measured means
/// drawn as dots. Throws std::invalid_argument for an empty report.
void write_svg(const BoundReport& report, std::ostream& out);

/// Writes to `path`, or to standard output when path is "-". Throws
/// IoFailure if the file cannot be written.
void emit_report(const BoundReport& report, ReportFormat format, const std::filesystem::path& path);

}  // namespace rounds
