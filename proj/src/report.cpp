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
#include "rounds/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "rounds/errors.hpp"

namespace rounds {

ReportFormat parse_format(const std::string& text) {
  if (text == "csv") return ReportFormat::Csv;
  if (text == "svg") return ReportFormat::Svg;
  throw std::invalid_argument("unknown format '" + text + "'");
}

namespace {

std::string number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

std::string number(const std::optional<double>& value) {
  return value ? number(*value) : std::string();
}

void require_rows(const BoundReport& report) {
  if (report.rows.empty()) throw std::invalid_argument("report has no rows");
}

}  // namespace

void write_csv(const BoundReport& report, std::ostream& out) {
  require_rows(report);
  out << kCsvHeader << '\n';
  for (const auto& r : report.rows) {
    const auto& b = r.bounds;
    out << to_string(r.problem) << ',' << r.n << ',' << r.k << ',' << to_fraction_string(r.p) << ','
        << to_string(r.mode) << ',' << r.trials << ',' << r.seed << ',' << number(r.mean_queries)
        << ',' << number(r.ci95) << ',' << number(r.success_rate) << ',' << number(b.thm1_lo) << ','
        << number(b.thm1_hi) << ',' << number(b.thm2_lo) << ',' << number(b.thm2_hi) << ','
        << number(b.thm3) << ',' << number(b.thm4) << ',' << number(b.thm5) << ','
        << (r.pass ? "true" : "false") << '\n';
  }
}

void write_svg(const BoundReport& report, std::ostream& out) {
  require_rows(report);
  std::vector<const BoundRow*> rows;
  for (const auto& r : report.rows) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(),
                   [](const BoundRow* a, const BoundRow* b) { return a->p < b->p; });

  double top = 1;
  for (const auto* r : rows) {
    top = std::max({top, r->bounds.thm1_hi, r->bounds.thm2_hi, r->mean_queries.value_or(0)});
  }
  constexpr double width = 640, height = 420, margin = 60;
  const auto px = [&](double p) { return margin + p * (width - 2 * margin); };
  const auto py = [&](double v) {
    return height - margin - std::max(0.0, v) / top * (height - 2 * margin);
  };
  const auto polyline = [&](auto pick, const char* colour, bool dashed) {
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\""
        << (dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
    for (const auto* r : rows) out << number(px(r->p.get_d())) << ',' << number(py(pick(*r))) << ' ';
    out << "\"/>\n";
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
      << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 20
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">success probability p</text>\n";
  out << "<text x=\"15\" y=\"" << height / 2 << "\" transform=\"rotate(-90 15 " << height / 2
      << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">queries (max "
      << number(top) << ")</text>\n";
  if (rows.size() > 1) {
    polyline([](const BoundRow& r) { return r.bounds.thm1_lo; }, "red", true);
    polyline([](const BoundRow& r) { return r.bounds.thm1_hi; }, "red", false);
    polyline([](const BoundRow& r) { return r.bounds.thm2_lo; }, "blue", true);
    polyline([](const BoundRow& r) { return r.bounds.thm2_hi; }, "blue", false);
  }
  for (const auto* r : rows) {
    if (!r->mean_queries) continue;
    out << "<circle cx=\"" << number(px(r->p.get_d())) << "\" cy=\"" << number(py(*r->mean_queries))
        << "\" r=\"4\" fill=\"" << (r->pass ? "black" : "orange") << "\"/>\n";
  }
  out << "<text x=\"" << width - margin << "\" y=\"" << margin - 20
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
      << "red: randomized band, blue: deterministic band</text>\n";
  out << "</svg>\n";
}

void emit_report(const BoundReport& report, ReportFormat format, const std::filesystem::path& path) {
  require_rows(report);
  std::ostringstream buffer;
  if (format == ReportFormat::Csv) {
    write_csv(report, buffer);
  } else {
    write_svg(report, buffer);
  }
  if (path == "-") {
    std::cout << buffer.str();
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoFailure("cannot open " + path.string() + " for writing");
  file << buffer.str();
  if (!file.flush()) throw IoFailure("writing " + path.string() + " failed");
}

}  // namespace rounds
