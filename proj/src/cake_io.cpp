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
#include "rounds/cake_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rounds/errors.hpp"

namespace rounds {

namespace {

PiecewiseDensity parse_line(const std::string& line) {
  std::istringstream tokens(line);
  std::vector<Rational> values;
  for (std::string word; tokens >> word;) values.push_back(parse_rational(word));
  if (values.size() < 3 || values.size() % 2 == 0) {
    throw std::invalid_argument("expected t0 h1 t1 ... h_m t_m");
  }
  std::vector<Rational> breakpoints;
  std::vector<Rational> heights;
  for (std::size_t i = 0; i < values.size(); ++i) {
    (i % 2 == 0 ? breakpoints : heights).push_back(values[i]);
  }
  return PiecewiseDensity(std::move(breakpoints), std::move(heights));
}

}  // namespace

std::vector<PiecewiseDensity> read_cake_instance(std::istream& in) {
  std::vector<PiecewiseDensity> agents;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      agents.push_back(parse_line(line));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(number) + ": " + e.what());
    }
  }
  if (agents.empty()) throw std::invalid_argument("cake instance lists no agents");
  return agents;
}

void write_cake_instance(std::ostream& out, std::span<const PiecewiseDensity> agents) {
  for (const auto& density : agents) {
    const auto& t = density.breakpoints();
    const auto& h = density.heights();
    out << to_fraction_string(t[0]);
    for (std::size_t j = 0; j < h.size(); ++j) {
      out << ' ' << to_fraction_string(h[j]) << ' ' << to_fraction_string(t[j + 1]);
    }
    out << '\n';
  }
}

std::vector<PiecewiseDensity> load_cake_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open " + path.string());
  return read_cake_instance(in);
}

void save_cake_instance(const std::filesystem::path& path, std::span<const PiecewiseDensity> agents) {
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot write " + path.string());
  write_cake_instance(out, agents);
  if (!out.flush()) throw IoFailure("write to " + path.string() + " failed");
}

}  // namespace rounds
