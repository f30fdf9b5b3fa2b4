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

// Text format for cake instances: one agent per line, written as
// "t0 h1 t1 h2 t2 ... h_m t_m" with every number an exact fraction p/q.
// Blank lines and lines starting with '#' are skipped on input.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "rounds/cake.hpp"

namespace rounds {

/// Throws std::invalid_argument naming the offending line.
std::vector<PiecewiseDensity> read_cake_instance(std::istream& in);
void write_cake_instance(std::ostream& out, std::span<const PiecewiseDensity> agents);

/// File variants; throw IoFailure when the file cannot be opened or written.
std::vector<PiecewiseDensity> load_cake_instance(const std::filesystem::path& path);
void save_cake_instance(const std::filesystem::path& path, std::span<const PiecewiseDensity> agents);

}  // namespace rounds
