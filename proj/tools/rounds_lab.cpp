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
// rounds-lab: command-line front end for the round-limited query experiments.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include "rounds/bounds.hpp"
#include "rounds/cake.hpp"
#include "rounds/cake_io.hpp"
#include "rounds/experiment.hpp"
#include "rounds/numeric.hpp"
#include "rounds/random.hpp"
#include "rounds/report.hpp"

namespace {

const CLI::Range kAtLeastOne(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max(), "at least 1");

struct Options {
  std::size_t n = 16;
  std::size_t k = 2;
  std::string p = "1";
  std::size_t trials = 100000;
  std::uint64_t seed = 1;
  std::string mode;
  std::string out = "-";
  std::string format = "csv";
  std::size_t threads = 0;
  std::size_t steps = 20;
  std::string target = "select";
  std::string cake_in;
  std::string cake_save;
};

void add_common(CLI::App* cmd, Options& o, bool with_trials) {
  cmd->add_option("--n", o.n, "Instance size")->check(kAtLeastOne);
  cmd->add_option("--k", o.k, "Number of rounds")->check(kAtLeastOne);
  cmd->add_option("--p", o.p, "Success probability, as p/q or a decimal");
  if (with_trials) {
    cmd->add_option("--trials", o.trials, "Monte-Carlo trials")->check(kAtLeastOne);
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_option("--mode", o.mode, "exact or mc")->check(CLI::IsMember({"exact", "mc", "montecarlo"}));
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  }
  cmd->add_option("--out", o.out, "Output file, - for standard output");
  cmd->add_option("--format", o.format, "csv or svg")->check(CLI::IsMember({"csv", "svg"}));
}

rounds::BoundReport run_cake_file(const Options& o) {
  const auto agents = rounds::load_cake_instance(o.cake_in);
  const auto result = rounds::proportional_protocol(agents, o.k);
  const auto check = rounds::verify_proportional(result.allocation, agents);
  const std::size_t n = agents.size();
  for (const auto& piece : result.allocation.pieces) {
    std::cerr << "agent " << piece.owner << ": [" << rounds::to_fraction_string(piece.left) << ", "
              << rounds::to_fraction_string(piece.right) << "] value "
              << rounds::to_fraction_string(check.values[piece.owner - 1]) << '\n';
  }
  rounds::BoundRow row;
  row.problem = rounds::Problem::Cake;
  row.n = n;
  row.k = o.k;
  row.p = 1;
  row.mode = rounds::Mode::Exact;
  row.trials = 1;
  row.seed = o.seed;
  const std::size_t q = result.transcript.total_queries;
  row.mean_queries = static_cast<double>(q);
  row.ci95 = 0.0;
  row.success_rate = check.proportional ? 1.0 : 0.0;
  row.max_queries = q;
  row.bounds = rounds::bound_columns(n, o.k, row.p);
  const bool within = q < o.k * n || rounds::within_power_bound(q - o.k * n, o.k, n, o.k);
  row.pass = check.proportional && within;
  return rounds::BoundReport{{row}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Round-limited search, sorting and cake cutting experiments"};
  app.require_subcommand(1);
  Options o;

  auto* locate = app.add_subcommand("locate", "Ordered search: find the target's rank");
  auto* select = app.add_subcommand("select", "Unordered search: find the item with a given rank");
  auto* sort = app.add_subcommand("sort", "Sort with rank queries; also plays the splitting adversary");
  auto* cake = app.add_subcommand("cake", "Proportional cake cutting with contiguous pieces");
  auto* reduce = app.add_subcommand("reduce", "Sort through the adversarial cake instance");
  auto* bounds = app.add_subcommand("bounds", "Bound formulas over a grid of p");
  auto* brute = app.add_subcommand("brute", "Exhaustive optimum for tiny select or locate instances");
  for (auto* cmd : {locate, select, sort, cake, reduce}) add_common(cmd, o, true);
  add_common(bounds, o, false);
  add_common(brute, o, false);
  bounds->add_option("--steps", o.steps, "Grid points between p = 0 and p = 1")->check(kAtLeastOne);
  brute->add_option("--target", o.target, "select or locate")->check(CLI::IsMember({"select", "locate"}));
  cake->add_option("--in", o.cake_in, "Run the protocol once on this instance file");
  cake->add_option("--save-instance", o.cake_save, "Write a random instance (n agents, --seed) and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    rounds::BoundReport report;
    CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    if (name == "bounds") {
      const std::uint64_t n = chosen->count("--n") > 0 ? o.n : (std::uint64_t{1} << 36);
      const std::size_t k = chosen->count("--k") > 0 ? o.k : 4;
      const auto grid = rounds::probability_grid(o.steps);
      report = rounds::bounds_sweep(n, k, grid);
    } else if (name == "cake" && !o.cake_save.empty()) {
      rounds::Rng rng = rounds::trial_rng(o.seed, 0);
      std::vector<rounds::PiecewiseDensity> agents;
      for (std::size_t i = 0; i < o.n; ++i) agents.push_back(rounds::random_density(rng));
      rounds::save_cake_instance(o.cake_save, agents);
      return 0;
    } else if (name == "cake" && !o.cake_in.empty()) {
      report = run_cake_file(o);
    } else {
      rounds::ExperimentConfig config;
      config.n = o.n;
      config.k = o.k;
      config.p = rounds::parse_rational(o.p);
      config.trials = o.trials;
      config.seed = o.seed;
      config.threads = o.threads;
      if (name == "brute") {
        config.problem = o.target == "select" ? rounds::Problem::BruteSelect : rounds::Problem::BruteLocate;
        config.mode = rounds::Mode::Exact;
      } else {
        config.problem = rounds::parse_problem(name);
        const std::string mode = o.mode.empty() ? (name == "cake" ? "mc" : "exact") : o.mode;
        config.mode = rounds::parse_mode(mode);
      }
      report = rounds::run_experiment(config);
    }
    rounds::emit_report(report, rounds::parse_format(o.format), o.out);
    return report.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "rounds-lab: " << e.what() << '\n';
    return 2;
  }
}
