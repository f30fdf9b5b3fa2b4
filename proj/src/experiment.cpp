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
#include "rounds/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "rounds/brute_force.hpp"
#include "rounds/cake.hpp"
#include "rounds/errors.hpp"
#include "rounds/locate.hpp"
#include "rounds/random.hpp"
#include "rounds/rank_sort.hpp"
#include "rounds/reductions.hpp"
#include "rounds/select.hpp"

namespace rounds {

std::string to_string(Problem problem) {
  switch (problem) {
    case Problem::Locate: return "locate";
    case Problem::Select: return "select";
    case Problem::Sort: return "sort";
    case Problem::Cake: return "cake";
    case Problem::Reduce: return "reduce";
    case Problem::Bounds: return "bounds";
    case Problem::BruteSelect: return "brute_select";
    case Problem::BruteLocate: return "brute_locate";
  }
  return "?";
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::Exact: return "exact";
    case Mode::MonteCarlo: return "mc";
    case Mode::Formula: return "formula";
  }
  return "?";
}

Problem parse_problem(std::string_view text) {
  for (Problem p : {Problem::Locate, Problem::Select, Problem::Sort, Problem::Cake,
                    Problem::Reduce, Problem::Bounds, Problem::BruteSelect,
                    Problem::BruteLocate}) {
    if (text == to_string(p)) return p;
  }
  throw std::invalid_argument("unknown problem '" + std::string(text) + "'");
}

Mode parse_mode(std::string_view text) {
  if (text == "exact") return Mode::Exact;
  if (text == "mc" || text == "montecarlo") return Mode::MonteCarlo;
  if (text == "formula") return Mode::Formula;
  throw std::invalid_argument("unknown mode '" + std::string(text) + "'");
}

bool BoundReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const BoundRow& r) { return r.pass; });
}

std::size_t exact_budget() {
  if (const char* env = std::getenv("ROUNDS_LAB_BUDGET")) {
    try {
      std::size_t used = 0;
      const unsigned long long value = std::stoull(env, &used);
      if (used == std::string_view(env).size()) return static_cast<std::size_t>(value);
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("ROUNDS_LAB_BUDGET must be a non-negative integer");
  }
  return 10'000'000;
}

std::vector<std::size_t> nth_permutation(std::size_t n, std::uint64_t index) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i + 1;
  std::vector<std::uint64_t> fact(n + 1, 1);
  for (std::size_t i = 1; i <= n; ++i) fact[i] = fact[i - 1] * i;
  if (n > 20 || index >= fact[n]) throw std::out_of_range("permutation index out of range");
  std::vector<std::size_t> out;
  out.reserve(n);
  for (std::size_t i = n; i >= 1; --i) {
    const std::uint64_t pick = index / fact[i - 1];
    index %= fact[i - 1];
    out.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

namespace {

struct Trial {
  std::size_t queries = 0;
  bool success = false;
  bool within_bounds = true;
};

template <class Fn>
std::vector<Trial> run_trials(std::size_t count, std::size_t threads, const Fn& fn) {
  std::vector<Trial> out(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(count, 1));
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&](std::size_t first) {
    try {
      for (std::size_t i = first; i < count; i += threads) out[i] = fn(i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker, t);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

struct Summary {
  double mean = 0;
  double ci95 = 0;
  double success_rate = 0;
  std::size_t max_queries = 0;
  std::size_t total_queries = 0;
  std::size_t successes = 0;
  bool all_within = true;
};

Summary summarize(const std::vector<Trial>& trials) {
  Summary s;
  const double count = static_cast<double>(trials.size());
  for (const auto& t : trials) {
    s.total_queries += t.queries;
    s.max_queries = std::max(s.max_queries, t.queries);
    s.successes += t.success ? 1 : 0;
    s.all_within = s.all_within && t.within_bounds;
  }
  s.mean = static_cast<double>(s.total_queries) / count;
  double squares = 0;
  for (const auto& t : trials) {
    const double d = static_cast<double>(t.queries) - s.mean;
    squares += d * d;
  }
  const double sd = trials.size() > 1 ? std::sqrt(squares / (count - 1)) : 0.0;
  s.ci95 = 1.96 * sd / std::sqrt(count);
  s.success_rate = static_cast<double>(s.successes) / count;
  return s;
}

/// Success count consistent with Binomial(trials, p) within three standard errors.
bool rate_matches(const Summary& s, std::size_t trials, const Rational& p) {
  const double pd = p.get_d();
  if (p == 0 || p == 1) return s.successes == (p == 1 ? trials : 0);
  const double se = std::sqrt(pd * (1 - pd) / static_cast<double>(trials));
  return std::abs(s.success_rate - pd) <= 3 * se;
}

std::uint64_t factorial_capped(std::size_t n, std::uint64_t cap) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    if (f > cap / i) return cap + 1;
    f *= i;
  }
  return f;
}

std::size_t exact_cases(const ExperimentConfig& c) {
  const std::size_t budget = exact_budget();
  std::uint64_t cases = 0;
  switch (c.problem) {
    case Problem::Locate:
    case Problem::Select:
      cases = c.n;
      break;
    case Problem::Sort:
    case Problem::Reduce:
      cases = factorial_capped(c.n, budget);
      break;
    case Problem::Cake:
      throw InfeasibleExact("cake valuations form a continuum; use Monte-Carlo mode");
    case Problem::Bounds:
    case Problem::BruteSelect:
    case Problem::BruteLocate:
      throw std::invalid_argument("no enumeration for this problem");
  }
  if (cases > budget) {
    throw InfeasibleExact("exact enumeration needs " + std::to_string(cases) +
                          " evaluations, budget is " + std::to_string(budget));
  }
  return static_cast<std::size_t>(cases);
}

std::vector<std::size_t> ranks_with_first(std::size_t n, std::size_t index) {
  // Item `index` gets rank 1; the others keep their relative order.
  std::vector<std::size_t> ranks(n);
  std::size_t next = 2;
  for (std::size_t i = 1; i <= n; ++i) ranks[i - 1] = i == index ? 1 : next++;
  return ranks;
}

std::vector<std::size_t> identity(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i + 1;
  return v;
}

BoundRow base_row(const ExperimentConfig& c, std::size_t k) {
  BoundRow row;
  row.problem = c.problem;
  row.n = c.n;
  row.k = k;
  row.p = c.p;
  row.mode = c.mode;
  row.seed = c.seed;
  row.bounds = bound_columns(c.n, k, c.p);
  return row;
}

void fill_measured(BoundRow& row, const Summary& s, std::size_t trials) {
  row.trials = trials;
  row.mean_queries = s.mean;
  row.ci95 = s.ci95;
  row.success_rate = s.success_rate;
  row.max_queries = s.max_queries;
}

BoundRow run_locate(const ExperimentConfig& c) {
  BoundRow row = base_row(c, c.k);
  const std::size_t bound = locate_query_bound(c.n, c.k);
  if (c.mode == Mode::Exact) {
    const std::size_t cases = exact_cases(c);
    const auto trials = run_trials(cases, c.threads, [&](std::size_t i) {
      const std::size_t rank = i + 1;
      OracleSession session(HiddenInstance::from_ranks(identity(c.n), rank), c.k);
      const std::size_t found = locate_det(session, Operand::target(), c.k);
      const std::size_t q = session.total_queries();
      return Trial{q, found == rank, q <= bound};
    });
    const Summary s = summarize(trials);
    fill_measured(row, s, cases);
    // The randomized wrapper runs this with probability p and asks nothing otherwise.
    row.exact_mean = c.p * ratio(s.total_queries, cases);
    row.mean_queries = row.exact_mean->get_d();
    row.ci95 = 0.0;
    row.success_rate = Rational(c.p * ratio(s.successes, cases)).get_d();
    row.pass = s.all_within && s.successes == cases;
    return row;
  }
  const auto trials = run_trials(c.trials, c.threads, [&](std::size_t i) {
    Rng rng = trial_rng(c.seed, i);
    const std::size_t rank = std::uniform_int_distribution<std::size_t>(1, c.n)(rng);
    OracleSession session(HiddenInstance::from_ranks(identity(c.n), rank), c.k);
    const auto found = locate_rand(session, Operand::target(), c.k, c.p, rng);
    const std::size_t q = session.total_queries();
    return Trial{q, found == rank, q <= bound};
  });
  const Summary s = summarize(trials);
  fill_measured(row, s, c.trials);
  row.pass = s.all_within && rate_matches(s, c.trials, c.p);
  return row;
}

BoundRow run_select(const ExperimentConfig& c) {
  const std::size_t k = std::min(c.k, c.n);
  BoundRow row = base_row(c, k);
  const ExactBands bands = exact_bands(c.n, k, c.p);
  if (c.mode == Mode::Exact) {
    const std::size_t cases = exact_cases(c);
    const SelectSchedule schedule = build_schedule(c.n, k, c.p);
    const auto order = identity(c.n);
    const auto trials = run_trials(cases, c.threads, [&](std::size_t i) {
      const std::size_t target = i + 1;
      OracleSession session(HiddenInstance::from_ranks(ranks_with_first(c.n, target)), k);
      const SelectOutcome out = select_det(session, schedule, order, 1);
      return Trial{session.total_queries(), out.index == target, true};
    });
    const Summary s = summarize(trials);
    fill_measured(row, s, cases);
    const Rational mean = ratio(s.total_queries, cases);
    const Rational success = ratio(s.successes, cases);
    row.exact_mean = mean;
    row.ci95 = 0.0;
    row.pass = bands.thm2_lo <= mean && mean <= bands.thm2_hi && success >= c.p;
    return row;
  }
  const auto trials = run_trials(c.trials, c.threads, [&](std::size_t i) {
    Rng rng = trial_rng(c.seed, i);
    const std::size_t target = std::uniform_int_distribution<std::size_t>(1, c.n)(rng);
    OracleSession session(HiddenInstance::from_ranks(ranks_with_first(c.n, target)), k);
    const auto out = select_rand(session, k, c.p, rng, 1);
    return Trial{session.total_queries(), out && out->index == target, true};
  });
  const Summary s = summarize(trials);
  fill_measured(row, s, c.trials);
  const Rational analytic = select_rand_expected_queries(c.n, k, c.p);
  const double sigma = s.ci95 / 1.96;
  const bool mean_ok = std::abs(s.mean - analytic.get_d()) <= 3 * sigma + 1e-9;
  row.pass = bands.thm1_lo <= analytic && analytic <= bands.thm1_hi && mean_ok &&
             rate_matches(s, c.trials, c.p);
  return row;
}

BoundRow run_sort(const ExperimentConfig& c) {
  BoundRow row = base_row(c, c.k);
  const bool exact = c.mode == Mode::Exact;
  const std::size_t cases = exact ? exact_cases(c) : c.trials;
  const auto trials = run_trials(cases, c.threads, [&](std::size_t i) {
    std::vector<std::size_t> ranks;
    if (exact) {
      ranks = nth_permutation(c.n, i);
    } else {
      Rng rng = trial_rng(c.seed, i);
      ranks = random_permutation(c.n, rng);
    }
    OracleSession session(HiddenInstance::from_ranks(ranks), c.k);
    const auto sorted = sort_rank(session, c.k);
    const std::size_t q = session.total_queries();
    return Trial{q, sorted == ranks, within_power_bound(q, 2 * c.k, c.n, c.k)};
  });
  const Summary s = summarize(trials);
  fill_measured(row, s, cases);
  if (exact) {
    row.exact_mean = ratio(s.total_queries, cases);
  }
  const RankSorter sorter = [](QuerySession& session, std::size_t k) { return sort_rank(session, k); };
  row.forced_queries = forced_query_count(sorter, c.n, c.k);
  const bool forced_ok = static_cast<double>(*row.forced_queries) >= std::max(0.0, row.bounds.thm5);
  row.pass = s.all_within && s.successes == cases && forced_ok;
  return row;
}

BoundRow run_cake(const ExperimentConfig& c) {
  if (c.mode == Mode::Exact) exact_cases(c);
  BoundRow row = base_row(c, c.k);
  const auto trials = run_trials(c.trials, c.threads, [&](std::size_t i) {
    Rng rng = trial_rng(c.seed, i);
    std::vector<PiecewiseDensity> agents;
    for (std::size_t a = 0; a < c.n; ++a) agents.push_back(random_density(rng));
    const ProtocolResult result = proportional_protocol(agents, c.k);
    const bool fair = verify_proportional(result.allocation, agents).proportional;
    const std::size_t q = result.transcript.total_queries;
    const std::size_t linear = c.k * c.n;
    bool within = q < linear || within_power_bound(q - linear, c.k, c.n, c.k);
    for (std::size_t j = 0; j < result.rounds.size(); ++j) {
      const std::size_t cap = ceil_power_fraction(c.n, j + 1, c.k);
      for (const auto& cake : result.rounds[j]) within = within && cake.agents.size() <= cap;
    }
    return Trial{q, fair, within};
  });
  const Summary s = summarize(trials);
  fill_measured(row, s, c.trials);
  row.pass = s.all_within && s.successes == c.trials;
  return row;
}

BoundRow run_reduce(const ExperimentConfig& c) {
  BoundRow row = base_row(c, c.k);
  const bool exact = c.mode == Mode::Exact;
  const std::size_t cases = exact ? exact_cases(c) : c.trials;
  const CakeProtocol protocol = proportional_cake_protocol(c.k);
  const auto trials = run_trials(cases, c.threads, [&](std::size_t i) {
    std::vector<std::size_t> pi;
    if (exact) {
      pi = nth_permutation(c.n, i);
    } else {
      Rng rng = trial_rng(c.seed, i);
      pi = random_permutation(c.n, rng);
    }
    OracleSession ranks(HiddenInstance::from_ranks(pi), c.k);
    try {
      const CakeSortResult r = sort_via_cake(protocol, c.n, ranks);
      return Trial{r.rank_queries, r.ranks == pi, r.rank_queries <= r.rw_queries};
    } catch (const NotProportional&) {
      return Trial{ranks.total_queries(), false, false};
    }
  });
  const Summary s = summarize(trials);
  fill_measured(row, s, cases);
  row.pass = s.all_within && s.successes == cases;
  return row;
}

BoundRow run_brute(const ExperimentConfig& c) {
  BoundRow row = base_row(c, c.k);
  row.mode = Mode::Exact;
  row.trials = 1;
  row.success_rate = 1.0;
  row.ci95 = 0.0;
  if (c.problem == Problem::BruteSelect) {
    const SelectStrategy best = brute_force_select(c.n, c.k, c.p);
    row.exact_mean = best.expected_queries;
    row.mean_queries = best.expected_queries.get_d();
    const ExactBands bands = exact_bands(c.n, c.k, c.p);
    row.pass = bands.thm2_lo <= best.expected_queries && best.expected_queries <= bands.thm2_hi;
  } else {
    const std::size_t worst = brute_force_locate(c.n, c.k);
    row.max_queries = worst;
    row.mean_queries = static_cast<double>(worst);
    row.pass = worst <= locate_query_bound(c.n, c.k);
  }
  return row;
}

}  // namespace

BoundReport run_experiment(const ExperimentConfig& c) {
  if (c.n == 0 || c.k == 0) throw std::invalid_argument("n and k must be positive");
  if (c.p < 0 || c.p > 1) throw std::invalid_argument("p must lie in [0,1]");
  if (c.mode == Mode::MonteCarlo && c.trials == 0) {
    throw std::invalid_argument("Monte-Carlo mode needs at least one trial");
  }
  if (c.mode == Mode::Formula || c.problem == Problem::Bounds) {
    // A single formula row at p, passing iff the curves have the right shape.
    BoundReport formula = bounds_sweep(c.n, c.k, probability_grid(20));
    BoundRow row = formula.rows.front();
    row.problem = c.problem;
    row.p = c.p;
    row.seed = c.seed;
    row.bounds = bound_columns(c.n, c.k, c.p);
    formula.rows.assign(1, row);
    return formula;
  }
  BoundReport report;
  switch (c.problem) {
    case Problem::Locate: report.rows.push_back(run_locate(c)); break;
    case Problem::Select: report.rows.push_back(run_select(c)); break;
    case Problem::Sort: report.rows.push_back(run_sort(c)); break;
    case Problem::Cake: report.rows.push_back(run_cake(c)); break;
    case Problem::Reduce: report.rows.push_back(run_reduce(c)); break;
    case Problem::BruteSelect:
    case Problem::BruteLocate: report.rows.push_back(run_brute(c)); break;
    case Problem::Bounds: break;
  }
  return report;
}

BoundReport bounds_sweep(std::uint64_t n, std::size_t k, std::span<const Rational> grid) {
  const CurveShape shape = curve_shape(n, k, grid);
  const bool ok = shape.thm1_linear && shape.thm2_concave && shape.endpoints_match;
  BoundReport report;
  for (const auto& p : grid) {
    BoundRow row;
    row.problem = Problem::Bounds;
    row.n = n;
    row.k = k;
    row.p = p;
    row.mode = Mode::Formula;
    row.bounds = bound_columns(n, k, p);
    row.pass = ok;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace rounds
