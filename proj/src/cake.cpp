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
#include "rounds/cake.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "rounds/errors.hpp"

namespace rounds {

// ---------------------------------------------------------------------------
// PiecewiseDensity

PiecewiseDensity::PiecewiseDensity(std::vector<Rational> breakpoints, std::vector<Rational> heights)
    : breakpoints_(std::move(breakpoints)), heights_(std::move(heights)) {
  if (heights_.empty() || breakpoints_.size() != heights_.size() + 1) {
    throw std::invalid_argument("need m >= 1 heights and m + 1 breakpoints");
  }
  if (breakpoints_.front() != 0 || breakpoints_.back() != 1) {
    throw std::invalid_argument("breakpoints must run from 0 to 1");
  }
  Rational total = 0;
  for (std::size_t j = 0; j < heights_.size(); ++j) {
    if (breakpoints_[j + 1] <= breakpoints_[j]) {
      throw std::invalid_argument("breakpoints must be strictly increasing");
    }
    if (heights_[j] < 0) throw std::invalid_argument("heights must be non-negative");
    total += heights_[j] * (breakpoints_[j + 1] - breakpoints_[j]);
  }
  if (total != 1) {
    throw std::invalid_argument("density must integrate to exactly 1, got " + to_fraction_string(total));
  }
}

PiecewiseDensity PiecewiseDensity::uniform() {
  return PiecewiseDensity({Rational(0), Rational(1)}, {Rational(1)});
}

PiecewiseDensity PiecewiseDensity::from_weights(std::vector<Rational> breakpoints,
                                                const std::vector<Rational>& weights) {
  if (breakpoints.size() != weights.size() + 1) {
    throw std::invalid_argument("need m weights and m + 1 breakpoints");
  }
  Rational total = 0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    total += weights[j] * (breakpoints[j + 1] - breakpoints[j]);
  }
  if (total <= 0) throw std::invalid_argument("weights must carry positive mass");
  std::vector<Rational> heights;
  heights.reserve(weights.size());
  for (const auto& w : weights) heights.push_back(w / total);
  return PiecewiseDensity(std::move(breakpoints), std::move(heights));
}

Rational PiecewiseDensity::value_up_to(const Rational& y) const {
  if (y < 0 || y > 1) throw std::invalid_argument("point outside [0,1]");
  Rational total = 0;
  for (std::size_t j = 0; j < heights_.size(); ++j) {
    const Rational& lo = breakpoints_[j];
    if (y <= lo) break;
    const Rational hi = std::min(y, breakpoints_[j + 1]);
    total += heights_[j] * (hi - lo);
  }
  return total;
}

Rational PiecewiseDensity::value_between(const Rational& left, const Rational& right) const {
  return value_up_to(right) - value_up_to(left);
}

Rational PiecewiseDensity::leftmost_point(const Rational& alpha) const {
  if (alpha < 0 || alpha > 1) throw std::invalid_argument("value outside [0,1]");
  if (alpha == 0) return Rational(0);
  Rational before = 0;
  for (std::size_t j = 0; j < heights_.size(); ++j) {
    const Rational mass = heights_[j] * (breakpoints_[j + 1] - breakpoints_[j]);
    if (heights_[j] > 0 && alpha <= before + mass) {
      return breakpoints_[j] + (alpha - before) / heights_[j];
    }
    before += mass;
  }
  throw std::logic_error("cut value not reached; density is not normalized");
}

Rational eval_query(const PiecewiseDensity& density, const Rational& y) {
  return density.value_up_to(y);
}

Rational cut_query(const PiecewiseDensity& density, const Rational& alpha) {
  return density.leftmost_point(alpha);
}

PiecewiseDensity random_density(Rng& rng, std::size_t max_segments, std::size_t grid) {
  if (max_segments == 0 || grid < max_segments) throw std::invalid_argument("bad density shape");
  std::uniform_int_distribution<std::size_t> seg_count(1, max_segments);
  const std::size_t m = seg_count(rng);
  std::set<std::size_t> inner;
  std::uniform_int_distribution<std::size_t> point(1, grid - 1);
  while (inner.size() + 1 < m) inner.insert(point(rng));
  std::vector<Rational> bps{Rational(0)};
  for (std::size_t p : inner) bps.push_back(ratio(p, grid));
  bps.emplace_back(1);

  std::uniform_int_distribution<int> weight(0, 9);
  std::vector<Rational> weights(m);
  bool any = false;
  for (auto& w : weights) {
    w = weight(rng);
    any = any || w > 0;
  }
  if (!any) weights[std::uniform_int_distribution<std::size_t>(0, m - 1)(rng)] = 1;
  return PiecewiseDensity::from_weights(std::move(bps), weights);
}

// ---------------------------------------------------------------------------
// Sessions

RwSession::RwSession(std::size_t n, std::size_t k_limit) : n_(n) {
  if (k_limit == 0) throw std::invalid_argument("k_limit must be at least 1");
  log_.k_limit = k_limit;
}

std::vector<Rational> RwSession::submit_round(std::span<const RwQuery> batch) {
  if (rounds_used() >= k_limit()) {
    throw RoundLimitExceeded("all " + std::to_string(k_limit()) + " rounds already used");
  }
  for (const auto& q : batch) {
    std::visit(
        [this](const auto& query) {
          if (query.agent < 1 || query.agent > n_) throw MalformedQuery("agent outside 1..n");
        },
        q);
    if (const auto* c = std::get_if<CutQuery>(&q); c && (c->alpha < 0 || c->alpha > 1)) {
      throw MalformedQuery("cut value outside [0,1]");
    }
    if (const auto* e = std::get_if<EvalQuery>(&q); e && (e->point < 0 || e->point > 1)) {
      throw MalformedQuery("eval point outside [0,1]");
    }
  }
  std::vector<Rational> answers = answer_batch(batch);
  if (answers.size() != batch.size()) throw std::logic_error("wrong number of answers");
  auto& round = log_.rounds.emplace_back();
  round.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) round.push_back({batch[i], answers[i]});
  log_.total_queries += batch.size();
  return answers;
}

ValuationSession::ValuationSession(std::vector<PiecewiseDensity> agents, std::size_t k_limit)
    : RwSession(agents.size(), k_limit), agents_(std::move(agents)) {}

std::vector<Rational> ValuationSession::answer_batch(std::span<const RwQuery> batch) {
  std::vector<Rational> out;
  out.reserve(batch.size());
  for (const auto& q : batch) {
    if (const auto* c = std::get_if<CutQuery>(&q)) {
      out.push_back(cut_query(agents_[c->agent - 1], c->alpha));
    } else {
      const auto& e = std::get<EvalQuery>(q);
      out.push_back(eval_query(agents_[e.agent - 1], e.point));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Protocol

std::vector<std::size_t> balanced_parts(std::size_t m, std::size_t z) {
  if (z == 0) throw std::invalid_argument("need at least one part");
  std::vector<std::size_t> parts(z, m / z);
  for (std::size_t j = 0; j < m % z; ++j) ++parts[j];
  return parts;
}

SubcakeAssignment assign_subcakes(std::span<const std::size_t> agents,
                                  const std::vector<std::vector<Rational>>& marks,
                                  std::span<const std::size_t> targets) {
  const std::size_t z = targets.size();
  if (z == 0) throw std::invalid_argument("need at least one subcake");
  if (marks.size() != agents.size()) throw std::invalid_argument("one mark list per agent");
  if (std::accumulate(targets.begin(), targets.end(), std::size_t{0}) != agents.size()) {
    throw std::invalid_argument("subcake populations must add up to the agent count");
  }
  for (const auto& row : marks) {
    if (row.size() + 1 < z) throw std::invalid_argument("each agent needs z - 1 marks");
  }

  SubcakeAssignment out;
  out.groups.resize(z);
  std::vector<std::size_t> open(agents.size());
  std::iota(open.begin(), open.end(), std::size_t{0});
  for (std::size_t j = 0; j + 1 < z; ++j) {
    std::stable_sort(open.begin(), open.end(), [&](std::size_t x, std::size_t y) {
      if (marks[x][j] != marks[y][j]) return marks[x][j] < marks[y][j];
      return agents[x] < agents[y];
    });
    const std::size_t take = targets[j];
    if (take == 0) throw std::invalid_argument("subcake populations must be positive");
    out.cuts.push_back(marks[open[take - 1]][j]);
    for (std::size_t i = 0; i < take; ++i) out.groups[j].push_back(agents[open[i]]);
    open.erase(open.begin(), open.begin() + static_cast<std::ptrdiff_t>(take));
  }
  for (std::size_t i : open) out.groups[z - 1].push_back(agents[i]);
  for (auto& g : out.groups) std::sort(g.begin(), g.end());
  return out;
}

ProtocolResult proportional_protocol(RwSession& session, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  const std::size_t n = session.agents();
  if (n == 0) throw std::invalid_argument("need at least one agent");

  std::vector<Subcake> cakes(1);
  cakes[0].left = 0;
  cakes[0].right = 1;
  cakes[0].a = 0;
  cakes[0].b = 1;
  cakes[0].agents.resize(n);
  std::iota(cakes[0].agents.begin(), cakes[0].agents.end(), std::size_t{1});

  ProtocolResult result;
  const Rational unit = ratio(1, n);
  for (std::size_t round = 1; round <= k; ++round) {
    const bool done = std::all_of(cakes.begin(), cakes.end(),
                                  [](const Subcake& c) { return c.agents.size() <= 1; });
    if (done) break;
    const std::size_t rounds_left = k - round + 1;

    // Per subcake: populations and the value offsets asked of each agent.
    std::vector<std::vector<std::size_t>> parts(cakes.size());
    std::vector<RwQuery> batch;
    for (std::size_t c = 0; c < cakes.size(); ++c) {
      const std::size_t m = cakes[c].agents.size();
      if (m <= 1) continue;
      parts[c] = balanced_parts(m, ceil_root(m, rounds_left));
      for (std::size_t agent : cakes[c].agents) {
        std::size_t cumulative = 0;
        for (std::size_t j = 0; j + 1 < parts[c].size(); ++j) {
          cumulative += parts[c][j];
          batch.emplace_back(CutQuery{agent, cakes[c].a + Rational(cumulative) * unit});
        }
      }
    }
    const auto answers = session.submit_round(batch);

    std::vector<Subcake> next;
    std::size_t cursor = 0;
    for (std::size_t c = 0; c < cakes.size(); ++c) {
      const Subcake& cake = cakes[c];
      if (cake.agents.size() <= 1) {
        next.push_back(cake);
        continue;
      }
      const std::size_t z = parts[c].size();
      std::vector<std::vector<Rational>> marks(cake.agents.size());
      for (auto& row : marks) {
        row.assign(answers.begin() + static_cast<std::ptrdiff_t>(cursor),
                   answers.begin() + static_cast<std::ptrdiff_t>(cursor + z - 1));
        cursor += z - 1;
      }
      const auto assignment = assign_subcakes(cake.agents, marks, parts[c]);
      Rational left = cake.left;
      Rational offset = cake.a;
      for (std::size_t j = 0; j < z; ++j) {
        Subcake child;
        child.left = left;
        child.right = j + 1 < z ? assignment.cuts[j] : cake.right;
        child.agents = assignment.groups[j];
        child.a = offset;
        child.b = offset + Rational(parts[c][j]) * unit;
        left = child.right;
        offset = child.b;
        next.push_back(std::move(child));
      }
    }
    cakes = std::move(next);
    result.rounds.push_back(cakes);
  }

  for (const auto& c : cakes) {
    if (c.agents.size() != 1) throw std::logic_error("protocol ended with a shared subcake");
    result.allocation.pieces.push_back(Piece{c.left, c.right, c.agents.front()});
  }
  result.transcript = session.transcript();
  return result;
}

ProtocolResult proportional_protocol(std::span<const PiecewiseDensity> agents, std::size_t k) {
  ValuationSession session(std::vector<PiecewiseDensity>(agents.begin(), agents.end()), k);
  return proportional_protocol(session, k);
}

ProportionalityReport verify_proportional(const Allocation& allocation,
                                          std::span<const PiecewiseDensity> agents) {
  const std::size_t n = agents.size();
  if (allocation.pieces.size() != n) {
    throw MalformedAllocation("expected " + std::to_string(n) + " pieces, got " +
                              std::to_string(allocation.pieces.size()));
  }
  std::vector<Piece> pieces = allocation.pieces;
  std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) {
    if (x.left != y.left) return x.left < y.left;
    return x.right < y.right;
  });
  std::vector<bool> owned(n + 1, false);
  Rational edge = 0;
  for (const auto& p : pieces) {
    if (p.owner < 1 || p.owner > n || owned[p.owner]) {
      throw MalformedAllocation("each agent must own exactly one piece");
    }
    owned[p.owner] = true;
    if (p.right < p.left) throw MalformedAllocation("piece with right end before left end");
    if (p.left < edge) throw MalformedAllocation("pieces overlap");
    if (p.left > edge) throw MalformedAllocation("pieces leave a gap");
    edge = p.right;
  }
  if (edge != 1) throw MalformedAllocation("pieces do not reach the end of the cake");

  ProportionalityReport report;
  report.values.resize(n);
  report.proportional = true;
  const Rational share = ratio(1, n);
  for (const auto& p : pieces) {
    Rational v = agents[p.owner - 1].value_between(p.left, p.right);
    if (v < share) report.proportional = false;
    report.values[p.owner - 1] = std::move(v);
  }
  return report;
}

}  // namespace rounds
