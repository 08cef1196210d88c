/*
 * Copyright 2026 The ptgsolve authors
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

#include "ptg/play.hpp"

#include <algorithm>
#include <random>

#include "ptg/instant.hpp"

namespace ptg {

std::pair<Configuration, Rat> step(const Ptg& g, const Configuration& from,
                                   const Rat& delay, int transition) {
  if (transition < 0 || transition >= static_cast<int>(g.transitions.size()))
    throw move_error("step: unknown transition");
  const Transition& t = g.transitions[transition];
  const Location& l = g.locations[from.location];
  if (t.src != from.location)
    throw move_error("step: transition does not leave '" + l.name + "'");
  if (l.is_final()) throw move_error("step: the play already ended");
  if (delay < Rat(0)) throw move_error("step: negative delay");
  if (l.urgent && delay != Rat(0))
    throw move_error("step: time cannot elapse in urgent '" + l.name + "'");
  Rat fired = from.clock + delay;
  if (!t.guard.contains(fired))
    throw move_error("step: guard " + t.guard.str() + " rejects clock " +
                     fired.str());
  Configuration to;
  to.location = t.dst;
  to.clock = t.reset ? Rat(0) : fired;
  Rat cost = Rat(t.weight) + delay * Rat(l.rate);
  return {to, cost};
}

ExtValue play_cost(const Ptg& g, const Play& p) {
  const Configuration& last = p.end();
  if (!g.locations[last.location].is_final()) return ExtValue::pos_inf();
  Rat total(0);
  for (const auto& s : p.steps) total += s.cost;
  total += g.locations[last.location].final_cost->eval(last.clock);
  return ExtValue(total);
}

Play simulate(const Ptg& g, const Configuration& s0, const Strategy& min_strategy,
              const Strategy& max_strategy, unsigned long long horizon) {
  Play p;
  p.start = s0;
  Configuration cur = s0;
  while (true) {
    const Location& l = g.locations[cur.location];
    if (l.is_final()) {
      p.completed = true;
      return p;
    }
    if (p.steps.size() >= horizon) {
      p.truncated = true;
      return p;
    }
    const bool min_to_move = l.owner == Owner::Min;
    const Strategy& s = min_to_move ? min_strategy : max_strategy;
    std::optional<StrategyDecision> d = s(p, cur);
    if (!d) return p;  // deadlock: the strategy offers no move
    std::pair<Configuration, Rat> next;
    try {
      next = step(g, cur, d->delay, d->transition);
    } catch (const move_error& e) {
      throw move_error(std::string(min_to_move ? "min" : "max") +
                       " strategy made an illegal move at '" + l.name +
                       "': " + e.what());
    }
    p.steps.push_back(PlayStep{d->delay, d->transition, next.second, next.first});
    cur = next.first;
  }
}

Strategy fp_runner(const Ptg& g, Owner owner, const FpStrategy& fs) {
  return [&g, owner, fs](const Play&, const Configuration& at)
             -> std::optional<StrategyDecision> {
    if (g.locations[at.location].owner != owner) return std::nullopt;
    if (at.location >= static_cast<int>(fs.plans.size())) return std::nullopt;
    const FpLocationPlan& plan = fs.plans[at.location];
    if (plan.empty()) return std::nullopt;
    const auto& pts = plan.points;
    if (at.clock < pts.front() || at.clock > pts.back()) return std::nullopt;
    auto it = std::lower_bound(pts.begin(), pts.end(), at.clock);
    size_t i = it - pts.begin();
    FpMove mv;
    Rat target = at.clock;
    if (it != pts.end() && *it == at.clock) {
      mv = plan.point_moves[i];
      if (mv.wait) {
        if (i + 1 >= pts.size()) return std::nullopt;
        target = pts[i + 1];
      }
    } else {
      mv = plan.interval_moves[i - 1];
      if (mv.wait) target = pts[i];
    }
    if (mv.transition < 0) return std::nullopt;
    return StrategyDecision{target - at.clock, mv.transition};
  };
}

Strategy switching_runner(const Ptg& g, const SwitchingStrategy& ss) {
  Strategy primary = fp_runner(g, Owner::Min, ss.primary);
  Strategy attractor = fp_runner(g, Owner::Min, ss.attractor);
  unsigned long long threshold = ss.threshold;
  return [primary, attractor, threshold](
             const Play& h, const Configuration& at)
             -> std::optional<StrategyDecision> {
    return h.length() < threshold ? primary(h, at) : attractor(h, at);
  };
}

FpStrategy random_fp_strategy(const Sptg& s, Owner owner, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Rat r = s.right_endpoint;
  std::vector<Rat> pool =
      candidate_cutpoints(InstantGame::all_urgent(s), r);

  FpStrategy fs;
  fs.plans.resize(s.game.locations.size());
  for (size_t li = 0; li < s.game.locations.size(); ++li) {
    const Location& l = s.game.locations[li];
    if (l.owner != owner) continue;
    std::vector<int> edges = s.game.outgoing(static_cast<int>(li));
    if (edges.empty()) continue;

    std::vector<Rat> pts{Rat(0)};
    if (!pool.empty() && r > Rat(0)) {
      size_t breaks = rng() % std::min<size_t>(4, pool.size() + 1);
      for (size_t k = 0; k < breaks; ++k) {
        const Rat& c = pool[rng() % pool.size()];
        if (c > Rat(0) && c < r) pts.push_back(c);
      }
    }
    if (r > Rat(0)) pts.push_back(r);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    FpLocationPlan plan;
    plan.points = pts;
    auto random_edge = [&] { return edges[rng() % edges.size()]; };
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      bool wait = !l.urgent && (rng() % 2 == 0);
      plan.interval_moves.push_back(FpMove{wait, random_edge()});
    }
    for (size_t i = 0; i < pts.size(); ++i) {
      bool can_wait = !l.urgent && i + 1 < pts.size();
      bool wait = can_wait && (rng() % 2 == 0);
      plan.point_moves.push_back(FpMove{wait, random_edge()});
    }
    fs.plans[li] = std::move(plan);
  }
  return fs;
}

unsigned long long default_horizon(const Ptg& g,
                                   unsigned long long threshold) {
  return 4 * threshold + 4 * g.locations.size();
}

}  // namespace ptg
