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

#include "ptg/instant.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace ptg {

long long InstantGame::max_transition_weight() const {
  long long w = 0;
  for (const auto& es : out)
    for (const auto& e : es) w = std::max(w, std::abs(e.weight));
  return w;
}

Rat InstantGame::max_final_cost() const {
  Rat w(0);
  for (const auto& l : locs)
    if (l.owner == Owner::Final)
      w = max(w, max(l.final_cost.eval(domain_lo).abs(),
                     l.final_cost.eval(domain_hi).abs()));
  return w;
}

Rat InstantGame::minus_inf_cutoff() const {
  return Rat(-(n() - 1)) * Rat(max_transition_weight()) - max_final_cost();
}

unsigned long long InstantGame::iteration_bound() const {
  unsigned long long finals = 0;
  for (const auto& l : locs)
    if (l.owner == Owner::Final) ++finals;
  unsigned long long nn = static_cast<unsigned long long>(n());
  unsigned long long wt =
      static_cast<unsigned long long>(max_transition_weight());
  unsigned long long wfin =
      static_cast<unsigned long long>(max(max_final_cost(), Rat(0)).ceil_ll());
  return finals * nn * (2 * (nn - 1) * wt + 2 * wfin + 1) + nn;
}

namespace {

InstantGame build(const Sptg& s, bool require_urgent) {
  InstantGame g;
  g.domain_lo = Rat(0);
  g.domain_hi = s.right_endpoint;
  g.locs.reserve(s.game.locations.size());
  for (const auto& l : s.game.locations) {
    if (require_urgent && !l.is_final() && !l.urgent)
      throw std::invalid_argument("solve_instant: location '" + l.name +
                                  "' is not urgent");
    InstantGame::Loc il;
    il.owner = l.owner;
    if (l.final_cost) il.final_cost = *l.final_cost;
    g.locs.push_back(il);
  }
  g.out.assign(g.locs.size(), {});
  for (const auto& t : s.game.transitions)
    g.out[t.src].push_back({t.dst, t.weight});
  return g;
}

}  // namespace

InstantGame InstantGame::from_urgent_sptg(const Sptg& s) {
  return build(s, /*require_urgent=*/true);
}

InstantGame InstantGame::all_urgent(const Sptg& s) { return build(s, false); }

InstantValues solve_instant(const InstantGame& g, const Rat& nu) {
  if (nu < g.domain_lo || nu > g.domain_hi)
    throw std::domain_error("solve_instant: clock value outside [lo, hi]");

  const int n = g.n();
  const ExtValue cutoff(g.minus_inf_cutoff());
  const unsigned long long bound = g.iteration_bound();

  InstantValues r;
  r.values.assign(n, ExtValue::pos_inf());
  r.settled_round.assign(n, 0);
  for (int i = 0; i < n; ++i)
    if (g.locs[i].owner == Owner::Final)
      r.values[i] = ExtValue(g.locs[i].final_cost.eval(nu));

  std::vector<ExtValue> prev(n);
  bool changed = true;
  while (changed) {
    ++r.iterations;
    prev = r.values;
    changed = false;
    for (int i = 0; i < n; ++i) {
      const Owner o = g.locs[i].owner;
      if (o == Owner::Final) continue;
      // A location without moves is a deadlock: the play never completes.
      ExtValue best = ExtValue::pos_inf();
      bool first = true;
      for (const auto& e : g.out[i]) {
        ExtValue v = prev[e.dst] + Rat(e.weight);
        if (first)
          best = v;
        else
          best = (o == Owner::Max) ? max(best, v) : min(best, v);
        first = false;
      }
      if (best < cutoff) best = ExtValue::neg_inf();
      if (best != r.values[i]) {
        r.values[i] = best;
        r.settled_round[i] = r.iterations;
        changed = true;
      }
    }
    if (r.iterations > bound + 1)
      throw solver_error(
          "solve_instant: exceeded the stabilization bound; this is a bug");
  }
  return r;
}

InstantValues solve_instant(const Sptg& s, const Rat& nu) {
  return solve_instant(InstantGame::from_urgent_sptg(s), nu);
}

namespace {

// Backward reachability: rank 0 at finals; a Min location enters the
// attractor when one successor is in, a Max location when all are.
std::vector<long long> attractor_ranks(const InstantGame& g) {
  const int n = g.n();
  std::vector<long long> rank(n, -1);
  std::vector<int> pending(n, 0);
  std::vector<std::vector<int>> preds(n);
  for (int i = 0; i < n; ++i) {
    pending[i] = static_cast<int>(g.out[i].size());
    for (const auto& e : g.out[i]) preds[e.dst].push_back(i);
  }
  std::deque<int> queue;
  for (int i = 0; i < n; ++i)
    if (g.locs[i].owner == Owner::Final) {
      rank[i] = 0;
      queue.push_back(i);
    }
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int p : preds[v]) {
      if (rank[p] >= 0 || g.locs[p].owner == Owner::Final) continue;
      if (g.locs[p].owner == Owner::Min) {
        rank[p] = rank[v] + 1;
        queue.push_back(p);
      } else if (--pending[p] == 0) {
        long long worst = 0;
        for (const auto& e : g.out[p]) worst = std::max(worst, rank[e.dst]);
        rank[p] = worst + 1;
        queue.push_back(p);
      }
    }
  }
  return rank;
}

}  // namespace

InstantStrategies extract_instant_strategies(const InstantGame& g,
                                             const Rat& nu,
                                             const InstantValues& vals) {
  const int n = g.n();
  if (static_cast<int>(vals.values.size()) != n)
    throw std::invalid_argument("extract_instant_strategies: size mismatch");

  // The input must be the fixed point: one more operator application must
  // not change anything.
  const ExtValue cutoff(g.minus_inf_cutoff());
  for (int i = 0; i < n; ++i) {
    const Owner o = g.locs[i].owner;
    ExtValue expect = ExtValue::pos_inf();
    if (o == Owner::Final) {
      expect = ExtValue(g.locs[i].final_cost.eval(nu));
    } else {
      bool first = true;
      for (const auto& e : g.out[i]) {
        ExtValue v = vals.values[e.dst] + Rat(e.weight);
        expect = first ? v : (o == Owner::Max ? max(expect, v) : min(expect, v));
        first = false;
      }
      if (expect < cutoff || expect.is_neg_inf())
        expect = ExtValue::neg_inf();
    }
    if (expect != vals.values[i])
      throw std::invalid_argument(
          "extract_instant_strategies: values are not a fixed point");
  }

  InstantStrategies s;
  s.max_choice.assign(n, -1);
  s.min_primary.assign(n, -1);
  s.min_parametric.assign(n, false);
  s.min_attractor.assign(n, -1);
  s.attractor_rank = attractor_ranks(g);

  for (int i = 0; i < n; ++i) {
    const auto& edges = g.out[i];
    if (g.locs[i].owner == Owner::Max) {
      for (size_t k = 0; k < edges.size(); ++k) {
        ExtValue v = vals.values[edges[k].dst] + Rat(edges[k].weight);
        if (s.max_choice[i] < 0 ||
            v > vals.values[edges[s.max_choice[i]].dst] +
                    Rat(edges[s.max_choice[i]].weight))
          s.max_choice[i] = static_cast<int>(k);
      }
    } else if (g.locs[i].owner == Owner::Min) {
      if (vals.values[i].is_pos_inf()) continue;
      if (vals.values[i].is_neg_inf()) {
        // Parametric family: descend into the -inf region.
        for (size_t k = 0; k < edges.size(); ++k)
          if (vals.values[edges[k].dst].is_neg_inf()) {
            s.min_primary[i] = static_cast<int>(k);
            s.min_parametric[i] = true;
            break;
          }
        continue;
      }
      // Among value-optimal successors, prefer the one whose value settled
      // earliest, then the smallest attractor rank, then the lowest index.
      auto better = [&](size_t a, size_t b) {
        auto key = [&](size_t k) {
          int dst = edges[k].dst;
          long long rk = s.attractor_rank[dst] < 0
                             ? std::numeric_limits<long long>::max()
                             : s.attractor_rank[dst];
          return std::tuple<unsigned long long, long long, size_t>(
              vals.settled_round[dst], rk, k);
        };
        return key(a) < key(b);
      };
      for (size_t k = 0; k < edges.size(); ++k) {
        ExtValue v = vals.values[edges[k].dst] + Rat(edges[k].weight);
        if (v != vals.values[i]) continue;
        if (s.min_primary[i] < 0 ||
            better(k, static_cast<size_t>(s.min_primary[i])))
          s.min_primary[i] = static_cast<int>(k);
      }
    }
    // Attractor move, owner-independent storage but used for Min.
    if (g.locs[i].owner == Owner::Min && s.attractor_rank[i] > 0) {
      for (size_t k = 0; k < edges.size(); ++k) {
        long long rk = s.attractor_rank[edges[k].dst];
        if (rk >= 0 && rk == s.attractor_rank[i] - 1) {
          s.min_attractor[i] = static_cast<int>(k);
          break;
        }
      }
    }
  }

  // Switch threshold K with one strategy interval and no time component
  // (urgent game): K = n * (2*1*n*W_T + 3*1 + n_param).
  Rat min_finite(0);
  bool any_finite = false;
  for (const auto& v : vals.values)
    if (v.is_finite()) {
      min_finite = any_finite ? min(min_finite, v.finite()) : v.finite();
      any_finite = true;
    }
  Rat n_param = Rat(1) + max(Rat(0), -min_finite);
  Rat k = Rat(n) * (Rat(2) * Rat(n) * Rat(g.max_transition_weight()) +
                    Rat(3) + n_param);
  s.switch_threshold = static_cast<unsigned long long>(
      std::max<long long>(0, k.ceil_ll()));
  return s;
}

}  // namespace ptg
