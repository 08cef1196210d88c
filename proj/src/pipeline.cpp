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

#include "ptg/pipeline.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "ptg/instant.hpp"
#include "ptg/log.hpp"

namespace ptg {

namespace {

std::string region_label(const RegionPtg::Region& r) {
  if (!r.open) return "[" + r.lo.str() + "]";
  return "(" + r.lo.str() + "," + r.hi.str() + ")";
}

}  // namespace

RegionPtg region_ptg(const Ptg& g) {
  RegionPtg rp;
  rp.game.clock_bound = g.clock_bound;

  std::set<Rat> eps{Rat(0), Rat(g.clock_bound)};
  for (const auto& t : g.transitions) {
    eps.insert(t.guard.lo);
    eps.insert(t.guard.hi);
  }
  rp.endpoints.assign(eps.begin(), eps.end());
  for (size_t i = 0; i < rp.endpoints.size(); ++i) {
    rp.regions.push_back({rp.endpoints[i], rp.endpoints[i], false});
    if (i + 1 < rp.endpoints.size())
      rp.regions.push_back({rp.endpoints[i], rp.endpoints[i + 1], true});
  }

  // Locations: one copy per (location, region).
  const int rc = static_cast<int>(rp.regions.size());
  std::vector<std::vector<int>> copy(g.locations.size(),
                                     std::vector<int>(rc, -1));
  for (size_t li = 0; li < g.locations.size(); ++li) {
    for (int ri = 0; ri < rc; ++ri) {
      Location l = g.locations[li];
      l.name += "@" + region_label(rp.regions[ri]);
      copy[li][ri] = static_cast<int>(rp.game.locations.size());
      rp.game.locations.push_back(std::move(l));
      rp.origin.push_back({static_cast<int>(li), ri});
    }
  }

  // Game transitions: a guard either covers a region or misses it, because
  // regions refine all guard endpoints. Parallel originals collapsing onto
  // one region transition keep the owner's best weight.
  struct Key {
    int src, dst;
    bool reset;
    bool operator<(const Key& o) const {
      return std::tie(src, dst, reset) < std::tie(o.src, o.dst, o.reset);
    }
  };
  std::map<Key, std::pair<long long, int>> best;  // weight, source index
  for (size_t ti = 0; ti < g.transitions.size(); ++ti) {
    const auto& t = g.transitions[ti];
    for (int ri = 0; ri < rc; ++ri) {
      const auto& reg = rp.regions[ri];
      bool covered;
      if (reg.open) {
        Rat mid = (reg.lo + reg.hi) / Rat(2);
        covered = t.guard.contains(mid);
      } else {
        covered = t.guard.contains(reg.lo);
      }
      if (!covered) continue;
      int src = copy[t.src][ri];
      int dst = t.reset ? copy[t.dst][0] : copy[t.dst][ri];
      Key k{src, dst, t.reset};
      auto it = best.find(k);
      bool take_max = g.locations[t.src].owner == Owner::Max;
      if (it == best.end() ||
          (take_max ? t.weight > it->second.first
                    : t.weight < it->second.first))
        best[k] = {t.weight, static_cast<int>(ti)};
    }
  }
  auto region_guard = [&](int loc) {
    const auto& reg = rp.regions[rp.origin[loc].region];
    return Guard{reg.lo, reg.hi, false, false};
  };
  for (const auto& [k, v] : best) {
    rp.game.transitions.push_back(
        Transition{k.src, region_guard(k.src), k.reset, k.dst, v.first});
    rp.wait_transition.push_back(false);
    rp.source_transition.push_back(v.second);
  }

  // Stitching: an open region reaches its right endpoint by waiting, and a
  // left endpoint enters the open region above it. A wait edge only exists
  // when some original guard of the location can still fire at or after the
  // entered position: in the source game waiting is always fused with a
  // transition, so a player cannot drift into a point where no move will
  // ever be enabled again.
  for (size_t li = 0; li < g.locations.size(); ++li) {
    if (g.locations[li].is_final()) continue;
    auto fires_at_or_after = [&](const Rat& x) {
      for (const auto& t : g.transitions) {
        if (t.src != static_cast<int>(li) || t.guard.is_empty()) continue;
        if (t.guard.hi > x || (t.guard.hi == x && !t.guard.hi_strict))
          return true;
      }
      return false;
    };
    auto fires_after = [&](const Rat& x) {
      for (const auto& t : g.transitions) {
        if (t.src != static_cast<int>(li) || t.guard.is_empty()) continue;
        if (t.guard.hi > x) return true;
      }
      return false;
    };
    for (int ri = 1; ri < rc; ri += 2) {  // open regions sit at odd indices
      const auto& reg = rp.regions[ri];
      int open_loc = copy[li][ri];
      int right_pt = copy[li][ri + 1];
      int left_pt = copy[li][ri - 1];
      if (fires_at_or_after(reg.hi)) {
        rp.game.transitions.push_back(
            Transition{open_loc, Guard{reg.hi, reg.hi, false, false}, false,
                       right_pt, 0});
        rp.wait_transition.push_back(true);
        rp.source_transition.push_back(-1);
      }
      if (fires_after(reg.lo)) {
        rp.game.transitions.push_back(
            Transition{left_pt, Guard{reg.lo, reg.lo, false, false}, false,
                       open_loc, 0});
        rp.wait_transition.push_back(true);
        rp.source_transition.push_back(-1);
      }
    }
  }
  return rp;
}

ValueBounds value_bounds(const Ptg& g) {
  GameConstants c = constants(g);
  std::set<Rat> eps{Rat(0), Rat(g.clock_bound)};
  for (const auto& t : g.transitions) {
    eps.insert(t.guard.lo);
    eps.insert(t.guard.hi);
  }
  Rat n(c.location_count);
  Rat k(static_cast<long long>(2 * eps.size() - 1));
  Rat m(g.clock_bound);
  Rat wl(c.max_rate), wt(c.max_transition_weight);
  ValueBounds b;
  b.v_sup = n * m * wl + n * k * wt + c.max_final_cost;
  b.v_inf = -(n * m * wl) - n * n * (n * k + k + Rat(1)) * wt -
            c.max_final_cost;
  return b;
}

ResetUnfolding unfold_nra(const Ptg& g, const Rat& kappa) {
  if (!(kappa > Rat(0)))
    throw std::invalid_argument("unfold_nra: kappa must be positive");
  ResetUnfolding u;
  u.bounds = value_bounds(g);
  Rat copies = Rat(2) * Rat(static_cast<long long>(g.locations.size())) *
               (u.bounds.v_sup - u.bounds.v_inf) / kappa;
  u.copies = static_cast<unsigned long long>(
      std::max<long long>(1, copies.ceil_ll()));

  u.reset_free = g;
  std::map<int, int> hop_for_target;
  for (size_t ti = 0; ti < g.transitions.size(); ++ti) {
    const auto& t = g.transitions[ti];
    if (!t.reset) continue;
    auto it = hop_for_target.find(t.dst);
    int hop;
    if (it == hop_for_target.end()) {
      Location f;
      f.name = g.locations[t.dst].name + "_entry";
      while (u.reset_free.location_index(f.name) >= 0) f.name += "'";
      f.owner = Owner::Final;
      f.final_cost = AffineFn{Rat(0), Rat(0)};  // bound per copy
      hop = static_cast<int>(u.reset_free.locations.size());
      u.reset_free.locations.push_back(std::move(f));
      hop_for_target[t.dst] = hop;
    } else {
      hop = it->second;
    }
    u.reset_free.transitions[ti].reset = false;
    u.reset_free.transitions[ti].dst = hop;
    u.hop_of_reset.push_back(hop);
    u.target_of_reset.push_back(t.dst);
  }
  return u;
}

// ---------------------------------------------------------------------------
// Piecewise helpers for the cycle-price analysis (finite functions only).

namespace {

CostFunction add_affine(const CostFunction& f, const AffineFn& a) {
  std::vector<CostFunction::Piece> ps;
  std::vector<ExtValue> vals;
  for (size_t i = 0; i < f.pieces().size(); ++i) {
    const auto& p = f.pieces()[i];
    ps.push_back(CostFunction::Piece::affine(
        AffineFn{p.fn.slope + a.slope, p.fn.intercept + a.intercept}));
  }
  for (size_t i = 0; i < f.cutpoints().size(); ++i)
    vals.push_back(
        ExtValue(f.point_values()[i].finite() + a.eval(f.cutpoints()[i])));
  std::vector<Rat> cuts = f.cutpoints();
  return CostFunction::from_parts(std::move(cuts), std::move(vals),
                                  std::move(ps));
}

// Running minimum (or maximum) from the left of a continuous finite
// function: g(x) = opt_{u <= x} f(u).
CostFunction running_extremum(const CostFunction& f, Extremum mode) {
  if (f.is_point()) return f;
  auto improves = [mode](const Rat& candidate, const Rat& level) {
    return mode == Extremum::Min ? candidate < level : candidate > level;
  };
  std::vector<std::pair<Rat, Rat>> samples;
  Rat level = f.point_values().front().finite();
  samples.push_back({f.lo(), level});
  for (size_t i = 0; i < f.pieces().size(); ++i) {
    const AffineFn& fn = f.pieces()[i].fn;
    const Rat& x1 = f.cutpoints()[i + 1];
    Rat v1 = fn.eval(x1);
    if (improves(v1, level)) {
      // The piece dips below (rises above) the running level somewhere.
      Rat v0 = fn.eval(f.cutpoints()[i]);
      if (improves(v0, level) || v0 == level) {
        // tracks f from the start of the piece
      } else {
        Rat cross = (level - fn.intercept) / fn.slope;
        if (cross > samples.back().first && cross < x1)
          samples.push_back({cross, level});
      }
      level = v1;
    }
    samples.push_back({x1, level});
  }
  std::vector<std::pair<Rat, Rat>> dedup;
  for (auto& s : samples)
    if (dedup.empty() || dedup.back().first < s.first) dedup.push_back(s);
  return CostFunction::interpolate(
      std::span<const std::pair<Rat, Rat>>(dedup));
}

CostFunction extend_right(const CostFunction& f, const Rat& hi) {
  if (hi <= f.hi()) return f;
  Rat last = f.point_values().back().finite();
  CostFunction tail =
      CostFunction::affine(f.hi(), hi, AffineFn{Rat(0), last});
  return concat_left(f, tail);
}

}  // namespace

// ---------------------------------------------------------------------------
// kappa-NRA membership check.

namespace {

struct CycleDp {
  // Best (min or max) accumulated price as a function of the current clock.
  CostFunction fn;
  bool feasible = true;
};

// One step: wait in src (rate, urgency), then fire an edge with closed guard
// [glo, ghi], weight w, possibly resetting.
CycleDp dp_step(const CycleDp& in, const Rat& rate, bool urgent,
                const Rat& glo, const Rat& ghi, long long w, bool reset,
                Extremum mode) {
  CycleDp out;
  if (!in.feasible) return {{}, false};
  CostFunction h;
  if (urgent) {
    Rat lo = max(in.fn.lo(), glo);
    Rat hi = min(in.fn.hi(), ghi);
    if (lo > hi) return {{}, false};
    h = in.fn.restrict(lo, hi);
  } else {
    Rat lo = max(in.fn.lo(), glo);
    if (lo > ghi) return {{}, false};
    CostFunction m = add_affine(in.fn, AffineFn{-rate, Rat(0)});
    CostFunction rm = running_extremum(m, mode);
    rm = extend_right(rm, ghi);
    h = add_affine(rm.restrict(lo, min(ghi, rm.hi())), AffineFn{rate, Rat(0)});
  }
  h = add_affine(h, AffineFn{Rat(0), Rat(w)});
  if (reset) {
    Rat v = (mode == Extremum::Min ? h.min_value() : h.max_value()).finite();
    out.fn = CostFunction::point(Rat(0), ExtValue(v));
  } else {
    out.fn = h;
  }
  out.feasible = true;
  return out;
}

struct CycleScan {
  const Ptg* game = nullptr;
  const RegionPtg* rp = nullptr;
  std::optional<Rat> kappa;  // absent: survey mode, find a usable bound
  size_t budget = 0;
  NraCheck result;

  bool exhausted() const { return budget == 0; }

  std::string cycle_desc(const std::vector<int>& path) const {
    std::ostringstream os;
    os << "cycle";
    for (int ei : path)
      os << ' ' << rp->game.locations[rp->game.transitions[ei].src].name
         << " ->";
    os << ' '
       << rp->game.locations[rp->game.transitions[path.back()].dst].name;
    return os.str();
  }

  // Narrows the usable kappa range given a cycle whose achievable prices
  // span [lo, hi]. `rigid` marks a single-point range known to be attained
  // by an actual play (not just a closure limit).
  void account(const Rat& lo, const Rat& hi, bool rigid,
               const std::string& what) {
    if (lo >= Rat(0)) return;  // never negative
    if (kappa) {
      // Membership fails iff some price lies strictly inside (-kappa, 0).
      if (lo < Rat(0) && hi > -*kappa) {
        if (lo < hi || rigid) {
          result.status = NraCheck::Status::Violation;
          result.detail = what + " achieves prices in [" + lo.str() + "," +
                          hi.str() + "] entering (-kappa, 0)";
        } else if (result.status == NraCheck::Status::Pass) {
          result.status = NraCheck::Status::Inconclusive;
          result.detail =
              "a cycle price limit point falls inside (-kappa, 0); unable "
              "to decide whether it is attained";
        }
      }
      return;
    }
    if (hi >= Rat(0)) {
      result.status = NraCheck::Status::Violation;
      result.detail = what +
                      " achieves negative prices arbitrarily close to 0; no "
                      "kappa works";
      return;
    }
    // Negative prices stop at hi < 0: any kappa <= -hi keeps them below.
    Rat bound = -hi;
    if (!result.kappa_bound || bound < *result.kappa_bound)
      result.kappa_bound = bound;
  }

  // Evaluates the price range of the cycle formed by `path` (edge indices).
  void classify(const std::vector<int>& path) {
    Rat lo, hi;
    for (int want_max = 0; want_max < 2; ++want_max) {
      Extremum mode = want_max ? Extremum::Max : Extremum::Min;
      CycleDp d{CostFunction::point(Rat(0), ExtValue(Rat(0))), true};
      for (int ei : path) {
        const Transition& t = rp->game.transitions[ei];
        const Location& src = rp->game.locations[t.src];
        d = dp_step(d, Rat(src.rate), src.urgent, t.guard.lo, t.guard.hi,
                    t.weight, t.reset, mode);
        if (!d.feasible) return;  // no play realizes this edge sequence
      }
      Rat v = (want_max ? d.fn.max_value() : d.fn.min_value()).finite();
      (want_max ? hi : lo) = v;
    }
    account(lo, hi, /*rigid=*/false, cycle_desc(path));
  }

  // Depth-first enumeration of simple paths back to `anchor`, every path
  // traversing at least one reset.
  void dfs(int anchor, int at, std::vector<int>& path,
           std::vector<bool>& seen, bool has_reset) {
    if (result.status == NraCheck::Status::Violation) return;
    if (budget == 0) return;
    --budget;
    for (size_t ei = 0; ei < rp->game.transitions.size(); ++ei) {
      const Transition& t = rp->game.transitions[ei];
      if (t.src != at) continue;
      path.push_back(static_cast<int>(ei));
      if (t.dst == anchor) {
        if (has_reset || t.reset) classify(path);
      } else if (!seen[t.dst] &&
                 !rp->game.locations[t.dst].is_final()) {
        seen[t.dst] = true;
        dfs(anchor, t.dst, path, seen, has_reset || t.reset);
        seen[t.dst] = false;
      }
      path.pop_back();
      if (result.status == NraCheck::Status::Violation) return;
    }
  }
};

}  // namespace

namespace {

NraCheck run_nra_scan(const Ptg& g, std::optional<Rat> kappa,
                      size_t cycle_cap) {
  RegionPtg rp = region_ptg(g);
  CycleScan scan;
  scan.game = &g;
  scan.rp = &rp;
  scan.kappa = std::move(kappa);
  scan.budget = cycle_cap;

  // Zero-clock discrete cycles (no time passes): simple cycles among the
  // clock-0 copies; each contributes the point price Sum of weights.
  {
    std::vector<int> zero_locs;
    for (size_t i = 0; i < rp.origin.size(); ++i)
      if (!rp.regions[rp.origin[i].region].open &&
          rp.regions[rp.origin[i].region].lo == Rat(0))
        zero_locs.push_back(static_cast<int>(i));
    // Only edges between clock-0 region copies: their presence certifies
    // the original guards admit firing at clock exactly 0.
    auto at_zero = [&](int loc) {
      const auto& reg = rp.regions[rp.origin[loc].region];
      return !reg.open && reg.lo == Rat(0);
    };
    std::vector<std::vector<std::pair<int, long long>>> zadj(
        rp.game.locations.size());
    for (const auto& t : rp.game.transitions)
      if (at_zero(t.src) && at_zero(t.dst))
        zadj[t.src].push_back({t.dst, t.weight});
    for (int a : zero_locs) {
      std::vector<bool> seen(rp.game.locations.size(), false);
      struct Frame {
        int at;
        size_t ei;
        long long sum;
      };
      std::vector<Frame> stack{{a, 0, 0}};
      seen[a] = true;
      while (!stack.empty() && scan.budget > 0) {
        Frame& fr = stack.back();
        if (fr.ei >= zadj[fr.at].size()) {
          seen[fr.at] = false;
          stack.pop_back();
          continue;
        }
        auto [dst, wgt] = zadj[fr.at][fr.ei++];
        --scan.budget;
        long long total = fr.sum + wgt;
        if (dst == a) {
          scan.account(Rat(total), Rat(total), /*rigid=*/true,
                       "a zero-delay cycle through '" +
                           rp.game.locations[a].name + "' (weight " +
                           std::to_string(total) + ")");
          if (scan.result.status == NraCheck::Status::Violation)
            return scan.result;
        } else if (!seen[dst] && !rp.game.locations[dst].is_final()) {
          seen[dst] = true;
          stack.push_back({dst, 0, total});
        }
      }
    }
  }

  // Anchors: region-game locations living at clock 0 that some reset jumps
  // to, i.e. copies over the region {0}.
  std::set<int> anchors;
  for (const auto& t : rp.game.transitions)
    if (t.reset) anchors.insert(t.dst);
  for (int a : anchors) {
    std::vector<int> path;
    std::vector<bool> seen(rp.game.locations.size(), false);
    seen[a] = true;
    scan.dfs(a, a, path, seen, false);
    if (scan.result.status == NraCheck::Status::Violation) return scan.result;
  }
  if (scan.exhausted() && scan.result.status == NraCheck::Status::Pass) {
    scan.result.status = NraCheck::Status::Inconclusive;
    scan.result.detail = "cycle enumeration budget exhausted";
  }
  return scan.result;
}

}  // namespace

NraCheck check_nra(const Ptg& g, const Rat& kappa, size_t cycle_cap) {
  if (!(kappa > Rat(0)))
    throw std::invalid_argument("check_nra: kappa must be positive");
  return run_nra_scan(g, kappa, cycle_cap);
}

NraCheck check_nra_any(const Ptg& g, size_t cycle_cap) {
  return run_nra_scan(g, std::nullopt, cycle_cap);
}

// ---------------------------------------------------------------------------
// Reset-free region solving.

namespace {

// External value plugged into a point game: finite values become fresh
// finals, +inf a deadlocked sink, -inf a descent gadget (weight -1 self-loop
// with a free exit).
struct ExternalPlug {
  int node = -1;  // node index the edge should target
};

struct PointGameBuilder {
  InstantGame game;
  std::vector<int> gadget;  // lazily built -inf gadget nodes

  int add_final(const Rat& value) {
    game.locs.push_back({Owner::Final, AffineFn{Rat(0), value}});
    game.out.push_back({});
    return game.n() - 1;
  }
  int add_sink() {
    game.locs.push_back({Owner::Min, {}});
    game.out.push_back({});
    return game.n() - 1;
  }
  int add_descent() {
    int final_exit = add_final(Rat(0));
    game.locs.push_back({Owner::Min, {}});
    game.out.push_back({});
    int loop = game.n() - 1;
    game.out[loop].push_back({loop, -1});
    game.out[loop].push_back({final_exit, 0});
    return loop;
  }
  int plug(const ExtValue& v) {
    if (v.is_finite()) return add_final(v.finite());
    if (v.is_pos_inf()) return add_sink();
    return add_descent();
  }
};

}  // namespace

namespace {

struct RegionSolveInput {
  const RegionPtg* rp;
  // Per region-game transition: if >= 0, the transition is a reset hop and
  // this is the index into entry_values.
  std::vector<int> hop_slot;
  std::vector<ExtValue> entry_values;  // per slot
};

// Solves the (hop-substituted) reset-free region game right to left.
// Returns per region-game location its value function on the closure of its
// region.
std::vector<CostFunction> solve_regions(const RegionSolveInput& in,
                                        const SolveOptions& opts) {
  const RegionPtg& rp = *in.rp;
  const int nloc = static_cast<int>(rp.game.locations.size());
  const int rc = static_cast<int>(rp.regions.size());
  std::vector<CostFunction> out(nloc);

  // Locations of each region, in region-major order for stable indexing.
  std::vector<std::vector<int>> members(rc);
  for (int i = 0; i < nloc; ++i) members[rp.origin[i].region].push_back(i);

  // Edges grouped by source (excluding wait transitions, handled apart).
  std::vector<std::vector<int>> out_edges(nloc);
  std::vector<int> wait_up(nloc, -1);    // open loc -> right singleton copy
  std::vector<int> wait_into(nloc, -1);  // singleton -> open copy above
  for (size_t ti = 0; ti < rp.game.transitions.size(); ++ti) {
    const auto& t = rp.game.transitions[ti];
    if (rp.wait_transition[ti]) {
      if (rp.regions[rp.origin[t.src].region].open)
        wait_up[t.src] = t.dst;
      else
        wait_into[t.src] = t.dst;
      continue;
    }
    out_edges[t.src].push_back(static_cast<int>(ti));
  }

  auto hop_value = [&](int ti) -> const ExtValue& {
    return in.entry_values[in.hop_slot[ti]];
  };

  // Point game over the members of a singleton region at clock x; external
  // targets (wait hop into the open region above, reset hops) enter as
  // plugged constants.
  auto solve_point_region = [&](int ri, const Rat& x,
                                const std::vector<ExtValue>& open_above)
      -> std::vector<ExtValue> {
    PointGameBuilder b;
    b.game.domain_lo = x;
    b.game.domain_hi = x;
    std::map<int, int> node_of;  // region-game loc -> point game node
    const auto& mem = members[ri];
    for (int li : mem) {
      const Location& l = rp.game.locations[li];
      InstantGame::Loc il;
      il.owner = l.owner;
      if (l.final_cost) il.final_cost = *l.final_cost;
      node_of[li] = b.game.n();
      b.game.locs.push_back(il);
      b.game.out.push_back({});
    }
    for (size_t k = 0; k < mem.size(); ++k) {
      int li = mem[k];
      for (int ti : out_edges[li]) {
        const auto& t = rp.game.transitions[ti];
        if (!t.guard.contains(x)) continue;
        int dst;
        if (in.hop_slot[ti] >= 0) {
          dst = b.plug(hop_value(ti));
        } else {
          auto itn = node_of.find(t.dst);
          if (itn == node_of.end()) continue;  // unreachable cross-region
          dst = itn->second;
        }
        b.game.out[k].push_back({dst, t.weight});
      }
      if (wait_into[li] >= 0 && !open_above.empty()) {
        // entering the open region above at clock x
        size_t pos = 0;
        const auto& up_mem = members[rp.origin[wait_into[li]].region];
        for (; pos < up_mem.size(); ++pos)
          if (up_mem[pos] == wait_into[li]) break;
        int node = b.plug(open_above[pos]);  // grows b.game.out
        b.game.out[k].push_back({node, 0});
      }
    }
    InstantValues iv = solve_instant(b.game, x);
    std::vector<ExtValue> vals;
    for (size_t k = 0; k < mem.size(); ++k) vals.push_back(iv.values[k]);
    return vals;
  };

  // Open region between e_lo and e_hi: anchored sweep on survivors.
  auto solve_open_region = [&](int ri, const std::vector<ExtValue>& right_pt)
      -> std::vector<CostFunction> {
    const auto& reg = rp.regions[ri];
    const auto& mem = members[ri];
    const Rat L = reg.hi - reg.lo;

    // Anchor game at clock e_hi: members plus the wait hop to the right
    // singleton (already solved) and reset hops.
    PointGameBuilder b;
    b.game.domain_lo = reg.hi;
    b.game.domain_hi = reg.hi;
    std::map<int, int> node_of;
    for (int li : mem) {
      const Location& l = rp.game.locations[li];
      InstantGame::Loc il;
      il.owner = l.owner;
      if (l.final_cost) il.final_cost = *l.final_cost;
      node_of[li] = b.game.n();
      b.game.locs.push_back(il);
      b.game.out.push_back({});
    }
    for (size_t k = 0; k < mem.size(); ++k) {
      int li = mem[k];
      for (int ti : out_edges[li]) {
        const auto& t = rp.game.transitions[ti];
        int dst;
        if (in.hop_slot[ti] >= 0) {
          dst = b.plug(hop_value(ti));
        } else {
          auto itn = node_of.find(t.dst);
          if (itn == node_of.end()) continue;
          dst = itn->second;
        }
        b.game.out[k].push_back({dst, t.weight});
      }
      if (wait_up[li] >= 0) {
        const auto& rt_mem = members[rp.origin[wait_up[li]].region];
        size_t pos = 0;
        for (; pos < rt_mem.size(); ++pos)
          if (rt_mem[pos] == wait_up[li]) break;
        int node = b.plug(right_pt[pos]);  // grows b.game.out
        b.game.out[k].push_back({node, 0});
      }
    }
    InstantValues anchor = solve_instant(b.game, reg.hi);

    // Survivors get an anchored window sweep on the rescaled unit interval.
    std::vector<int> core_of(mem.size(), -1);
    CoreGame core;
    core.r = Rat(1);
    std::vector<Rat> anchor_vals;
    for (size_t k = 0; k < mem.size(); ++k) {
      if (!anchor.values[k].is_finite()) continue;
      const Location& l = rp.game.locations[mem[k]];
      CoreGame::Loc cl;
      cl.name = l.name;
      cl.owner = l.owner;
      cl.rate = Rat(l.rate) * L;
      cl.urgent = l.urgent;
      if (l.final_cost)
        cl.final_cost = AffineFn{l.final_cost->slope * L,
                                 l.final_cost->slope * reg.lo +
                                     l.final_cost->intercept};
      core_of[k] = core.n();
      core.locs.push_back(std::move(cl));
      anchor_vals.push_back(anchor.values[k].finite());
    }
    core.out.assign(core.n(), {});
    int hop_count = 0;
    for (size_t k = 0; k < mem.size(); ++k) {
      if (core_of[k] < 0) continue;
      int li = mem[k];
      for (int ti : out_edges[li]) {
        const auto& t = rp.game.transitions[ti];
        if (in.hop_slot[ti] >= 0) {
          const ExtValue& hv = hop_value(ti);
          if (!hv.is_finite()) continue;  // pruned with its source or useless
          CoreGame::Loc hf;
          hf.name = "hop" + std::to_string(hop_count++);
          hf.owner = Owner::Final;
          hf.final_cost = AffineFn{Rat(0), hv.finite()};
          int hidx = core.n();
          core.locs.push_back(std::move(hf));
          core.out.push_back({});
          anchor_vals.push_back(hv.finite());
          core.out[core_of[k]].push_back({hidx, t.weight, -1});
          continue;
        }
        // same-region target
        size_t pos = 0;
        const auto& mm = mem;
        for (; pos < mm.size(); ++pos)
          if (mm[pos] == t.dst) break;
        if (pos == mm.size() || core_of[pos] < 0) continue;
        core.out[core_of[k]].push_back({core_of[pos], t.weight, -1});
      }
    }

    std::vector<CostFunction> fns(mem.size());
    std::vector<CostFunction> core_fns;
    if (core.n() > 0) {
      SolveOptions o = opts;
      o.with_strategies = false;
      CoreResult cr = solve_core(core, o, anchor_vals);
      core_fns = std::move(cr.values);
    }
    for (size_t k = 0; k < mem.size(); ++k) {
      if (core_of[k] >= 0) {
        fns[k] = core_fns[core_of[k]].rescale_domain(reg.lo, reg.hi);
      } else {
        fns[k] = CostFunction::constant(reg.lo, reg.hi, anchor.values[k]);
      }
    }
    return fns;
  };

  // Right-to-left: singleton {e_K}, open (e_{K-1}, e_K), singleton
  // {e_{K-1}}, ...
  std::vector<ExtValue> last_singleton;  // values at the singleton just right
  for (int ri = rc - 1; ri >= 0; --ri) {
    if (rp.regions[ri].open) {
      std::vector<CostFunction> fns = solve_open_region(ri, last_singleton);
      for (size_t k = 0; k < members[ri].size(); ++k)
        out[members[ri][k]] = std::move(fns[k]);
    } else {
      std::vector<ExtValue> open_above;
      if (ri + 1 < rc) {
        for (int li : members[ri + 1])
          open_above.push_back(out[li].evaluate(rp.regions[ri].lo));
      }
      std::vector<ExtValue> vals =
          solve_point_region(ri, rp.regions[ri].lo, open_above);
      for (size_t k = 0; k < members[ri].size(); ++k)
        out[members[ri][k]] =
            CostFunction::point(rp.regions[ri].lo, vals[k]);
      last_singleton = std::move(vals);
    }
  }
  return out;
}

// Assembles per-source-location functions on [0, M] from region pieces,
// with explicit (possibly discontinuous) point values at region borders.
std::vector<CostFunction> assemble_over_clock(
    const RegionPtg& rp, const std::vector<CostFunction>& region_values,
    size_t source_count) {
  std::vector<CostFunction> out(source_count);
  const int rc = static_cast<int>(rp.regions.size());
  std::vector<std::vector<int>> of_source(source_count);
  for (size_t i = 0; i < rp.origin.size(); ++i)
    of_source[rp.origin[i].source].push_back(static_cast<int>(i));
  for (size_t s = 0; s < source_count; ++s) {
    std::vector<int> by_region(rc, -1);
    for (int li : of_source[s]) by_region[rp.origin[li].region] = li;
    std::vector<Rat> cuts;
    std::vector<ExtValue> vals;
    std::vector<CostFunction::Piece> pieces;
    for (int ri = 0; ri < rc; ++ri) {
      const CostFunction& f = region_values[by_region[ri]];
      if (!rp.regions[ri].open) {
        cuts.push_back(rp.regions[ri].lo);
        vals.push_back(f.evaluate(rp.regions[ri].lo));
      } else {
        // interior cutpoints and pieces of the open region
        for (size_t k = 0; k + 1 < f.cutpoints().size(); ++k) {
          if (k > 0) {
            cuts.push_back(f.cutpoints()[k]);
            vals.push_back(f.point_values()[k]);
          }
          pieces.push_back(f.pieces()[k]);
        }
        if (f.is_point())
          throw solver_error("assemble_over_clock: degenerate open region");
      }
    }
    out[s] = CostFunction::from_parts(std::move(cuts), std::move(vals),
                                      std::move(pieces));
  }
  return out;
}

RegionSolveInput make_input(const RegionPtg& rp) {
  RegionSolveInput in;
  in.rp = &rp;
  in.hop_slot.assign(rp.game.transitions.size(), -1);
  std::map<int, int> slot_of_target;
  for (size_t ti = 0; ti < rp.game.transitions.size(); ++ti) {
    const auto& t = rp.game.transitions[ti];
    if (!t.reset) continue;
    auto it = slot_of_target.find(t.dst);
    if (it == slot_of_target.end()) {
      int slot = static_cast<int>(in.entry_values.size());
      slot_of_target[t.dst] = slot;
      in.entry_values.push_back(ExtValue::pos_inf());
      in.hop_slot[ti] = slot;
    } else {
      in.hop_slot[ti] = it->second;
    }
  }
  return in;
}

// Entry targets in slot order, for diagnostics.
std::vector<int> slot_targets(const RegionPtg& rp,
                              const RegionSolveInput& in) {
  std::vector<int> targets(in.entry_values.size(), -1);
  for (size_t ti = 0; ti < rp.game.transitions.size(); ++ti)
    if (in.hop_slot[ti] >= 0)
      targets[in.hop_slot[ti]] = rp.game.transitions[ti].dst;
  return targets;
}

PtgValueResult iterate_copies(const Ptg& g, RegionPtg rp,
                              unsigned long long copies,
                              const Rat* divergence_floor,
                              const SolveOptions& opts) {
  PtgValueResult res;
  RegionSolveInput in = make_input(rp);
  std::vector<int> targets = slot_targets(rp, in);
  std::vector<CostFunction> region_values;

  res.stabilized = in.entry_values.empty();
  for (unsigned long long c = 0; c < std::max<unsigned long long>(copies, 1);
       ++c) {
    region_values = solve_regions(in, opts);
    res.copies_used = c + 1;
    if (in.entry_values.empty()) break;
    std::vector<ExtValue> next;
    for (int tgt : targets)
      next.push_back(region_values[tgt].evaluate(Rat(0)));
    if (next == in.entry_values) {
      res.stabilized = true;
      break;
    }
    in.entry_values = std::move(next);
    res.stabilized = false;
  }

  if (!res.stabilized) {
    // Entries still descending after the budget descend forever: pin them
    // to -inf and propagate until no further entry falls (divergence can
    // cascade through reset chains).
    auto pin = [&](size_t s) {
      if (in.entry_values[s].is_neg_inf()) return false;
      in.entry_values[s] = ExtValue::neg_inf();
      res.divergent.push_back(rp.game.locations[targets[s]].name);
      return true;
    };
    bool repaired = false;
    for (size_t s = 0; s < in.entry_values.size(); ++s) {
      bool diverges =
          divergence_floor == nullptr ||
          (in.entry_values[s].is_finite() &&
           in.entry_values[s].finite() < *divergence_floor) ||
          in.entry_values[s].is_neg_inf();
      if (diverges && !in.entry_values[s].is_pos_inf()) repaired |= pin(s);
    }
    while (repaired) {
      region_values = solve_regions(in, opts);
      res.copies_used += 1;
      repaired = false;
      for (size_t s = 0; s < in.entry_values.size(); ++s) {
        ExtValue v = region_values[targets[s]].evaluate(Rat(0));
        bool diverges = v.is_neg_inf() ||
                        (divergence_floor != nullptr && v.is_finite() &&
                         v.finite() < *divergence_floor);
        if (diverges) repaired |= pin(s);
      }
    }
  }

  res.values = assemble_over_clock(rp, region_values, g.locations.size());
  res.region_values = std::move(region_values);
  res.region = std::move(rp);
  return res;
}

}  // namespace

PtgValueResult reset_acyclic_solve(const Ptg& g, const SolveOptions& opts) {
  RegionPtg rp = region_ptg(g);

  // No cycle may pass through a reset: Tarjan components of the region
  // graph must not contain a reset edge inside one component.
  {
    const int n = static_cast<int>(rp.game.locations.size());
    std::vector<int> comp(n, -1), low(n, 0), num(n, -1), stk;
    int counter = 0, comps = 0;
    std::vector<std::vector<int>> adj(n);
    for (const auto& t : rp.game.transitions) adj[t.src].push_back(t.dst);
    std::vector<std::tuple<int, size_t>> call;
    std::vector<bool> on_stack(n, false);
    for (int s = 0; s < n; ++s) {
      if (num[s] >= 0) continue;
      call.push_back({s, 0});
      while (!call.empty()) {
        auto& [v, ei] = call.back();
        if (ei == 0) {
          num[v] = low[v] = counter++;
          stk.push_back(v);
          on_stack[v] = true;
        }
        if (ei < adj[v].size()) {
          int w = adj[v][ei++];
          if (num[w] < 0)
            call.push_back({w, 0});
          else if (on_stack[w])
            low[v] = std::min(low[v], num[w]);
        } else {
          if (low[v] == num[v]) {
            while (true) {
              int w = stk.back();
              stk.pop_back();
              on_stack[w] = false;
              comp[w] = comps;
              if (w == v) break;
            }
            ++comps;
          }
          int vv = v;
          call.pop_back();
          if (!call.empty()) {
            int parent = std::get<0>(call.back());
            low[parent] = std::min(low[parent], low[vv]);
          }
        }
      }
    }
    for (const auto& t : rp.game.transitions) {
      if (t.reset && comp[t.src] == comp[t.dst])
        throw std::invalid_argument(
            "reset_acyclic_solve: reset on a cycle through '" +
            rp.game.locations[t.src].name + "' -> '" +
            rp.game.locations[t.dst].name + "'");
    }
  }

  size_t resets = 0;
  for (const auto& t : rp.game.transitions)
    if (t.reset) ++resets;
  PtgValueResult res =
      iterate_copies(g, std::move(rp), resets + 2, nullptr, opts);
  if (!res.stabilized)
    throw solver_error(
        "reset_acyclic_solve: entry values did not stabilize on a "
        "reset-acyclic game; this is a bug");
  return res;
}

PtgValueResult solve_nra(const Ptg& g, const Rat& kappa, bool assert_nra,
                         const SolveOptions& opts,
                         unsigned long long extra_copies) {
  if (!assert_nra) {
    NraCheck chk = check_nra(g, kappa);
    if (chk.status == NraCheck::Status::Violation)
      throw std::invalid_argument("solve_nra: not a kappa-NRA game: " +
                                  chk.detail);
    if (chk.status == NraCheck::Status::Inconclusive)
      throw std::invalid_argument(
          "solve_nra: kappa-NRA membership inconclusive (" + chk.detail +
          "); pass the assertion flag to proceed");
  }
  ResetUnfolding u = unfold_nra(g, kappa);
  RegionPtg rp = region_ptg(g);
  Rat floor = u.bounds.v_inf;
  return iterate_copies(g, std::move(rp), u.copies + extra_copies, &floor,
                        opts);
}

}  // namespace ptg
