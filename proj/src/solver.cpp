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

#include "ptg/solver.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "ptg/log.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ptg {

namespace {

unsigned long long sat_mul(unsigned long long a, unsigned long long b) {
  if (a != 0 && b > std::numeric_limits<unsigned long long>::max() / a)
    return std::numeric_limits<unsigned long long>::max();
  return a * b;
}

unsigned long long sat_add(unsigned long long a, unsigned long long b) {
  unsigned long long s = a + b;
  return s < a ? std::numeric_limits<unsigned long long>::max() : s;
}

std::vector<Rat> to_finite(const std::vector<ExtValue>& vs,
                           const char* what) {
  std::vector<Rat> out;
  out.reserve(vs.size());
  for (const auto& v : vs) {
    if (!v.is_finite())
      throw solver_error(std::string("solve_core: infinite value in ") +
                         what + "; prune the game first");
    out.push_back(v.finite());
  }
  return out;
}

}  // namespace

size_t FpStrategy::interval_count() const {
  std::set<Rat> pts;
  for (const auto& p : plans)
    for (const auto& x : p.points) pts.insert(x);
  if (pts.empty()) return 1;
  return 2 * pts.size() - 1;
}

CoreGame CoreGame::from(const Sptg& s) {
  CoreGame g;
  g.r = s.right_endpoint;
  g.locs.reserve(s.game.locations.size());
  for (const auto& l : s.game.locations) {
    Loc cl;
    cl.name = l.name;
    cl.owner = l.owner;
    cl.rate = Rat(l.rate);
    cl.urgent = l.urgent;
    cl.final_cost = l.final_cost;
    g.locs.push_back(std::move(cl));
  }
  g.out.assign(g.locs.size(), {});
  for (size_t i = 0; i < s.game.transitions.size(); ++i) {
    const auto& t = s.game.transitions[i];
    g.out[t.src].push_back({t.dst, t.weight, static_cast<int>(i)});
  }
  return g;
}

PruneResult prune_infinite(const Sptg& s) {
  InstantValues iv =
      solve_instant(InstantGame::all_urgent(s), s.right_endpoint);
  PruneResult pr;
  pr.verdict = iv.values;
  pr.old_to_new.assign(s.game.locations.size(), -1);
  pr.pruned.right_endpoint = s.right_endpoint;
  pr.pruned.game.clock_bound = s.game.clock_bound;
  for (size_t i = 0; i < s.game.locations.size(); ++i) {
    if (iv.values[i].is_finite()) {
      pr.old_to_new[i] = static_cast<int>(pr.pruned.game.locations.size());
      pr.pruned.game.locations.push_back(s.game.locations[i]);
    } else {
      pr.removed.push_back(s.game.locations[i].name);
    }
  }
  for (size_t ti = 0; ti < s.game.transitions.size(); ++ti) {
    const auto& t = s.game.transitions[ti];
    if (pr.old_to_new[t.src] < 0 || pr.old_to_new[t.dst] < 0) continue;
    Transition nt = t;
    nt.src = pr.old_to_new[t.src];
    nt.dst = pr.old_to_new[t.dst];
    pr.pruned.game.transitions.push_back(nt);
    pr.transition_old_index.push_back(static_cast<int>(ti));
  }
  return pr;
}

Sptg waiting(const Sptg& s, const Rat& r, const std::vector<Rat>& x) {
  if (!(r > Rat(0)) || r > s.right_endpoint)
    throw std::invalid_argument("waiting: r must lie in (0, right endpoint]");
  if (x.size() != s.game.locations.size())
    throw std::invalid_argument("waiting: x must be indexed by location");
  Sptg w;
  w.right_endpoint = r;
  w.game.clock_bound = s.game.clock_bound;
  w.game.locations = s.game.locations;
  std::set<std::string> names;
  for (const auto& l : w.game.locations) names.insert(l.name);
  Guard guard{Rat(0), r, false, false};
  w.game.transitions = s.game.transitions;
  for (auto& t : w.game.transitions) t.guard = guard;
  for (size_t i = 0; i < s.game.locations.size(); ++i) {
    const auto& l = s.game.locations[i];
    if (l.is_final() || l.urgent) continue;
    std::string name = l.name + "_stop";
    while (!names.insert(name).second) name += "'";
    Location clone;
    clone.name = name;
    clone.owner = Owner::Final;
    // phi(nu) = (r - nu) * rate + x_i
    clone.final_cost = AffineFn{Rat(-l.rate), r * Rat(l.rate) + x[i]};
    int clone_idx = static_cast<int>(w.game.locations.size());
    w.game.locations.push_back(std::move(clone));
    w.game.transitions.push_back(
        Transition{static_cast<int>(i), guard, false, clone_idx, 0});
  }
  return w;
}

namespace {

// ---------------------------------------------------------------------
// Window machinery over the rational-rate core game.

struct Window {
  InstantGame game;
  std::vector<int> clone_edge;  // per base location: index of its
                                // wait-and-stop edge in game.out, -1 if none
  int base_n = 0;
};

Window make_window(const CoreGame& g, const Rat& r,
                   const std::vector<Rat>& vals_at_r) {
  Window w;
  w.base_n = g.n();
  w.clone_edge.assign(g.n(), -1);
  w.game.domain_lo = Rat(0);
  w.game.domain_hi = r;
  w.game.locs.reserve(g.locs.size());
  for (const auto& l : g.locs) {
    InstantGame::Loc il;
    il.owner = l.owner;
    if (l.final_cost) il.final_cost = *l.final_cost;
    w.game.locs.push_back(il);
  }
  w.game.out.assign(g.n(), {});
  for (int i = 0; i < g.n(); ++i)
    for (const auto& e : g.out[i]) w.game.out[i].push_back({e.dst, e.weight});
  for (int i = 0; i < g.n(); ++i) {
    const auto& l = g.locs[i];
    if (l.is_final() || l.urgent) continue;
    InstantGame::Loc clone;
    clone.owner = Owner::Final;
    clone.final_cost = AffineFn{-l.rate, r * l.rate + vals_at_r[i]};
    int ci = static_cast<int>(w.game.locs.size());
    w.game.locs.push_back(clone);
    w.game.out.push_back({});
    w.clone_edge[i] = static_cast<int>(w.game.out[i].size());
    w.game.out[i].push_back({ci, 0});
  }
  return w;
}

// Distinct final cost functions of a window game.
std::vector<AffineFn> final_families(const InstantGame& g) {
  std::vector<AffineFn> fams;
  for (const auto& l : g.locs) {
    if (l.owner != Owner::Final) continue;
    bool seen = false;
    for (const auto& f : fams)
      if (f == l.final_cost) {
        seen = true;
        break;
      }
    if (!seen) fams.push_back(l.final_cost);
  }
  return fams;
}

}  // namespace

unsigned long long PieceFamilies::size_bound() const {
  return sat_mul(base.size(),
                 sat_add(sat_mul(2, static_cast<unsigned long long>(
                                        offset_bound)),
                         1));
}

PieceFamilies piece_families(const InstantGame& g) {
  PieceFamilies pf;
  pf.base = final_families(g);
  pf.offset_bound =
      static_cast<long long>(g.n() - 1) * g.max_transition_weight();
  return pf;
}

// Enumerated per slope pair: translates of one family never cross each
// other, and crossings of two families with slope gap d are 1/|d| apart, so
// only O(|d|) integer offsets fall in the window.
std::vector<Rat> candidate_cutpoints(const InstantGame& g, const Rat& r) {
  std::vector<AffineFn> fams = final_families(g);
  long long kmax = static_cast<long long>(g.n() - 1) *
                   g.max_transition_weight();
  std::vector<Rat> out;
  for (size_t i = 0; i < fams.size(); ++i) {
    for (size_t j = i + 1; j < fams.size(); ++j) {
      Rat ds = fams[i].slope - fams[j].slope;
      if (ds == Rat(0)) continue;
      Rat db = fams[j].intercept - fams[i].intercept;
      // nu = (db + m) / ds in [0, r], m integer in [-2K, 2K]
      Rat lo_rat = ds > Rat(0) ? -db : r * ds - db;
      Rat hi_rat = ds > Rat(0) ? r * ds - db : -db;
      long long m_lo = std::max(lo_rat.ceil_ll(), -2 * kmax);
      long long m_hi = std::min(hi_rat.floor_ll(), 2 * kmax);
      for (long long m = m_lo; m <= m_hi; ++m)
        out.push_back((db + Rat(m)) / ds);
    }
  }
  std::sort(out.begin(), out.end(), [](const Rat& a, const Rat& b) {
    return b < a;  // descending
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  while (!out.empty() && out.front() >= r) out.erase(out.begin());
  return out;
}

namespace {

bool core_slope_test(const CoreGame& g, const std::vector<Rat>& values_b,
                     const std::vector<Rat>& values_a, const Rat& a,
                     const Rat& b) {
  Rat gap = b - a;
  for (int i = 0; i < g.n(); ++i) {
    const auto& l = g.locs[i];
    if (l.is_final() || l.urgent) continue;
    Rat slope = (values_b[i] - values_a[i]) / gap;
    if (l.owner == Owner::Min) {
      if (slope < -l.rate) return false;
    } else {
      if (slope > -l.rate) return false;
    }
  }
  return true;
}

// Every accepted piece must be an integer translate of some final cost
// function of its window.
void check_piece_family(const InstantGame& wg, const Rat& a, const Rat& va,
                        const Rat& slope) {
  long long kmax = static_cast<long long>(wg.n() - 1) *
                   wg.max_transition_weight();
  for (const auto& l : wg.locs) {
    if (l.owner != Owner::Final || l.final_cost.slope != slope) continue;
    Rat k = va - l.final_cost.eval(a);
    if (k.is_integer() && k.abs() <= Rat(kmax)) return;
  }
  throw solver_error(
      "solve_core: accepted piece is not an integer translate of a final "
      "cost function; this is a bug");
}

struct PieceRec {
  Rat a, b;
  std::vector<Rat> va, vb;  // per location values at both ends
  size_t window = 0;        // index into the sweep endpoint list
};

// -------------------------------------------------------------------
// Strategy assembly.

struct AtomicMove {
  bool wait = true;
  int transition = -1;  // CoreGame edge id; valid when !wait
};

// Converts an instant-strategy edge choice into an atomic move.
AtomicMove to_move(const CoreGame& g, const Window& w, int loc, int edge) {
  if (edge < 0) return {true, -1};
  if (w.clone_edge[loc] == edge) return {true, -1};
  return {false, g.out[loc][edge].id};
}

// Compiles per-atom moves into a legal finite positional plan. Wait runs
// spanning several atoms are merged into one strategy interval firing at the
// first partition point with an immediate move.
FpLocationPlan compile_plan(const std::vector<Rat>& pts,
                            std::vector<AtomicMove> pmoves,
                            const std::vector<AtomicMove>& imoves,
                            const std::string& loc_name) {
  const size_t k = imoves.size();  // pts.size() == k + 1
  // Waiting at a point into an interval that moves immediately is the same
  // (by continuity of the value) as moving at the point.
  for (size_t i = 0; i < k; ++i)
    if (pmoves[i].wait && !imoves[i].wait) pmoves[i] = imoves[i];
  if (pmoves[k].wait)
    throw solver_error(
        "solve_core: unresolved wait at the right endpoint in '" + loc_name +
        "'");
  // After the fix above, pmoves[x].wait implies imoves[x].wait, so a wait
  // run always ends at a point with an immediate move.
  auto run_end = [&](size_t from) {
    size_t e = from;
    while (e <= k && pmoves[e].wait) ++e;
    return e;
  };

  FpLocationPlan plan;
  size_t j = 0;
  while (true) {
    if (pmoves[j].wait) {
      size_t e = run_end(j + 1);
      plan.points.push_back(pts[j]);
      plan.point_moves.push_back(FpMove{true, pmoves[e].transition});
      plan.interval_moves.push_back(FpMove{true, pmoves[e].transition});
      j = e;
      continue;
    }
    plan.points.push_back(pts[j]);
    plan.point_moves.push_back(FpMove{false, pmoves[j].transition});
    if (j == k) break;
    if (!imoves[j].wait) {
      plan.interval_moves.push_back(FpMove{false, imoves[j].transition});
      ++j;
    } else {
      size_t e = run_end(j + 1);
      plan.interval_moves.push_back(FpMove{true, pmoves[e].transition});
      j = e;
    }
  }
  return plan;
}

}  // namespace

bool slope_test(const std::vector<ExtValue>& values_b,
                const std::vector<ExtValue>& values_a, const Rat& a,
                const Rat& b, const Sptg& s) {
  if (a == b) throw std::invalid_argument("slope_test: a == b");
  if (values_a.size() != s.game.locations.size() ||
      values_b.size() != values_a.size())
    throw std::invalid_argument("slope_test: size mismatch");
  Rat gap = b - a;
  for (size_t i = 0; i < s.game.locations.size(); ++i) {
    const auto& l = s.game.locations[i];
    if (l.is_final() || l.urgent) continue;
    if (!values_a[i].is_finite() || !values_b[i].is_finite())
      throw std::domain_error("slope_test: infinite value at a tested location");
    Rat slope = (values_b[i].finite() - values_a[i].finite()) / gap;
    if (l.owner == Owner::Min) {
      if (slope < Rat(-l.rate)) return false;
    } else {
      if (slope > Rat(-l.rate)) return false;
    }
  }
  return true;
}

CoreResult solve_core(const CoreGame& g, const SolveOptions& opts,
                      const std::optional<std::vector<Rat>>& anchor_values) {
  const int n = g.n();
  if (n == 0) throw std::invalid_argument("solve_core: empty game");
  CoreResult res;

  // Instance bounds (sweep length and cutpoints), enforced as assertions.
  long long wt = 0;
  for (const auto& es : g.out)
    for (const auto& e : es) wt = std::max(wt, std::abs(e.weight));
  unsigned long long finals = 0, nonurgent = 0;
  for (const auto& l : g.locs) {
    if (l.is_final()) ++finals;
    else if (!l.urgent) ++nonurgent;
  }
  unsigned long long fg =
      sat_mul(finals, 2 * sat_mul(static_cast<unsigned long long>(n - 1),
                                  static_cast<unsigned long long>(wt)) +
                          1);
  res.stats.window_bound = sat_mul(static_cast<unsigned long long>(n),
                                   sat_add(sat_mul(fg, fg), 2));
  if (opts.max_windows) res.stats.window_bound = opts.max_windows;
  {
    unsigned long long nw =
        static_cast<unsigned long long>(n) + nonurgent;
    unsigned long long fgw = sat_mul(
        sat_add(finals, nonurgent),
        2 * sat_mul(nw > 0 ? nw - 1 : 0, static_cast<unsigned long long>(wt)) +
            1);
    res.stats.cutpoint_bound =
        sat_add(sat_mul(res.stats.window_bound, sat_add(sat_mul(fgw, fgw), 2)),
                1);
  }

  // Values at the right endpoint anchor the sweep.
  Window base;
  base.base_n = n;
  base.clone_edge.assign(n, -1);
  base.game.domain_lo = Rat(0);
  base.game.domain_hi = g.r;
  for (const auto& l : g.locs) {
    InstantGame::Loc il;
    il.owner = l.owner;
    if (l.final_cost) il.final_cost = *l.final_cost;
    base.game.locs.push_back(il);
  }
  base.game.out.assign(n, {});
  for (int i = 0; i < n; ++i)
    for (const auto& e : g.out[i]) base.game.out[i].push_back({e.dst, e.weight});

  std::vector<Rat> cur_vals;
  if (anchor_values) {
    if (static_cast<int>(anchor_values->size()) != n)
      throw std::invalid_argument("solve_core: anchor size mismatch");
    cur_vals = *anchor_values;
  } else {
    InstantValues iv = solve_instant(base.game, g.r);
    res.stats.instant_calls++;
    res.stats.instant_iterations += iv.iterations;
    cur_vals = to_finite(iv.values, "the right-endpoint game");
  }

  res.sweep_endpoints.push_back(g.r);
  if (g.r == Rat(0)) {
    for (int i = 0; i < n; ++i)
      res.values.push_back(CostFunction::point(Rat(0), ExtValue(cur_vals[i])));
    return res;
  }

  std::vector<PieceRec> pieces;  // in sweep (descending) order
  std::vector<Rat> window_r;     // right endpoint per window
  Rat r = g.r;

  while (r > Rat(0)) {
    if (++res.stats.window_count > res.stats.window_bound)
      throw solver_error(
          "solve_core: sweep exceeded its window bound; this is a bug");
    window_r.push_back(r);
    Window w = make_window(g, r, cur_vals);
    std::vector<Rat> cand = candidate_cutpoints(w.game, r);
    PTG_LOG_DEBUG("window r=" << r.str() << " candidates=" << cand.size());

    Rat b = r;
    std::vector<Rat> b_vals = cur_vals;
    size_t idx = 0;
    bool first_candidate = true;
    bool stopped = false;
    bool zero_done = false;
    // Speculative batches grow while the window keeps accepting, so a stop
    // early in the window wastes little work.
    int batch_cap = std::max(1, opts.batch);
    int batch_size = std::min(4, batch_cap);

    while (!stopped) {
      // Next batch of candidate abscissae, descending, each below b.
      std::vector<Rat> batch;
      while (static_cast<int>(batch.size()) < batch_size) {
        if (idx < cand.size()) {
          if (!(cand[idx] < b)) {
            ++idx;
            continue;
          }
          batch.push_back(cand[idx++]);
        } else if (!zero_done && b > Rat(0) &&
                   (batch.empty() || batch.back() > Rat(0))) {
          batch.push_back(Rat(0));
          zero_done = true;
          break;
        } else {
          break;
        }
      }
      if (batch.empty()) break;

      std::vector<InstantValues> results(batch.size());
      bool parallel = opts.engine == SolveOptions::Engine::Parallel;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) if (parallel && batch.size() > 1)
#endif
      for (size_t k = 0; k < batch.size(); ++k)
        results[k] = solve_instant(w.game, batch[k]);
      (void)parallel;

      for (size_t k = 0; k < batch.size() && !stopped; ++k) {
        const Rat& a = batch[k];
        res.stats.instant_calls++;
        res.stats.instant_iterations += results[k].iterations;
        std::vector<Rat> x(to_finite(results[k].values, "a window game"));
        x.resize(n);  // drop clone entries
        if (core_slope_test(g, b_vals, x, a, b)) {
          PieceRec rec;
          rec.a = a;
          rec.b = b;
          rec.va = x;
          rec.vb = b_vals;
          rec.window = window_r.size() - 1;
          for (int i = 0; i < n; ++i)
            check_piece_family(w.game, a, x[i],
                               (b_vals[i] - x[i]) / (b - a));
          pieces.push_back(std::move(rec));
          b = a;
          b_vals = std::move(x);
          if (b == Rat(0)) stopped = true;
          first_candidate = false;
        } else {
          if (first_candidate)
            throw solver_error(
                "solve_core: first candidate of a window failed the slope "
                "test; this is a bug");
          stopped = true;
        }
      }
      res.stats.candidate_points += batch.size();
      if (!stopped) batch_size = std::min(batch_cap, 2 * batch_size);
    }

    if (b == r)
      throw solver_error("solve_core: window made no progress; this is a bug");
    r = b;
    cur_vals = b_vals;
    res.sweep_endpoints.push_back(r);
  }

  // Assemble per-location value functions (pieces are descending).
  res.values.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::vector<Rat> cuts;
    std::vector<ExtValue> vals;
    std::vector<CostFunction::Piece> ps;
    cuts.push_back(Rat(0));
    vals.push_back(ExtValue(pieces.back().va[i]));
    for (size_t p = pieces.size(); p-- > 0;) {
      const auto& rec = pieces[p];
      ps.push_back(CostFunction::Piece::affine(
          affine_through(rec.a, rec.va[i], rec.b, rec.vb[i])));
      cuts.push_back(rec.b);
      vals.push_back(ExtValue(rec.vb[i]));
    }
    CostFunction f =
        CostFunction::from_parts(std::move(cuts), std::move(vals),
                                 std::move(ps));
    if (!f.is_continuous())
      throw solver_error("solve_core: discontinuous value function; bug");
    // Rate bounds on every piece of a non-urgent location's value.
    const auto& l = g.locs[i];
    if (!l.is_final() && !l.urgent) {
      for (const Rat& s : slopes_in(f, f.lo(), f.hi())) {
        bool ok = l.owner == Owner::Min ? s >= -l.rate : s <= -l.rate;
        if (!ok)
          throw solver_error("solve_core: rate bound violated at '" + l.name +
                             "'; this is a bug");
      }
    }
    res.stats.max_cutpoints =
        std::max(res.stats.max_cutpoints, f.cutpoint_count());
    res.values.push_back(std::move(f));
  }

  if (!opts.with_strategies || anchor_values) return res;

  // ---------------------------------------------------------------------
  // Strategies. Re-derive instant strategies at each piece midpoint and at
  // each piece left endpoint, then compile per-location move sequences.
  const size_t m = pieces.size();
  std::vector<Window> windows;
  windows.reserve(window_r.size());
  for (size_t wi = 0; wi < window_r.size(); ++wi) {
    std::vector<Rat> vals_at_r(n);
    for (int i = 0; i < n; ++i) {
      ExtValue v = res.values[i].evaluate(window_r[wi]);
      vals_at_r[i] = v.finite();
    }
    windows.push_back(make_window(g, window_r[wi], vals_at_r));
  }

  struct Extraction {
    InstantStrategies strat;
    size_t window;
  };
  std::vector<Extraction> at_left(m);   // at pieces[p].a, in its window
  std::vector<Extraction> at_mid(m);    // at the piece midpoint
  InstantStrategies at_anchor;          // at r0 on the clone-free base game

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) \
    if (opts.engine == SolveOptions::Engine::Parallel && m > 1)
#endif
  for (size_t p = 0; p < m; ++p) {
    const auto& rec = pieces[p];
    const Window& w = windows[rec.window];
    InstantValues va = solve_instant(w.game, rec.a);
    at_left[p] = {extract_instant_strategies(w.game, rec.a, va), rec.window};
    Rat mid = (rec.a + rec.b) / Rat(2);
    InstantValues vm = solve_instant(w.game, mid);
    at_mid[p] = {extract_instant_strategies(w.game, mid, vm), rec.window};
  }
  {
    InstantValues iv = solve_instant(base.game, g.r);
    at_anchor = extract_instant_strategies(base.game, g.r, iv);
  }
  res.stats.instant_calls += 2 * m + 1;

  // Global ascending partition: piece endpoints.
  std::vector<Rat> pts;
  pts.reserve(m + 1);
  for (size_t p = pieces.size(); p-- > 0;) pts.push_back(pieces[p].a);
  pts.push_back(pieces.front().b);

  auto build_fp = [&](Owner who) {
    FpStrategy fp;
    fp.plans.resize(n);
    for (int i = 0; i < n; ++i) {
      if (g.locs[i].owner != who) continue;
      std::vector<AtomicMove> imoves(m), pmoves(m + 1);
      for (size_t p = 0; p < m; ++p) {
        size_t asc = m - 1 - p;  // pieces are descending; atoms ascend
        const auto& mid = at_mid[asc];
        const auto& left = at_left[asc];
        int mid_edge = who == Owner::Max ? mid.strat.max_choice[i]
                                         : mid.strat.min_primary[i];
        imoves[p] = to_move(g, windows[mid.window], i, mid_edge);
        int left_edge = who == Owner::Max ? left.strat.max_choice[i]
                                          : left.strat.min_primary[i];
        pmoves[p] = to_move(g, windows[left.window], i, left_edge);
      }
      int anchor_edge = who == Owner::Max ? at_anchor.max_choice[i]
                                          : at_anchor.min_primary[i];
      pmoves[m] = to_move(g, base, i, anchor_edge);
      fp.plans[i] =
          compile_plan(pts, std::move(pmoves), imoves, g.locs[i].name);
    }
    return fp;
  };

  res.max_strategy = build_fp(Owner::Max);
  res.min_strategy.primary = build_fp(Owner::Min);

  // Attractor strategy: immediate rank-decreasing moves, clock-independent.
  {
    FpStrategy att;
    att.plans.resize(n);
    for (int i = 0; i < n; ++i) {
      if (g.locs[i].owner != Owner::Min) continue;
      int edge = at_anchor.min_attractor[i];
      if (edge < 0)
        throw solver_error("solve_core: finite location outside attractor");
      FpMove mv{false, g.out[i][edge].id};
      FpLocationPlan plan;
      plan.points = {Rat(0), g.r};
      plan.interval_moves = {mv};
      plan.point_moves = {mv, mv};
      att.plans[i] = std::move(plan);
    }
    res.min_strategy.attractor = std::move(att);
  }

  // Switch threshold from the fake-optimality bound, with the parameter
  // chosen above the greatest value depth.
  {
    Rat min_val(0);
    for (const auto& f : res.values) min_val = min(min_val, f.min_value().finite());
    Rat wl(0);
    for (const auto& l : g.locs)
      if (!l.is_final()) wl = max(wl, l.rate.abs());
    Rat sigma(static_cast<long long>(res.min_strategy.primary.interval_count()));
    Rat n_param = Rat(1) + max(Rat(0), -min_val);
    Rat k = Rat(n) * (Rat(2) * wl + Rat(2) * sigma * Rat(n) * Rat(wt) +
                      Rat(3) * sigma + n_param);
    res.min_strategy.threshold =
        static_cast<unsigned long long>(std::max<long long>(1, k.ceil_ll()));
  }
  return res;
}

ValueResult solve(const Sptg& s, const SolveOptions& opts) {
  const size_t n_orig = s.game.locations.size();
  if (n_orig == 0) throw std::invalid_argument("solve: empty game");

  PruneResult pr = prune_infinite(s);
  if (pr.pruned.game.locations.empty()) {
    // No finite-valued location at all (e.g. no final location exists).
    ValueResult out;
    const Rat& r = s.right_endpoint;
    for (size_t i = 0; i < n_orig; ++i)
      out.values.push_back(
          r == Rat(0) ? CostFunction::point(Rat(0), pr.verdict[i])
                      : CostFunction::constant(Rat(0), r, pr.verdict[i]));
    out.max_strategy.plans.resize(n_orig);
    out.min_strategy.primary.plans.resize(n_orig);
    out.min_strategy.attractor.plans.resize(n_orig);
    return out;
  }
  CoreGame core = CoreGame::from(pr.pruned);
  CoreResult cres = solve_core(core, opts, std::nullopt);

  ValueResult out;
  out.sweep_endpoints = std::move(cres.sweep_endpoints);
  out.stats = cres.stats;
  out.values.reserve(n_orig);
  const Rat r = s.right_endpoint;
  for (size_t i = 0; i < n_orig; ++i) {
    if (pr.old_to_new[i] >= 0) {
      out.values.push_back(cres.values[pr.old_to_new[i]]);
    } else if (r == Rat(0)) {
      out.values.push_back(CostFunction::point(Rat(0), pr.verdict[i]));
    } else {
      out.values.push_back(CostFunction::constant(Rat(0), r, pr.verdict[i]));
    }
  }
  if (opts.with_strategies) {
    auto inflate = [&](const FpStrategy& in) {
      FpStrategy fs;
      fs.plans.resize(n_orig);
      for (size_t i = 0; i < n_orig; ++i) {
        if (pr.old_to_new[i] < 0) continue;
        FpLocationPlan plan = in.plans[pr.old_to_new[i]];
        auto remap = [&](FpMove& mv) {
          if (mv.transition >= 0)
            mv.transition = pr.transition_old_index[mv.transition];
        };
        for (auto& mv : plan.interval_moves) remap(mv);
        for (auto& mv : plan.point_moves) remap(mv);
        fs.plans[i] = std::move(plan);
      }
      return fs;
    };
    out.max_strategy = inflate(cres.max_strategy);
    out.min_strategy.primary = inflate(cres.min_strategy.primary);
    out.min_strategy.attractor = inflate(cres.min_strategy.attractor);
    out.min_strategy.threshold = cres.min_strategy.threshold;
  }
  return out;
}

}  // namespace ptg
