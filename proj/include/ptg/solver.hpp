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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ptg/cost_function.hpp"
#include "ptg/instant.hpp"
#include "ptg/model.hpp"

namespace ptg {

/// One move of a finite positional strategy. `wait == false`: take the
/// transition immediately. `wait == true`: let time elapse until the right
/// end of the current strategy interval, then take the transition there.
struct FpMove {
  bool wait = false;
  int transition = -1;  // index into the game's transition list
};

/// Per-location part of a finite positional strategy: a partition
/// lo = p_0 < ... < p_k = hi of the clock domain, one move per open interval
/// (p_i, p_{i+1}) and one per partition point.
struct FpLocationPlan {
  std::vector<Rat> points;
  std::vector<FpMove> interval_moves;  // size points.size() - 1
  std::vector<FpMove> point_moves;     // size points.size()

  bool empty() const { return points.empty(); }
};

struct FpStrategy {
  std::vector<FpLocationPlan> plans;  // per location; empty plan for finals

  /// Number of intervals and singletons induced by the union of all
  /// locations' partition points.
  size_t interval_count() const;
};

/// Play the primary strategy until the play contains `threshold`
/// transitions, then follow the attractor strategy.
struct SwitchingStrategy {
  FpStrategy primary;    // negative-cycle part
  FpStrategy attractor;  // target-reaching part
  unsigned long long threshold = 0;
};

struct SolveStats {
  unsigned long long instant_calls = 0;
  unsigned long long instant_iterations = 0;
  size_t window_count = 0;
  size_t candidate_points = 0;     // evaluated candidate cutpoints
  size_t max_cutpoints = 0;        // max per-location cutpoint count
  unsigned long long window_bound = 0;    // sweep-length bound for this instance
  unsigned long long cutpoint_bound = 0;  // per-location cutpoint bound
};

struct ValueResult {
  /// Per-location value function on [0, r]; +inf/-inf locations get
  /// constant plateaus.
  std::vector<CostFunction> values;
  FpStrategy max_strategy;
  SwitchingStrategy min_strategy;
  /// Decreasing endpoints visited by the outer sweep, starting at r and
  /// ending at 0.
  std::vector<Rat> sweep_endpoints;
  SolveStats stats;
};

struct SolveOptions {
  enum class Engine { Serial, Parallel };
  Engine engine = Engine::Parallel;
  /// Candidate cutpoints evaluated speculatively per batch in the parallel
  /// engine.
  int batch = 32;
  bool with_strategies = true;
  /// Optional override of the sweep-length safety bound (0 = theoretical).
  unsigned long long max_windows = 0;
};

/// Removes every location whose value is +inf or -inf (classified at the
/// right endpoint on the all-urgent game; by continuity the classification
/// holds on the whole domain).
struct PruneResult {
  Sptg pruned;
  std::vector<int> old_to_new;        // -1 for removed locations
  std::vector<ExtValue> verdict;      // per original location: +inf / -inf
                                      // for removed ones, the value at the
                                      // right endpoint otherwise
  std::vector<std::string> removed;   // names, for reporting
  /// Per pruned transition: its index in the input game.
  std::vector<int> transition_old_index;
};
PruneResult prune_infinite(const Sptg& s);

/// Wait-and-stop closure: adds, per non-urgent non-final location l, a final
/// clone with cost (r - nu) * rate(l) + x[l], reachable by a new weight-0
/// transition, and restricts every guard to [0, r]. `x` is indexed by
/// location and read only at non-urgent non-final ones.
Sptg waiting(const Sptg& s, const Rat& r, const std::vector<Rat>& x);

/// Distinct final cost functions of an urgent game plus the integer offset
/// range of the translate family every finite value piece is drawn from.
struct PieceFamilies {
  std::vector<AffineFn> base;
  long long offset_bound = 0;  // offsets range over [-offset_bound, offset_bound]

  unsigned long long size_bound() const;  // number of family members
};
PieceFamilies piece_families(const InstantGame& g);

/// Abscissae in [0, r) where two distinct members of the piece family
/// intersect, descending. These are the only points where an urgent game's
/// value function can change slope.
std::vector<Rat> candidate_cutpoints(const InstantGame& g, const Rat& r);

/// Window-extension test on [a, b]: per non-urgent non-final location, the
/// candidate piece slope (value_b - value_a) / (b - a) must be >= -rate for
/// Min locations and <= -rate for Max locations (equality passes).
bool slope_test(const std::vector<ExtValue>& values_b,
                const std::vector<ExtValue>& values_a, const Rat& a,
                const Rat& b, const Sptg& s);

/// Computes the exact value function of every location of the simple game,
/// together with an optimal finite positional strategy for Max and an
/// optimal switching strategy for Min.
ValueResult solve(const Sptg& s, const SolveOptions& opts = {});

// ---------------------------------------------------------------------------
// Solver core over a rational-rate game. The time axis of region subgames is
// rescaled, which turns integer rates into rationals; transition weights
// stay integral. Public Sptg solving converts losslessly.

struct CoreGame {
  struct Loc {
    std::string name;
    Owner owner = Owner::Min;
    Rat rate;
    bool urgent = false;
    std::optional<AffineFn> final_cost;
    bool is_final() const { return owner == Owner::Final; }
  };
  struct Edge {
    int dst = -1;
    long long weight = 0;
    int id = -1;  // caller-side transition tag
  };

  std::vector<Loc> locs;
  std::vector<std::vector<Edge>> out;
  Rat r;  // all guards are [0, r]

  int n() const { return static_cast<int>(locs.size()); }
  static CoreGame from(const Sptg& s);
};

struct CoreResult {
  std::vector<CostFunction> values;
  std::vector<Rat> sweep_endpoints;
  FpStrategy max_strategy;   // moves tagged with Edge::id
  SwitchingStrategy min_strategy;
  SolveStats stats;
};

/// All values of the core game must be finite (prune first). If
/// `anchor_values` is given it supplies the value vector at the right
/// endpoint instead of the all-urgent fixed point (used when the game is a
/// window of a larger construction); strategies are not assembled in that
/// mode.
CoreResult solve_core(const CoreGame& g, const SolveOptions& opts,
                      const std::optional<std::vector<Rat>>& anchor_values);

}  // namespace ptg
