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

#include <utility>
#include <vector>

#include "ptg/model.hpp"

namespace ptg {

/// Game view used by the fixed-clock solver: every non-final location is
/// urgent, so only the graph, the integer transition weights and the final
/// cost functions matter. Built from user games or synthesized for solver
/// windows (where final costs may carry rational coefficients).
struct InstantGame {
  struct Loc {
    Owner owner = Owner::Min;
    AffineFn final_cost;  // meaningful iff owner == Final
  };
  struct Edge {
    int dst = 0;
    long long weight = 0;
  };

  std::vector<Loc> locs;
  std::vector<std::vector<Edge>> out;  // per source, declaration order
  Rat domain_lo;                       // clock interval [lo, hi] the game lives on
  Rat domain_hi;

  int n() const { return static_cast<int>(locs.size()); }
  long long max_transition_weight() const;
  /// Max over final locations of max(|phi(lo)|, |phi(hi)|).
  Rat max_final_cost() const;
  /// Values strictly below this are classified as -inf.
  Rat minus_inf_cutoff() const;
  /// Stabilization bound on the number of operator applications.
  unsigned long long iteration_bound() const;

  /// The game graph with all locations urgent; requires every non-final
  /// location of `s` to be urgent already.
  static InstantGame from_urgent_sptg(const Sptg& s);
  /// Same, but ignores (discards) urgency flags: used to evaluate any game
  /// at a clock value where no time can elapse anyway.
  static InstantGame all_urgent(const Sptg& s);
};

struct InstantValues {
  std::vector<ExtValue> values;
  unsigned long long iterations = 0;  // operator applications incl. the
                                      // final no-change round
  /// Round at which each location's value last changed (0 = initial).
  std::vector<unsigned long long> settled_round;
};

/// Exact per-location values of the urgent game at clock value nu, including
/// +inf / -inf classifications. Value iteration from above with the -inf
/// cutoff applied after each full sweep.
InstantValues solve_instant(const InstantGame& g, const Rat& nu);

/// Spec-facing wrapper: requires all non-final locations of s urgent and
/// nu in [0, r].
InstantValues solve_instant(const Sptg& s, const Rat& nu);

struct InstantStrategies {
  /// Per location: chosen outgoing edge index (into InstantGame::out[src]),
  /// -1 where not applicable (finals, +inf locations).
  std::vector<int> max_choice;
  std::vector<int> min_primary;
  /// True where the location's value is -inf and min_primary describes one
  /// member of the parametric family (deeper descent needs larger switch
  /// thresholds).
  std::vector<bool> min_parametric;
  /// Attractor move for the post-switch phase; -1 outside the attractor.
  std::vector<int> min_attractor;
  /// Steps-to-target guaranteed by the attractor; -1 outside.
  std::vector<long long> attractor_rank;
  /// Switch threshold K for the point-level switching strategy.
  unsigned long long switch_threshold = 0;
};

/// Optimal choices at the fixed point `vals` (which must be exactly the
/// solve_instant output, else throws std::invalid_argument). Max's choice
/// attains the max; Min's primary choice is value-preserving and picks,
/// among optimal successors, the one minimizing (settle round, attractor
/// rank, edge index).
InstantStrategies extract_instant_strategies(const InstantGame& g,
                                             const Rat& nu,
                                             const InstantValues& vals);

}  // namespace ptg
