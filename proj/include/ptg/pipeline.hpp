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

#include <string>
#include <vector>

#include "ptg/model.hpp"
#include "ptg/solver.hpp"

namespace ptg {

/// Guard-endpoint product of a one-clock game: one location per (location,
/// region), with weight-0 wait transitions stitching each open region to its
/// endpoints. Values are preserved pointwise; strict guards disappear.
struct RegionPtg {
  Ptg game;
  /// M_0 = 0 < M_1 < ... < M_k: all guard endpoints (0 and M included).
  std::vector<Rat> endpoints;
  /// Regions indexed 0..2k: even entries are singletons {M_i}, odd entries
  /// the open intervals (M_i, M_{i+1}).
  struct Region {
    Rat lo, hi;
    bool open = false;  // singletons are closed points
  };
  std::vector<Region> regions;
  /// Per region-game location: source location and region index.
  struct Origin {
    int source = -1;
    int region = -1;
  };
  std::vector<Origin> origin;
  /// Per region-game transition: true for the stitched wait transitions.
  std::vector<bool> wait_transition;
  /// Per region-game transition: originating transition in the source game
  /// (-1 for wait transitions; ties collapsed by the owner's best weight).
  std::vector<int> source_transition;
};

RegionPtg region_ptg(const Ptg& g);

/// A priori bounds on finite values of a negative-reset-acyclic game.
struct ValueBounds {
  Rat v_inf;
  Rat v_sup;
};
ValueBounds value_bounds(const Ptg& g);

/// Reset unfolding: the reset-free template plus the number of copies that
/// suffices for a kappa-NRA game. Each reset transition is redirected to a
/// fresh final location whose (constant) cost is the previous copy's value
/// at the reset target with clock 0.
struct ResetUnfolding {
  Ptg reset_free;                    // template game
  std::vector<int> hop_of_reset;     // per original reset transition index:
                                     // fresh final location in reset_free
  std::vector<int> target_of_reset;  // original reset target location
  unsigned long long copies = 1;
  ValueBounds bounds;
};
ResetUnfolding unfold_nra(const Ptg& g, const Rat& kappa);

/// Best-effort kappa-NRA membership check: enumerates simple cycles of the
/// region game that traverse a reset (plus zero-clock discrete cycles) and
/// bounds each cycle's achievable price range exactly. Sound for rejection;
/// Inconclusive when the enumeration cap is hit or a range only touches the
/// forbidden open interval (-kappa, 0) at its border.
struct NraCheck {
  enum class Status { Pass, Violation, Inconclusive };
  Status status = Status::Pass;
  std::string detail;
  /// Set by the kappa-free survey: the game is kappa-NRA for every positive
  /// kappa up to this bound (absent when any kappa works or none does).
  std::optional<Rat> kappa_bound;
};
NraCheck check_nra(const Ptg& g, const Rat& kappa, size_t cycle_cap = 20000);

/// Kappa-free survey: decides whether some kappa > 0 makes the game
/// negative-reset-acyclic, and reports the largest usable bound.
NraCheck check_nra_any(const Ptg& g, size_t cycle_cap = 20000);

struct PtgValueResult {
  /// Per original location: value over [0, M]; region borders may carry
  /// isolated point values.
  std::vector<CostFunction> values;
  /// Per region-game location: value over the closure of its region.
  std::vector<CostFunction> region_values;
  RegionPtg region;
  unsigned long long copies_used = 0;
  bool stabilized = true;
  /// Reset-target locations whose entry values kept descending after the
  /// copy budget: their values (and dependents) are -inf.
  std::vector<std::string> divergent;
};

/// Solves a reset-acyclic one-clock game exactly by region decomposition
/// (regions rescaled onto unit windows) and bottom-up reset elimination.
/// Throws std::invalid_argument naming a cycle if resets lie on a cycle.
PtgValueResult reset_acyclic_solve(const Ptg& g, const SolveOptions& opts = {});

/// Solves a kappa-NRA game through the region construction and the bounded
/// reset unfolding. `assert_nra` skips the membership check; `extra_copies`
/// enlarges the copy budget beyond the computed one (stabilization witness
/// testing).
PtgValueResult solve_nra(const Ptg& g, const Rat& kappa, bool assert_nra,
                         const SolveOptions& opts = {},
                         unsigned long long extra_copies = 0);

}  // namespace ptg
