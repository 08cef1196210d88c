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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ptg/model.hpp"
#include "ptg/solver.hpp"

namespace ptg {

struct Configuration {
  int location = -1;
  Rat clock;
};

struct PlayStep {
  Rat delay;
  int transition = -1;
  Rat cost;  // transition weight + delay * rate
  Configuration to;
};

struct Play {
  Configuration start;
  std::vector<PlayStep> steps;
  bool completed = false;  // reached a final location
  bool truncated = false;  // stopped by the horizon

  const Configuration& end() const {
    return steps.empty() ? start : steps.back().to;
  }
  size_t length() const { return steps.size(); }
};

/// Illegal move (guard violated, urgency violated, negative delay, ...).
struct move_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fires `transition` after waiting `delay` from `from`. Returns the
/// successor configuration and the exact step cost. Throws move_error when
/// any firing condition fails.
std::pair<Configuration, Rat> step(const Ptg& g, const Configuration& from,
                                   const Rat& delay, int transition);

/// Price of a completed play: step costs plus the final cost; +inf for plays
/// that do not end in a final location.
ExtValue play_cost(const Ptg& g, const Play& p);

struct StrategyDecision {
  Rat delay;
  int transition = -1;
};

/// A strategy consulted at the owner's configurations. May use the play
/// history (switching strategies count transitions).
using Strategy = std::function<std::optional<StrategyDecision>(
    const Play& history, const Configuration& at)>;

/// Deterministic play of both strategies from s0, stopping at a final
/// location or after `horizon` transitions. A strategy returning no move
/// leaves the play incomplete (deadlock); an illegal move throws move_error
/// naming the offender.
Play simulate(const Ptg& g, const Configuration& s0, const Strategy& min_strategy,
              const Strategy& max_strategy, unsigned long long horizon);

/// Wraps a finite positional strategy for `owner` into a playable strategy.
Strategy fp_runner(const Ptg& g, Owner owner, const FpStrategy& fs);

/// Switching strategy for Min: primary until the play holds `threshold`
/// transitions, then the attractor part.
Strategy switching_runner(const Ptg& g, const SwitchingStrategy& ss);

/// Seed-deterministic legal finite positional strategy for one player, with
/// breakpoints drawn from the game's candidate cutpoints.
FpStrategy random_fp_strategy(const Sptg& s, Owner owner, uint64_t seed);

/// Default simulation horizon for a switching strategy: 4*K + 4*|L|.
unsigned long long default_horizon(const Ptg& g, unsigned long long threshold);

}  // namespace ptg
