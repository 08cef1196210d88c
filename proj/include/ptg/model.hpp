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
#include "ptg/rational.hpp"

namespace ptg {

enum class Owner { Min, Max, Final };

std::string owner_name(Owner o);

/// Clock constraint: an interval with rational endpoints and open/closed
/// flags.
struct Guard {
  Rat lo;
  Rat hi;
  bool lo_strict = false;
  bool hi_strict = false;

  bool contains(const Rat& x) const {
    if (lo_strict ? !(lo < x) : !(lo <= x)) return false;
    if (hi_strict ? !(x < hi) : !(x <= hi)) return false;
    return true;
  }
  bool is_empty() const {
    if (lo > hi) return true;
    return lo == hi && (lo_strict || hi_strict);
  }
  std::string str() const;

  friend bool operator==(const Guard& a, const Guard& b) {
    return a.lo == b.lo && a.hi == b.hi && a.lo_strict == b.lo_strict &&
           a.hi_strict == b.hi_strict;
  }
};

struct Location {
  std::string name;
  Owner owner = Owner::Min;
  long long rate = 0;  // integer weight per unit of time; unused for Final
  bool urgent = false;
  std::optional<AffineFn> final_cost;  // present iff owner == Final

  bool is_final() const { return owner == Owner::Final; }
};

struct Transition {
  int src = -1;
  Guard guard;
  bool reset = false;
  int dst = -1;
  long long weight = 0;
};

/// One-clock priced timed game graph.
struct Ptg {
  std::vector<Location> locations;
  std::vector<Transition> transitions;
  long long clock_bound = 1;  // M; every guard must lie within [0, M]

  int location_index(const std::string& name) const;
  const Location& loc(int i) const { return locations[i]; }
  /// Indices into `transitions` with the given source, in declaration order.
  std::vector<int> outgoing(int src) const;
};

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string message;
};

/// Structural validation. Empty result means every model invariant holds;
/// entries name the violated invariant and the offending element. Deadlocks
/// (a non-final location whose guards do not cover [0, M]) are warnings.
std::vector<Diagnostic> validate(const Ptg& g);

inline bool has_errors(const std::vector<Diagnostic>& ds) {
  for (const auto& d : ds)
    if (d.severity == Diagnostic::Severity::Error) return true;
  return false;
}

struct GameConstants {
  long long max_transition_weight = 0;  // W_T
  long long max_rate = 0;               // W_L
  Rat max_final_cost;                   // W_fin, endpoint evaluation
  int location_count = 0;               // n
};

/// Exact maxima over the game; recomputed on every call.
GameConstants constants(const Ptg& g);

/// Simple game: every transition carries one shared guard [0, r] with
/// r in [0,1], and no resets.
struct Sptg {
  Ptg game;
  Rat right_endpoint;  // r

  static std::optional<Sptg> from(Ptg g, std::string* why = nullptr);
};

bool is_sptg(const Ptg& g, std::string* why = nullptr);

/// Raised when a solver-internal bound or invariant is violated. Signals an
/// implementation bug, not bad input.
struct solver_error : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace ptg
