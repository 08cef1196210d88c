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

#include "ptg/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ptg {

std::string owner_name(Owner o) {
  switch (o) {
    case Owner::Min: return "min";
    case Owner::Max: return "max";
    default: return "final";
  }
}

std::string Guard::str() const {
  std::ostringstream os;
  os << (lo_strict ? '(' : '[') << lo.str() << ',' << hi.str()
     << (hi_strict ? ')' : ']');
  return os.str();
}

int Ptg::location_index(const std::string& name) const {
  for (size_t i = 0; i < locations.size(); ++i)
    if (locations[i].name == name) return static_cast<int>(i);
  return -1;
}

std::vector<int> Ptg::outgoing(int src) const {
  std::vector<int> out;
  for (size_t i = 0; i < transitions.size(); ++i)
    if (transitions[i].src == src) out.push_back(static_cast<int>(i));
  return out;
}

namespace {

void err(std::vector<Diagnostic>& ds, std::string msg) {
  ds.push_back({Diagnostic::Severity::Error, std::move(msg)});
}

void warn(std::vector<Diagnostic>& ds, std::string msg) {
  ds.push_back({Diagnostic::Severity::Warning, std::move(msg)});
}

// Best-effort deadlock scan: do the outgoing guards of `src` jointly cover
// [0, M]? Works on closed endpoints; strictness gaps at single points are
// reported too.
void check_coverage(const Ptg& g, int src, std::vector<Diagnostic>& ds) {
  std::vector<const Guard*> gs;
  for (const auto& t : g.transitions)
    if (t.src == src && !t.guard.is_empty()) gs.push_back(&t.guard);
  const std::string& name = g.locations[src].name;
  if (gs.empty()) {
    warn(ds, "location '" + name +
                 "' has no outgoing transition; its value is +inf");
    return;
  }
  // Sample endpoints and midpoints of the arrangement of guard endpoints.
  std::vector<Rat> points;
  points.push_back(Rat(0));
  points.push_back(Rat(g.clock_bound));
  for (const auto* gd : gs) {
    points.push_back(gd->lo);
    points.push_back(gd->hi);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<Rat> samples;
  for (size_t i = 0; i < points.size(); ++i) {
    if (points[i] < Rat(0) || points[i] > Rat(g.clock_bound)) continue;
    samples.push_back(points[i]);
    if (i + 1 < points.size() && points[i + 1] <= Rat(g.clock_bound))
      samples.push_back((points[i] + points[i + 1]) / Rat(2));
  }
  for (const auto& x : samples) {
    bool covered = false;
    for (const auto* gd : gs)
      if (gd->contains(x)) {
        covered = true;
        break;
      }
    if (!covered) {
      warn(ds, "location '" + name + "' is deadlocked at clock value " +
                   x.str() + "; the value there is +inf");
      return;
    }
  }
}

}  // namespace

std::vector<Diagnostic> validate(const Ptg& g) {
  std::vector<Diagnostic> ds;
  if (g.locations.empty()) err(ds, "no locations");
  if (g.clock_bound < 1) err(ds, "clock_bound must be a positive integer");

  std::set<std::string> names;
  for (const auto& l : g.locations) {
    if (!names.insert(l.name).second)
      err(ds, "duplicate location '" + l.name + "'");
    if (l.is_final()) {
      if (l.urgent) err(ds, "final location '" + l.name + "' marked urgent");
      if (!l.final_cost)
        err(ds, "final location '" + l.name + "' lacks a final cost");
      if (l.rate != 0)
        err(ds, "final location '" + l.name + "' carries a rate");
    } else if (l.final_cost) {
      err(ds, "non-final location '" + l.name + "' carries a final cost");
    }
  }

  Rat bound = Rat(g.clock_bound);
  for (size_t i = 0; i < g.transitions.size(); ++i) {
    const auto& t = g.transitions[i];
    std::string tag = "transition #" + std::to_string(i);
    if (t.src < 0 || t.src >= static_cast<int>(g.locations.size())) {
      err(ds, tag + ": dangling source");
      continue;
    }
    if (t.dst < 0 || t.dst >= static_cast<int>(g.locations.size())) {
      err(ds, tag + ": dangling target");
      continue;
    }
    tag += " (" + g.locations[t.src].name + " -> " +
           g.locations[t.dst].name + ")";
    if (g.locations[t.src].is_final())
      err(ds, tag + ": final locations have no outgoing transitions");
    if (t.guard.is_empty()) err(ds, tag + ": empty guard");
    if (t.guard.lo < Rat(0) || t.guard.hi > bound)
      err(ds, tag + ": guard " + t.guard.str() + " escapes [0," +
                  bound.str() + "]");
  }

  if (!has_errors(ds)) {
    for (size_t i = 0; i < g.locations.size(); ++i)
      if (!g.locations[i].is_final())
        check_coverage(g, static_cast<int>(i), ds);
  }
  return ds;
}

GameConstants constants(const Ptg& g) {
  GameConstants c;
  c.location_count = static_cast<int>(g.locations.size());
  for (const auto& t : g.transitions)
    c.max_transition_weight =
        std::max(c.max_transition_weight, std::abs(t.weight));
  c.max_final_cost = Rat(0);
  for (const auto& l : g.locations) {
    if (l.is_final()) {
      if (l.final_cost) {
        Rat at0 = l.final_cost->eval(Rat(0)).abs();
        Rat atm = l.final_cost->eval(Rat(g.clock_bound)).abs();
        c.max_final_cost = max(c.max_final_cost, max(at0, atm));
      }
    } else {
      c.max_rate = std::max(c.max_rate, std::abs(l.rate));
    }
  }
  return c;
}

bool is_sptg(const Ptg& g, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (g.transitions.empty())
    return true;  // vacuously simple; right endpoint defaults elsewhere
  const Guard& first = g.transitions.front().guard;
  if (first.lo != Rat(0) || first.lo_strict || first.hi_strict)
    return fail("guards must be closed intervals [0,r]");
  if (first.hi > Rat(1) || first.hi < Rat(0))
    return fail("the shared right endpoint must lie in [0,1]");
  for (const auto& t : g.transitions) {
    if (t.reset) return fail("resets are not allowed");
    if (!(t.guard == first))
      return fail("all transitions must share one guard [0,r]");
  }
  return true;
}

std::optional<Sptg> Sptg::from(Ptg g, std::string* why) {
  if (!is_sptg(g, why)) return std::nullopt;
  Rat r = g.transitions.empty() ? Rat(1) : g.transitions.front().guard.hi;
  return Sptg{std::move(g), std::move(r)};
}

}  // namespace ptg
