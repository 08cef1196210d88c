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

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptg/instant.hpp"
#include "ptg/io.hpp"
#include "ptg/model.hpp"

namespace ptg::testutil {

inline std::string data_path(const std::string& name) {
  return std::string(PTG_DATA_DIR) + "/" + name;
}

inline Ptg load_game(const std::string& name) {
  std::ifstream f(data_path(name));
  if (!f) throw std::runtime_error("fixture missing: " + name);
  std::ostringstream buf;
  buf << f.rdbuf();
  ParseResult pr = parse_game(buf.str());
  if (!pr.ok()) {
    std::string all;
    for (const auto& d : pr.diagnostics) all += d.str() + "; ";
    throw std::runtime_error("fixture '" + name + "' broken: " + all);
  }
  return *pr.game;
}

inline Sptg load_sptg(const std::string& name) {
  std::string why;
  auto s = Sptg::from(load_game(name), &why);
  if (!s) throw std::runtime_error("fixture '" + name + "' not simple: " + why);
  return *s;
}

/// Random simple game: n <= max_locs locations with at least one final,
/// integer rates and weights within [-wmax, wmax], every non-final location
/// with at least one outgoing transition. Deterministic in the seed.
inline Sptg random_sptg(uint64_t seed, int max_locs = 6, long wmax = 8) {
  std::mt19937_64 rng(seed);
  auto pick = [&](long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
  };
  Ptg g;
  g.clock_bound = 1;
  int n = static_cast<int>(pick(2, max_locs));
  int finals = static_cast<int>(pick(1, std::max(1, n / 3)));
  for (int i = 0; i < n; ++i) {
    Location l;
    l.name = "q" + std::to_string(i);
    if (i >= n - finals) {
      l.owner = Owner::Final;
      l.final_cost = AffineFn{Rat(pick(-wmax, wmax)), Rat(pick(-wmax, wmax))};
    } else {
      l.owner = rng() % 2 ? Owner::Min : Owner::Max;
      l.rate = pick(-wmax, wmax);
      l.urgent = rng() % 8 == 0;
    }
    g.locations.push_back(std::move(l));
  }
  Guard guard{Rat(0), Rat(1), false, false};
  for (int i = 0; i < n - finals; ++i) {
    int edges = static_cast<int>(pick(1, 3));
    for (int e = 0; e < edges; ++e) {
      int dst = static_cast<int>(pick(0, n - 1));
      if (dst == i && n > 1) dst = (i + 1) % n;
      g.transitions.push_back(
          Transition{i, guard, false, dst, pick(-wmax, wmax)});
    }
  }
  auto s = Sptg::from(std::move(g));
  return *s;
}

/// Values of the grid-discretized game at every grid point k/N: both players
/// may only take transitions or wait exactly one grid step. Solved exactly,
/// top level first, reusing the fixed-clock solver with a wait hop per
/// non-urgent location.
inline std::vector<std::vector<ExtValue>> grid_oracle(const Sptg& s, int N) {
  const int n = static_cast<int>(s.game.locations.size());
  std::vector<std::vector<ExtValue>> levels(
      N + 1, std::vector<ExtValue>(n, ExtValue::pos_inf()));
  for (int level = N; level >= 0; --level) {
    Rat nu(level, N);
    InstantGame pg;
    pg.domain_lo = nu;
    pg.domain_hi = nu;
    for (const auto& l : s.game.locations) {
      InstantGame::Loc il;
      il.owner = l.owner;
      if (l.final_cost) il.final_cost = *l.final_cost;
      pg.locs.push_back(il);
    }
    pg.out.assign(n, {});
    for (const auto& t : s.game.transitions)
      pg.out[t.src].push_back({t.dst, t.weight});
    if (level < N) {
      for (int i = 0; i < n; ++i) {
        const Location& l = s.game.locations[i];
        if (l.is_final() || l.urgent) continue;
        const ExtValue& up = levels[level + 1][i];
        int node;
        if (up.is_finite()) {
          // waiting one grid step costs rate/N on top of the future value
          pg.locs.push_back(
              {Owner::Final,
               AffineFn{Rat(0), up.finite() + Rat(l.rate) / Rat(N)}});
          pg.out.push_back({});
          node = pg.n() - 1;
        } else if (up.is_pos_inf()) {
          pg.locs.push_back({Owner::Min, {}});
          pg.out.push_back({});
          node = pg.n() - 1;  // deadlocked sink
        } else {
          pg.locs.push_back({Owner::Final, AffineFn{Rat(0), Rat(0)}});
          pg.out.push_back({});
          int exit_node = pg.n() - 1;
          pg.locs.push_back({Owner::Min, {}});
          pg.out.push_back({});
          node = pg.n() - 1;
          pg.out[node].push_back({node, -1});
          pg.out[node].push_back({exit_node, 0});
        }
        pg.out[i].push_back({node, 0});
      }
    }
    InstantValues iv = solve_instant(pg, nu);
    for (int i = 0; i < n; ++i) levels[level][i] = iv.values[i];
  }
  return levels;
}

}  // namespace ptg::testutil
