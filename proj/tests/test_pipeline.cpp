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

#include <doctest.h>

#include "test_util.hpp"

using namespace ptg;
using namespace ptg::testutil;

TEST_CASE("the region game of the reset example has the expected copies") {
  Ptg g = load_game("fig9.ptg");
  RegionPtg rp = region_ptg(g);
  CHECK(rp.endpoints == std::vector<Rat>{Rat(0), Rat(1)});
  REQUIRE(rp.regions.size() == 3);  // {0}, (0,1), {1}
  for (const char* name :
       {"l0@[0]", "l0@(0,1)", "l1@[0]", "l1@(0,1)", "lf@[0]", "lf@(0,1)"})
    CHECK(rp.game.location_index(name) >= 0);
  // wait transitions stitch singleton to open copies
  bool some_wait = false;
  for (size_t i = 0; i < rp.game.transitions.size(); ++i)
    some_wait |= rp.wait_transition[i];
  CHECK(some_wait);
  // the strict guard on l1 -> lf relaxes to the region closure
  int l1o = rp.game.location_index("l1@(0,1)");
  int lfo = rp.game.location_index("lf@(0,1)");
  bool found = false;
  for (const auto& t : rp.game.transitions)
    if (t.src == l1o && t.dst == lfo) {
      found = true;
      CHECK(t.guard == Guard{Rat(0), Rat(1), false, false});
    }
  CHECK(found);
  // no wait edge drifts into the deadlocked {1} copies
  int l1right = rp.game.location_index("l1@[1]");
  for (const auto& t : rp.game.transitions) CHECK(t.dst != l1right);
}

TEST_CASE("a guardless simple game regionizes structure-preservingly") {
  Sptg s = load_sptg("fig1.sptg");
  RegionPtg rp = region_ptg(s.game);
  REQUIRE(rp.regions.size() == 3);
  CHECK(rp.game.locations.size() == 3 * s.game.locations.size());
}

TEST_CASE("parallel transitions collapse with the owner's best weight") {
  Ptg g;
  g.clock_bound = 1;
  Location mn;
  mn.name = "m";
  mn.owner = Owner::Min;
  g.locations.push_back(mn);
  Location mx;
  mx.name = "x";
  mx.owner = Owner::Max;
  g.locations.push_back(mx);
  Location f;
  f.name = "f";
  f.owner = Owner::Final;
  f.final_cost = AffineFn{Rat(0), Rat(0)};
  g.locations.push_back(f);
  Guard whole{Rat(0), Rat(1), false, false};
  Guard head{Rat(0), Rat(1, 2), false, true};  // [0,1/2)
  g.transitions.push_back(Transition{0, whole, false, 2, 5});
  g.transitions.push_back(Transition{0, head, false, 2, 3});
  g.transitions.push_back(Transition{1, whole, false, 2, 5});
  g.transitions.push_back(Transition{1, head, false, 2, 3});
  RegionPtg rp = region_ptg(g);
  // inside (0,1/2) both originals overlap: Min keeps 3, Max keeps 5
  int mo = rp.game.location_index("m@(0,1/2)");
  int xo = rp.game.location_index("x@(0,1/2)");
  for (size_t i = 0; i < rp.game.transitions.size(); ++i) {
    const auto& t = rp.game.transitions[i];
    if (rp.wait_transition[i]) continue;
    if (t.src == mo) CHECK(t.weight == 3);
    if (t.src == xo) CHECK(t.weight == 5);
  }
}

TEST_CASE("value bounds match the closed formulas") {
  // two locations, one unit-weight transition, rates within 1: v_sup = 8
  Ptg g;
  g.clock_bound = 1;
  Location m;
  m.name = "m";
  m.owner = Owner::Min;
  m.rate = 1;
  g.locations.push_back(m);
  Location f;
  f.name = "f";
  f.owner = Owner::Final;
  f.final_cost = AffineFn{Rat(0), Rat(0)};
  g.locations.push_back(f);
  g.transitions.push_back(
      Transition{0, Guard{Rat(0), Rat(1), false, false}, false, 1, 1});
  ValueBounds b = value_bounds(g);
  CHECK(b.v_sup == Rat(8));
  CHECK(b.v_inf == Rat(-1 * 2 * 1 - 4 * (2 * 3 + 3 + 1) * 1));

  // all-zero weights collapse both bounds to zero
  g.locations[0].rate = 0;
  g.transitions[0].weight = 0;
  ValueBounds z = value_bounds(g);
  CHECK(z.v_inf == Rat(0));
  CHECK(z.v_sup == Rat(0));

  // the example game's bounds enclose its true value 0
  ValueBounds fb = value_bounds(load_game("fig9.ptg"));
  CHECK(fb.v_inf <= Rat(0));
  CHECK(fb.v_sup >= Rat(0));
}

TEST_CASE("reset unfolding replaces resets by entry hops") {
  Ptg g = load_game("fig9.ptg");
  ResetUnfolding u = unfold_nra(g, Rat(1));
  CHECK(u.copies >= 1);
  REQUIRE(u.hop_of_reset.size() == 1);
  CHECK(u.target_of_reset[0] == g.location_index("l0"));
  for (const auto& t : u.reset_free.transitions) CHECK_FALSE(t.reset);

  // reset-free input: identity, no hops
  Ptg s = load_game("fig1.sptg");
  ResetUnfolding us = unfold_nra(s, Rat(1));
  CHECK(us.hop_of_reset.empty());
  CHECK(us.reset_free.locations.size() == s.locations.size());

  CHECK_THROWS_AS(unfold_nra(g, Rat(0)), std::invalid_argument);
}

TEST_CASE("the membership checker separates the two reset examples") {
  Ptg bad = load_game("fig8.ptg");
  for (long num : {1L, 2L}) {
    NraCheck c = check_nra(bad, Rat(num, 2));
    CHECK(c.status == NraCheck::Status::Violation);
  }
  NraCheck survey = check_nra_any(bad);
  CHECK(survey.status == NraCheck::Status::Violation);
  CHECK(survey.detail.find("no kappa works") != std::string::npos);

  Ptg good = load_game("fig9.ptg");
  CHECK(check_nra(good, Rat(1)).status == NraCheck::Status::Pass);
  CHECK(check_nra(good, Rat(1, 2)).status == NraCheck::Status::Pass);
  NraCheck gsurvey = check_nra_any(good);
  CHECK(gsurvey.status == NraCheck::Status::Pass);
  REQUIRE(gsurvey.kappa_bound.has_value());
  CHECK(*gsurvey.kappa_bound == Rat(1));
  // too greedy a kappa breaks membership: -1 falls inside (-2, 0)
  CHECK(check_nra(good, Rat(2)).status == NraCheck::Status::Violation);
}

TEST_CASE("the reset example solves to value zero at the entry") {
  Ptg g = load_game("fig9.ptg");
  PtgValueResult res = solve_nra(g, Rat(1), false);
  CHECK(res.stabilized);
  int l0 = g.location_index("l0");
  int l1 = g.location_index("l1");
  CHECK(res.values[l0].evaluate(Rat(0)) == ExtValue(Rat(0)));
  CHECK(res.values[l0].evaluate(Rat(1, 2)) == ExtValue(Rat(0)));
  CHECK(res.values[l1].evaluate(Rat(1, 2)) == ExtValue(Rat(0)));
  // nothing fires at clock 1 in either location: both jam there
  CHECK(res.values[l0].evaluate(Rat(1)).is_pos_inf());
}

TEST_CASE("solving a simple game through the region pipeline changes nothing") {
  for (uint64_t seed = 500; seed < 520; ++seed) {
    Sptg s = random_sptg(seed, 4, 4);
    ValueResult direct = solve(s);
    PtgValueResult via = reset_acyclic_solve(s.game);
    CHECK(via.copies_used == 1);
    for (size_t i = 0; i < s.game.locations.size(); ++i)
      CHECK(via.values[i] == direct.values[i]);
  }
}

TEST_CASE("two components chained by a reset compose bottom-up") {
  // a -> (reset) -> b -> f, where b's value at 0 feeds a's hop
  Ptg g;
  g.clock_bound = 1;
  Location a;
  a.name = "a";
  a.owner = Owner::Min;
  a.rate = 1;
  g.locations.push_back(a);
  Location b;
  b.name = "b";
  b.owner = Owner::Min;
  b.rate = 2;
  g.locations.push_back(b);
  Location f;
  f.name = "f";
  f.owner = Owner::Final;
  f.final_cost = AffineFn{Rat(0), Rat(3)};
  g.locations.push_back(f);
  Guard whole{Rat(0), Rat(1), false, false};
  g.transitions.push_back(Transition{0, whole, true, 1, 1});   // a -> b reset
  g.transitions.push_back(Transition{1, whole, false, 2, 0});  // b -> f
  PtgValueResult res = reset_acyclic_solve(g);
  // Val(b, nu) = 3 (exit now, rate never helps since 2 > 0... mins at 0 delay)
  CHECK(res.values[1].evaluate(Rat(0)) == ExtValue(Rat(3)));
  // Val(a, nu) = 1 + Val(b, 0) = 4, clock-independent thanks to the reset
  CHECK(res.values[0].evaluate(Rat(0)) == ExtValue(Rat(4)));
  CHECK(res.values[0].evaluate(Rat(2, 3)) == ExtValue(Rat(4)));
}

TEST_CASE("reset cycles are rejected by the acyclic solver") {
  CHECK_THROWS_AS(reset_acyclic_solve(load_game("fig8.ptg")),
                  std::invalid_argument);
  CHECK_THROWS_AS(reset_acyclic_solve(load_game("fig9.ptg")),
                  std::invalid_argument);
}

TEST_CASE("a Min-profitable reset cycle is diagnosed as divergent") {
  // Min loops a weight -1 reset onto itself with a free exit: the cycle
  // prices exactly -1 (a legal 1-NRA game) and the value diverges to -inf.
  Ptg g;
  g.clock_bound = 1;
  Location a;
  a.name = "a";
  a.owner = Owner::Min;
  g.locations.push_back(a);
  Location f;
  f.name = "f";
  f.owner = Owner::Final;
  f.final_cost = AffineFn{Rat(0), Rat(0)};
  g.locations.push_back(f);
  Guard whole{Rat(0), Rat(1), false, false};
  g.transitions.push_back(Transition{0, whole, true, 0, -1});
  g.transitions.push_back(Transition{0, whole, false, 1, 0});
  CHECK(check_nra(g, Rat(1)).status == NraCheck::Status::Pass);
  PtgValueResult res = solve_nra(g, Rat(1), false);
  CHECK_FALSE(res.stabilized);
  REQUIRE_FALSE(res.divergent.empty());
  CHECK(res.values[0].evaluate(Rat(0)).is_neg_inf());
  CHECK(res.values[0].evaluate(Rat(1, 2)).is_neg_inf());
  CHECK(res.values[1].evaluate(Rat(1, 2)) == ExtValue(Rat(0)));
}

TEST_CASE("region values stay piecewise affine with few cutpoints") {
  Ptg g = load_game("fig9.ptg");
  PtgValueResult res = solve_nra(g, Rat(1), false);
  for (const auto& f : res.values) {
    CHECK(f.cutpoint_count() <= 8);
    for (const auto& p : f.pieces())
      if (p.is_affine()) CHECK(p.fn.slope.den() <= 8);
  }
}
