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

#include "ptg/io.hpp"

#include <doctest.h>

#include "ptg/solver.hpp"
#include "test_util.hpp"

using namespace ptg;
using namespace ptg::testutil;

namespace {

bool same_game(const Ptg& a, const Ptg& b) {
  if (a.clock_bound != b.clock_bound) return false;
  if (a.locations.size() != b.locations.size()) return false;
  if (a.transitions.size() != b.transitions.size()) return false;
  for (size_t i = 0; i < a.locations.size(); ++i) {
    const auto &x = a.locations[i], &y = b.locations[i];
    if (x.name != y.name || x.owner != y.owner || x.rate != y.rate ||
        x.urgent != y.urgent || x.final_cost.has_value() != y.final_cost.has_value())
      return false;
    if (x.final_cost && !(*x.final_cost == *y.final_cost)) return false;
  }
  for (size_t i = 0; i < a.transitions.size(); ++i) {
    const auto &x = a.transitions[i], &y = b.transitions[i];
    if (x.src != y.src || x.dst != y.dst || !(x.guard == y.guard) ||
        x.reset != y.reset || x.weight != y.weight)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("parse then print round-trips every fixture") {
  for (const char* name : {"fig1.sptg", "fig3.sptg", "fig8.ptg", "fig9.ptg"}) {
    Ptg g = load_game(name);
    ParseResult again = parse_game(print_game(g));
    REQUIRE(again.ok());
    CHECK(same_game(g, *again.game));
  }
}

TEST_CASE("empty input reports 'no locations'") {
  ParseResult pr = parse_game("");
  CHECK_FALSE(pr.ok());
  REQUIRE_FALSE(pr.diagnostics.empty());
  CHECK(pr.diagnostics[0].message == "no locations");
}

TEST_CASE("syntax diagnostics carry positions") {
  ParseResult pr = parse_game(
      "location a owner=min rate=zz\n"
      "transition a -> nowhere weight=1\n");
  CHECK_FALSE(pr.ok());
  bool malformed = false, dangling = false;
  for (const auto& d : pr.diagnostics) {
    if (d.message.find("malformed rate") != std::string::npos) {
      malformed = true;
      CHECK(d.line == 1);
      CHECK(d.column == 22);
    }
    dangling |= d.message.find("dangling location id 'nowhere'") !=
                std::string::npos;
  }
  CHECK(malformed);
  CHECK(dangling);
}

TEST_CASE("duplicate locations and bad guards are caught") {
  ParseResult pr = parse_game(
      "location a owner=min rate=0\n"
      "location a owner=max rate=1\n"
      "location f owner=final final_cost=0*x+0\n"
      "transition a -> f guard=[1,0] weight=0\n");
  CHECK_FALSE(pr.ok());
}

TEST_CASE("parsed guards keep open and closed flags") {
  Ptg g = load_game("fig9.ptg");
  CHECK(g.transitions[0].guard.str() == "[0,1)");
  CHECK(g.transitions[2].guard.str() == "(0,1)");
}

TEST_CASE("csv output carries exact fractions") {
  Sptg s = load_sptg("fig1.sptg");
  std::string csv = emit_results(s.game, solve(s), OutputFormat::Csv);
  CHECK(csv.find("location,cutpoint,value,slope_right") == 0);
  CHECK(csv.find("l1,3/4,-2,12") != std::string::npos);
  CHECK(csv.find("l1,0,-19/2,14") != std::string::npos);
  CHECK(csv.find(".") == std::string::npos);  // never decimal notation
}

TEST_CASE("json output is byte-deterministic") {
  Sptg s = load_sptg("fig1.sptg");
  ValueResult r1 = solve(s);
  ValueResult r2 = solve(s);
  CHECK(emit_results(s.game, r1, OutputFormat::Json) ==
        emit_results(s.game, r2, OutputFormat::Json));
}

TEST_CASE("svg plots one polyline per finite location") {
  Sptg s = load_sptg("fig1.sptg");
  std::string svg = emit_results(s.game, solve(s), OutputFormat::Svg);
  size_t polylines = 0, pos = 0;
  while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
    ++polylines;
    ++pos;
  }
  CHECK(polylines == 8);
  // the five-piece function's interior cutpoints show up as tick labels
  CHECK(svg.find(">9/10<") != std::string::npos);
  CHECK(svg.find(">3/4<") != std::string::npos);
}

TEST_CASE("serialized fractions in results are reduced") {
  Sptg s = load_sptg("fig3.sptg");
  std::string csv = emit_results(s.game, solve(s), OutputFormat::Csv);
  CHECK(csv.find("/1,") == std::string::npos);
  CHECK(csv.find("-5") != std::string::npos);
}
