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

#include <doctest.h>

#include "ptg/io.hpp"
#include "ptg/solver.hpp"
#include "test_util.hpp"

using namespace ptg;
using namespace ptg::testutil;

namespace {

// Strips the stats block (engines may differ in speculative work) and
// compares everything else byte for byte.
std::string comparable(const Ptg& g, const ValueResult& res) {
  std::string s = emit_results(g, res, OutputFormat::Json);
  auto cut = s.find("\"stats\"");
  return s.substr(0, cut);
}

ValueResult run(const Sptg& s, SolveOptions::Engine engine, int batch) {
  SolveOptions o;
  o.engine = engine;
  o.batch = batch;
  return solve(s, o);
}

}  // namespace

TEST_CASE("the speculative engine matches the serial reference exactly") {
  Sptg s = load_sptg("fig1.sptg");
  ValueResult serial = run(s, SolveOptions::Engine::Serial, 1);
  for (int batch : {2, 8, 64}) {
    ValueResult par = run(s, SolveOptions::Engine::Parallel, batch);
    CHECK(comparable(s.game, par) == comparable(s.game, serial));
    CHECK(par.sweep_endpoints == serial.sweep_endpoints);
  }
}

TEST_CASE("engine equivalence holds across random games") {
  for (uint64_t seed = 700; seed < 725; ++seed) {
    Sptg s = random_sptg(seed, 6, 8);
    ValueResult serial = run(s, SolveOptions::Engine::Serial, 1);
    ValueResult par = run(s, SolveOptions::Engine::Parallel, 16);
    REQUIRE(serial.values.size() == par.values.size());
    for (size_t i = 0; i < serial.values.size(); ++i)
      CHECK(serial.values[i] == par.values[i]);
    CHECK(serial.sweep_endpoints == par.sweep_endpoints);
    CHECK(comparable(s.game, par) == comparable(s.game, serial));
  }
}
