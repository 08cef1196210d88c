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

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ptg/instant.hpp"
#include "ptg/io.hpp"
#include "ptg/log.hpp"
#include "ptg/model.hpp"
#include "ptg/pipeline.hpp"
#include "ptg/play.hpp"
#include "ptg/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitSolverBug = 2;
constexpr int kExitUsage = 64;

struct Common {
  std::string file;
  std::string format = "json";
  std::string out;
  unsigned long long max_iterations = 0;
};

void add_common(CLI::App* cmd, Common& c, bool with_format = true) {
  cmd->add_option("file", c.file, "game file")->required();
  if (with_format)
    cmd->add_option("--format", c.format, "output format: csv|json|svg")
        ->check(CLI::IsMember({"csv", "json", "svg"}));
  cmd->add_option("--out", c.out, "write output to this path");
  cmd->add_option("--max-iterations", c.max_iterations,
                  "override the sweep safety bound");
}

int write_out(const Common& c, const std::string& payload) {
  if (c.out.empty()) {
    std::cout << payload;
    return kExitOk;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) {
    std::cerr << "cannot write '" << c.out << "'\n";
    return kExitDiagnostics;
  }
  f << payload;
  return kExitOk;
}

std::optional<ptg::Ptg> load(const Common& c, int& rc) {
  std::ifstream f(c.file, std::ios::binary);
  if (!f) {
    std::cerr << "cannot read '" << c.file << "'\n";
    rc = kExitDiagnostics;
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << f.rdbuf();
  ptg::ParseResult pr = ptg::parse_game(buf.str());
  if (!pr.ok()) {
    for (const auto& d : pr.diagnostics)
      std::cerr << c.file << ":" << d.str() << "\n";
    rc = kExitDiagnostics;
    return std::nullopt;
  }
  std::vector<ptg::Diagnostic> ds = ptg::validate(*pr.game);
  bool bad = ptg::has_errors(ds);
  for (const auto& d : ds) {
    std::cerr << c.file << ": "
              << (d.severity == ptg::Diagnostic::Severity::Error ? "error: "
                                                                 : "warning: ")
              << d.message << "\n";
  }
  if (bad) {
    rc = kExitDiagnostics;
    return std::nullopt;
  }
  return pr.game;
}

std::optional<ptg::Sptg> as_sptg(const ptg::Ptg& g, int& rc) {
  std::string why;
  std::optional<ptg::Sptg> s = ptg::Sptg::from(g, &why);
  if (!s) {
    std::cerr << "not a simple game: " << why << "\n";
    rc = kExitDiagnostics;
  }
  return s;
}

ptg::SolveOptions make_opts(const Common& c) {
  ptg::SolveOptions o;
  o.max_windows = c.max_iterations;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact solver for one-clock priced timed games"};
  app.require_subcommand(1);

  Common c_solve, c_instant, c_region, c_nra, c_sim, c_check;
  std::string at_text, kappa_text = "1", from_text;
  bool assert_nra = false;
  unsigned long long seed = 0, horizon = 0;

  CLI::App* solve = app.add_subcommand("solve", "solve a simple game");
  add_common(solve, c_solve);

  CLI::App* instant = app.add_subcommand(
      "solve-instant", "values of the urgent variant at one clock value");
  add_common(instant, c_instant);
  instant->add_option("--at", at_text, "clock value (rational)")->required();

  CLI::App* region =
      app.add_subcommand("region", "print the region game of a one-clock game");
  add_common(region, c_region, /*with_format=*/false);

  CLI::App* nra = app.add_subcommand(
      "solve-nra", "solve a negative-reset-acyclic one-clock game");
  add_common(nra, c_nra);
  nra->add_option("--kappa", kappa_text, "negative cycle depth bound")
      ->required();
  nra->add_flag("--assert-nra", assert_nra,
                "skip the membership check and trust the caller");

  CLI::App* sim = app.add_subcommand(
      "simulate", "play the solved Min strategy against a seeded adversary");
  add_common(sim, c_sim);
  sim->add_option("--from", from_text, "start as <location>:<clock>")
      ->required();
  sim->add_option("--seed", seed, "adversary seed")->required();
  sim->add_option("--horizon", horizon, "transition budget (default 4K+4n)");

  CLI::App* check = app.add_subcommand(
      "check", "validate a game file and survey its reset cycles");
  add_common(check, c_check, /*with_format=*/false);
  check->add_option("--kappa", kappa_text,
                    "check membership for this kappa instead of surveying");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve->parsed()) {
      int rc = kExitOk;
      auto g = load(c_solve, rc);
      if (!g) return rc;
      auto s = as_sptg(*g, rc);
      if (!s) return rc;
      ptg::ValueResult res = ptg::solve(*s, make_opts(c_solve));
      auto fmt = ptg::parse_format(c_solve.format);
      return write_out(c_solve, ptg::emit_results(s->game, res, *fmt));
    }

    if (instant->parsed()) {
      int rc = kExitOk;
      auto g = load(c_instant, rc);
      if (!g) return rc;
      auto s = as_sptg(*g, rc);
      if (!s) return rc;
      ptg::Rat nu = ptg::Rat::parse(at_text);
      if (nu < ptg::Rat(0) || nu > s->right_endpoint) {
        std::cerr << "--at " << nu.str() << " outside [0,"
                  << s->right_endpoint.str() << "]\n";
        return kExitDiagnostics;
      }
      ptg::InstantValues iv =
          ptg::solve_instant(ptg::InstantGame::all_urgent(*s), nu);
      auto fmt = ptg::parse_format(c_instant.format);
      if (*fmt == ptg::OutputFormat::Svg) {
        std::cerr << "solve-instant has no svg output\n";
        return kExitUsage;
      }
      return write_out(c_instant, ptg::emit_instant(s->game, nu, iv, *fmt));
    }

    if (region->parsed()) {
      int rc = kExitOk;
      auto g = load(c_region, rc);
      if (!g) return rc;
      ptg::RegionPtg rp = ptg::region_ptg(*g);
      return write_out(c_region, ptg::print_game(rp.game));
    }

    if (nra->parsed()) {
      int rc = kExitOk;
      auto g = load(c_nra, rc);
      if (!g) return rc;
      ptg::Rat kappa = ptg::Rat::parse(kappa_text);
      ptg::PtgValueResult res;
      try {
        res = ptg::solve_nra(*g, kappa, assert_nra, make_opts(c_nra));
      } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitDiagnostics;
      }
      auto fmt = ptg::parse_format(c_nra.format);
      return write_out(c_nra, ptg::emit_ptg_results(*g, res, *fmt));
    }

    if (sim->parsed()) {
      int rc = kExitOk;
      auto g = load(c_sim, rc);
      if (!g) return rc;
      auto s = as_sptg(*g, rc);
      if (!s) return rc;
      auto colon = from_text.rfind(':');
      if (colon == std::string::npos) {
        std::cerr << "--from must be <location>:<clock>\n";
        return kExitUsage;
      }
      int loc = s->game.location_index(from_text.substr(0, colon));
      if (loc < 0) {
        std::cerr << "unknown location '" << from_text.substr(0, colon)
                  << "'\n";
        return kExitDiagnostics;
      }
      ptg::Rat clock = ptg::Rat::parse(from_text.substr(colon + 1));
      ptg::ValueResult res = ptg::solve(*s, make_opts(c_sim));
      ptg::Strategy smin = ptg::switching_runner(s->game, res.min_strategy);
      ptg::FpStrategy adv =
          ptg::random_fp_strategy(*s, ptg::Owner::Max, seed);
      ptg::Strategy smax = ptg::fp_runner(s->game, ptg::Owner::Max, adv);
      unsigned long long h =
          horizon ? horizon
                  : ptg::default_horizon(s->game, res.min_strategy.threshold);
      ptg::Play play =
          ptg::simulate(s->game, {loc, clock}, smin, smax, h);
      ptg::ExtValue cost = ptg::play_cost(s->game, play);

      std::ostringstream os;
      os << "start " << s->game.locations[loc].name << " clock "
         << clock.str() << "\n";
      for (const auto& st : play.steps) {
        const auto& t = s->game.transitions[st.transition];
        os << "  wait " << st.delay.str() << " take "
           << s->game.locations[t.src].name << "->"
           << s->game.locations[t.dst].name << " cost " << st.cost.str()
           << "\n";
      }
      os << (play.completed ? "completed" : play.truncated ? "truncated"
                                                           : "deadlock")
         << " cost " << cost.str() << " value "
         << res.values[loc].evaluate(clock).str() << "\n";
      return write_out(c_sim, os.str());
    }

    if (check->parsed()) {
      int rc = kExitOk;
      auto g = load(c_check, rc);
      if (!g) return rc;
      bool has_reset = false;
      for (const auto& t : g->transitions) has_reset |= t.reset;
      ptg::NraCheck res;
      if (check->count("--kappa") > 0) {
        res = ptg::check_nra(*g, ptg::Rat::parse(kappa_text));
      } else {
        res = ptg::check_nra_any(*g);
      }
      std::ostringstream os;
      std::string why;
      os << (ptg::is_sptg(*g, &why) ? "simple game\n"
                                    : "one-clock game (" + why + ")\n");
      switch (res.status) {
        case ptg::NraCheck::Status::Pass:
          if (!has_reset)
            os << "reset-free\n";
          else if (res.kappa_bound)
            os << "negative-reset-acyclic for every kappa <= "
               << res.kappa_bound->str() << "\n";
          else
            os << "negative-reset-acyclic (all reset cycles non-negative)\n";
          break;
        case ptg::NraCheck::Status::Violation:
          os << "not negative-reset-acyclic: " << res.detail << "\n";
          break;
        case ptg::NraCheck::Status::Inconclusive:
          os << "membership inconclusive: " << res.detail << "\n";
          break;
      }
      std::cout << os.str();
      return res.status == ptg::NraCheck::Status::Pass ? kExitOk
                                                       : kExitDiagnostics;
    }
  } catch (const ptg::solver_error& e) {
    std::cerr << "solver invariant failed: " << e.what() << "\n";
    return kExitSolverBug;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDiagnostics;
  }
  return kExitUsage;
}
