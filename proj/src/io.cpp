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

#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ptg {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Token {
  std::string text;
  int line = 0;
  int column = 0;
};

// Whitespace-separated tokens; '#' starts a comment; "->" always stands
// alone.
std::vector<std::vector<Token>> tokenize(std::string_view text) {
  std::vector<std::vector<Token>> lines;
  int lineno = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    ++lineno;
    std::vector<Token> toks;
    size_t i = 0;
    while (i < line.size()) {
      if (std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
        continue;
      }
      if (line[i] == '#') break;
      size_t start = i;
      while (i < line.size() &&
             !std::isspace(static_cast<unsigned char>(line[i])) &&
             line[i] != '#')
        ++i;
      toks.push_back({std::string(line.substr(start, i - start)), lineno,
                      static_cast<int>(start) + 1});
    }
    if (!toks.empty()) lines.push_back(std::move(toks));
    if (eol == text.size()) break;
    pos = eol + 1;
  }
  return lines;
}

struct KeyValue {
  std::string key;
  std::string value;
  bool has_value = false;
};

KeyValue split_kv(const Token& t) {
  auto eq = t.text.find('=');
  if (eq == std::string::npos) return {t.text, "", false};
  return {t.text.substr(0, eq), t.text.substr(eq + 1), true};
}

struct Parser {
  std::vector<ParseDiagnostic> diags;

  void error(const Token& t, const std::string& msg) {
    diags.push_back({t.line, t.column, msg});
  }

  std::optional<Rat> rat(const Token& t, const std::string& text,
                         const char* what) {
    try {
      return Rat::parse(text);
    } catch (const std::exception&) {
      error(t, std::string("malformed ") + what + " '" + text + "'");
      return std::nullopt;
    }
  }

  std::optional<long long> integer(const Token& t, const std::string& text,
                                   const char* what) {
    std::optional<Rat> r = rat(t, text, what);
    if (!r) return std::nullopt;
    if (!r->is_integer()) {
      error(t, std::string(what) + " must be an integer, got '" + text + "'");
      return std::nullopt;
    }
    try {
      return r->floor_ll();
    } catch (const std::exception&) {
      error(t, std::string(what) + " out of range");
      return std::nullopt;
    }
  }

  // "<a>*x+<b>", "<a>*x-<b>" or a plain constant.
  std::optional<AffineFn> affine(const Token& t, const std::string& text) {
    auto star = text.find("*x");
    if (star == std::string::npos) {
      std::optional<Rat> c = rat(t, text, "final cost");
      if (!c) return std::nullopt;
      return AffineFn{Rat(0), *c};
    }
    std::optional<Rat> slope = rat(t, text.substr(0, star), "slope");
    if (!slope) return std::nullopt;
    std::string rest = text.substr(star + 2);
    if (rest.empty()) return AffineFn{*slope, Rat(0)};
    if (rest[0] != '+' && rest[0] != '-') {
      error(t, "expected '+<b>' or '-<b>' after '*x' in '" + text + "'");
      return std::nullopt;
    }
    std::optional<Rat> icept = rat(t, rest, "intercept");
    if (!icept) return std::nullopt;
    return AffineFn{*slope, *icept};
  }

  std::optional<Guard> guard(const Token& t, const std::string& text) {
    if (text.size() < 5) {
      error(t, "malformed guard '" + text + "', expected like [0,1]");
      return std::nullopt;
    }
    char open = text.front(), close = text.back();
    if ((open != '[' && open != '(') || (close != ']' && close != ')')) {
      error(t, "guard must start with [ or ( and end with ] or )");
      return std::nullopt;
    }
    std::string body = text.substr(1, text.size() - 2);
    auto comma = body.find(',');
    if (comma == std::string::npos) {
      error(t, "guard misses ',' in '" + text + "'");
      return std::nullopt;
    }
    std::optional<Rat> lo = rat(t, body.substr(0, comma), "guard endpoint");
    std::optional<Rat> hi = rat(t, body.substr(comma + 1), "guard endpoint");
    if (!lo || !hi) return std::nullopt;
    return Guard{*lo, *hi, open == '(', close == ')'};
  }
};

}  // namespace

ParseResult parse_game(std::string_view text) {
  ParseResult out;
  Parser p;
  Ptg g;
  struct PendingTransition {
    Token src, dst;
    Transition t;
  };
  std::vector<PendingTransition> pending;
  std::map<std::string, int> loc_index;
  bool saw_clock_bound = false;

  for (const auto& toks : tokenize(text)) {
    const Token& head = toks[0];
    if (head.text == "clock_bound") {
      if (toks.size() != 2) {
        p.error(head, "expected: clock_bound <M>");
        continue;
      }
      if (auto m = p.integer(toks[1], toks[1].text, "clock bound")) {
        g.clock_bound = *m;
        saw_clock_bound = true;
      }
    } else if (head.text == "location") {
      if (toks.size() < 3) {
        p.error(head,
                "expected: location <id> owner=(min|max|final) [rate=<int>] "
                "[urgent] [final_cost=<a>*x+<b>]");
        continue;
      }
      Location l;
      l.name = toks[1].text;
      if (loc_index.count(l.name)) {
        p.error(toks[1], "duplicate location '" + l.name + "'");
        continue;
      }
      bool ok = true;
      bool saw_owner = false;
      for (size_t i = 2; i < toks.size(); ++i) {
        KeyValue kv = split_kv(toks[i]);
        if (kv.key == "owner" && kv.has_value) {
          saw_owner = true;
          if (kv.value == "min")
            l.owner = Owner::Min;
          else if (kv.value == "max")
            l.owner = Owner::Max;
          else if (kv.value == "final")
            l.owner = Owner::Final;
          else {
            p.error(toks[i], "owner must be min, max or final");
            ok = false;
          }
        } else if (kv.key == "rate" && kv.has_value) {
          if (auto r = p.integer(toks[i], kv.value, "rate"))
            l.rate = *r;
          else
            ok = false;
        } else if (kv.key == "urgent" && !kv.has_value) {
          l.urgent = true;
        } else if (kv.key == "final_cost" && kv.has_value) {
          if (auto f = p.affine(toks[i], kv.value))
            l.final_cost = *f;
          else
            ok = false;
        } else {
          p.error(toks[i], "unexpected token '" + toks[i].text + "'");
          ok = false;
        }
      }
      if (!saw_owner) {
        p.error(head, "location '" + l.name + "' misses owner=");
        ok = false;
      }
      if (ok) {
        loc_index[l.name] = static_cast<int>(g.locations.size());
        g.locations.push_back(std::move(l));
      }
    } else if (head.text == "transition") {
      // transition <src> -> <dst> guard=... [reset] weight=<int>
      if (toks.size() < 4 || toks[2].text != "->") {
        p.error(head, "expected: transition <src> -> <dst> guard=[lo,hi] "
                      "[reset] weight=<int>");
        continue;
      }
      PendingTransition pt;
      pt.src = toks[1];
      pt.dst = toks[3];
      pt.t.guard = Guard{Rat(0), Rat(1), false, false};
      bool ok = true;
      for (size_t i = 4; i < toks.size(); ++i) {
        KeyValue kv = split_kv(toks[i]);
        if (kv.key == "guard" && kv.has_value) {
          if (auto gd = p.guard(toks[i], kv.value))
            pt.t.guard = *gd;
          else
            ok = false;
        } else if (kv.key == "reset" && !kv.has_value) {
          pt.t.reset = true;
        } else if (kv.key == "weight" && kv.has_value) {
          if (auto w = p.integer(toks[i], kv.value, "weight"))
            pt.t.weight = *w;
          else
            ok = false;
        } else {
          p.error(toks[i], "unexpected token '" + toks[i].text + "'");
          ok = false;
        }
      }
      if (ok) pending.push_back(std::move(pt));
    } else {
      p.error(head, "unknown directive '" + head.text +
                        "' (expected location, transition or clock_bound)");
    }
  }

  if (g.locations.empty()) {
    p.diags.push_back({1, 1, "no locations"});
  }
  for (auto& pt : pending) {
    auto si = loc_index.find(pt.src.text);
    auto di = loc_index.find(pt.dst.text);
    if (si == loc_index.end())
      p.error(pt.src, "dangling location id '" + pt.src.text + "'");
    if (di == loc_index.end())
      p.error(pt.dst, "dangling location id '" + pt.dst.text + "'");
    if (si == loc_index.end() || di == loc_index.end()) continue;
    pt.t.src = si->second;
    pt.t.dst = di->second;
    g.transitions.push_back(pt.t);
  }
  if (!saw_clock_bound) {
    // default bound: smallest integer covering all guards, at least 1
    Rat hi(1);
    for (const auto& t : g.transitions) hi = max(hi, t.guard.hi);
    g.clock_bound = hi.ceil_ll();
  }

  out.diagnostics = std::move(p.diags);
  if (out.diagnostics.empty()) out.game = std::move(g);
  return out;
}

namespace {

std::string affine_str(const AffineFn& f) {
  std::string s = f.slope.str() + "*x";
  if (f.intercept.sign() >= 0) s += "+";
  return s + f.intercept.str();
}

}  // namespace

std::string print_game(const Ptg& g) {
  std::ostringstream os;
  os << "clock_bound " << g.clock_bound << "\n";
  for (const auto& l : g.locations) {
    os << "location " << l.name << " owner=" << owner_name(l.owner);
    if (!l.is_final()) os << " rate=" << l.rate;
    if (l.urgent) os << " urgent";
    if (l.final_cost) os << " final_cost=" << affine_str(*l.final_cost);
    os << "\n";
  }
  for (const auto& t : g.transitions) {
    os << "transition " << g.locations[t.src].name << " -> "
       << g.locations[t.dst].name << " guard=" << t.guard.str();
    if (t.reset) os << " reset";
    os << " weight=" << t.weight << "\n";
  }
  return os.str();
}

std::optional<OutputFormat> parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  if (name == "svg") return OutputFormat::Svg;
  return std::nullopt;
}

namespace {

// ---- CSV ------------------------------------------------------------

void csv_function(std::ostringstream& os, const std::string& name,
                  const CostFunction& f) {
  for (size_t i = 0; i < f.cutpoint_count(); ++i) {
    os << name << ',' << f.cutpoints()[i].str() << ','
       << f.point_values()[i].str() << ',';
    if (i < f.pieces().size()) {
      const auto& p = f.pieces()[i];
      if (p.is_affine())
        os << p.fn.slope.str();
      else
        os << (p.kind == CostFunction::Piece::Kind::PosInf ? "+inf" : "-inf");
    }
    os << '\n';
  }
}

// ---- JSON -----------------------------------------------------------

ordered_json json_function(const CostFunction& f) {
  ordered_json j;
  j["cutpoints"] = ordered_json::array();
  j["values"] = ordered_json::array();
  j["slopes"] = ordered_json::array();
  for (size_t i = 0; i < f.cutpoint_count(); ++i) {
    j["cutpoints"].push_back(f.cutpoints()[i].str());
    j["values"].push_back(f.point_values()[i].str());
  }
  for (const auto& p : f.pieces()) {
    if (p.is_affine())
      j["slopes"].push_back(p.fn.slope.str());
    else
      j["slopes"].push_back(
          p.kind == CostFunction::Piece::Kind::PosInf ? "+inf" : "-inf");
  }
  return j;
}

ordered_json json_move(const Ptg& g, const FpMove& mv) {
  ordered_json j;
  j["action"] = mv.wait ? "wait_then_take" : "take";
  if (mv.transition >= 0) {
    const auto& t = g.transitions[mv.transition];
    j["transition"] = mv.transition;
    j["to"] = g.locations[t.dst].name;
  }
  return j;
}

ordered_json json_fp(const Ptg& g, const FpStrategy& fs) {
  ordered_json j = ordered_json::object();
  for (size_t i = 0; i < fs.plans.size(); ++i) {
    const auto& plan = fs.plans[i];
    if (plan.empty()) continue;
    ordered_json rows = ordered_json::array();
    for (size_t k = 0; k < plan.points.size(); ++k) {
      ordered_json at;
      at["at"] = plan.points[k].str();
      at["move"] = json_move(g, plan.point_moves[k]);
      rows.push_back(at);
      if (k < plan.interval_moves.size()) {
        ordered_json iv;
        iv["interval"] = "(" + plan.points[k].str() + "," +
                         plan.points[k + 1].str() + ")";
        iv["move"] = json_move(g, plan.interval_moves[k]);
        rows.push_back(iv);
      }
    }
    j[g.locations[i].name] = rows;
  }
  return j;
}

// ---- SVG ------------------------------------------------------------

const char* kPalette[] = {"#1b6ca8", "#c23b22", "#2e8b57", "#8e44ad",
                          "#d4881e", "#16a2b8", "#7f8c1f", "#b5651d",
                          "#445566", "#aa3377"};

std::string svg_plot(const Ptg& g, const std::vector<CostFunction>& fns) {
  const double width = 720, height = 480;
  const double ml = 70, mr = 160, mt = 20, mb = 40;
  // Data ranges over finite parts.
  bool any = false;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  for (const auto& f : fns) {
    if (f.is_empty()) continue;
    xmin = any ? std::min(xmin, f.lo().to_double()) : f.lo().to_double();
    xmax = any ? std::max(xmax, f.hi().to_double()) : f.hi().to_double();
    ExtValue mn = f.min_value(), mx = f.max_value();
    if (mn.is_finite())
      ymin = any ? std::min(ymin, mn.finite().to_double())
                 : mn.finite().to_double();
    if (mx.is_finite())
      ymax = any ? std::max(ymax, mx.finite().to_double())
                 : mx.finite().to_double();
    any = true;
  }
  if (ymin == ymax) {
    ymin -= 1;
    ymax += 1;
  }
  if (xmin == xmax) xmax += 1;
  auto X = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr);
  };
  auto Y = [&](double y) {
    return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb);
  };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes
  os << "<line x1=\"" << X(xmin) << "\" y1=\"" << Y(ymin) << "\" x2=\""
     << X(xmax) << "\" y2=\"" << Y(ymin) << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << X(xmin) << "\" y1=\"" << Y(ymin) << "\" x2=\""
     << X(xmin) << "\" y2=\"" << Y(ymax) << "\" stroke=\"black\"/>\n";
  // cutpoint ticks with exact labels
  std::set<std::string> xdone;
  for (const auto& f : fns) {
    if (f.is_empty() || !f.is_finite()) continue;
    for (const auto& c : f.cutpoints()) {
      if (!xdone.insert(c.str()).second) continue;
      double x = X(c.to_double());
      os << "<line x1=\"" << x << "\" y1=\"" << Y(ymin) << "\" x2=\"" << x
         << "\" y2=\"" << Y(ymin) + 4 << "\" stroke=\"black\"/>\n";
      os << "<text x=\"" << x << "\" y=\"" << Y(ymin) + 16
         << "\" font-size=\"11\" text-anchor=\"middle\">" << c.str()
         << "</text>\n";
    }
  }
  size_t ci = 0;
  double legend_y = mt + 10;
  for (size_t i = 0; i < fns.size(); ++i) {
    const auto& f = fns[i];
    if (f.is_empty() || !f.is_finite()) continue;
    const char* color = kPalette[ci++ % (sizeof(kPalette) / sizeof(char*))];
    std::ostringstream pts;
    for (size_t k = 0; k < f.cutpoint_count(); ++k) {
      pts << X(f.cutpoints()[k].to_double()) << ','
          << Y(f.point_values()[k].finite().to_double()) << ' ';
    }
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
    for (size_t k = 0; k < f.cutpoint_count(); ++k)
      os << "<circle cx=\"" << X(f.cutpoints()[k].to_double()) << "\" cy=\""
         << Y(f.point_values()[k].finite().to_double())
         << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    os << "<text x=\"" << width - mr + 12 << "\" y=\"" << legend_y
       << "\" font-size=\"12\" fill=\"" << color << "\">"
       << g.locations[i].name << "</text>\n";
    // label the endpoint values exactly
    os << "<text x=\"" << width - mr + 70 << "\" y=\"" << legend_y
       << "\" font-size=\"11\" fill=\"#333\">"
       << f.point_values().front().str() << " .. "
       << f.point_values().back().str() << "</text>\n";
    legend_y += 16;
  }
  os << "</svg>\n";
  return os.str();
}

ordered_json json_stats(const SolveStats& st) {
  ordered_json j;
  j["instant_calls"] = st.instant_calls;
  j["instant_iterations"] = st.instant_iterations;
  j["windows"] = st.window_count;
  j["window_bound"] = st.window_bound;
  j["candidate_points"] = st.candidate_points;
  j["max_cutpoints"] = st.max_cutpoints;
  j["cutpoint_bound"] = st.cutpoint_bound;
  return j;
}

}  // namespace

std::string emit_results(const Ptg& g, const ValueResult& res,
                         OutputFormat format) {
  switch (format) {
    case OutputFormat::Csv: {
      std::ostringstream os;
      os << "location,cutpoint,value,slope_right\n";
      for (size_t i = 0; i < res.values.size(); ++i)
        csv_function(os, g.locations[i].name, res.values[i]);
      return os.str();
    }
    case OutputFormat::Svg:
      return svg_plot(g, res.values);
    case OutputFormat::Json:
    default: {
      ordered_json j;
      j["format"] = "ptgsolve-result";
      j["version"] = 1;
      j["kind"] = "sptg";
      ordered_json locs = ordered_json::array();
      for (size_t i = 0; i < res.values.size(); ++i) {
        ordered_json l;
        l["name"] = g.locations[i].name;
        l["owner"] = owner_name(g.locations[i].owner);
        l["value"] = json_function(res.values[i]);
        locs.push_back(l);
      }
      j["locations"] = locs;
      ordered_json sweep = ordered_json::array();
      for (const auto& r : res.sweep_endpoints) sweep.push_back(r.str());
      j["sweep_endpoints"] = sweep;
      ordered_json strat;
      strat["max"] = json_fp(g, res.max_strategy);
      ordered_json sw;
      sw["primary"] = json_fp(g, res.min_strategy.primary);
      sw["attractor"] = json_fp(g, res.min_strategy.attractor);
      sw["threshold"] = res.min_strategy.threshold;
      strat["min"] = sw;
      j["strategies"] = strat;
      j["stats"] = json_stats(res.stats);
      return j.dump(2) + "\n";
    }
  }
}

std::string emit_ptg_results(const Ptg& g, const PtgValueResult& res,
                             OutputFormat format) {
  switch (format) {
    case OutputFormat::Csv: {
      std::ostringstream os;
      os << "location,cutpoint,value,slope_right\n";
      for (size_t i = 0; i < res.values.size(); ++i)
        csv_function(os, g.locations[i].name, res.values[i]);
      return os.str();
    }
    case OutputFormat::Svg:
      return svg_plot(g, res.values);
    case OutputFormat::Json:
    default: {
      ordered_json j;
      j["format"] = "ptgsolve-result";
      j["version"] = 1;
      j["kind"] = "ptg";
      ordered_json locs = ordered_json::array();
      for (size_t i = 0; i < res.values.size(); ++i) {
        ordered_json l;
        l["name"] = g.locations[i].name;
        l["owner"] = owner_name(g.locations[i].owner);
        l["value"] = json_function(res.values[i]);
        locs.push_back(l);
      }
      j["locations"] = locs;
      j["copies_used"] = res.copies_used;
      j["stabilized"] = res.stabilized;
      ordered_json div = ordered_json::array();
      for (const auto& d : res.divergent) div.push_back(d);
      j["divergent_entries"] = div;
      return j.dump(2) + "\n";
    }
  }
}

std::string emit_instant(const Ptg& g, const Rat& nu, const InstantValues& iv,
                         OutputFormat format) {
  if (format == OutputFormat::Csv) {
    std::ostringstream os;
    os << "location,clock,value\n";
    for (size_t i = 0; i < iv.values.size(); ++i)
      os << g.locations[i].name << ',' << nu.str() << ','
         << iv.values[i].str() << '\n';
    return os.str();
  }
  ordered_json j;
  j["format"] = "ptgsolve-instant";
  j["version"] = 1;
  j["clock"] = nu.str();
  ordered_json vals = ordered_json::object();
  for (size_t i = 0; i < iv.values.size(); ++i)
    vals[g.locations[i].name] = iv.values[i].str();
  j["values"] = vals;
  j["iterations"] = iv.iterations;
  return j.dump(2) + "\n";
}

}  // namespace ptg
