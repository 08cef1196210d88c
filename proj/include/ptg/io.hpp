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
#include <string_view>
#include <vector>

#include "ptg/model.hpp"
#include "ptg/pipeline.hpp"
#include "ptg/solver.hpp"

namespace ptg {

struct ParseDiagnostic {
  int line = 0;    // 1-based
  int column = 0;  // 1-based
  std::string message;

  std::string str() const {
    return std::to_string(line) + ":" + std::to_string(column) + ": " +
           message;
  }
};

struct ParseResult {
  std::optional<Ptg> game;
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return game.has_value() && diagnostics.empty(); }
};

/// Parses the textual game format (see docs/format.md). Returns positioned
/// diagnostics instead of throwing.
ParseResult parse_game(std::string_view text);

/// Canonical text form; parse(print(g)) reproduces g structurally.
std::string print_game(const Ptg& g);

enum class OutputFormat { Csv, Json, Svg };
std::optional<OutputFormat> parse_format(std::string_view name);

/// Serializes a solved simple game. CSV: one row per (location, cutpoint)
/// with the slope to the right; JSON: full structure including strategies
/// and statistics (byte-deterministic); SVG: one polyline per location.
std::string emit_results(const Ptg& g, const ValueResult& res,
                         OutputFormat format);

/// Same for a solved one-clock game (region pipeline output).
std::string emit_ptg_results(const Ptg& g, const PtgValueResult& res,
                             OutputFormat format);

/// Values of the urgent variant at one clock instant.
std::string emit_instant(const Ptg& g, const Rat& nu, const InstantValues& iv,
                         OutputFormat format);

}  // namespace ptg
