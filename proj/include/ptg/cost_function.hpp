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

#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "ptg/rational.hpp"

namespace ptg {

/// Total affine map x -> slope*x + intercept.
struct AffineFn {
  Rat slope;
  Rat intercept;

  Rat eval(const Rat& x) const { return slope * x + intercept; }

  friend bool operator==(const AffineFn& a, const AffineFn& b) {
    return a.slope == b.slope && a.intercept == b.intercept;
  }
  friend bool operator!=(const AffineFn& a, const AffineFn& b) {
    return !(a == b);
  }
};

/// Builds the affine function through (x0,y0) and (x1,y1); x0 != x1.
AffineFn affine_through(const Rat& x0, const Rat& y0, const Rat& x1,
                        const Rat& y1);

enum class Extremum { Min, Max };

/// Piecewise-affine partial function on a closed rational interval.
///
/// Represented by a strictly increasing cutpoint list (first = domain lo,
/// last = domain hi), an explicit value at every cutpoint, and one piece per
/// open gap between consecutive cutpoints: either an affine function or a
/// constant +inf / -inf plateau. Point values are stored separately from the
/// pieces so that jumps at cutpoints are representable.
///
/// Instances are always canonical: no interior cutpoint survives where the
/// two adjacent pieces are identical and the stored point value agrees with
/// them. Immutable after construction.
class CostFunction {
 public:
  struct Piece {
    enum class Kind { Affine, PosInf, NegInf };
    Kind kind = Kind::Affine;
    AffineFn fn;  // meaningful only when kind == Affine

    static Piece affine(AffineFn f) { return {Kind::Affine, std::move(f)}; }
    static Piece pos_inf() { return {Kind::PosInf, {}}; }
    static Piece neg_inf() { return {Kind::NegInf, {}}; }

    bool is_affine() const { return kind == Kind::Affine; }
    ExtValue eval(const Rat& x) const {
      switch (kind) {
        case Kind::PosInf: return ExtValue::pos_inf();
        case Kind::NegInf: return ExtValue::neg_inf();
        default: return ExtValue(fn.eval(x));
      }
    }

    friend bool operator==(const Piece& a, const Piece& b) {
      if (a.kind != b.kind) return false;
      return a.kind != Kind::Affine || a.fn == b.fn;
    }
  };

  CostFunction() = default;  // empty; only valid as a container placeholder

  /// Single-point function {x} -> v.
  static CostFunction point(Rat x, ExtValue v);
  /// f on [lo,hi] given by an affine function (lo < hi).
  static CostFunction affine(Rat lo, Rat hi, AffineFn f);
  /// Constant (possibly infinite) function on [lo,hi].
  static CostFunction constant(Rat lo, Rat hi, ExtValue v);
  /// Continuous piecewise-affine interpolation of (x, value) samples given
  /// with strictly increasing x. At least one sample.
  static CostFunction interpolate(
      std::span<const std::pair<Rat, Rat>> samples);
  static CostFunction interpolate(
      std::initializer_list<std::pair<Rat, Rat>> samples);
  /// Assembles from raw parts and canonicalizes. values.size() must equal
  /// cuts.size(), pieces.size() must equal cuts.size() - 1, cuts strictly
  /// increasing.
  static CostFunction from_parts(std::vector<Rat> cuts,
                                 std::vector<ExtValue> values,
                                 std::vector<Piece> pieces);

  bool is_empty() const { return cuts_.empty(); }
  bool is_point() const { return cuts_.size() == 1; }
  const Rat& lo() const { return cuts_.front(); }
  const Rat& hi() const { return cuts_.back(); }
  bool contains(const Rat& x) const {
    return !is_empty() && lo() <= x && x <= hi();
  }

  const std::vector<Rat>& cutpoints() const { return cuts_; }
  const std::vector<ExtValue>& point_values() const { return values_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  /// Number of cutpoints, domain endpoints included.
  size_t cutpoint_count() const { return cuts_.size(); }

  /// Exact value; at a cutpoint this is the stored point value. Throws
  /// std::domain_error outside the domain.
  ExtValue evaluate(const Rat& x) const;

  /// True iff every interior cutpoint value matches the limits of both
  /// adjacent pieces and endpoint values match their piece limits (infinite
  /// plateaus count as matching only infinite point values of the same
  /// sign).
  bool is_continuous() const;

  /// True iff no piece and no point value is infinite.
  bool is_finite() const;

  /// Least/greatest value taken over the whole domain. Domain must be
  /// non-empty; infinite pieces make the result infinite.
  ExtValue min_value() const;
  ExtValue max_value() const;

  /// Restriction to [a,b] within the domain.
  CostFunction restrict(const Rat& a, const Rat& b) const;

  /// Affine change of variable mapping the domain onto [new_lo, new_hi].
  /// The domain must not be a point.
  CostFunction rescale_domain(const Rat& new_lo, const Rat& new_hi) const;

  friend bool operator==(const CostFunction& a, const CostFunction& b) {
    return a.cuts_ == b.cuts_ && a.values_ == b.values_ &&
           a.pieces_ == b.pieces_;
  }
  friend bool operator!=(const CostFunction& a, const CostFunction& b) {
    return !(a == b);
  }

 private:
  friend CostFunction canonicalize(const CostFunction& f);

  size_t piece_index(const Rat& x) const;  // x strictly inside the domain gap
  void normalize();

  std::vector<Rat> cuts_;
  std::vector<ExtValue> values_;
  std::vector<Piece> pieces_;
};

/// Re-canonicalizes (identity on any constructed CostFunction; exposed so the
/// idempotence property is testable).
CostFunction canonicalize(const CostFunction& f);

/// The asymmetric gluing f then g: result equals f on f's domain and g on
/// the rest of g's domain. The two domains must intersect in exactly one
/// point. Throws std::invalid_argument otherwise.
CostFunction concat_left(const CostFunction& f, const CostFunction& g);

/// Exact lower/upper envelope of functions sharing one domain. New cutpoints
/// appear exactly at intersections of crossing pieces. Empty input throws.
CostFunction pointwise_extremum(std::span<const CostFunction> fs,
                                Extremum mode);
CostFunction pointwise_extremum(std::initializer_list<CostFunction> fs,
                                Extremum mode);

/// Slopes of the affine pieces meeting the interval [a,b], left to right
/// ([a,b] within the domain, a < b). Throws std::domain_error if an infinite
/// piece meets [a,b].
std::vector<Rat> slopes_in(const CostFunction& f, const Rat& a, const Rat& b);

}  // namespace ptg
