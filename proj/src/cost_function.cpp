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

#include "ptg/cost_function.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace ptg {

AffineFn affine_through(const Rat& x0, const Rat& y0, const Rat& x1,
                        const Rat& y1) {
  if (x0 == x1) throw std::invalid_argument("affine_through: x0 == x1");
  Rat slope = (y1 - y0) / (x1 - x0);
  return AffineFn{slope, y0 - slope * x0};
}

CostFunction CostFunction::point(Rat x, ExtValue v) {
  CostFunction f;
  f.cuts_ = {std::move(x)};
  f.values_ = {std::move(v)};
  return f;
}

CostFunction CostFunction::affine(Rat lo, Rat hi, AffineFn fn) {
  if (!(lo < hi)) throw std::invalid_argument("CostFunction::affine: lo >= hi");
  CostFunction f;
  f.values_ = {ExtValue(fn.eval(lo)), ExtValue(fn.eval(hi))};
  f.cuts_ = {std::move(lo), std::move(hi)};
  f.pieces_ = {Piece::affine(std::move(fn))};
  return f;
}

CostFunction CostFunction::constant(Rat lo, Rat hi, ExtValue v) {
  if (lo == hi) return point(std::move(lo), std::move(v));
  if (lo > hi) throw std::invalid_argument("CostFunction::constant: lo > hi");
  CostFunction f;
  f.cuts_ = {std::move(lo), std::move(hi)};
  f.values_ = {v, v};
  if (v.is_pos_inf())
    f.pieces_ = {Piece::pos_inf()};
  else if (v.is_neg_inf())
    f.pieces_ = {Piece::neg_inf()};
  else
    f.pieces_ = {Piece::affine(AffineFn{Rat(0), v.finite()})};
  return f;
}

CostFunction CostFunction::interpolate(
    std::span<const std::pair<Rat, Rat>> samples) {
  if (samples.empty())
    throw std::invalid_argument("CostFunction::interpolate: no samples");
  CostFunction f;
  f.cuts_.reserve(samples.size());
  f.values_.reserve(samples.size());
  for (const auto& [x, y] : samples) {
    if (!f.cuts_.empty() && !(f.cuts_.back() < x))
      throw std::invalid_argument(
          "CostFunction::interpolate: x not strictly increasing");
    f.cuts_.push_back(x);
    f.values_.push_back(ExtValue(y));
  }
  for (size_t i = 0; i + 1 < samples.size(); ++i)
    f.pieces_.push_back(Piece::affine(
        affine_through(samples[i].first, samples[i].second,
                       samples[i + 1].first, samples[i + 1].second)));
  f.normalize();
  return f;
}

CostFunction CostFunction::interpolate(
    std::initializer_list<std::pair<Rat, Rat>> samples) {
  std::vector<std::pair<Rat, Rat>> v(samples);
  return interpolate(std::span<const std::pair<Rat, Rat>>(v));
}

CostFunction CostFunction::from_parts(std::vector<Rat> cuts,
                                      std::vector<ExtValue> values,
                                      std::vector<Piece> pieces) {
  if (cuts.empty() || values.size() != cuts.size() ||
      pieces.size() + 1 != cuts.size())
    throw std::invalid_argument("CostFunction::from_parts: size mismatch");
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    if (!(cuts[i] < cuts[i + 1]))
      throw std::invalid_argument(
          "CostFunction::from_parts: cutpoints not increasing");
  CostFunction f;
  f.cuts_ = std::move(cuts);
  f.values_ = std::move(values);
  f.pieces_ = std::move(pieces);
  f.normalize();
  return f;
}

size_t CostFunction::piece_index(const Rat& x) const {
  // precondition: lo() < x < hi() and x is not a cutpoint
  size_t idx = std::upper_bound(cuts_.begin(), cuts_.end(), x) -
               cuts_.begin();
  assert(idx > 0 && idx < cuts_.size());
  return idx - 1;
}

ExtValue CostFunction::evaluate(const Rat& x) const {
  if (!contains(x))
    throw std::domain_error("CostFunction::evaluate: out of domain");
  auto it = std::lower_bound(cuts_.begin(), cuts_.end(), x);
  if (it != cuts_.end() && *it == x)
    return values_[it - cuts_.begin()];
  return pieces_[piece_index(x)].eval(x);
}

bool CostFunction::is_continuous() const {
  if (is_empty()) return true;
  auto matches = [](const ExtValue& pv, const Piece& p, const Rat& x) {
    switch (p.kind) {
      case Piece::Kind::PosInf: return pv.is_pos_inf();
      case Piece::Kind::NegInf: return pv.is_neg_inf();
      default: return pv.is_finite() && pv.finite() == p.fn.eval(x);
    }
  };
  for (size_t i = 0; i < pieces_.size(); ++i) {
    if (!matches(values_[i], pieces_[i], cuts_[i])) return false;
    if (!matches(values_[i + 1], pieces_[i], cuts_[i + 1])) return false;
  }
  return true;
}

bool CostFunction::is_finite() const {
  for (const auto& v : values_)
    if (!v.is_finite()) return false;
  for (const auto& p : pieces_)
    if (!p.is_affine()) return false;
  return true;
}

ExtValue CostFunction::min_value() const {
  if (is_empty()) throw std::domain_error("CostFunction::min_value: empty");
  ExtValue best = values_[0];
  for (const auto& v : values_) best = min(best, v);
  for (size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    if (p.kind == Piece::Kind::NegInf) return ExtValue::neg_inf();
    if (p.is_affine()) {
      best = min(best, ExtValue(p.fn.eval(cuts_[i])));
      best = min(best, ExtValue(p.fn.eval(cuts_[i + 1])));
    }
  }
  return best;
}

ExtValue CostFunction::max_value() const {
  if (is_empty()) throw std::domain_error("CostFunction::max_value: empty");
  ExtValue best = values_[0];
  for (const auto& v : values_) best = max(best, v);
  for (size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    if (p.kind == Piece::Kind::PosInf) return ExtValue::pos_inf();
    if (p.is_affine()) {
      best = max(best, ExtValue(p.fn.eval(cuts_[i])));
      best = max(best, ExtValue(p.fn.eval(cuts_[i + 1])));
    }
  }
  return best;
}

CostFunction CostFunction::restrict(const Rat& a, const Rat& b) const {
  if (!(contains(a) && contains(b) && a <= b))
    throw std::domain_error("CostFunction::restrict: bad interval");
  if (a == b) return point(a, evaluate(a));
  CostFunction f;
  f.cuts_.push_back(a);
  f.values_.push_back(evaluate(a));
  size_t first_piece =
      (a == lo()) ? 0
                  : (std::upper_bound(cuts_.begin(), cuts_.end(), a) -
                     cuts_.begin() - (std::binary_search(cuts_.begin(),
                                                         cuts_.end(), a)
                                          ? 0
                                          : 1));
  for (size_t i = first_piece; i < pieces_.size() && cuts_[i] < b; ++i) {
    if (cuts_[i + 1] >= b) {
      f.pieces_.push_back(pieces_[i]);
      f.cuts_.push_back(b);
      f.values_.push_back(evaluate(b));
      break;
    }
    if (cuts_[i + 1] > a) {
      f.pieces_.push_back(pieces_[i]);
      f.cuts_.push_back(cuts_[i + 1]);
      f.values_.push_back(values_[i + 1]);
    }
  }
  f.normalize();
  return f;
}

CostFunction CostFunction::rescale_domain(const Rat& new_lo,
                                          const Rat& new_hi) const {
  if (is_empty() || is_point() || !(new_lo < new_hi))
    throw std::domain_error("CostFunction::rescale_domain: bad arguments");
  // x = lo + (y - new_lo) * (hi - lo) / (new_hi - new_lo)
  Rat scale = (hi() - lo()) / (new_hi - new_lo);
  CostFunction f;
  f.cuts_.reserve(cuts_.size());
  for (const auto& c : cuts_)
    f.cuts_.push_back(new_lo + (c - lo()) / scale);
  f.values_ = values_;
  f.pieces_.reserve(pieces_.size());
  for (const auto& p : pieces_) {
    if (!p.is_affine()) {
      f.pieces_.push_back(p);
      continue;
    }
    // g(y) = f(lo + (y - new_lo) * scale)
    Rat slope = p.fn.slope * scale;
    Rat intercept = p.fn.slope * (lo() - new_lo * scale) + p.fn.intercept;
    f.pieces_.push_back(Piece::affine(AffineFn{slope, intercept}));
  }
  f.normalize();
  return f;
}

void CostFunction::normalize() {
  if (pieces_.empty()) return;
  std::vector<Rat> cuts;
  std::vector<ExtValue> values;
  std::vector<Piece> pieces;
  cuts.push_back(cuts_.front());
  values.push_back(values_.front());
  pieces.push_back(pieces_.front());
  auto point_matches_piece = [](const ExtValue& pv, const Piece& p,
                                const Rat& x) {
    switch (p.kind) {
      case Piece::Kind::PosInf: return pv.is_pos_inf();
      case Piece::Kind::NegInf: return pv.is_neg_inf();
      default: return pv.is_finite() && pv.finite() == p.fn.eval(x);
    }
  };
  for (size_t i = 1; i + 1 < cuts_.size(); ++i) {
    const Piece& next = pieces_[i];
    if (next == pieces.back() &&
        point_matches_piece(values_[i], next, cuts_[i])) {
      continue;  // redundant interior cutpoint
    }
    cuts.push_back(cuts_[i]);
    values.push_back(values_[i]);
    pieces.push_back(next);
  }
  cuts.push_back(cuts_.back());
  values.push_back(values_.back());
  cuts_ = std::move(cuts);
  values_ = std::move(values);
  pieces_ = std::move(pieces);
}

CostFunction canonicalize(const CostFunction& f) {
  if (f.is_empty()) return f;
  CostFunction g = f;
  g.normalize();
  return g;
}

CostFunction concat_left(const CostFunction& f, const CostFunction& g) {
  if (f.is_empty() || g.is_empty())
    throw std::invalid_argument("concat_left: empty operand");
  const CostFunction* left = &f;
  const CostFunction* right = &g;
  if (f.hi() == g.lo()) {
    // f sits left of g
  } else if (g.hi() == f.lo()) {
    left = &g;
    right = &f;
  } else if (f.lo() == g.lo() && f.is_point() && g.is_point()) {
    return f;
  } else {
    throw std::invalid_argument(
        "concat_left: domains must meet in exactly one point");
  }
  // The junction value comes from f regardless of which side f is on.
  const Rat& m = left->hi();
  ExtValue mid = f.evaluate(m);

  std::vector<Rat> cuts(left->cutpoints());
  std::vector<ExtValue> values(left->point_values());
  std::vector<CostFunction::Piece> pieces(left->pieces());
  values.back() = mid;
  for (size_t i = 1; i < right->cutpoints().size(); ++i) {
    cuts.push_back(right->cutpoints()[i]);
    values.push_back(right->point_values()[i]);
  }
  for (const auto& p : right->pieces()) pieces.push_back(p);
  return CostFunction::from_parts(std::move(cuts), std::move(values),
                                  std::move(pieces));
}

namespace {

// Intersection abscissa of two non-parallel lines.
Rat line_intersection(const AffineFn& a, const AffineFn& b) {
  return (b.intercept - a.intercept) / (a.slope - b.slope);
}

}  // namespace

CostFunction pointwise_extremum(std::span<const CostFunction> fs,
                                Extremum mode) {
  if (fs.empty())
    throw std::invalid_argument("pointwise_extremum: empty input");
  const Rat& lo = fs.front().lo();
  const Rat& hi = fs.front().hi();
  for (const auto& f : fs)
    if (f.lo() != lo || f.hi() != hi)
      throw std::invalid_argument("pointwise_extremum: domains differ");

  auto pick = [mode](const ExtValue& a, const ExtValue& b) {
    return mode == Extremum::Min ? min(a, b) : max(a, b);
  };

  // Candidate cutpoints: every input cutpoint plus every crossing of two
  // affine pieces of distinct inputs.
  std::vector<Rat> xs;
  for (const auto& f : fs)
    for (const auto& c : f.cutpoints()) xs.push_back(c);
  for (size_t i = 0; i < fs.size(); ++i) {
    for (size_t j = i + 1; j < fs.size(); ++j) {
      for (size_t pi = 0; pi < fs[i].pieces().size(); ++pi) {
        const auto& p = fs[i].pieces()[pi];
        if (!p.is_affine()) continue;
        for (size_t qi = 0; qi < fs[j].pieces().size(); ++qi) {
          const auto& q = fs[j].pieces()[qi];
          if (!q.is_affine() || p.fn.slope == q.fn.slope) continue;
          Rat x = line_intersection(p.fn, q.fn);
          if (x > fs[i].cutpoints()[pi] && x < fs[i].cutpoints()[pi + 1] &&
              x > fs[j].cutpoints()[qi] && x < fs[j].cutpoints()[qi + 1])
            xs.push_back(x);
        }
      }
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<ExtValue> values;
  values.reserve(xs.size());
  for (const auto& x : xs) {
    ExtValue v = fs.front().evaluate(x);
    for (size_t i = 1; i < fs.size(); ++i) v = pick(v, fs[i].evaluate(x));
    values.push_back(std::move(v));
  }

  std::vector<CostFunction::Piece> pieces;
  pieces.reserve(xs.size() > 0 ? xs.size() - 1 : 0);
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    // Between consecutive candidates no two pieces cross, so whichever input
    // wins at the midpoint wins on the whole gap.
    Rat mid = (xs[i] + xs[i + 1]) / Rat(2);
    const CostFunction::Piece* wpiece = nullptr;
    ExtValue best;
    bool first = true;
    for (const auto& f : fs) {
      // locate the piece of f containing mid
      const auto& cs = f.cutpoints();
      size_t pi = std::upper_bound(cs.begin(), cs.end(), mid) - cs.begin() - 1;
      const auto& p = f.pieces()[pi];
      ExtValue v = p.eval(mid);
      if (first || (mode == Extremum::Min ? v < best : v > best)) {
        best = v;
        wpiece = &p;
        first = false;
      }
    }
    pieces.push_back(*wpiece);
  }
  return CostFunction::from_parts(std::move(xs), std::move(values),
                                  std::move(pieces));
}

CostFunction pointwise_extremum(std::initializer_list<CostFunction> fs,
                                Extremum mode) {
  std::vector<CostFunction> v(fs);
  return pointwise_extremum(std::span<const CostFunction>(v), mode);
}

std::vector<Rat> slopes_in(const CostFunction& f, const Rat& a, const Rat& b) {
  if (!(f.contains(a) && f.contains(b) && a <= b))
    throw std::domain_error("slopes_in: [a,b] outside domain");
  std::vector<Rat> out;
  const auto& cs = f.cutpoints();
  for (size_t i = 0; i < f.pieces().size(); ++i) {
    if (cs[i + 1] <= a || cs[i] >= b) continue;  // open piece misses [a,b]
    const auto& p = f.pieces()[i];
    if (!p.is_affine())
      throw std::domain_error("slopes_in: infinite piece inside [a,b]");
    out.push_back(p.fn.slope);
  }
  return out;
}

}  // namespace ptg
