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

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ptg {

/// Exact arbitrary-precision rational. Always kept reduced with a positive
/// denominator; raw mpq_class component construction does not canonicalize,
/// so every constructor here does.
class Rat {
 public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {}  // NOLINT: integers embed implicitly
  Rat(int n) : v_(n) {}   // NOLINT
  Rat(long long n) { set_ll(n); }
  Rat(long num, long den) : v_(num, den) {
    if (den == 0) throw std::invalid_argument("Rat: zero denominator");
    v_.canonicalize();
  }
  explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }
  explicit Rat(const mpz_class& z) : v_(z) {}

  static Rat of(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::invalid_argument("Rat: zero denominator");
    Rat r;
    r.v_ = mpq_class(num, den);
    r.v_.canonicalize();
    return r;
  }

  /// Parses "a", "a/b" or a plain decimal like "-0.75". Throws
  /// std::invalid_argument on malformed input.
  static Rat parse(std::string_view text);

  const mpz_class& num() const { return v_.get_num(); }
  const mpz_class& den() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  /// Renders as "n" or "n/d", reduced, never in decimal notation.
  std::string str() const { return v_.get_str(); }

  double to_double() const { return v_.get_d(); }

  /// Largest integer <= this. Throws if it does not fit in long long.
  long long floor_ll() const;
  /// Smallest integer >= this.
  long long ceil_ll() const;

  Rat abs() const {
    Rat r;
    r.v_ = ::abs(v_);
    return r;
  }

  friend Rat operator+(const Rat& a, const Rat& b) { return from(a.v_ + b.v_); }
  friend Rat operator-(const Rat& a, const Rat& b) { return from(a.v_ - b.v_); }
  friend Rat operator*(const Rat& a, const Rat& b) { return from(a.v_ * b.v_); }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.v_ == 0) throw std::domain_error("Rat: division by zero");
    return from(a.v_ / b.v_);
  }
  Rat operator-() const { return from(-v_); }

  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) { *this = *this / o; return *this; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) {
    return os << r.v_;
  }

 private:
  static Rat from(mpq_class q) {
    Rat r;
    r.v_ = std::move(q);  // arithmetic on canonical operands stays canonical
    return r;
  }
  void set_ll(long long n) {
    if (n >= LONG_MIN && n <= LONG_MAX) {
      v_ = static_cast<long>(n);
    } else {
      mpz_class z;
      mpz_import(z.get_mpz_t(), 1, 1, sizeof(n), 0, 0, &n);
      v_ = n < 0 ? -z : z;
    }
  }

  mpq_class v_;
};

inline const Rat& min(const Rat& a, const Rat& b) { return a <= b ? a : b; }
inline const Rat& max(const Rat& a, const Rat& b) { return a >= b ? a : b; }

/// Value from the extended line: -inf < every finite rational < +inf.
/// Addition with a finite offset absorbs into the infinities; adding two
/// opposite infinities is a logic error and throws.
class ExtValue {
 public:
  ExtValue() : kind_(Kind::Finite) {}
  ExtValue(Rat v) : kind_(Kind::Finite), v_(std::move(v)) {}  // NOLINT
  ExtValue(long v) : ExtValue(Rat(v)) {}                      // NOLINT
  ExtValue(int v) : ExtValue(Rat(v)) {}                       // NOLINT

  static ExtValue pos_inf() { return ExtValue(Kind::PosInf); }
  static ExtValue neg_inf() { return ExtValue(Kind::NegInf); }

  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }

  const Rat& finite() const {
    if (!is_finite()) throw std::domain_error("ExtValue: not finite");
    return v_;
  }

  friend ExtValue operator+(const ExtValue& a, const Rat& b) {
    if (!a.is_finite()) return a;
    return ExtValue(a.v_ + b);
  }
  friend ExtValue operator+(const ExtValue& a, const ExtValue& b) {
    if (a.is_finite() && b.is_finite()) return ExtValue(a.v_ + b.v_);
    if (a.is_finite()) return b;
    if (b.is_finite()) return a;
    if (a.kind_ != b.kind_)
      throw std::domain_error("ExtValue: (+inf) + (-inf)");
    return a;
  }

  friend bool operator==(const ExtValue& a, const ExtValue& b) {
    if (a.kind_ != b.kind_) return false;
    return a.kind_ != Kind::Finite || a.v_ == b.v_;
  }
  friend bool operator!=(const ExtValue& a, const ExtValue& b) {
    return !(a == b);
  }
  friend bool operator<(const ExtValue& a, const ExtValue& b) {
    if (a.kind_ == b.kind_)
      return a.kind_ == Kind::Finite && a.v_ < b.v_;
    return rank(a.kind_) < rank(b.kind_);
  }
  friend bool operator<=(const ExtValue& a, const ExtValue& b) {
    return a < b || a == b;
  }
  friend bool operator>(const ExtValue& a, const ExtValue& b) { return b < a; }
  friend bool operator>=(const ExtValue& a, const ExtValue& b) { return b <= a; }

  std::string str() const {
    switch (kind_) {
      case Kind::PosInf: return "+inf";
      case Kind::NegInf: return "-inf";
      default: return v_.str();
    }
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtValue& v) {
    return os << v.str();
  }

 private:
  enum class Kind { NegInf, Finite, PosInf };
  explicit ExtValue(Kind k) : kind_(k) {}
  static int rank(Kind k) {
    switch (k) {
      case Kind::NegInf: return 0;
      case Kind::Finite: return 1;
      default: return 2;
    }
  }

  Kind kind_;
  Rat v_;
};

inline const ExtValue& min(const ExtValue& a, const ExtValue& b) {
  return a <= b ? a : b;
}
inline const ExtValue& max(const ExtValue& a, const ExtValue& b) {
  return a >= b ? a : b;
}

}  // namespace ptg
