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

#include "ptg/rational.hpp"

#include <algorithm>
#include <cctype>

namespace ptg {

namespace {

bool is_integer_token(std::string_view s) {
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) s.remove_prefix(1);
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

mpz_class parse_int(std::string_view s) {
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);  // gmp rejects '+'
  mpz_class z;
  if (mpz_set_str(z.get_mpz_t(), std::string(s).c_str(), 10) != 0)
    throw std::invalid_argument("Rat: malformed integer '" + std::string(s) +
                                "'");
  return z;
}

}  // namespace

Rat Rat::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  if (s.empty()) throw std::invalid_argument("Rat: empty rational");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den))
      throw std::invalid_argument("Rat: malformed fraction '" +
                                  std::string(text) + "'");
    mpz_class d = parse_int(den);
    if (d == 0)
      throw std::invalid_argument("Rat: zero denominator in '" +
                                  std::string(text) + "'");
    return Rat::of(parse_int(num), d);
  }

  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = s.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (ip.empty() || ip == "-" || ip == "+") ip = neg ? "-0" : "0";
    if (fp.empty() || !is_integer_token(fp) || fp[0] == '+' || fp[0] == '-' ||
        !is_integer_token(ip))
      throw std::invalid_argument("Rat: malformed decimal '" +
                                  std::string(text) + "'");
    mpz_class scale = 1;
    for (size_t i = 0; i < fp.size(); ++i) scale *= 10;
    mpz_class whole = parse_int(ip);
    mpz_class frac = parse_int(fp);
    mpz_class num = whole * scale + (neg ? -frac : frac);
    return Rat::of(num, scale);
  }

  if (!is_integer_token(s))
    throw std::invalid_argument("Rat: malformed rational '" +
                                std::string(text) + "'");
  return Rat(mpz_class(parse_int(s)));
}

long long Rat::floor_ll() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(),
             v_.get_den().get_mpz_t());
  if (!q.fits_slong_p())
    throw std::overflow_error("Rat: floor does not fit in long");
  return q.get_si();
}

long long Rat::ceil_ll() const {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(),
             v_.get_den().get_mpz_t());
  if (!q.fits_slong_p())
    throw std::overflow_error("Rat: ceil does not fit in long");
  return q.get_si();
}

}  // namespace ptg
