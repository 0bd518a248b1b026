// Copyright 2026 The ffslab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ffslab/error.hpp"

namespace ffslab {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Distinct prime factors, ascending.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline std::vector<unsigned> divisors(unsigned n) {
  std::vector<unsigned> out;
  for (unsigned d = 1; d <= n; ++d) {
    if (n % d == 0) out.push_back(d);
  }
  return out;
}

/// base^exp, or nullopt when the result exceeds `cap`.
inline std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exp,
                                                std::uint64_t cap = UINT64_MAX) {
  unsigned __int128 acc = 1;
  for (unsigned i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > cap) return std::nullopt;
  }
  return static_cast<std::uint64_t>(acc);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  unsigned __int128 acc = 1 % mod;
  unsigned __int128 b = base % mod;
  while (exp != 0) {
    if (exp & 1U) acc = acc * b % mod;
    b = b * b % mod;
    exp >>= 1U;
  }
  return static_cast<std::uint64_t>(acc);
}

/// Exact rational with 64-bit parts, always normalized (den > 0, gcd 1).
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num) : num_(num), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                   static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                   static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) fail(ErrorCode::kInvalidArgument, "rational division by zero");
    return from128(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string to_string() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Accepts "a", "a/b" and finite decimals such as "0.25".
  static Rational parse(std::string_view text) {
    auto bad = [&] { fail(ErrorCode::kConfigError, "cannot parse rational '" + std::string(text) + "'"); };
    if (text.empty()) bad();
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
      return Rational(parse_int(text.substr(0, slash), bad), parse_int(text.substr(slash + 1), bad));
    }
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
      const auto frac = text.substr(dot + 1);
      if (frac.size() > 15) bad();
      std::int64_t den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      const bool neg = !text.empty() && text.front() == '-';
      const auto int_part = text.substr(0, dot);
      const std::int64_t whole =
          int_part.empty() || int_part == "-" ? 0 : parse_int(int_part, bad);
      const std::int64_t f = frac.empty() ? 0 : parse_int(frac, bad);
      const std::int64_t mag = (whole < 0 ? -whole : whole) * den + f;
      return Rational(neg ? -mag : mag, den);
    }
    return Rational(parse_int(text, bad));
  }

 private:
  template <class Bad>
  static std::int64_t parse_int(std::string_view s, Bad bad) {
    if (s.empty()) bad();
    std::size_t pos = 0;
    const bool neg = s[0] == '-';
    if (neg || s[0] == '+') pos = 1;
    if (pos == s.size()) bad();
    std::int64_t v = 0;
    for (; pos < s.size(); ++pos) {
      if (s[pos] < '0' || s[pos] > '9') bad();
      v = v * 10 + (s[pos] - '0');
    }
    return neg ? -v : v;
  }

  static Rational from128(__int128 num, __int128 den) {
    if (den == 0) fail(ErrorCode::kInvalidArgument, "rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    __int128 a = num < 0 ? -num : num;
    __int128 b = den;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
    constexpr __int128 kMax = INT64_MAX;
    if (num > kMax || num < -kMax || den > kMax) fail(ErrorCode::kOverflow, "rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  void normalize() { *this = from128(num_, den_); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace ffslab
