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

// The field tower F_p <= K = F_{p^e} <= L = F_{p^m}, m = e*r.
//
// L is a single extension F_p[x]/(pi) of degree m. K and every other
// subfield are cut out as Frobenius fixed points, never built separately.
//
// An Element is stored as its packed index  sum_i c_i p^i  where c_i are the
// coordinates in the power basis 1, x, ..., x^{m-1}. The packing is a
// bijection onto [0, p^m), so the index doubles as a dense table key and
// coordinates are recovered digit by digit.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ffslab/error.hpp"
#include "ffslab/linalg.hpp"
#include "ffslab/numeric.hpp"

namespace ffslab {

struct Element {
  std::uint32_t v = 0;
  friend constexpr auto operator<=>(Element, Element) = default;
};

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 24;

struct FieldOptions {
  std::uint64_t budget = kDefaultBudget;   // max p^m, and max size of any enumeration
  std::uint64_t seed = 0;                  // irreducible-polynomial search
  std::uint64_t table_limit = std::uint64_t{1} << 22;  // log/exp tables up to this order
};

struct Subfield {
  unsigned degree = 0;     // over F_p
  std::uint64_t size = 0;  // p^degree
  bool proper = false;
};

namespace detail {

using FpPoly = std::vector<std::uint32_t>;  // low degree first

inline void trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline FpPoly fp_mod(FpPoly a, const FpPoly& b, const PrimeOps& ops) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const std::uint32_t lead_inv = ops.inv(b.back());
  while (a.size() >= b.size()) {
    const std::uint32_t c = ops.mul(a.back(), lead_inv);
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) a[shift + i] = ops.sub(a[shift + i], ops.mul(c, b[i]));
    trim(a);
  }
  return a;
}

inline FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& mod, const PrimeOps& ops) {
  if (a.empty() || b.empty()) return {};
  FpPoly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = ops.add(out[i + j], ops.mul(a[i], b[j]));
  }
  return fp_mod(std::move(out), mod, ops);
}

inline FpPoly fp_powmod(FpPoly base, std::uint64_t exp, const FpPoly& mod, const PrimeOps& ops) {
  FpPoly acc = fp_mod({1}, mod, ops);
  base = fp_mod(std::move(base), mod, ops);
  while (exp != 0) {
    if (exp & 1U) acc = fp_mulmod(acc, base, mod, ops);
    base = fp_mulmod(base, base, mod, ops);
    exp >>= 1U;
  }
  return acc;
}

inline FpPoly fp_gcd(FpPoly a, FpPoly b, const PrimeOps& ops) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    FpPoly r = fp_mod(a, b, ops);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// pi irreducible over F_p  <=>  x^{p^m} = x mod pi and gcd(x^{p^i} - x, pi) = 1 for 0 < i < m.
inline bool fp_irreducible(const FpPoly& pi, std::uint32_t p) {
  const PrimeOps ops{p};
  const std::size_t m = pi.size() - 1;
  if (m == 1) return true;
  if (pi[0] == 0) return false;
  FpPoly h = fp_mod({0, 1}, pi, ops);
  for (std::size_t i = 1; i <= m; ++i) {
    h = fp_powmod(h, p, pi, ops);
    FpPoly diff = h;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = ops.sub(diff[1], 1);
    trim(diff);
    if (i == m) return diff.empty();
    if (diff.empty()) return false;
    if (fp_gcd(pi, diff, ops).size() != 1) return false;
  }
  return false;
}

}  // namespace detail

class Field {
 public:
  using value_type = Element;

  /// Builds L = F_{p^{e r}}. When `pi` is omitted a monic irreducible of
  /// degree e*r is drawn with a generator seeded by `opts.seed`.
  static Field make(std::uint32_t p, unsigned e, unsigned r,
                    std::optional<std::vector<std::uint32_t>> pi = std::nullopt, FieldOptions opts = {}) {
    if (!is_prime(p)) fail(ErrorCode::kNotPrime, std::to_string(p) + " is not prime");
    if (e == 0 || r == 0) fail(ErrorCode::kInvalidArgument, "e and r must be positive");
    const unsigned m = e * r;
    if (m > 32) fail(ErrorCode::kSizeBudgetExceeded, "extension degree too large");
    const auto size = checked_pow(p, m, std::min<std::uint64_t>(opts.budget, UINT32_MAX));
    if (!size) {
      fail(ErrorCode::kSizeBudgetExceeded,
           "p^m exceeds the enumeration budget " + std::to_string(opts.budget));
    }
    Field f;
    f.p_ = p;
    f.e_ = e;
    f.r_ = r;
    f.m_ = m;
    f.size_ = *size;
    f.budget_ = opts.budget;
    f.pow_p_.resize(m + 1);
    f.pow_p_[0] = 1;
    for (unsigned i = 1; i <= m; ++i) f.pow_p_[i] = f.pow_p_[i - 1] * p;

    if (pi) {
      auto poly = *pi;
      for (auto& c : poly) {
        if (c >= p) fail(ErrorCode::kInvalidArgument, "modulus coefficient not reduced mod p");
      }
      detail::trim(poly);
      if (poly.size() != m + 1) fail(ErrorCode::kInvalidArgument, "modulus degree must equal e*r");
      if (poly.back() != 1) fail(ErrorCode::kInvalidArgument, "modulus must be monic");
      if (!detail::fp_irreducible(poly, p)) fail(ErrorCode::kReducible, "modulus is reducible over F_p");
      f.pi_ = std::move(poly);
    } else {
      f.pi_ = find_irreducible(p, m, opts.seed);
    }
    f.init(opts);
    return f;
  }

  static std::vector<std::uint32_t> find_irreducible(std::uint32_t p, unsigned m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint32_t> poly(m + 1, 0);
    poly[m] = 1;
    while (true) {
      for (unsigned i = 0; i < m; ++i) poly[i] = static_cast<std::uint32_t>(rng() % p);
      if (m > 1 && poly[0] == 0) continue;
      if (detail::fp_irreducible(poly, p)) return poly;
    }
  }

  std::uint32_t p() const { return p_; }
  unsigned e() const { return e_; }
  unsigned r() const { return r_; }
  unsigned m() const { return m_; }
  std::uint64_t q() const { return pow_p_[e_]; }
  std::uint64_t size() const { return size_; }
  std::uint64_t budget() const { return budget_; }
  const std::vector<std::uint32_t>& modulus() const { return pi_; }
  PrimeOps prime_ops() const { return PrimeOps{p_}; }

  void require_budget(std::uint64_t count, std::string_view what) const {
    if (count > budget_) {
      fail(ErrorCode::kSizeBudgetExceeded, std::string(what) + " needs " + std::to_string(count) +
                                               " elements, budget is " + std::to_string(budget_));
    }
  }

  // -- element construction -------------------------------------------------

  Element zero() const { return {}; }
  Element one() const { return {1}; }
  Element scalar(std::int64_t c) const {
    const std::int64_t r = c % static_cast<std::int64_t>(p_);
    return {static_cast<std::uint32_t>(r < 0 ? r + p_ : r)};
  }
  /// The class of x in F_p[x]/(pi).
  Element gen_x() const {
    if (m_ == 1) return scalar(-static_cast<std::int64_t>(pi_[0]));
    return {p_};
  }
  Element from_index(std::uint64_t i) const { return {static_cast<std::uint32_t>(i % size_)}; }

  Element from_coeffs(std::span<const std::uint32_t> c) const {
    if (c.size() > m_) fail(ErrorCode::kDimensionMismatch, "too many coefficients for element");
    std::uint64_t v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * p_ + (c[i] % p_);
    return {static_cast<std::uint32_t>(v)};
  }

  std::vector<std::uint32_t> coeffs(Element a) const {
    std::vector<std::uint32_t> out(m_);
    std::uint32_t v = a.v;
    for (unsigned i = 0; i < m_; ++i) {
      out[i] = v % p_;
      v /= p_;
    }
    return out;
  }

  std::uint32_t coeff(Element a, unsigned i) const {
    return static_cast<std::uint32_t>(a.v / pow_p_[i] % p_);
  }

  // -- arithmetic -----------------------------------------------------------

  bool is_zero(Element a) const { return a.v == 0; }

  Element add(Element a, Element b) const {
    if (p_ == 2) return {a.v ^ b.v};
    std::uint32_t x = a.v, y = b.v, out = 0;
    for (unsigned i = 0; i < m_ && (x | y); ++i) {
      std::uint32_t d = x % p_ + y % p_;
      if (d >= p_) d -= p_;
      out += d * static_cast<std::uint32_t>(pow_p_[i]);
      x /= p_;
      y /= p_;
    }
    return {out};
  }

  Element neg(Element a) const {
    if (p_ == 2) return a;
    std::uint32_t x = a.v, out = 0;
    for (unsigned i = 0; i < m_ && x; ++i) {
      const std::uint32_t d = x % p_;
      if (d != 0) out += (p_ - d) * static_cast<std::uint32_t>(pow_p_[i]);
      x /= p_;
    }
    return {out};
  }

  Element sub(Element a, Element b) const { return p_ == 2 ? Element{a.v ^ b.v} : add(a, neg(b)); }

  /// Multiplies by the prime-field scalar c.
  Element scale(std::uint32_t c, Element a) const {
    c %= p_;
    if (c == 0 || a.v == 0) return {};
    if (c == 1) return a;
    std::uint32_t x = a.v, out = 0;
    for (unsigned i = 0; i < m_ && x; ++i) {
      const std::uint32_t d = static_cast<std::uint32_t>(static_cast<std::uint64_t>(x % p_) * c % p_);
      out += d * static_cast<std::uint32_t>(pow_p_[i]);
      x /= p_;
    }
    return {out};
  }

  Element mul(Element a, Element b) const {
    if (a.v == 0 || b.v == 0) return {};
    if (tables_) {
      const auto& t = *tables_;
      std::uint64_t s = static_cast<std::uint64_t>(t.log[a.v]) + t.log[b.v];
      if (s >= size_ - 1) s -= size_ - 1;
      return {t.exp[s]};
    }
    return mul_schoolbook(a, b);
  }

  Element pow(Element a, std::uint64_t n) const {
    if (n == 0) return one();
    if (a.v == 0) return zero();
    if (tables_) {
      const auto& t = *tables_;
      const auto s = static_cast<std::uint64_t>(static_cast<unsigned __int128>(t.log[a.v]) * n % (size_ - 1));
      return {t.exp[s]};
    }
    Element acc = one();
    while (n != 0) {
      if (n & 1U) acc = mul_schoolbook(acc, a);
      a = mul_schoolbook(a, a);
      n >>= 1U;
    }
    return acc;
  }

  Element inv(Element a) const {
    if (a.v == 0) fail(ErrorCode::kInvalidArgument, "inverse of zero");
    if (tables_) {
      const auto& t = *tables_;
      return {t.exp[t.log[a.v] == 0 ? 0 : size_ - 1 - t.log[a.v]]};
    }
    return pow(a, size_ - 2);
  }

  Element div(Element a, Element b) const { return mul(a, inv(b)); }

  /// a^{p^k}.
  Element frob(Element a, unsigned k) const {
    if (a.v == 0 || size_ == 2) return a;
    return pow(a, pow_mod(p_, k, size_ - 1));
  }

  // -- traces and subfields -------------------------------------------------

  /// Tr_{L|F_p}(a) as a residue in [0, p).
  std::uint32_t abs_trace(Element a) const {
    if (p_ == 2) return static_cast<std::uint32_t>(std::popcount(a.v & trace_mask_) & 1);
    std::uint64_t acc = 0;
    std::uint32_t x = a.v;
    for (unsigned i = 0; i < m_ && x; ++i) {
      acc += static_cast<std::uint64_t>(x % p_) * trace_vec_[i];
      x /= p_;
    }
    return static_cast<std::uint32_t>(acc % p_);
  }

  /// Tr from L down to its subfield of degree d over F_p.
  Element trace(Element a, unsigned d) const {
    require_subfield(d);
    Element acc = zero();
    for (unsigned i = 0; i < m_ / d; ++i) acc = add(acc, frob(a, d * i));
    return acc;
  }

  bool in_subfield(Element a, unsigned d) const {
    require_subfield(d);
    return frob(a, d) == a;
  }

  void require_subfield(unsigned d) const {
    if (d == 0 || m_ % d != 0) {
      fail(ErrorCode::kBadSubfield, "degree " + std::to_string(d) + " does not divide " + std::to_string(m_));
    }
  }

  /// One descriptor per divisor of m, ascending; the last is L itself.
  std::vector<Subfield> subfields() const {
    std::vector<Subfield> out;
    for (unsigned d : divisors(m_)) out.push_back({d, pow_p_[d], d < m_});
    return out;
  }

  /// An F_p-basis of the subfield of degree d: the kernel of Frob^d - id.
  std::vector<Element> subfield_basis(unsigned d) const {
    require_subfield(d);
    Matrix<std::uint32_t> a(m_, std::vector<std::uint32_t>(m_, 0));
    for (unsigned j = 0; j < m_; ++j) {
      const Element b{static_cast<std::uint32_t>(pow_p_[j])};
      const auto col = coeffs(sub(frob(b, d), b));
      for (unsigned i = 0; i < m_; ++i) a[i][j] = col[i];
    }
    std::vector<Element> out;
    for (const auto& v : nullspace(prime_ops(), a, m_)) out.push_back(from_coeffs(v));
    return out;
  }

  /// F_p-basis of K.
  std::vector<Element> k_basis() const { return subfield_basis(e_); }

  /// A fixed primitive element (smallest index of multiplicative order p^m - 1).
  Element generator() const { return generator_; }

  // -- serialization --------------------------------------------------------

  std::string descriptor() const {
    std::ostringstream out;
    out << "p=" << p_ << " e=" << e_ << " r=" << r_ << " pi=";
    for (std::size_t i = 0; i < pi_.size(); ++i) out << (i ? "," : "") << pi_[i];
    return out.str();
  }

  static Field parse_descriptor(std::string_view text, FieldOptions opts = {}) {
    std::optional<std::uint32_t> p;
    std::optional<unsigned> e, r;
    std::optional<std::vector<std::uint32_t>> pi;
    std::string token;
    std::istringstream in{std::string(text)};
    while (in >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) fail(ErrorCode::kConfigError, "bad field token '" + token + "'");
      const auto key = token.substr(0, eq);
      const auto val = token.substr(eq + 1);
      try {
        if (key == "p") {
          p = static_cast<std::uint32_t>(std::stoul(val));
        } else if (key == "e") {
          e = static_cast<unsigned>(std::stoul(val));
        } else if (key == "r") {
          r = static_cast<unsigned>(std::stoul(val));
        } else if (key == "pi") {
          pi = parse_list(val);
        } else if (key == "seed") {
          opts.seed = std::stoull(val);
        } else {
          fail(ErrorCode::kConfigError, "unknown field key '" + key + "'");
        }
      } catch (const std::logic_error&) {
        fail(ErrorCode::kConfigError, "bad value for '" + key + "'");
      }
    }
    if (!p || !r) fail(ErrorCode::kConfigError, "field descriptor needs p and r");
    return make(*p, e.value_or(1), *r, pi, opts);
  }

  std::string format(Element a) const {
    std::string out;
    const auto c = coeffs(a);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(c[i]);
    }
    return out;
  }

  Element parse_element(std::string_view text) const {
    const auto c = parse_list(text);
    if (c.size() > m_) fail(ErrorCode::kDimensionMismatch, "element has more than m coefficients");
    for (auto v : c) {
      if (v >= p_) fail(ErrorCode::kInvalidArgument, "element coefficient not reduced mod p");
    }
    return from_coeffs(c);
  }

  static std::vector<std::uint32_t> parse_list(std::string_view text) {
    std::vector<std::uint32_t> out;
    std::string cur;
    auto flush = [&] {
      if (cur.empty()) fail(ErrorCode::kConfigError, "empty entry in list '" + std::string(text) + "'");
      for (char ch : cur) {
        if (ch < '0' || ch > '9') fail(ErrorCode::kConfigError, "bad number '" + cur + "'");
      }
      out.push_back(static_cast<std::uint32_t>(std::stoul(cur)));
      cur.clear();
    };
    for (char ch : text) {
      if (ch == ',') {
        flush();
      } else if (ch != ' ') {
        cur += ch;
      }
    }
    flush();
    return out;
  }

 private:
  struct Tables {
    std::vector<std::uint32_t> exp;  // exp[i] = g^i, i < p^m - 1
    std::vector<std::uint32_t> log;  // log[g^i] = i
  };

  Field() = default;

  void init(const FieldOptions& opts) {
    if (p_ == 2) {
      pi_mask_ = 0;
      for (unsigned i = 0; i <= m_; ++i) pi_mask_ |= static_cast<std::uint64_t>(pi_[i]) << i;
    }
    generator_ = find_generator();
    if (size_ > 2 && size_ <= opts.table_limit) {
      auto t = std::make_shared<Tables>();
      t->exp.resize(size_ - 1);
      t->log.assign(size_, 0);
      Element cur = one();
      for (std::uint64_t i = 0; i + 1 < size_; ++i) {
        t->exp[i] = cur.v;
        t->log[cur.v] = static_cast<std::uint32_t>(i);
        cur = mul_schoolbook(cur, generator_);
      }
      tables_ = std::move(t);
    }
    trace_vec_.assign(m_, 0);
    for (unsigned i = 0; i < m_; ++i) {
      const Element b{static_cast<std::uint32_t>(pow_p_[i])};
      Element acc = zero();
      for (unsigned j = 0; j < m_; ++j) acc = add(acc, frob(b, j));
      trace_vec_[i] = acc.v;  // lies in F_p, so the index is the residue
      if (acc.v >= p_) fail(ErrorCode::kInvalidArgument, "internal: trace outside prime field");
      if (p_ == 2 && acc.v) trace_mask_ |= 1U << i;
    }
  }

  Element find_generator() const {
    if (size_ == 2) return one();
    const auto factors = prime_factors(size_ - 1);
    for (std::uint64_t cand = 1; cand < size_; ++cand) {
      const Element g{static_cast<std::uint32_t>(cand)};
      bool ok = true;
      for (auto l : factors) {
        if (pow_schoolbook(g, (size_ - 1) / l) == one()) {
          ok = false;
          break;
        }
      }
      if (ok) return g;
    }
    fail(ErrorCode::kInvalidArgument, "internal: no primitive element found");
  }

  Element pow_schoolbook(Element a, std::uint64_t n) const {
    Element acc = one();
    while (n != 0) {
      if (n & 1U) acc = mul_schoolbook(acc, a);
      a = mul_schoolbook(a, a);
      n >>= 1U;
    }
    return acc;
  }

  Element mul_schoolbook(Element a, Element b) const {
    if (p_ == 2) {
      std::uint64_t prod = 0;
      std::uint64_t x = a.v;
      std::uint32_t y = b.v;
      while (y) {
        if (y & 1U) prod ^= x;
        x <<= 1U;
        y >>= 1U;
      }
      for (int k = 2 * static_cast<int>(m_) - 2; k >= static_cast<int>(m_); --k) {
        if ((prod >> k) & 1U) prod ^= pi_mask_ << (k - static_cast<int>(m_));
      }
      return {static_cast<std::uint32_t>(prod)};
    }
    std::array<std::uint64_t, 64> acc{};
    std::array<std::uint32_t, 32> da{}, db{};
    std::uint32_t x = a.v, y = b.v;
    for (unsigned i = 0; i < m_; ++i) {
      da[i] = x % p_;
      db[i] = y % p_;
      x /= p_;
      y /= p_;
    }
    for (unsigned i = 0; i < m_; ++i) {
      if (da[i] == 0) continue;
      for (unsigned j = 0; j < m_; ++j) acc[i + j] = (acc[i + j] + static_cast<std::uint64_t>(da[i]) * db[j]) % p_;
    }
    for (int k = 2 * static_cast<int>(m_) - 2; k >= static_cast<int>(m_); --k) {
      const std::uint64_t c = acc[k] % p_;
      if (c == 0) continue;
      const int base = k - static_cast<int>(m_);
      for (unsigned i = 0; i < m_; ++i) {
        acc[base + i] = (acc[base + i] + (p_ - c) * pi_[i]) % p_;
      }
      acc[k] = 0;
    }
    std::uint64_t v = 0;
    for (unsigned i = m_; i-- > 0;) v = v * p_ + acc[i] % p_;
    return {static_cast<std::uint32_t>(v)};
  }

  std::uint32_t p_ = 2;
  unsigned e_ = 1, r_ = 1, m_ = 1;
  std::uint64_t size_ = 2;
  std::uint64_t budget_ = kDefaultBudget;
  std::vector<std::uint32_t> pi_;
  std::vector<std::uint64_t> pow_p_;
  std::uint64_t pi_mask_ = 0;
  std::vector<std::uint32_t> trace_vec_;
  std::uint32_t trace_mask_ = 0;
  Element generator_{1};
  std::shared_ptr<const Tables> tables_;
};

}  // namespace ffslab
