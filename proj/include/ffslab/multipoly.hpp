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

// Sparse multivariate polynomials over L and the consecutive-difference
// cascade
//
//   F_1(X_1)            = f(X_1)
//   X_{k-1} F_k(X_1..X_k) = F_{k-1}(X_1..X_{k-2}, X_{k-1} + X_k)
//                          - F_{k-1}(X_1..X_{k-2}, X_k)
//
// with Delta_k(f) = X_{k-1} F_k for k >= 2.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstring>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ffslab/field.hpp"
#include "ffslab/poly.hpp"

namespace ffslab {

inline constexpr unsigned kMaxVars = 32;

struct Monomial {
  std::array<std::uint16_t, kMaxVars> e{};

  std::uint16_t operator[](unsigned i) const { return e[i]; }
  std::uint16_t& operator[](unsigned i) { return e[i]; }
  friend bool operator==(const Monomial& a, const Monomial& b) {
    return std::memcmp(a.e.data(), b.e.data(), sizeof(a.e)) == 0;
  }
  /// Lexicographic in (e[0], e[1], ...), compared four exponents at a time.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    for (unsigned i = 0; i < kMaxVars; i += 4) {
      std::uint64_t x, y;
      std::memcpy(&x, &a.e[i], sizeof(x));
      std::memcpy(&y, &b.e[i], sizeof(y));
      if (x != y) return lanes_first_high(x) <=> lanes_first_high(y);
    }
    return std::strong_ordering::equal;
  }

 private:
  /// Reorders the four 16-bit lanes so the lowest-addressed one is most significant.
  static std::uint64_t lanes_first_high(std::uint64_t x) {
    static_assert(std::endian::native == std::endian::little);
    x = (x >> 32) | (x << 32);
    return ((x & 0xFFFF0000FFFF0000ull) >> 16) | ((x & 0x0000FFFF0000FFFFull) << 16);
  }
};


class MultiPoly {
 public:
  friend MultiPoly full_difference(const Field& f, const MultiPoly& g);
  friend MultiPoly mul(const Field& f, const MultiPoly& a, const MultiPoly& b);

  using Terms = std::map<Monomial, Element>;

  explicit MultiPoly(unsigned arity = 0) : arity_(arity) {
    if (arity > kMaxVars) fail(ErrorCode::kArityMismatch, "too many variables");
  }

  /// g(X_var) as a polynomial in `arity` variables (var is 0-based).
  static MultiPoly from_uni(const UniPoly& g, unsigned var, unsigned arity) {
    MultiPoly out(arity);
    if (var >= arity) fail(ErrorCode::kArityMismatch, "variable index out of range");
    for (std::size_t i = 0; i < g.coeffs().size(); ++i) {
      if (g.coeffs()[i].v == 0) continue;
      Monomial mono;
      mono[var] = checked_exponent(i);
      out.terms_.emplace(mono, g.coeffs()[i]);
    }
    return out;
  }

  /// Sums the coefficients of repeated monomials in `terms`; building from a
  /// sorted list is linear, which matters for the large cascade stages.
  static MultiPoly from_unsorted(const Field& f, unsigned arity, std::vector<std::pair<Monomial, Element>> terms) {
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    MultiPoly out(arity);
    for (std::size_t i = 0; i < terms.size();) {
      Element c = terms[i].second;
      std::size_t j = i + 1;
      for (; j < terms.size() && terms[j].first == terms[i].first; ++j) c = f.add(c, terms[j].second);
      if (c.v != 0) out.terms_.emplace_hint(out.terms_.end(), terms[i].first, c);
      i = j;
    }
    return out;
  }

  /// Adopts `terms` as is; zero coefficients are dropped.
  static MultiPoly from_terms(unsigned arity, Terms terms) {
    MultiPoly out(arity);
    std::erase_if(terms, [](const auto& t) { return t.second.v == 0; });
    out.terms_ = std::move(terms);
    return out;
  }

  static MultiPoly variable(unsigned var, unsigned arity) {
    return from_uni(UniPoly::x(), var, arity);
  }

  unsigned arity() const { return arity_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Element coeff(const Monomial& mono) const {
    auto it = terms_.find(mono);
    return it == terms_.end() ? Element{} : it->second;
  }

  /// Largest exponent of variable `var`; -1 for the zero polynomial.
  int degree_in(unsigned var) const {
    int d = -1;
    for (const auto& [mono, c] : terms_) d = std::max<int>(d, mono[var]);
    return d;
  }

  void add_term(const Field& f, const Monomial& mono, Element c) {
    if (c.v == 0) return;
    auto [it, fresh] = terms_.try_emplace(mono, c);
    if (fresh) return;
    it->second = f.add(it->second, c);
    if (it->second.v == 0) terms_.erase(it);
  }

  /// Same polynomial viewed in more variables.
  MultiPoly widened(unsigned arity) const {
    if (arity < arity_) fail(ErrorCode::kArityMismatch, "cannot narrow a polynomial");
    MultiPoly out(arity);
    out.terms_ = terms_;
    return out;
  }

  static std::uint16_t checked_exponent(std::uint64_t n) {
    if (n > std::numeric_limits<std::uint16_t>::max()) {
      fail(ErrorCode::kDegreeBudgetExceeded, "exponent exceeds 65535");
    }
    return static_cast<std::uint16_t>(n);
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.arity_ == b.arity_ && a.terms_ == b.terms_;
  }

 private:
  unsigned arity_;
  Terms terms_;
};

inline void require_same_arity(const MultiPoly& a, const MultiPoly& b) {
  if (a.arity() != b.arity()) fail(ErrorCode::kArityMismatch, "polynomials have different arity");
}

inline MultiPoly add(const Field& f, const MultiPoly& a, const MultiPoly& b) {
  require_same_arity(a, b);
  MultiPoly out = a;
  for (const auto& [mono, c] : b.terms()) out.add_term(f, mono, c);
  return out;
}

inline MultiPoly sub(const Field& f, const MultiPoly& a, const MultiPoly& b) {
  require_same_arity(a, b);
  MultiPoly out = a;
  for (const auto& [mono, c] : b.terms()) out.add_term(f, mono, f.neg(c));
  return out;
}

inline MultiPoly scale(const Field& f, Element s, const MultiPoly& a) {
  MultiPoly out(a.arity());
  for (const auto& [mono, c] : a.terms()) out.add_term(f, mono, f.mul(s, c));
  return out;
}

inline MultiPoly mul(const Field& f, const MultiPoly& a, const MultiPoly& b) {
  require_same_arity(a, b);
  const MultiPoly& outer = a.size() <= b.size() ? a : b;
  const MultiPoly& inner = a.size() <= b.size() ? b : a;
  MultiPoly out(a.arity());
  auto& terms = out.terms_;
  // One term of `outer` times `inner` is already in monomial order, so each
  // row is inserted just before the previous insertion point when possible.
  for (const auto& [mo, co] : outer.terms()) {
    auto hint = terms.end();
    bool first = true;
    for (const auto& [mi, ci] : inner.terms()) {
      Monomial mono;
      for (unsigned i = 0; i < a.arity(); ++i) {
        mono[i] = MultiPoly::checked_exponent(std::uint64_t{mo[i]} + mi[i]);
      }
      const Element c = f.mul(co, ci);
      if (first || (hint != terms.end() && hint->first < mono)) hint = terms.lower_bound(mono);
      first = false;
      if (hint != terms.end() && hint->first == mono) {
        hint->second = f.add(hint->second, c);
        ++hint;
      } else {
        terms.emplace_hint(hint, mono, c);
      }
    }
  }
  std::erase_if(terms, [](const auto& t) { return t.second.v == 0; });
  return out;
}

inline Element eval_multi(const Field& f, const MultiPoly& g, const std::vector<Element>& point) {
  if (point.size() != g.arity()) {
    fail(ErrorCode::kArityMismatch, "point has " + std::to_string(point.size()) +
                                        " coordinates, polynomial has arity " +
                                        std::to_string(g.arity()));
  }
  Element acc{};
  for (const auto& [mono, c] : g.terms()) {
    Element t = c;
    for (unsigned i = 0; i < g.arity() && t.v != 0; ++i) {
      if (mono[i] != 0) t = f.mul(t, f.pow(point[i], mono[i]));
    }
    acc = f.add(acc, t);
  }
  return acc;
}

/// Replace each X_i by subs[i], a polynomial of arity `arity`.
inline MultiPoly substitute(const Field& f, const MultiPoly& g, const std::vector<MultiPoly>& subs,
                            unsigned arity) {
  if (subs.size() != g.arity()) fail(ErrorCode::kArityMismatch, "substitution count differs from arity");
  for (const auto& s : subs) {
    if (s.arity() != arity) fail(ErrorCode::kArityMismatch, "substituted polynomials differ in arity");
  }
  std::vector<std::map<unsigned, MultiPoly>> powers(subs.size());
  auto power = [&](unsigned var, unsigned n) -> const MultiPoly& {
    auto& cache = powers[var];
    if (cache.empty()) {
      MultiPoly one(arity);
      one.add_term(f, Monomial{}, f.one());
      cache.emplace(0, std::move(one));
    }
    auto it = cache.lower_bound(n);
    if (it != cache.end() && it->first == n) return it->second;
    --it;
    MultiPoly acc = it->second;
    for (unsigned k = it->first; k < n; ++k) acc = mul(f, acc, subs[var]);
    return cache.emplace(n, std::move(acc)).first->second;
  };
  // Expand every term as a flat product; repeated monomials are merged once at the end.
  std::vector<std::pair<Monomial, Element>> all, t, next;
  for (const auto& [mono, c] : g.terms()) {
    t.assign(1, {Monomial{}, c});
    for (unsigned i = 0; i < g.arity() && !t.empty(); ++i) {
      if (mono[i] == 0) continue;
      next.clear();
      for (const auto& [tm, tc] : t) {
        for (const auto& [pm, pc] : power(i, mono[i]).terms()) {
          Monomial m;
          for (unsigned v = 0; v < arity; ++v) m[v] = MultiPoly::checked_exponent(std::uint64_t{tm[v]} + pm[v]);
          next.emplace_back(m, f.mul(tc, pc));
        }
      }
      t.swap(next);
    }
    all.insert(all.end(), t.begin(), t.end());
  }
  return MultiPoly::from_unsorted(f, arity, std::move(all));
}

/// Terms in increasing monomial order.
inline std::vector<std::pair<Monomial, Element>> sorted_terms(const MultiPoly& g) {
  std::vector<std::pair<Monomial, Element>> out(g.terms().begin(), g.terms().end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

/// Sorted "c * X1^a1*X2^a2" terms joined by " + "; "0" when empty.
inline std::string format(const Field& f, const MultiPoly& g) {
  if (g.is_zero()) return "0";
  std::string out;
  for (const auto& [mono, c] : sorted_terms(g)) {
    if (!out.empty()) out += " + ";
    out += format_coeff(f, c);
    bool first = true;
    for (unsigned i = 0; i < g.arity(); ++i) {
      if (mono[i] == 0) continue;
      out += first ? " * " : "*";
      first = false;
      out += "X" + std::to_string(i + 1);
      if (mono[i] > 1) out += "^" + std::to_string(mono[i]);
    }
  }
  return out;
}

// -- binomial coefficients mod p --------------------------------------------

/// Each j with C(n, j) != 0 mod p, paired with that residue (Lucas).
inline std::vector<std::pair<std::uint64_t, std::uint32_t>> binomial_row_mod_p(std::uint64_t n,
                                                                               std::uint32_t p) {
  std::vector<std::uint32_t> digits;
  for (std::uint64_t t = n; t != 0; t /= p) digits.push_back(static_cast<std::uint32_t>(t % p));
  // Pascal rows mod p for each digit value.
  std::vector<std::vector<std::uint32_t>> small(p);
  for (std::uint32_t a = 0; a < p; ++a) {
    small[a].assign(a + 1, 1);
    for (std::uint32_t b = 1; b < a; ++b) {
      small[a][b] = (small[a - 1][b - 1] + small[a - 1][b]) % p;
    }
  }
  std::vector<std::pair<std::uint64_t, std::uint32_t>> row{{0, 1}};
  std::uint64_t place = 1;
  for (std::uint32_t nd : digits) {
    std::vector<std::pair<std::uint64_t, std::uint32_t>> next;
    next.reserve(row.size() * (nd + 1));
    for (std::uint32_t jd = 0; jd <= nd; ++jd) {
      for (const auto& [j, c] : row) {
        next.emplace_back(j + jd * place,
                          static_cast<std::uint32_t>(std::uint64_t{c} * small[nd][jd] % p));
      }
    }
    row = std::move(next);
    place *= p;
  }
  std::sort(row.begin(), row.end());
  return row;
}

// -- the difference cascade -------------------------------------------------

/// F(X_1..X_{k-2}, X_{k-1} + X_k) - F(X_1..X_{k-2}, X_k) for F of arity k-1.
inline MultiPoly full_difference(const Field& f, const MultiPoly& g) {
  const unsigned k = g.arity() + 1;
  if (g.arity() == 0 || k > kMaxVars) fail(ErrorCode::kArityMismatch, "difference needs 1..31 variables");
  const unsigned shifted = k - 2;  // 0-based index of X_{k-1}
  const unsigned fresh = k - 1;    // 0-based index of X_k
  std::map<std::uint16_t, std::vector<std::pair<std::uint64_t, std::uint32_t>>> rows;
  auto row = [&](std::uint16_t n) -> const auto& {
    auto it = rows.find(n);
    if (it == rows.end()) it = rows.emplace(n, binomial_row_mod_p(n, f.p())).first;
    return it->second;
  };
  // Terms agreeing in X_1..X_{k-2} are adjacent in g and their images keep
  // that prefix, so each run is merged on its own and appended in order.
  auto same_prefix = [&](const Monomial& a, const Monomial& b) {
    return std::equal(a.e.begin(), a.e.begin() + shifted, b.e.begin());
  };
  MultiPoly out(k);
  std::vector<std::pair<Monomial, Element>> run;
  auto flush = [&] {
    std::sort(run.begin(), run.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < run.size();) {
      Element c = run[i].second;
      std::size_t j = i + 1;
      for (; j < run.size() && run[j].first == run[i].first; ++j) c = f.add(c, run[j].second);
      if (c.v != 0) out.terms_.emplace_hint(out.terms_.end(), run[i].first, c);
      i = j;
    }
    run.clear();
  };
  const Monomial* prefix = nullptr;
  for (const auto& [mono, c] : g.terms()) {
    if (prefix && !same_prefix(*prefix, mono)) flush();
    prefix = &mono;
    const std::uint16_t n = mono[shifted];
    Monomial base = mono;
    base[shifted] = 0;
    for (const auto& [j, b] : row(n)) {
      Monomial t = base;
      t[shifted] = static_cast<std::uint16_t>(j);
      t[fresh] = static_cast<std::uint16_t>(n - j);
      run.emplace_back(t, f.scale(b, c));
    }
    Monomial t = base;
    t[fresh] = n;
    run.emplace_back(t, f.neg(c));
  }
  flush();
  return out;
}

/// Exact division by the variable with 0-based index `var`.
inline MultiPoly divide_by_variable(const MultiPoly& g, unsigned var) {
  MultiPoly::Terms terms;
  for (const auto& [mono, c] : g.terms()) {
    if (mono[var] == 0) {
      fail(ErrorCode::kNotDivisible, "term without X" + std::to_string(var + 1) +
                                         " in a difference that must be divisible by it");
    }
    Monomial t = mono;
    --t[var];
    terms.emplace_hint(terms.end(), t, c);
  }
  return MultiPoly::from_terms(g.arity(), std::move(terms));
}

/// One cascade step: the quotient F_k from F_{k-1}.
inline MultiPoly delta_step(const Field& f, const MultiPoly& g) {
  return divide_by_variable(full_difference(f, g), g.arity() - 1);
}

struct Cascade {
  /// quotients[j] is F_{j+1}; quotients[0] is f itself in X_1.
  std::vector<MultiPoly> quotients;

  /// Delta_k(f) = X_{k-1} F_k, for 2 <= k <= quotients.size().
  MultiPoly delta(const Field& f, unsigned k) const {
    const MultiPoly& q = quotients.at(k - 1);
    return mul(f, MultiPoly::variable(k - 2, k), q);
  }
};

/// Quotients F_1..F_k of f. Stops early (padding with zeros) once a stage vanishes.
inline Cascade delta_cascade(const Field& f, const UniPoly& g, unsigned k) {
  if (k == 0 || k > kMaxVars) fail(ErrorCode::kArityMismatch, "cascade depth must be 1..32");
  Cascade out;
  out.quotients.push_back(MultiPoly::from_uni(g, 0, 1));
  for (unsigned j = 2; j <= k; ++j) {
    const MultiPoly& prev = out.quotients.back();
    out.quotients.push_back(prev.is_zero() ? MultiPoly(j) : delta_step(f, prev));
  }
  return out;
}

}  // namespace ffslab
