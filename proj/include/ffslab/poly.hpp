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

// Dense univariate polynomials over L.

#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ffslab/field.hpp"

namespace ffslab {

inline constexpr std::uint64_t kDefaultDegreeCap = std::uint64_t{1} << 16;

class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Element> coeffs) : c_(std::move(coeffs)) { trim(); }

  static UniPoly constant(Element c) { return UniPoly({c}); }
  static UniPoly monomial(Element c, std::size_t n) {
    std::vector<Element> v(n + 1);
    v[n] = c;
    return UniPoly(std::move(v));
  }
  static UniPoly x() { return monomial(Element{1}, 1); }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Element coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Element{}; }
  Element lead() const { return c_.empty() ? Element{} : c_.back(); }
  const std::vector<Element>& coeffs() const { return c_; }

  friend bool operator==(const UniPoly&, const UniPoly&) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back().v == 0) c_.pop_back();
  }
  std::vector<Element> c_;
};

inline Element eval(const Field& f, const UniPoly& g, Element x) {
  Element acc{};
  const auto& c = g.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) acc = f.add(f.mul(acc, x), c[i]);
  return acc;
}

/// Repeated evaluation of one polynomial; sparse polynomials of high degree
/// (such as X^{p^2+p+1} + g) are evaluated term by term instead of by Horner.
class PolyEvaluator {
 public:
  PolyEvaluator(const Field& f, const UniPoly& g) : field_(&f), poly_(g) {
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < g.coeffs().size(); ++i) {
      if (g.coeffs()[i].v != 0) {
        ++nonzero;
        terms_.emplace_back(i, g.coeffs()[i]);
      }
    }
    sparse_ = nonzero * 24 < g.coeffs().size();
  }

  Element operator()(Element x) const {
    if (!sparse_) return eval(*field_, poly_, x);
    Element acc{};
    for (const auto& [n, c] : terms_) acc = field_->add(acc, field_->mul(c, field_->pow(x, n)));
    return acc;
  }

 private:
  const Field* field_;
  UniPoly poly_;
  std::vector<std::pair<std::size_t, Element>> terms_;
  bool sparse_ = false;
};

inline UniPoly add(const Field& f, const UniPoly& a, const UniPoly& b) {
  std::vector<Element> out(std::max(a.coeffs().size(), b.coeffs().size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.add(a.coeff(i), b.coeff(i));
  return UniPoly(std::move(out));
}

inline UniPoly sub(const Field& f, const UniPoly& a, const UniPoly& b) {
  std::vector<Element> out(std::max(a.coeffs().size(), b.coeffs().size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.sub(a.coeff(i), b.coeff(i));
  return UniPoly(std::move(out));
}

inline UniPoly scale(const Field& f, Element c, const UniPoly& a) {
  std::vector<Element> out(a.coeffs());
  for (auto& v : out) v = f.mul(c, v);
  return UniPoly(std::move(out));
}

inline UniPoly mul(const Field& f, const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Element> out(a.coeffs().size() + b.coeffs().size() - 1);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    if (a.coeffs()[i].v == 0) continue;
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) {
      out[i + j] = f.add(out[i + j], f.mul(a.coeffs()[i], b.coeffs()[j]));
    }
  }
  return UniPoly(std::move(out));
}

/// f(g(X)). Throws DegreeBudgetExceeded when deg f * deg g exceeds `cap`.
inline UniPoly compose(const Field& f, const UniPoly& outer, const UniPoly& inner,
                       std::uint64_t cap = kDefaultDegreeCap) {
  if (outer.degree() > 0 && inner.degree() > 0 &&
      static_cast<std::uint64_t>(outer.degree()) * static_cast<std::uint64_t>(inner.degree()) > cap) {
    fail(ErrorCode::kDegreeBudgetExceeded, "composition degree exceeds cap " + std::to_string(cap));
  }
  UniPoly acc;
  const auto& c = outer.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) acc = add(f, mul(f, acc, inner), UniPoly::constant(c[i]));
  return acc;
}

/// The n-th iterate f^(n), with f^(0) = X.
inline UniPoly iterate(const Field& f, const UniPoly& g, unsigned n,
                       std::uint64_t cap = kDefaultDegreeCap) {
  if (n == 0) return UniPoly::x();
  if (g.degree() > 1) {
    const auto deg = checked_pow(static_cast<std::uint64_t>(g.degree()), n, cap);
    if (!deg) fail(ErrorCode::kDegreeBudgetExceeded, "iterate degree exceeds cap " + std::to_string(cap));
  }
  UniPoly acc = g;
  for (unsigned i = 1; i < n; ++i) acc = compose(f, g, acc, cap);
  return acc;
}

/// Memoized symbolic iterates of one polynomial.
class IterateCache {
 public:
  IterateCache(const Field& f, UniPoly base, std::uint64_t cap = kDefaultDegreeCap)
      : field_(&f), cap_(cap) {
    iterates_.push_back(UniPoly::x());
    iterates_.push_back(std::move(base));
  }

  const UniPoly& get(unsigned n) {
    while (iterates_.size() <= n) {
      iterates_.push_back(compose(*field_, iterates_[1], iterates_.back(), cap_));
    }
    return iterates_[n];
  }

 private:
  const Field* field_;
  std::uint64_t cap_;
  std::vector<UniPoly> iterates_;
};

// -- text format ------------------------------------------------------------
//
// "c0 + c1*X + c2*X^2". A coefficient is an integer (taken mod p, so it lies
// in F_p) or a bracketed coordinate list "[c0,c1,...]" in the power basis.

inline std::string format_coeff(const Field& f, Element c) {
  const auto v = f.coeffs(c);
  bool prime = true;
  for (std::size_t i = 1; i < v.size(); ++i) prime = prime && v[i] == 0;
  if (prime) return std::to_string(v[0]);
  return "[" + f.format(c) + "]";
}

inline std::string format(const Field& f, const UniPoly& g) {
  if (g.is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < g.coeffs().size(); ++i) {
    const Element c = g.coeffs()[i];
    if (c.v == 0) continue;
    if (!out.empty()) out += " + ";
    if (i == 0) {
      out += format_coeff(f, c);
      continue;
    }
    if (c != f.one()) out += format_coeff(f, c) + "*";
    out += "X";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

namespace detail {

class PolyLexer {
 public:
  explicit PolyLexer(std::string_view s) : s_(s) {}

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool done() {
    skip_ws();
    return i_ >= s_.size();
  }
  bool accept(char ch) {
    skip_ws();
    if (i_ < s_.size() && s_[i_] == ch) {
      ++i_;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  std::uint64_t number() {
    skip_ws();
    const std::size_t start = i_;
    std::uint64_t v = 0;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      v = v * 10 + static_cast<std::uint64_t>(s_[i_] - '0');
      if (v > (std::uint64_t{1} << 40)) error("number too large");
      ++i_;
    }
    if (start == i_) error("expected a number");
    return v;
  }
  std::string_view until(char ch) {
    const std::size_t start = i_;
    while (i_ < s_.size() && s_[i_] != ch) ++i_;
    if (i_ >= s_.size()) error(std::string("missing '") + ch + "'");
    return s_.substr(start, i_++ - start);
  }
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::kConfigError,
         "polynomial '" + std::string(s_) + "': " + what + " at offset " + std::to_string(i_));
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace detail

inline UniPoly parse_poly(const Field& f, std::string_view text) {
  detail::PolyLexer lex(text);
  std::map<std::size_t, Element> terms;
  bool first = true;
  while (!lex.done()) {
    bool negative = false;
    if (lex.accept('+')) {
    } else if (lex.accept('-')) {
      negative = true;
    } else if (!first) {
      lex.error("expected '+' or '-'");
    }
    first = false;
    Element c = f.one();
    bool have_coeff = false;
    if (lex.accept('[')) {
      c = f.parse_element(lex.until(']'));
      have_coeff = true;
    } else if (std::isdigit(static_cast<unsigned char>(lex.peek()))) {
      c = f.scalar(static_cast<std::int64_t>(lex.number() % f.p()));
      have_coeff = true;
    }
    std::size_t power = 0;
    if (have_coeff && lex.accept('*')) {
      if (!lex.accept('X') && !lex.accept('x')) lex.error("expected X after '*'");
      power = 1;
    } else if (!have_coeff) {
      if (!lex.accept('X') && !lex.accept('x')) lex.error("expected a term");
      power = 1;
    }
    if (power == 1 && lex.accept('^')) power = lex.number();
    if (power > kDefaultDegreeCap) lex.error("degree exceeds cap");
    if (negative) c = f.neg(c);
    auto [it, fresh] = terms.try_emplace(power, c);
    if (!fresh) it->second = f.add(it->second, c);
  }
  if (first) lex.error("empty polynomial");
  std::vector<Element> coeffs(terms.empty() ? 0 : terms.rbegin()->first + 1);
  for (const auto& [k, v] : terms) coeffs[k] = v;
  return UniPoly(std::move(coeffs));
}

}  // namespace ffslab
