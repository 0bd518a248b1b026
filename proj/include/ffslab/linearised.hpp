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

// Linearised polynomials  l = sum_i b_i X^{p^i}  (p-polynomials) and
// l = sum_i b_i X^{q^i}  (q-polynomials), viewed as linear maps on L.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ffslab/field.hpp"
#include "ffslab/linalg.hpp"
#include "ffslab/poly.hpp"
#include "ffslab/vecspace.hpp"

namespace ffslab {

enum class LinKind { kP, kQ };

struct LinearisedPoly {
  LinKind kind = LinKind::kP;
  /// coeffs[i] multiplies X^{p^i} (or X^{q^i}); index 0 is the X term.
  std::vector<Element> coeffs;

  friend bool operator==(const LinearisedPoly&, const LinearisedPoly&) = default;
};

/// Frobenius exponent (over F_p) of term i.
inline unsigned lin_step(const Field& f, const LinearisedPoly& l, std::size_t i) {
  return static_cast<unsigned>(i) * (l.kind == LinKind::kQ ? f.e() : 1u);
}

inline void require_valid(const Field& f, const LinearisedPoly& l) {
  const unsigned limit = l.kind == LinKind::kQ ? f.r() : f.m();
  if (l.coeffs.size() > limit) {
    fail(ErrorCode::kInvalidArgument, "linearised polynomial has too many terms for this field");
  }
}

inline Element lin_apply(const Field& f, const LinearisedPoly& l, Element x) {
  Element acc{};
  for (std::size_t i = 0; i < l.coeffs.size(); ++i) {
    if (l.coeffs[i].v == 0) continue;
    acc = f.add(acc, f.mul(l.coeffs[i], f.frob(x, lin_step(f, l, i))));
  }
  return acc;
}

/// l as an ordinary polynomial; throws DegreeBudgetExceeded past `cap`.
inline UniPoly lin_to_uni(const Field& f, const LinearisedPoly& l,
                          std::uint64_t cap = kDefaultDegreeCap) {
  std::vector<Element> c;
  for (std::size_t i = 0; i < l.coeffs.size(); ++i) {
    if (l.coeffs[i].v == 0) continue;
    const auto deg = checked_pow(f.p(), lin_step(f, l, i), cap);
    if (!deg) fail(ErrorCode::kDegreeBudgetExceeded, "linearised polynomial degree exceeds cap");
    if (c.size() <= *deg) c.resize(*deg + 1);
    c[*deg] = l.coeffs[i];
  }
  return UniPoly(std::move(c));
}

/// Canonical F_p-basis of Ker(l) inside L.
inline std::vector<Element> lin_kernel(const Field& f, const LinearisedPoly& l) {
  require_valid(f, l);
  return fp_kernel(f, [&](Element x) { return lin_apply(f, l, x); });
}

inline bool lin_is_permutation(const Field& f, const LinearisedPoly& l) {
  return lin_kernel(f, l).empty();
}

/// F_p-basis (reduced) of l(V) for V spanned over F_p by `span`.
inline std::vector<Element> lin_image_span(const Field& f, const LinearisedPoly& l,
                                           const std::vector<Element>& span) {
  FpSpan out(f);
  for (const auto& v : span) out.insert(lin_apply(f, l, v));
  return out.basis();
}

/// The compositional inverse, a linearised polynomial of the same kind.
///
/// Writes l^{-1} = sum_{i<n} c_i X^{s^i} (s = p or q, n = m or r) and solves
/// sum_i c_i l(w_j)^{s^i} = w_j on a basis w_j over the base field.
inline LinearisedPoly lin_inverse(const Field& f, const LinearisedPoly& l) {
  require_valid(f, l);
  if (!lin_is_permutation(f, l)) fail(ErrorCode::kNotPermutation, "linearised polynomial has a nonzero root");
  const bool q_kind = l.kind == LinKind::kQ;
  const unsigned n = q_kind ? f.r() : f.m();
  // 1, x, ..., x^{n-1} is a basis of L over F_p (n = m) and over K (n = r).
  std::vector<Element> basis;
  for (unsigned j = 0; j < n; ++j) basis.push_back(f.pow(f.gen_x(), j));
  const unsigned step = q_kind ? f.e() : 1u;
  Matrix<Element> a(n, std::vector<Element>(n));
  std::vector<Element> rhs(n);
  for (unsigned j = 0; j < n; ++j) {
    const Element y = lin_apply(f, l, basis[j]);
    for (unsigned i = 0; i < n; ++i) a[j][i] = f.frob(y, i * step);
    rhs[j] = basis[j];
  }
  const auto sol = solve(f, a, rhs);
  if (!sol.particular || !sol.nullspace.empty()) {
    fail(ErrorCode::kNotPermutation, "Moore system for the inverse is singular");
  }
  LinearisedPoly inv{l.kind, *sol.particular};
  while (!inv.coeffs.empty() && inv.coeffs.back().v == 0) inv.coeffs.pop_back();
  return inv;
}

/// The same map written as a p-polynomial.
inline LinearisedPoly as_p_polynomial(const Field& f, const LinearisedPoly& l) {
  if (l.kind == LinKind::kP) return l;
  LinearisedPoly out{LinKind::kP, {}};
  for (std::size_t i = 0; i < l.coeffs.size(); ++i) {
    if (l.coeffs[i].v == 0) continue;
    const unsigned step = lin_step(f, l, i);
    if (out.coeffs.size() <= step) out.coeffs.resize(step + 1);
    out.coeffs[step] = l.coeffs[i];
  }
  return out;
}

/// Tr_{M|L}(Ker l) where M is the degree-t extension of L and Ker l is taken
/// in M, as an F_p-basis inside L. Needs #M within the budget of `f`.
inline std::vector<Element> lin_kernel_trace(const Field& f, const LinearisedPoly& l, unsigned t) {
  require_valid(f, l);
  if (t == 0) fail(ErrorCode::kInvalidArgument, "extension degree must be positive");
  const auto big_size = checked_pow(f.p(), f.m() * t, f.budget());
  if (!big_size) fail(ErrorCode::kSizeBudgetExceeded, "extension of degree " + std::to_string(t) + " exceeds budget");
  FieldOptions opts;
  opts.budget = f.budget();
  const Field big = Field::make(f.p(), f.e(), f.r() * t, std::nullopt, opts);
  // A root y of pi in M gives the embedding sum c_i x^i -> sum c_i y^i.
  const auto& pi = f.modulus();
  std::optional<Element> root;
  for (std::uint64_t i = 1; i < big.size() && !root; ++i) {
    const Element y = big.from_index(i);
    Element acc{};
    for (std::size_t k = pi.size(); k-- > 0;) acc = big.add(big.mul(acc, y), big.scalar(pi[k]));
    if (acc.v == 0) root = y;
  }
  if (!root) fail(ErrorCode::kReducible, "modulus has no root in the extension");
  std::vector<Element> ypow(f.m());
  ypow[0] = big.one();
  for (unsigned j = 1; j < f.m(); ++j) ypow[j] = big.mul(ypow[j - 1], *root);
  auto embed = [&](Element a) {
    Element acc{};
    const auto c = f.coeffs(a);
    for (unsigned j = 0; j < f.m(); ++j) acc = big.add(acc, big.scale(c[j], ypow[j]));
    return acc;
  };
  LinearisedPoly lifted{l.kind, {}};
  for (const auto& c : l.coeffs) lifted.coeffs.push_back(embed(c));
  const auto kernel = fp_kernel(big, [&](Element z) { return lin_apply(big, lifted, z); });
  // Pull traces back to L by solving against the embedded power basis.
  const PrimeOps ops = f.prime_ops();
  Matrix<std::uint32_t> a(big.m(), std::vector<std::uint32_t>(f.m()));
  for (unsigned j = 0; j < f.m(); ++j) {
    const auto col = big.coeffs(ypow[j]);
    for (unsigned i = 0; i < big.m(); ++i) a[i][j] = col[i];
  }
  FpSpan out(f);
  for (const auto& z : kernel) {
    const auto sol = solve(ops, a, big.coeffs(big.trace(z, f.m())), f.m());
    if (!sol.particular) fail(ErrorCode::kInvalidArgument, "trace left the embedded subfield");
    out.insert(f.from_coeffs(*sol.particular));
  }
  return out.basis();
}

// -- text format ------------------------------------------------------------
//
// "p:b0,b1,b2" or "q:b0,b1" with each b_i an Element in bracket form or an
// integer, e.g. "p:0,[0,1]" for  x*X^p.

inline std::string format(const Field& f, const LinearisedPoly& l) {
  std::string out = l.kind == LinKind::kQ ? "q:" : "p:";
  for (std::size_t i = 0; i < l.coeffs.size(); ++i) {
    if (i) out += ',';
    out += format_coeff(f, l.coeffs[i]);
  }
  return out;
}

inline LinearisedPoly parse_linearised(const Field& f, std::string_view text) {
  LinearisedPoly l;
  if (text.size() < 2 || text[1] != ':' || (text[0] != 'p' && text[0] != 'q')) {
    fail(ErrorCode::kConfigError, "linearised polynomial must start with 'p:' or 'q:'");
  }
  l.kind = text[0] == 'q' ? LinKind::kQ : LinKind::kP;
  text.remove_prefix(2);
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '[') {
      const auto close = text.find(']', i);
      if (close == std::string_view::npos) fail(ErrorCode::kConfigError, "unbalanced '['");
      l.coeffs.push_back(f.parse_element(text.substr(i + 1, close - i - 1)));
      i = close + 1;
    } else {
      const auto comma = std::min(text.find(',', i), text.size());
      const auto tok = text.substr(i, comma - i);
      if (tok.empty()) fail(ErrorCode::kConfigError, "empty linearised coefficient");
      const auto v = Field::parse_list(tok);
      l.coeffs.push_back(f.scalar(static_cast<std::int64_t>(v.at(0) % f.p())));
      i = comma;
    }
    if (i < text.size()) {
      if (text[i] != ',') fail(ErrorCode::kConfigError, "expected ',' in linearised polynomial");
      ++i;
    }
  }
  require_valid(f, l);
  return l;
}

}  // namespace ffslab
