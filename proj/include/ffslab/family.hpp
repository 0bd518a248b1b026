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

// Recognition of the three polynomial shapes whose d-th difference collapses
// to a multilinear form:
//
//   FormI    f = X^{p^nu} g_nu + ... + X^p g_1 + g_0,  deg g_i + 3 <= deg g_0 = d < p
//   FormII   f = X^{p^nu + ... + p + 1} + g,            4 <= deg g = d < p
//   FormIII  f = g(l(X)),  deg g = d < p, l a permutation p-polynomial

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ffslab/linearised.hpp"
#include "ffslab/poly.hpp"

namespace ffslab {

enum class FormTag { kFormI, kFormII, kFormIII };

inline const char* form_name(FormTag t) {
  switch (t) {
    case FormTag::kFormI: return "FormI";
    case FormTag::kFormII: return "FormII";
    case FormTag::kFormIII: return "FormIII";
  }
  return "?";
}

struct AdmissibleForm {
  FormTag tag = FormTag::kFormI;
  std::vector<UniPoly> parts;  // FormI: g_0, g_1, ..., g_nu
  unsigned nu = 0;             // FormII exponent (and FormI top index)
  UniPoly g;                   // FormII remainder, FormIII outer polynomial
  LinearisedPoly l;            // FormIII
  unsigned d = 0;              // the degree that drives the difference cascade
  std::uint64_t big_d = 0;     // deg f for FormI/II, deg g for FormIII
};

namespace detail {

inline std::optional<AdmissibleForm> as_form2(const Field& f, const UniPoly& poly) {
  if (poly.degree() <= 0) return std::nullopt;
  const auto deg = static_cast<std::uint64_t>(poly.degree());
  std::uint64_t expo = 1, pw = 1;
  for (unsigned nu = 1;; ++nu) {
    pw *= f.p();
    expo += pw;
    if (expo > deg) return std::nullopt;
    if (expo < deg) continue;
    if (poly.lead() != f.one()) return std::nullopt;
    std::vector<Element> rest(poly.coeffs().begin(), poly.coeffs().end() - 1);
    UniPoly g(std::move(rest));
    if (g.degree() < 4 || g.degree() >= static_cast<int>(f.p())) return std::nullopt;
    AdmissibleForm out;
    out.tag = FormTag::kFormII;
    out.nu = nu;
    out.d = static_cast<unsigned>(g.degree());
    out.g = std::move(g);
    out.big_d = deg;
    return out;
  }
}

inline std::optional<AdmissibleForm> as_form1(const Field& f, const UniPoly& poly) {
  const std::uint64_t p = f.p();
  std::vector<std::vector<Element>> parts(1);
  for (std::size_t n = 0; n < poly.coeffs().size(); ++n) {
    const Element c = poly.coeffs()[n];
    if (c.v == 0) continue;
    std::size_t i = 0;
    std::uint64_t pi = 1;
    while (pi * p <= n) {
      pi *= p;
      ++i;
    }
    const std::size_t shift = i == 0 ? n : n - pi;
    if (parts.size() <= i) parts.resize(i + 1);
    if (parts[i].size() <= shift) parts[i].resize(shift + 1);
    parts[i][shift] = c;
  }
  AdmissibleForm out;
  out.tag = FormTag::kFormI;
  for (auto& v : parts) out.parts.emplace_back(std::move(v));
  const int d = out.parts[0].degree();
  if (d < 1 || d >= static_cast<int>(p)) return std::nullopt;
  for (std::size_t i = 1; i < out.parts.size(); ++i) {
    if (!out.parts[i].is_zero() && out.parts[i].degree() + 3 > d) return std::nullopt;
  }
  out.nu = static_cast<unsigned>(out.parts.size() - 1);
  out.d = static_cast<unsigned>(d);
  out.big_d = static_cast<std::uint64_t>(poly.degree());
  return out;
}

}  // namespace detail

/// FormI or FormII decomposition of f, if any. FormII is preferred when both
/// apply (every FormII polynomial with nu = 1 is also FormI). A polynomial of
/// degree below p is FormI with nu = 0.
inline std::optional<AdmissibleForm> classify_admissible_form(const Field& f, const UniPoly& poly) {
  if (auto two = detail::as_form2(f, poly)) return two;
  return detail::as_form1(f, poly);
}

/// FormIII from explicit constituents; none unless deg g < p and l is a
/// permutation of L. A q-polynomial counts, being a p-polynomial in disguise.
inline std::optional<AdmissibleForm> classify_admissible_form(const Field& f, const UniPoly& g,
                                                        const LinearisedPoly& l) {
  if (g.degree() < 1 || g.degree() >= static_cast<int>(f.p())) return std::nullopt;
  if (!lin_is_permutation(f, l)) return std::nullopt;
  AdmissibleForm out;
  out.tag = FormTag::kFormIII;
  out.g = g;
  out.l = l;
  out.d = static_cast<unsigned>(g.degree());
  out.big_d = out.d;
  return out;
}

}  // namespace ffslab
