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

// Exact checks of the structural identities satisfied by the difference
// cascade. Every check compares polynomials term for term; nothing is
// sampled. Each verifier returns a report listing its individual checks.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ffslab/linearised.hpp"
#include "ffslab/multipoly.hpp"
#include "ffslab/poly.hpp"
#include "json.hpp"

namespace ffslab {

struct Check {
  explicit Check(std::string n) : name(std::move(n)) {}

  std::string name;
  bool pass = true;
  bool informational = false;  // reported, but does not affect the verdict
  std::optional<std::string> witness;
};

struct VerifyReport {
  VerifyReport(std::string name, nlohmann::json p) : identity(std::move(name)), params(std::move(p)) {}

  std::string identity;
  nlohmann::json params = nlohmann::json::object();
  std::vector<Check> checks;

  bool pass() const {
    for (const auto& c : checks) {
      if (!c.informational && !c.pass) return false;
    }
    return true;
  }
  const Check* find(std::string_view name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
  std::optional<std::string> witness() const {
    for (const auto& c : checks) {
      if (!c.informational && !c.pass) return c.name + ": " + c.witness.value_or("");
    }
    return std::nullopt;
  }
};

inline void to_json(nlohmann::json& j, const VerifyReport& r) {
  j = {{"identity", r.identity}, {"params", r.params}, {"pass", r.pass()}};
  nlohmann::json checks = nlohmann::json::object();
  for (const auto& c : r.checks) checks[c.name] = c.pass;
  j["checks"] = checks;
  if (auto w = r.witness()) j["witness"] = *w;
}

namespace detail {

inline std::string term_text(const Field& f, unsigned arity, const Monomial& mono, Element c) {
  return format(f, MultiPoly::from_terms(arity, {{mono, c}}));
}

/// d (d-1) ... (d-k+2) as an element of F_p (k-1 factors).
inline Element falling(const Field& f, unsigned d, unsigned k) {
  std::int64_t acc = 1;
  for (unsigned i = 0; i + 1 < k; ++i) acc = acc * (static_cast<std::int64_t>(d) - i) % f.p();
  return f.scalar(acc);
}

inline Check equal_check(const Field& f, std::string name, const MultiPoly& got,
                         const MultiPoly& want) {
  Check c{std::move(name)};
  if (got == want) return c;
  c.pass = false;
  const MultiPoly diff = sub(f, got.widened(std::max(got.arity(), want.arity())),
                             want.widened(std::max(got.arity(), want.arity())));
  if (diff.is_zero()) {
    c.witness = "arity differs";
  } else {
    const auto [mono, coeff] = sorted_terms(diff).front();
    c.witness = "difference contains " + term_text(f, diff.arity(), mono, coeff);
  }
  return c;
}

/// Shape of the quotient F_k of a degree-d polynomial with
/// leading coefficient a_d: leading term on X_k^{d-k+1}, remaining degrees
/// bounded by d-k+1 (earlier variables) and d-k (X_k).
inline std::vector<Check> quotient_shape(const Field& f, const MultiPoly& fk, unsigned d,
                                         unsigned k, Element lead) {
  std::vector<Check> out;
  Monomial top;
  top[k - 1] = static_cast<std::uint16_t>(d - k + 1);
  const Element want = f.mul(falling(f, d, k), lead);
  Check coeff{"leading_coefficient"};
  if (fk.coeff(top) != want) {
    coeff.pass = false;
    coeff.witness = "coefficient of " + term_text(f, k, top, f.one()) + " is " +
                    format_coeff(f, fk.coeff(top)) + ", expected " + format_coeff(f, want);
  }
  out.push_back(std::move(coeff));
  Check degrees{"remainder_degrees"};
  for (const auto& [mono, c] : fk.terms()) {
    if (mono == top) continue;
    bool ok = mono[k - 1] <= static_cast<int>(d) - static_cast<int>(k);
    for (unsigned i = 0; i + 1 < k; ++i) ok = ok && mono[i] <= d - k + 1;
    if (!ok) {
      degrees.pass = false;
      degrees.witness = "remainder term " + term_text(f, k, mono, c);
      break;
    }
  }
  out.push_back(std::move(degrees));
  return out;
}

/// The final shape  F_d = d! a_d X_d + ftilde(X_1..X_{d-1}),  deg_{X_i} ftilde <= 1.
inline Check final_shape(const Field& f, const MultiPoly& fd, unsigned d, Element lead) {
  Check c{"final_shape"};
  Monomial top;
  top[d - 1] = 1;
  const Element want = f.mul(falling(f, d, d + 1), lead);
  if (fd.coeff(top) != want) {
    c.pass = false;
    c.witness = "coefficient of X" + std::to_string(d) + " is " + format_coeff(f, fd.coeff(top)) +
                ", expected " + format_coeff(f, want);
    return c;
  }
  for (const auto& [mono, coeff] : fd.terms()) {
    if (mono == top) continue;
    bool ok = mono[d - 1] == 0;
    for (unsigned i = 0; i + 1 < d; ++i) ok = ok && mono[i] <= 1;
    if (!ok) {
      c.pass = false;
      c.witness = "term " + term_text(f, d, mono, coeff);
      return c;
    }
  }
  return c;
}

inline void require_small_degree(const Field& f, const UniPoly& g, int min_degree,
                                 const char* what) {
  if (g.degree() < min_degree || g.degree() >= static_cast<int>(f.p())) {
    fail(ErrorCode::kHypothesisViolated,
         std::string(what) + ": need " + std::to_string(min_degree) + " <= deg < p, got degree " +
             std::to_string(g.degree()) + " with p = " + std::to_string(f.p()));
  }
}

inline nlohmann::json base_params(const Field& f) { return {{"field", f.descriptor()}}; }

inline UniPoly monomial_x_power(const Field& f, std::uint64_t n) {
  if (n > kDefaultDegreeCap) fail(ErrorCode::kDegreeBudgetExceeded, "exponent exceeds cap");
  return UniPoly::monomial(f.one(), n);
}

}  // namespace detail

/// Leading coefficient and degree bounds of the k-th quotient, 2 <= k <= d.
inline VerifyReport verify_quotient_shape(const Field& f, const UniPoly& g, unsigned k) {
  detail::require_small_degree(f, g, 1, "quotient_shape");
  const unsigned d = static_cast<unsigned>(g.degree());
  if (k < 2 || k > d) fail(ErrorCode::kInvalidArgument, "quotient_shape: need 2 <= k <= d");
  VerifyReport r{"quotient_shape", detail::base_params(f)};
  r.params["f"] = format(f, g);
  r.params["k"] = k;
  const auto cascade = delta_cascade(f, g, k);
  r.checks = detail::quotient_shape(f, cascade.quotients[k - 1], d, k, g.lead());
  return r;
}

/// Delta_{d+1}(f) = d! a_d X_d, Delta_{d+2}(f) = 0, and the shape at stage d.
inline VerifyReport verify_terminal_differences(const Field& f, const UniPoly& g) {
  detail::require_small_degree(f, g, 1, "terminal_differences");
  const unsigned d = static_cast<unsigned>(g.degree());
  VerifyReport r{"terminal_differences", detail::base_params(f)};
  r.params["f"] = format(f, g);
  const auto cascade = delta_cascade(f, g, d + 2);
  MultiPoly want(d + 1);
  Monomial xd;
  xd[d - 1] = 1;
  want.add_term(f, xd, f.mul(detail::falling(f, d, d + 1), g.lead()));
  r.checks.push_back(detail::equal_check(f, "delta_d_plus_1", cascade.delta(f, d + 1), want));
  r.checks.push_back(detail::equal_check(f, "delta_d_plus_2", cascade.delta(f, d + 2), MultiPoly(d + 2)));
  if (d >= 2) r.checks.push_back(detail::final_shape(f, cascade.quotients[d - 1], d, g.lead()));
  return r;
}

/// For f = X^{p^nu} g with deg g = d < p: Delta_{d+3}(f) = 0, plus the
/// closed-form expansion of Delta_k(f) through the cascade of g for k <= 4
/// (informational).
inline VerifyReport verify_power_times_low_degree(const Field& f, unsigned nu, const UniPoly& g) {
  detail::require_small_degree(f, g, 0, "power_times_low_degree");
  if (nu == 0) fail(ErrorCode::kHypothesisViolated, "power_times_low_degree: need nu >= 1");
  const unsigned d = static_cast<unsigned>(g.degree());
  const auto pnu = checked_pow(f.p(), nu, kDefaultDegreeCap);
  if (!pnu) fail(ErrorCode::kDegreeBudgetExceeded, "p^nu exceeds cap");
  const UniPoly fx = mul(f, detail::monomial_x_power(f, *pnu), g);
  VerifyReport r{"power_times_low_degree", detail::base_params(f)};
  r.params["g"] = format(f, g);
  r.params["nu"] = nu;
  const unsigned depth = d + 3;
  const auto fc = delta_cascade(f, fx, depth);
  const auto gc = delta_cascade(f, g, std::min(depth, 4u));
  for (unsigned k = 2; k <= std::min(depth, 4u); ++k) {
    // X_{k-1} [ (sum_{j<=k} X_j^P) G_k(X_1..X_k)
    //           + sum_{j<k} X_j^{P-1} G_{k-1}(X_1..^X_j..X_k) ]
    MultiPoly bracket(k);
    MultiPoly power_sum(k);
    for (unsigned j = 0; j < k; ++j) {
      Monomial mono;
      mono[j] = static_cast<std::uint16_t>(*pnu);
      power_sum.add_term(f, mono, f.one());
    }
    bracket = mul(f, power_sum, gc.quotients[k - 1]);
    for (unsigned j = 0; j + 1 < k; ++j) {
      std::vector<MultiPoly> vars;
      for (unsigned t = 0; t < k; ++t) {
        if (t != j) vars.push_back(MultiPoly::variable(t, k));
      }
      MultiPoly term = substitute(f, gc.quotients[k - 2], vars, k);
      Monomial mono;
      mono[j] = static_cast<std::uint16_t>(*pnu - 1);
      term = mul(f, MultiPoly::from_terms(k, {{mono, f.one()}}), term);
      bracket = add(f, bracket, term);
    }
    const MultiPoly rhs = mul(f, MultiPoly::variable(k - 2, k), bracket);
    auto c = detail::equal_check(f, "expansion_k" + std::to_string(k), fc.delta(f, k), rhs);
    c.informational = true;
    r.checks.push_back(std::move(c));
  }
  r.checks.push_back(
      detail::equal_check(f, "delta_d_plus_3", fc.delta(f, depth), MultiPoly(depth)));
  return r;
}

/// f = sum_{i=1}^{nu} X^{p^i} g_i + g_0 with deg g_i + 3 <= deg g_0 = d < p:
/// Delta_d(f) = Delta_d(g_0), and the stage-d shape.
inline VerifyReport verify_power_sum_form(const Field& f, const std::vector<UniPoly>& parts) {
  if (parts.empty()) fail(ErrorCode::kInvalidArgument, "power_sum_form: need g_0");
  const UniPoly& g0 = parts[0];
  detail::require_small_degree(f, g0, 2, "power_sum_form");
  const unsigned d = static_cast<unsigned>(g0.degree());
  UniPoly fx = g0;
  VerifyReport r{"power_sum_form", detail::base_params(f)};
  nlohmann::json gs = nlohmann::json::array();
  for (std::size_t i = 0; i < parts.size(); ++i) gs.push_back(format(f, parts[i]));
  r.params["g"] = gs;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (parts[i].is_zero()) continue;
    if (parts[i].degree() + 3 > static_cast<int>(d)) {
      fail(ErrorCode::kHypothesisViolated, "power_sum_form: need deg g_i + 3 <= deg g_0");
    }
    const auto pi = checked_pow(f.p(), static_cast<unsigned>(i), kDefaultDegreeCap);
    if (!pi) fail(ErrorCode::kDegreeBudgetExceeded, "p^i exceeds cap");
    fx = add(f, fx, mul(f, detail::monomial_x_power(f, *pi), parts[i]));
  }
  r.params["f"] = format(f, fx);
  const auto fc = delta_cascade(f, fx, d);
  const auto gc = delta_cascade(f, g0, d);
  r.checks.push_back(detail::equal_check(f, "delta_d_equals_g0", fc.delta(f, d), gc.delta(f, d)));
  r.checks.push_back(detail::final_shape(f, fc.quotients[d - 1], d, g0.lead()));
  return r;
}

/// f = X^{p^nu + ... + p + 1} + g with 4 <= deg g = d < p. Checks the two
/// closed forms for the quotients F_2, F_3 of the monomial part, that its
/// fourth difference vanishes, and the stage-d shape of f. The closed forms
/// and the vanishing at depth 4 only hold for nu = 1; for larger nu the
/// monomial part first vanishes at depth nu + 3 (informational check), so
/// the stage-d shape needs d >= nu + 3.
inline VerifyReport verify_digit_monomial_form(const Field& f, unsigned nu, const UniPoly& g) {
  detail::require_small_degree(f, g, 4, "digit_monomial_form");
  if (nu == 0) fail(ErrorCode::kHypothesisViolated, "digit_monomial_form: need nu >= 1");
  const unsigned d = static_cast<unsigned>(g.degree());
  std::uint64_t big_p = 0;  // p^nu + ... + p
  for (unsigned i = 1; i <= nu; ++i) {
    const auto t = checked_pow(f.p(), i, kDefaultDegreeCap);
    if (!t) fail(ErrorCode::kDegreeBudgetExceeded, "exponent exceeds cap");
    big_p += *t;
  }
  const UniPoly mono = detail::monomial_x_power(f, big_p + 1);
  const UniPoly fx = add(f, mono, g);
  VerifyReport r{"digit_monomial_form", detail::base_params(f)};
  r.params["nu"] = nu;
  r.params["g"] = format(f, g);
  const auto mc = delta_cascade(f, mono, std::max(4u, nu + 3));
  const auto e = static_cast<std::uint16_t>(big_p);

  MultiPoly m2(2);
  m2.add_term(f, Monomial{{e, 0}}, f.one());
  m2.add_term(f, Monomial{{0, e}}, f.one());
  m2.add_term(f, Monomial{{static_cast<std::uint16_t>(e - 1), 1}}, f.one());
  r.checks.push_back(detail::equal_check(f, "quotient_2", mc.quotients[1], m2));

  MultiPoly m3(3);
  m3.add_term(f, Monomial{{static_cast<std::uint16_t>(e - 1), 0, 0}}, f.one());
  m3.add_term(f, Monomial{{0, static_cast<std::uint16_t>(e - 1), 0}}, f.one());
  r.checks.push_back(detail::equal_check(f, "quotient_3", mc.quotients[2], m3));
  r.checks.push_back(detail::equal_check(f, "delta_4_zero", mc.delta(f, 4), MultiPoly(4)));
  // The monomial behaves like a polynomial of degree nu + 1 under the cascade.
  auto depth = detail::equal_check(f, "delta_nu_plus_3_zero", mc.delta(f, nu + 3), MultiPoly(nu + 3));
  depth.informational = true;
  r.checks.push_back(std::move(depth));

  const auto fc = delta_cascade(f, fx, d);
  r.checks.push_back(detail::final_shape(f, fc.quotients[d - 1], d, g.lead()));
  return r;
}

/// f = g(l(X)) with l an additive p-polynomial and 2 <= deg g = d < p.
///
/// The cascade of f is the cascade of g read at l-images, up to the
/// X_k-free factors l(X_i)/X_i picked up at each division:
///   F_k(f) = prod_{i<k} (l(X_i)/X_i) * G_k(l(X_1), ..., l(X_k)),
/// checked for every 2 <= k <= d, with G_d in the final shape. The
/// "literal_statement" check compares Delta_d(f) against
/// l(X_{d-1}) G_d(l(X_1), ..., l(X_d)) without those factors; it is
/// informational.
inline VerifyReport verify_linearised_composition(const Field& f, const UniPoly& g, const LinearisedPoly& l) {
  detail::require_small_degree(f, g, 2, "linearised_composition");
  const unsigned d = static_cast<unsigned>(g.degree());
  const UniPoly lu = lin_to_uni(f, l);
  const UniPoly fx = compose(f, g, lu);
  VerifyReport r{"linearised_composition", detail::base_params(f)};
  r.params["g"] = format(f, g);
  r.params["l"] = format(f, l);
  const auto fc = delta_cascade(f, fx, d);
  const auto gc = delta_cascade(f, g, d);
  // l(X)/X: l has no constant term.
  const UniPoly l_over_x(std::vector<Element>(lu.coeffs().begin() + (lu.is_zero() ? 0 : 1),
                                              lu.coeffs().end()));
  Check subst{"substitution"};
  for (unsigned k = 2; k <= d && subst.pass; ++k) {
    std::vector<MultiPoly> images;
    MultiPoly factor(k);
    factor.add_term(f, Monomial{}, f.one());
    for (unsigned i = 0; i < k; ++i) {
      images.push_back(MultiPoly::from_uni(lu, i, k));
      if (i + 1 < k) factor = mul(f, factor, MultiPoly::from_uni(l_over_x, i, k));
    }
    const MultiPoly want = mul(f, factor, substitute(f, gc.quotients[k - 1], images, k));
    auto c = detail::equal_check(f, "substitution", fc.quotients[k - 1], want);
    if (!c.pass) {
      subst = std::move(c);
      subst.witness = "stage " + std::to_string(k) + ", " + subst.witness.value_or("");
    }
  }
  r.checks.push_back(std::move(subst));
  r.checks.push_back(detail::final_shape(f, gc.quotients[d - 1], d, g.lead()));

  std::vector<MultiPoly> images;
  for (unsigned i = 0; i < d; ++i) images.push_back(MultiPoly::from_uni(lu, i, d));
  const MultiPoly literal = mul(f, images[d - 2], substitute(f, gc.quotients[d - 1], images, d));
  auto lit = detail::equal_check(f, "literal_statement", fc.delta(f, d), literal);
  lit.informational = true;
  r.checks.push_back(std::move(lit));
  return r;
}

}  // namespace ffslab
