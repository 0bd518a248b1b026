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

// Additive character sums psi(y) = exp(2 pi i Tr_{L|F_p}(tau y) / p).
//
// Unweighted sums are kept as integer histograms over the trace residue, so
// they are exact and independent of summation order; weighted sums use
// compensated complex summation merged in block order.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "ffslab/constants.hpp"
#include "ffslab/error.hpp"
#include "ffslab/field.hpp"
#include "ffslab/numeric.hpp"
#include "ffslab/parallel.hpp"
#include "ffslab/poly.hpp"
#include "ffslab/subspace.hpp"
#include "ffslab/vecspace.hpp"
#include "json.hpp"

namespace ffslab {

using Complex = std::complex<double>;

/// exp(2 pi i a / p).
inline Complex root_of_unity(std::uint32_t p, std::uint64_t a) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(a % p) / static_cast<double>(p);
  return std::polar(1.0, angle);
}

/// exp(2 pi i t) with t reduced to [0, 1) first.
inline Complex unit_phase(double t) {
  t -= std::floor(t);
  return std::polar(1.0, 2.0 * std::numbers::pi * t);
}

/// Exponent of psi_tau(x) as a residue mod p.
inline std::uint32_t psi_index(const Field& f, Element tau, Element x) { return f.abs_trace(f.mul(tau, x)); }

struct CharSum {
  std::uint32_t p = 2;
  std::vector<std::uint64_t> counts;

  CharSum() = default;
  explicit CharSum(std::uint32_t prime) : p(prime), counts(prime, 0) {}

  std::uint64_t terms() const {
    std::uint64_t n = 0;
    for (auto c : counts) n += c;
    return n;
  }

  Complex value() const {
    Complex acc{};
    for (std::uint32_t a = 0; a < p; ++a) {
      if (counts[a]) acc += static_cast<double>(counts[a]) * root_of_unity(p, a);
    }
    return acc;
  }

  double magnitude() const { return std::abs(value()); }

  CharSum& operator+=(const CharSum& other) {
    for (std::uint32_t a = 0; a < p; ++a) counts[a] += other.counts[a];
    return *this;
  }
};

inline nlohmann::json to_json(const CharSum& s) {
  const Complex v = s.value();
  return {{"counts", s.counts}, {"value_re", v.real()}, {"value_im", v.imag()}, {"magnitude", std::abs(v)}};
}

/// Neumaier-compensated complex accumulator.
class CompensatedSum {
 public:
  void add(Complex z) {
    add_part(re_, cre_, z.real());
    add_part(im_, cim_, z.imag());
  }
  void add(const CompensatedSum& other) {
    add(Complex(other.re_, other.im_));
    add(Complex(other.cre_, other.cim_));
  }
  Complex value() const { return {re_ + cre_, im_ + cim_}; }

 private:
  static void add_part(double& sum, double& comp, double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double re_ = 0, cre_ = 0, im_ = 0, cim_ = 0;
};

struct WeightedCharSum {
  CompensatedSum acc;
  std::uint64_t terms = 0;
  CompensatedSum weight_l1;    // sum |w|
  CompensatedSum weight_l2sq;  // sum |w|^2
  double max_weight = 0;

  void add(Complex w, Complex z) {
    acc.add(w * z);
    ++terms;
    const double a = std::abs(w);
    weight_l1.add(Complex(a));
    weight_l2sq.add(Complex(a * a));
    max_weight = std::max(max_weight, a);
  }

  void merge(const WeightedCharSum& o) {
    acc.add(o.acc);
    terms += o.terms;
    weight_l1.add(o.weight_l1);
    weight_l2sq.add(o.weight_l2sq);
    max_weight = std::max(max_weight, o.max_weight);
  }

  Complex value() const { return acc.value(); }
  double magnitude() const { return std::abs(value()); }
  /// |sum w psi| <= sum |w|, with room for rounding.
  bool triangle_ok() const {
    const double l1 = weight_l1.value().real();
    return magnitude() <= l1 * (1 + 1e-12) + 1e-9;
  }
};

inline nlohmann::json to_json(const WeightedCharSum& s) {
  const Complex v = s.value();
  return {{"value_re", v.real()},
          {"value_im", v.imag()},
          {"magnitude", std::abs(v)},
          {"terms", s.terms},
          {"weight_l1", s.weight_l1.value().real()},
          {"weight_l2sq", s.weight_l2sq.value().real()}};
}

// -- sums over subspaces -----------------------------------------------------

/// Histogram of residue(x) over x in A, built block by block.
template <class Residue>
CharSum histogram_over(const AffineSubspace& a, Residue&& residue) {
  const auto& f = a.field();
  f.require_budget(a.size(), "subspace sum");
  const auto blocks = map_blocks<CharSum>(a.size(), [&](std::uint64_t begin, std::uint64_t end) {
    CharSum part(f.p());
    a.for_each(begin, end, [&](Element x) { ++part.counts[residue(x)]; });
    return part;
  });
  CharSum total(f.p());
  for (const auto& b : blocks) total += b;
  return total;
}

/// sum_{x in A} psi_tau(f(x)).
inline CharSum sum_over_subspace(const UniPoly& g, const AffineSubspace& a, Element tau) {
  const auto& f = a.field();
  const PolyEvaluator ev(f, g);
  return histogram_over(a, [&](Element x) { return psi_index(f, tau, ev(x)); });
}

/// A complex weight on L.
using LWeight = std::function<Complex(Element)>;

/// chi(x) = exp(2 pi i sum_j zeta_j Tr_{L|F_p}(tau_j x)), the trace taken as
/// an integer in [0, p). This is a homomorphism (L, +) -> C* exactly when
/// every p * zeta_j is an integer.
struct TraceTwist {
  std::vector<double> zetas;
  std::vector<Element> taus;

  LWeight weight(const Field& f) const {
    return [f = &f, z = zetas, t = taus](Element x) {
      double phase = 0;
      for (std::size_t j = 0; j < z.size(); ++j) phase += z[j] * f->abs_trace(f->mul(t[j], x));
      return unit_phase(phase);
    };
  }
};

inline LWeight table_weight(const Field& f, std::vector<Complex> values) {
  if (values.size() != f.size()) fail(ErrorCode::kDimensionMismatch, "weight table must have p^m entries");
  return [v = std::move(values)](Element x) { return v[x.v]; };
}

inline LWeight trivial_weight() {
  return [](Element) { return Complex(1.0); };
}

/// max |chi(x + y) - chi(x) chi(y)| over `samples` random pairs.
template <class Rng>
double homomorphism_defect(const Field& f, const LWeight& chi, std::size_t samples, Rng& rng) {
  double worst = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const Element x = f.from_index(rng()), y = f.from_index(rng());
    worst = std::max(worst, std::abs(chi(f.add(x, y)) - chi(x) * chi(y)));
  }
  return worst;
}

/// sum_{x in A} chi(x) psi_tau(f(x)).
inline WeightedCharSum twisted_sum_over_subspace(const UniPoly& g, const AffineSubspace& a, Element tau,
                                                 const LWeight& chi) {
  const auto& f = a.field();
  f.require_budget(a.size(), "subspace sum");
  const PolyEvaluator ev(f, g);
  const auto blocks = map_blocks<WeightedCharSum>(a.size(), [&](std::uint64_t begin, std::uint64_t end) {
    WeightedCharSum part;
    a.for_each(begin, end, [&](Element x) { part.add(chi(x), root_of_unity(f.p(), psi_index(f, tau, ev(x)))); });
    return part;
  });
  WeightedCharSum total;
  for (const auto& b : blocks) total.merge(b);
  return total;
}

/// sum_{x in A} |chi(x)|^power.
inline double weight_moment(const AffineSubspace& a, const LWeight& chi, double power) {
  const auto& f = a.field();
  f.require_budget(a.size(), "weight moment");
  const auto blocks = map_blocks<CompensatedSum>(a.size(), [&](std::uint64_t begin, std::uint64_t end) {
    CompensatedSum part;
    a.for_each(begin, end, [&](Element x) { part.add(Complex(std::pow(std::abs(chi(x)), power))); });
    return part;
  });
  CompensatedSum total;
  for (const auto& b : blocks) total.add(b);
  return total.value().real();
}

// -- multilinear sums ----------------------------------------------------------

namespace detail {
inline void require_nonzero_sets(const Field& f, const std::vector<std::vector<Element>>& sets,
                                 std::size_t min_sets) {
  if (sets.size() < min_sets) fail(ErrorCode::kInvalidArgument, "too few sets");
  std::uint64_t product = 1;
  for (const auto& s : sets) {
    if (s.empty()) fail(ErrorCode::kInvalidArgument, "sets must be non-empty");
    for (const auto& x : s) {
      if (x.v == 0) fail(ErrorCode::kInvalidArgument, "sets must lie in L*");
    }
    if (product > f.budget() / s.size()) {
      fail(ErrorCode::kSizeBudgetExceeded, "product of set sizes exceeds the budget");
    }
    product *= s.size();
  }
}

/// Multiplicity of each product a_first * ... * a_last as a table over L.
inline std::vector<std::uint64_t> product_histogram(const Field& f, const std::vector<std::vector<Element>>& sets,
                                                    std::size_t first) {
  std::vector<std::uint64_t> hist(f.size(), 0);
  hist[1] = 1;
  for (std::size_t i = first; i < sets.size(); ++i) {
    std::vector<std::uint64_t> next(f.size(), 0);
    for (std::uint64_t v = 1; v < f.size(); ++v) {
      if (!hist[v]) continue;
      for (const auto& a : sets[i]) next[f.mul(Element{static_cast<std::uint32_t>(v)}, a).v] += hist[v];
    }
    hist = std::move(next);
  }
  return hist;
}
}  // namespace detail

/// sum over a_i in A_i of psi_tau(a_1 a_2 ... a_n), exactly.
inline CharSum multilinear_sum(const Field& f, const std::vector<std::vector<Element>>& sets, Element tau) {
  detail::require_nonzero_sets(f, sets, 1);
  const auto hist = detail::product_histogram(f, sets, 0);
  CharSum out(f.p());
  for (std::uint64_t v = 1; v < f.size(); ++v) {
    if (hist[v]) out.counts[psi_index(f, tau, Element{static_cast<std::uint32_t>(v)})] += hist[v];
  }
  return out;
}

/// sum over a_2..a_n of |sum_{a_1} psi_tau(a_1 a_2 ... a_n)| (unit weights).
inline double multilinear_abs_sum(const Field& f, const std::vector<std::vector<Element>>& sets, Element tau) {
  detail::require_nonzero_sets(f, sets, 2);
  const auto hist = detail::product_histogram(f, sets, 1);
  CompensatedSum total;
  for (std::uint64_t v = 1; v < f.size(); ++v) {
    if (!hist[v]) continue;
    CharSum inner(f.p());
    for (const auto& a : sets[0]) ++inner.counts[psi_index(f, tau, f.mul(a, Element{static_cast<std::uint32_t>(v)}))];
    total.add(Complex(static_cast<double>(hist[v]) * inner.magnitude()));
  }
  return total.value().real();
}

// -- digit maps --------------------------------------------------------------

/// xi_n = sum_j n_j omega_j over the base-p digits n_j of n, j < s.
class DigitMap {
 public:
  DigitMap(const Field& f, std::vector<Element> omega, unsigned s) : field_(&f), omega_(std::move(omega)), s_(s) {
    if (f.e() != 1) fail(ErrorCode::kBaseNotPrime, "digit maps need q = p");
    if (s > omega_.size() || omega_.size() > f.r()) fail(ErrorCode::kInvalidArgument, "need s <= #omega <= r");
    if (FpSpan(f, omega_).dim() != omega_.size()) fail(ErrorCode::kDependentBasis, "omega is dependent over F_p");
  }

  /// The power basis 1, x, ..., x^{r-1}.
  static DigitMap power_basis(const Field& f, unsigned s) {
    std::vector<Element> omega;
    Element xj = f.one();
    for (unsigned j = 0; j < f.r(); ++j, xj = f.mul(xj, f.gen_x())) omega.push_back(xj);
    return DigitMap(f, std::move(omega), s);
  }

  const Field& field() const { return *field_; }
  const std::vector<Element>& omega() const { return omega_; }
  unsigned s() const { return s_; }
  /// p^s: the map is a bijection from [0, p^s) onto the span of omega_0..omega_{s-1}.
  std::uint64_t period() const { return *checked_pow(field_->p(), s_); }

  Element operator()(std::uint64_t n) const {
    if (n >= period()) fail(ErrorCode::kInvalidArgument, "n has more than s digits");
    Element x = field_->zero();
    for (unsigned j = 0; j < s_ && n; ++j, n /= field_->p()) {
      x = field_->add(x, field_->scale(static_cast<std::uint32_t>(n % field_->p()), omega_[j]));
    }
    return x;
  }

 private:
  const Field* field_;
  std::vector<Element> omega_;
  unsigned s_;
};

/// chi(n) = exp(2 pi i sum_j alpha_j n_j) over the base-p digits of n.
struct PMultiplicative {
  std::vector<double> alphas;

  double phase(std::uint64_t n, std::uint32_t p) const {
    double t = 0;
    for (std::size_t j = 0; n; ++j, n /= p) {
      const auto digit = n % p;
      if (digit == 0) continue;
      if (j >= alphas.size()) fail(ErrorCode::kInvalidArgument, "n has more digits than alphas");
      t += alphas[j] * static_cast<double>(digit);
      t -= std::floor(t);
    }
    return t;
  }
  Complex operator()(std::uint64_t n, std::uint32_t p) const { return unit_phase(phase(n, p)); }
};

namespace detail {
inline void require_window(const DigitMap& dm, std::uint64_t n_max) {
  if (n_max >= dm.period()) fail(ErrorCode::kInvalidArgument, "N must be below p^s");
}

template <class Weight>
WeightedCharSum digit_sum(const UniPoly& g, const DigitMap& dm, Element tau, std::uint64_t n_max, bool include_zero,
                          Weight&& weight) {
  const auto& f = dm.field();
  require_window(dm, n_max);
  const std::uint64_t first = include_zero ? 0 : 1;
  const std::uint64_t count = n_max + 1 - first;
  f.require_budget(count, "digit sum");
  const PolyEvaluator ev(f, g);
  const auto blocks = map_blocks<WeightedCharSum>(count, [&](std::uint64_t begin, std::uint64_t end) {
    WeightedCharSum part;
    for (std::uint64_t i = begin; i < end; ++i) {
      const std::uint64_t n = first + i;
      const Element xi = dm(n);
      part.add(weight(n, xi), root_of_unity(f.p(), psi_index(f, tau, ev(xi))));
    }
    return part;
  });
  WeightedCharSum total;
  for (const auto& b : blocks) total.merge(b);
  return total;
}
}  // namespace detail

/// S(N) = sum_{n <= N} chi(n) psi_tau(f(xi_n)); n starts at 1 unless
/// include_zero is set.
inline WeightedCharSum twisted_sum_N(const UniPoly& g, const DigitMap& dm, const PMultiplicative& chi, Element tau,
                                     std::uint64_t n_max, bool include_zero = false) {
  const auto p = dm.field().p();
  return detail::digit_sum(g, dm, tau, n_max, include_zero, [&](std::uint64_t n, Element) { return chi(n, p); });
}

/// R(N) = sum_{n <= N} chi(xi_n) psi_tau(f(xi_n)).
inline WeightedCharSum twisted_sum_R(const UniPoly& g, const DigitMap& dm, const LWeight& chi, Element tau,
                                     std::uint64_t n_max, bool include_zero = false) {
  return detail::digit_sum(g, dm, tau, n_max, include_zero, [&](std::uint64_t, Element xi) { return chi(xi); });
}

// -- bound evaluators --------------------------------------------------------

struct BoundReport {
  double lhs = 0;
  double rhs = 0;
  double trivial = 0;  // the bound that needs no theory, e.g. the number of terms
  std::map<std::string, bool> hypotheses;
  bool vacuous = true;

  bool hypotheses_hold() const {
    for (const auto& [name, ok] : hypotheses) {
      if (!ok) return false;
    }
    return true;
  }
  /// Vacuous when a hypothesis fails or the bound is no better than trivial.
  void finish() { vacuous = !hypotheses_hold() || !(rhs < trivial); }
};

inline nlohmann::json to_json(const BoundReport& b) {
  nlohmann::json hyp = nlohmann::json::object();
  for (const auto& [name, ok] : b.hypotheses) hyp[name] = ok;
  return {{"lhs", b.lhs}, {"rhs", b.rhs}, {"trivial", b.trivial}, {"hypotheses", hyp}, {"vacuous", b.vacuous}};
}

namespace detail {
inline bool at_least_fraction(std::uint64_t s, const Rational& eps, std::uint64_t r) {
  return Rational(static_cast<std::int64_t>(s)) >= eps * Rational(static_cast<std::int64_t>(r));
}
}  // namespace detail

/// Inputs of the bound for sum_{x in A} chi(x) psi(f(x)).
struct SubspaceSumParams {
  std::uint32_t p = 2;
  std::uint64_t q = 2;
  unsigned r = 1;
  unsigned s = 0;
  unsigned d = 2;
  Rational eps{1, 2};
  Rational eta{1};
  double B = 1;             // >= sum_{x in A} |chi(x)|^{2^d}
  bool eta_good = false;    // A is eta-good
  bool form_ok = false;     // f belongs to one of the admissible families with this d
  bool chi_homomorphism = true;
};

/// 2 B^{(d+1)/2^{d+1}} q^{s(1-(d+1)/2^{d+1}) - r theta}, theta = 0.9 eps / 2^{2d}.
inline BoundReport bound_subspace_sum(const SubspaceSumParams& in, double lhs, double trivial) {
  BoundReport out;
  out.lhs = lhs;
  out.trivial = trivial;
  const double lq = std::log2(static_cast<double>(in.q));
  const double frac = (in.d + 1.0) / std::exp2(in.d + 1.0);
  const double theta = constants::theta(in.eps, in.d);
  out.rhs = 2.0 * std::pow(in.B, frac) * std::exp2((in.s * (1.0 - frac) - in.r * theta) * lq);
  out.hypotheses["s_ge_eps_r"] = detail::at_least_fraction(in.s, in.eps, in.r);
  out.hypotheses["d_ge_delta"] = Rational(in.d) >= constants::delta(in.eps, in.eta);
  out.hypotheses["d_le_ceiling"] = in.d <= constants::degree_ceiling(in.p, in.r * lq);
  out.hypotheses["eta_good"] = in.eta_good;
  out.hypotheses["form"] = in.form_ok;
  out.hypotheses["chi_homomorphism"] = in.chi_homomorphism;
  out.finish();
  return out;
}

/// Inputs shared by the multilinear bounds.
struct MultilinearParams {
  std::uint32_t p = 2;
  std::uint64_t q = 2;
  unsigned r = 1;
  Rational eps{1, 2};
  Rational eta{1};
  std::vector<std::uint64_t> sizes;  // #A_1, ..., #A_n
  std::vector<bool> eta_good;        // per set
};

namespace detail {
/// log2 of #A_i #A_j (prod_{k >= first_power} #A_k)^gamma against r(1+eps) log2 q.
inline bool product_gate(const MultilinearParams& in, std::size_t i, std::size_t j, std::size_t first_power) {
  const double gamma = constants::gamma(in.eta).to_double();
  double lhs = std::log2(static_cast<double>(in.sizes[i])) + std::log2(static_cast<double>(in.sizes[j]));
  for (std::size_t k = first_power; k < in.sizes.size(); ++k) lhs += gamma * std::log2(static_cast<double>(in.sizes[k]));
  return lhs > in.r * (1.0 + in.eps.to_double()) * std::log2(static_cast<double>(in.q));
}

inline bool sizes_at_least_three(const MultilinearParams& in, std::size_t from) {
  for (std::size_t k = from; k < in.sizes.size(); ++k) {
    if (in.sizes[k] < 3) return false;
  }
  return true;
}

inline bool good_from(const MultilinearParams& in, std::size_t from) {
  for (std::size_t k = from; k < in.sizes.size(); ++k) {
    if (k >= in.eta_good.size() || !in.eta_good[k]) return false;
  }
  return true;
}
}  // namespace detail

/// 100 prod #A_i q^{-0.45 r eps / 2^n} for |sum psi(a_1 ... a_n)|.
inline BoundReport bound_multilinear(const MultilinearParams& in, double lhs) {
  BoundReport out;
  const std::size_t n = in.sizes.size();
  if (n < 2) fail(ErrorCode::kInvalidArgument, "need at least two sets");
  const double lq = std::log2(static_cast<double>(in.q));
  double prod = 1;
  for (auto s : in.sizes) prod *= static_cast<double>(s);
  out.lhs = lhs;
  out.trivial = prod;
  out.rhs = 100.0 * prod * std::exp2(-0.45 * in.r * in.eps.to_double() / std::exp2(n) * lq);
  out.hypotheses["n_ge_3"] = n >= 3;
  out.hypotheses["n_le_ceiling"] = n <= 0.9 * std::log2(in.r * lq);
  out.hypotheses["sizes_ge_3"] = detail::sizes_at_least_three(in, 0);
  out.hypotheses["eta_good_from_3"] = detail::good_from(in, 2);
  out.hypotheses["product_gate"] = detail::product_gate(in, 0, 1, 2);
  out.finish();
  return out;
}

/// prod (B_i #A_i)^{1/2} ((#A_1)^{-1/2} + 10 q^{-0.45 r eps / 2^n}) for the
/// weighted sum over a_2..a_n of |sum_{a_1} w_1 psi(a_1 ... a_n)|.
inline BoundReport bound_weighted_multilinear(const MultilinearParams& in, const std::vector<double>& weight_bounds,
                                              double lhs) {
  BoundReport out;
  const std::size_t n = in.sizes.size();
  if (n < 2 || weight_bounds.size() != n) fail(ErrorCode::kDimensionMismatch, "need one weight bound per set");
  const double lq = std::log2(static_cast<double>(in.q));
  double root = 1, trivial = 1;
  for (std::size_t i = 0; i < n; ++i) {
    root *= std::sqrt(weight_bounds[i] * static_cast<double>(in.sizes[i]));
    trivial *= std::sqrt(weight_bounds[i] * static_cast<double>(in.sizes[i]));
  }
  out.lhs = lhs;
  out.trivial = trivial;  // Cauchy-Schwarz in every variable
  out.rhs = root * (1.0 / std::sqrt(static_cast<double>(in.sizes[0])) +
                    10.0 * std::exp2(-0.45 * in.r * in.eps.to_double() / std::exp2(n) * lq));
  out.hypotheses["n_ge_4"] = n >= 4;
  out.hypotheses["n_le_ceiling"] = n <= 0.9 * std::log2(in.r * lq) + 1;
  out.hypotheses["sizes_ge_3"] = detail::sizes_at_least_three(in, 1);
  out.hypotheses["eta_good_from_4"] = detail::good_from(in, 3);
  out.hypotheses["product_gate"] = n >= 3 && detail::product_gate(in, 1, 2, 3);
  out.finish();
  return out;
}

/// Inputs of the bounds for S(N) and R(N).
struct DigitSumParams {
  std::uint32_t p = 2;
  unsigned r = 1;
  unsigned s = 1;
  unsigned d = 2;
  std::uint64_t N = 1;
  Rational eps{1, 2};
  Rational eta{1};
  bool eta_good = false;  // the digit span L_s is eta-good
  bool form_ok = false;
};

namespace detail {
inline void digit_window_hypotheses(const DigitSumParams& in, BoundReport& out) {
  const auto lo = checked_pow(in.p, in.s - 1), hi = checked_pow(in.p, in.s);
  out.hypotheses["N_in_window"] = in.s >= 1 && lo && hi && *lo <= in.N && in.N + 1 <= *hi;
  out.hypotheses["s_le_r"] = in.s <= in.r;
  out.hypotheses["s_ge_eps_r"] = at_least_fraction(in.s, in.eps, in.r);
  out.hypotheses["eta_good"] = in.eta_good;
  out.hypotheses["form"] = in.form_ok;
}
}  // namespace detail

/// (Np)^{1-eta/4} + 2 N p^{-r theta_eta / 2}; with `refined` the variant
/// (Np)^{1-0.45 eta} + 2 N p^{-r theta'/2} and its stronger degree condition.
inline BoundReport bound_digit_sum(const DigitSumParams& in, double lhs, bool refined = false) {
  BoundReport out;
  const double lp = std::log2(static_cast<double>(in.p));
  const double np = static_cast<double>(in.N) * in.p;
  const double eta = in.eta.to_double();
  out.lhs = lhs;
  out.trivial = static_cast<double>(in.N);
  detail::digit_window_hypotheses(in, out);
  const double ceiling = constants::degree_ceiling(in.p, in.r * lp) + 1;
  out.hypotheses["d_le_ceiling"] = in.d <= ceiling;
  if (!refined) {
    const double th = constants::theta_eta(in.eps, in.eta, in.d);
    out.rhs = std::pow(np, 1 - eta / 4) + 2.0 * in.N * std::exp2(-static_cast<double>(in.r) * th / 2 * lp);
    const Rational lower = constants::delta(in.eps / Rational(2), in.eta / Rational(2)) + Rational(1);
    out.hypotheses["d_ge_delta"] = Rational(in.d) >= lower;
  } else {
    const double th = constants::theta_eta_refined(in.eps, in.eta, in.d);
    out.rhs = std::pow(np, 1 - 0.45 * eta) + 2.0 * in.N * std::exp2(-static_cast<double>(in.r) * th / 2 * lp);
    const Rational eps_r = in.eps * (Rational(1) - Rational(9, 10) * in.eta);
    const Rational eta_r = Rational(1, 10) * in.eta;
    out.hypotheses["d_ge_delta"] = eps_r > Rational(0) && Rational(in.d) >= constants::delta(eps_r, eta_r) + Rational(1);
  }
  out.finish();
  return out;
}

/// Bound for R(N) with weight bound B >= sum_{x in L_s} |chi(x)|^{2^d} and
/// chi_max = max_{n <= N} |chi(xi_n)|. For N = p^s - 1 the sum is a full
/// subspace sum and the subspace form (with d - 1 in theta) is used.
inline BoundReport bound_digit_weighted_sum(const DigitSumParams& in, double B, double chi_max, double lhs) {
  BoundReport out;
  const double lp = std::log2(static_cast<double>(in.p));
  const double eta = in.eta.to_double();
  const double frac = (in.d + 1.0) / std::exp2(in.d + 1.0);
  out.lhs = lhs;
  out.trivial = static_cast<double>(in.N) * chi_max;
  detail::digit_window_hypotheses(in, out);
  out.hypotheses["d_ge_delta"] =
      Rational(in.d) >= constants::delta(in.eps / Rational(2), in.eta / Rational(2));
  out.hypotheses["d_le_ceiling"] = in.d <= constants::degree_ceiling(in.p, in.r * lp);
  const auto period = checked_pow(in.p, in.s);
  if (period && in.N + 1 == *period) {
    const double th = constants::theta(in.eps, in.d - 1.0);
    out.rhs = 2.0 * std::pow(B, frac) * std::exp2((in.s * (1.0 - frac) - in.r * th) * lp);
  } else {
    const double k = std::ceil(in.s * (1.0 - eta / 2));
    const double th = 0.9 * in.eps.to_double() * (1.0 - eta / 2) / std::exp2(2.0 * in.d);
    const double np = static_cast<double>(in.N) * in.p;
    out.rhs = 2.0 * std::pow(B, frac) * static_cast<double>(in.N) * std::exp2((-k * frac - in.r * th) * lp) +
              in.p * std::pow(np, 1 - eta / 2) * chi_max;
  }
  out.finish();
  return out;
}

}  // namespace ffslab
