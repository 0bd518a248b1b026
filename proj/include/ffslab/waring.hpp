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

// Waring numbers over subspaces and digit sets: the smallest k such that
// every y in L is a sum f(x_1) + ... + f(x_k), computed by sumset closure,
// together with exact representation counts by additive convolution.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "ffslab/charsum.hpp"
#include "ffslab/constants.hpp"
#include "ffslab/error.hpp"
#include "ffslab/family.hpp"
#include "ffslab/field.hpp"
#include "ffslab/numeric.hpp"
#include "ffslab/parallel.hpp"
#include "ffslab/poly.hpp"
#include "ffslab/subspace.hpp"
#include "json.hpp"

namespace ffslab {

/// Multiplicity of every element of L as a value of f on A, indexed by element.
using ValueMultiset = std::vector<std::uint64_t>;

inline ValueMultiset value_multiset(const UniPoly& g, const AffineSubspace& a) {
  const auto& f = a.field();
  f.require_budget(std::max(f.size(), a.size()), "value multiset");
  ValueMultiset out(f.size(), 0);
  const PolyEvaluator ev(f, g);
  a.for_each([&](Element x) { ++out[ev(x).v]; });
  return out;
}

/// Values f(xi_n) for n in [1, N] (or [0, N] with include_zero).
inline ValueMultiset digit_value_multiset(const UniPoly& g, const DigitMap& dm, std::uint64_t n_max,
                                          bool include_zero = false) {
  const auto& f = dm.field();
  f.require_budget(std::max(f.size(), n_max + 1), "digit value multiset");
  ValueMultiset out(f.size(), 0);
  const PolyEvaluator ev(f, g);
  for (std::uint64_t n = include_zero ? 0 : 1; n <= n_max; ++n) ++out[ev(dm(n)).v];
  return out;
}

inline std::vector<Element> support(const ValueMultiset& mult) {
  std::vector<Element> out;
  for (std::size_t i = 0; i < mult.size(); ++i) {
    if (mult[i] != 0) out.push_back(Element{static_cast<std::uint32_t>(i)});
  }
  return out;
}

struct SumsetClosure {
  std::optional<unsigned> g;        // nullopt means infinity
  std::vector<std::uint64_t> sizes; // #S_k for k = 1, 2, ...
};

/// Iterates S_{k+1} = S_k + S_1 until S_k = L or the size stops growing.
/// Equal sizes mean S_{k+1} is a translate of S_k, so the chain never covers L.
inline SumsetClosure sumset_closure(const Field& f, const std::vector<Element>& generators) {
  f.require_budget(f.size(), "sumset closure");
  SumsetClosure out;
  if (generators.empty()) return out;
  std::vector<char> current(f.size(), 0);
  for (const auto& t : generators) current[t.v] = 1;
  std::uint64_t size = generators.size();
  out.sizes.push_back(size);
  for (unsigned k = 1;; ++k) {
    if (size == f.size()) {
      out.g = k;
      return out;
    }
    const auto blocks = map_blocks<std::vector<char>>(f.size(), [&](std::uint64_t begin, std::uint64_t end) {
      std::vector<char> part(end - begin, 0);
      for (std::uint64_t y = begin; y < end; ++y) {
        const Element ye{static_cast<std::uint32_t>(y)};
        for (const auto& t : generators) {
          if (current[f.sub(ye, t).v]) {
            part[y - begin] = 1;
            break;
          }
        }
      }
      return part;
    });
    std::vector<char> next;
    next.reserve(f.size());
    for (const auto& blk : blocks) next.insert(next.end(), blk.begin(), blk.end());
    const auto next_size = static_cast<std::uint64_t>(std::count(next.begin(), next.end(), 1));
    if (next_size == size) return out;
    out.sizes.push_back(next_size);
    size = next_size;
    current.swap(next);
  }
}

/// g(f, q, s) for the subspace A.
inline SumsetClosure waring_g(const UniPoly& g, const AffineSubspace& a) {
  return sumset_closure(a.field(), support(value_multiset(g, a)));
}

/// N_k(y) = #{(x_1, ..., x_k) in A^k : f(x_1) + ... + f(x_k) = y} for every y.
template <class Count = unsigned __int128>
std::vector<Count> rep_counts(const Field& f, const ValueMultiset& mult, unsigned k) {
  if (k == 0) fail(ErrorCode::kInvalidArgument, "k must be at least 1");
  if constexpr (std::is_integral_v<Count> || std::is_same_v<Count, unsigned __int128>) {
    long double total = 0;
    for (auto m : mult) total += static_cast<long double>(m);
    const int bits = std::is_same_v<Count, unsigned __int128> ? 128 : static_cast<int>(sizeof(Count) * 8);
    if (total > 1 && k * std::log2(total) >= bits - 1) fail(ErrorCode::kOverflow, "representation counts overflow");
  }
  const auto gens = support(mult);
  f.require_budget(f.size() * std::max<std::uint64_t>(gens.size(), 1), "representation counts");
  std::vector<Count> current(f.size());
  for (std::size_t i = 0; i < mult.size(); ++i) current[i] = Count(mult[i]);
  for (unsigned step = 1; step < k; ++step) {
    const auto blocks = map_blocks<std::vector<Count>>(f.size(), [&](std::uint64_t begin, std::uint64_t end) {
      std::vector<Count> part(end - begin);
      for (std::uint64_t y = begin; y < end; ++y) {
        const Element ye{static_cast<std::uint32_t>(y)};
        Count acc(0);
        for (const auto& t : gens) acc += Count(mult[t.v]) * current[f.sub(ye, t).v];
        part[y - begin] = acc;
      }
      return part;
    });
    std::vector<Count> next;
    next.reserve(f.size());
    for (auto& blk : blocks) next.insert(next.end(), blk.begin(), blk.end());
    current.swap(next);
  }
  return current;
}

/// N_k(y) for every y from q^r N_k(y) = sum_u psi(-u y) S_u^k with
/// S_u = sum_{x in A} psi(u f(x)), evaluated in floating point.
inline std::vector<double> rep_counts_via_characters(const Field& f, const ValueMultiset& mult, unsigned k) {
  f.require_budget(f.size() * f.size(), "character-sum representation counts");
  const auto gens = support(mult);
  std::vector<Complex> su_k(f.size());
  for (std::uint64_t u = 0; u < f.size(); ++u) {
    std::vector<std::uint64_t> counts(f.p(), 0);
    for (const auto& v : gens) counts[psi_index(f, Element{static_cast<std::uint32_t>(u)}, v)] += mult[v.v];
    Complex s{};
    for (std::uint32_t t = 0; t < f.p(); ++t) s += static_cast<double>(counts[t]) * root_of_unity(f.p(), t);
    su_k[u] = std::pow(s, static_cast<int>(k));
  }
  const auto blocks = map_blocks<std::vector<double>>(f.size(), [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<double> part;
    for (std::uint64_t y = begin; y < end; ++y) {
      const Element ny = f.neg(Element{static_cast<std::uint32_t>(y)});
      Complex acc{};
      for (std::uint64_t u = 0; u < f.size(); ++u) {
        acc += root_of_unity(f.p(), psi_index(f, Element{static_cast<std::uint32_t>(u)}, ny)) * su_k[u];
      }
      part.push_back(acc.real() / static_cast<double>(f.size()));
    }
    return part;
  });
  std::vector<double> out;
  for (const auto& blk : blocks) out.insert(out.end(), blk.begin(), blk.end());
  return out;
}

// -- threshold reports -------------------------------------------------------

struct WaringThreshold {
  std::uint64_t D = 0;              // deg f, or deg g for the linearised-composition form
  unsigned cascade_degree = 0;      // d entering theta
  double theta = 0;
  std::optional<unsigned> k0;       // smallest k >= 3 with (Q^{r theta}/2)^{k-2} > D Q^{shift}
  std::map<std::string, bool> hypotheses;
  bool vacuous = true;
};

namespace detail {
/// Smallest k >= 3 with (k - 2) log2(base) > log2(rhs); none when base <= 1.
inline std::optional<unsigned> smallest_k(double log2_base, double log2_rhs) {
  if (!(log2_base > 0)) return std::nullopt;
  const double ratio = log2_rhs / log2_base;
  if (ratio > 1e9) return std::nullopt;
  auto k = static_cast<unsigned>(std::max(0.0, std::floor(ratio)) + 1) + 2;
  k = std::max(k, 3u);
  while (k > 3 && (k - 3) * log2_base > log2_rhs) --k;
  return k;
}

inline WaringThreshold waring_threshold(const Field& f, const UniPoly& g, const AffineSubspace& a,
                                        unsigned shift_exponent, const Rational& eps, const Rational& eta) {
  WaringThreshold out;
  const auto family = classify_admissible_form(f, g);
  out.D = family ? family->big_d : static_cast<std::uint64_t>(std::max(0, g.degree()));
  out.cascade_degree = family ? family->d : static_cast<unsigned>(std::max(0, g.degree()));
  out.theta = constants::theta(eps, out.cascade_degree);
  const double lq = std::log2(static_cast<double>(f.q()));
  const double log2_base = f.r() * out.theta * lq - 1.0;
  const double log2_rhs = std::log2(static_cast<double>(std::max<std::uint64_t>(out.D, 1))) + shift_exponent * lq;
  out.k0 = smallest_k(log2_base, log2_rhs);
  out.hypotheses["form"] = family.has_value();
  out.hypotheses["s_ge_eps_r"] = Rational(a.dim()) >= eps * Rational(f.r());
  out.hypotheses["d_ge_delta"] = Rational(out.cascade_degree) >= constants::delta(eps, eta);
  out.hypotheses["d_le_ceiling"] = out.cascade_degree <= constants::degree_ceiling(f.p(), f.r() * lq);
  out.hypotheses["eta_good"] = is_eta_good(eta_goodness(a), f.e() * a.dim(), eta);
  const bool ok = std::all_of(out.hypotheses.begin(), out.hypotheses.end(), [](const auto& kv) { return kv.second; });
  out.vacuous = !ok || !out.k0.has_value();
  return out;
}
}  // namespace detail

/// Threshold k0 for the subspace problem: (q^{r theta}/2)^{k-2} > D q^{r-s}.
inline WaringThreshold subspace_threshold(const UniPoly& g, const AffineSubspace& a, const Rational& eps,
                                          const Rational& eta) {
  const auto& f = a.field();
  return detail::waring_threshold(f, g, a, f.r() - a.dim(), eps, eta);
}

inline nlohmann::json to_json(const WaringThreshold& t) {
  nlohmann::json hyp = nlohmann::json::object();
  for (const auto& [k, v] : t.hypotheses) hyp[k] = v;
  return {{"D", t.D},
          {"cascade_degree", t.cascade_degree},
          {"theta", t.theta},
          {"threshold_k0", t.k0 ? nlohmann::json(*t.k0) : nlohmann::json(nullptr)},
          {"hypotheses", hyp},
          {"vacuous", t.vacuous}};
}

struct WaringReport {
  SumsetClosure closure;
  WaringThreshold threshold;
};

inline WaringReport waring_report(const UniPoly& g, const AffineSubspace& a, const Rational& eps,
                                  const Rational& eta) {
  return {waring_g(g, a), subspace_threshold(g, a, eps, eta)};
}

inline nlohmann::json to_json(const WaringReport& rep) {
  auto out = to_json(rep.threshold);
  out["g"] = rep.closure.g ? nlohmann::json(*rep.closure.g) : nlohmann::json("inf");
  out["sizes_per_k"] = rep.closure.sizes;
  return out;
}

struct DigitWaringReport {
  unsigned s = 0;                            // p^{s-1} <= N < p^s
  std::uint64_t N = 0;
  bool include_zero = false;
  SumsetClosure closure;                     // G(f, p, N)
  SumsetClosure digit_subspace;              // g over span(omega_0, ..., omega_{s-2})
  bool G_le_g = false;
  WaringThreshold threshold;                 // (p^{r theta}/2)^{k-2} > D p^{r-s+1}
};

/// G(f, p, N) over the digit values xi_1, ..., xi_N.
inline DigitWaringReport waring_G(const UniPoly& g, const DigitMap& dm, std::uint64_t n_max, const Rational& eps,
                                  const Rational& eta, bool include_zero = false) {
  const auto& f = dm.field();
  if (f.e() != 1) fail(ErrorCode::kBaseNotPrime, "digit Waring numbers need q = p");
  if (n_max < 1) fail(ErrorCode::kInvalidArgument, "N must be positive");
  DigitWaringReport rep;
  rep.N = n_max;
  rep.include_zero = include_zero;
  while (*checked_pow(f.p(), rep.s) <= n_max) ++rep.s;
  if (rep.s > dm.s()) fail(ErrorCode::kInvalidArgument, "N needs more digits than the digit map has");
  rep.closure = sumset_closure(f, support(digit_value_multiset(g, dm, n_max, include_zero)));
  const auto lower = subspace_of_digits(f, dm.omega(), rep.s - 1);
  rep.digit_subspace = waring_g(g, lower);
  const unsigned big_g = rep.closure.g.value_or(UINT32_MAX), small_g = rep.digit_subspace.g.value_or(UINT32_MAX);
  rep.G_le_g = big_g <= small_g;
  const auto span_s = subspace_of_digits(f, dm.omega(), rep.s);
  rep.threshold = detail::waring_threshold(f, g, span_s, f.r() - rep.s + 1, eps, eta);
  return rep;
}

inline nlohmann::json to_json(const DigitWaringReport& rep) {
  auto out = to_json(rep.threshold);
  out["s"] = rep.s;
  out["N"] = rep.N;
  out["include_zero"] = rep.include_zero;
  out["G"] = rep.closure.g ? nlohmann::json(*rep.closure.g) : nlohmann::json("inf");
  out["sizes_per_k"] = rep.closure.sizes;
  out["g_digit_subspace"] = rep.digit_subspace.g ? nlohmann::json(*rep.digit_subspace.g) : nlohmann::json("inf");
  out["G_le_g"] = rep.G_le_g;
  return out;
}

}  // namespace ffslab
