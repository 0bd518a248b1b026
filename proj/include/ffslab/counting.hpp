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

// Counting polynomial values in subspaces: I_f(A, B) = #{u in A : f(u) in B}
// by enumeration and by the additive-character identity, orbit statistics
// of polynomial dynamics, and the affine-disperser check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ffslab/charsum.hpp"
#include "ffslab/constants.hpp"
#include "ffslab/error.hpp"
#include "ffslab/family.hpp"
#include "ffslab/field.hpp"
#include "ffslab/linearised.hpp"
#include "ffslab/numeric.hpp"
#include "ffslab/parallel.hpp"
#include "ffslab/poly.hpp"
#include "ffslab/subspace.hpp"
#include "json.hpp"

namespace ffslab {

namespace detail {
inline void require_same_field(const AffineSubspace& a, const AffineSubspace& b) {
  if (a.field().descriptor() != b.field().descriptor()) {
    fail(ErrorCode::kDimensionMismatch, "subspaces live in different fields");
  }
}
}  // namespace detail

// -- intersection counts -----------------------------------------------------

/// #{u in A : f(u) in B} by enumerating A.
inline std::uint64_t intersect_bruteforce(const UniPoly& g, const AffineSubspace& a, const AffineSubspace& b) {
  detail::require_same_field(a, b);
  const auto& f = a.field();
  f.require_budget(a.size(), "intersection enumeration");
  const PolyEvaluator ev(f, g);
  const auto blocks = map_blocks<std::uint64_t>(a.size(), [&](std::uint64_t begin, std::uint64_t end) {
    std::uint64_t hits = 0;
    a.for_each(begin, end, [&](Element u) { hits += b.contains(ev(u)); });
    return hits;
  });
  return std::accumulate(blocks.begin(), blocks.end(), std::uint64_t{0});
}

/// The same count through
///   I = q^{-(r-m)} sum_{c in K^{r-m}} sum_{u in A} psi(sum_i c_i w_i (f(u) - b)),
/// where w_i is the trace dual of B's linear part. The double sum is kept as
/// a histogram over trace residues; because the result is an integer, all
/// nonzero residues occur equally often and I = (counts[0] - counts[1]) / q^{r-m}.
inline std::uint64_t intersect_charsum(const UniPoly& g, const AffineSubspace& a, const AffineSubspace& b) {
  detail::require_same_field(a, b);
  const auto& f = a.field();
  const unsigned codim = f.r() - b.dim();
  const std::uint64_t outer = *checked_pow(f.q(), codim);
  if (outer > UINT64_MAX / a.size()) fail(ErrorCode::kSizeBudgetExceeded, "character-sum count too large");
  f.require_budget(outer * a.size(), "character-sum intersection count");

  const PolyEvaluator ev(f, g);
  std::vector<Element> shifted;
  shifted.reserve(a.size());
  a.for_each([&](Element u) { shifted.push_back(f.sub(ev(u), b.offset())); });

  const auto dual = trace_dual(b).betas;
  const auto kel = k_elements(f);
  const std::uint64_t qk = kel.size();
  const auto blocks = map_blocks<CharSum>(
      outer,
      [&](std::uint64_t begin, std::uint64_t end) {
        CharSum part(f.p());
        for (std::uint64_t c = begin; c < end; ++c) {
          Element gamma = f.zero();
          std::uint64_t rest = c;
          for (unsigned i = 0; i < codim; ++i, rest /= qk) gamma = f.add(gamma, f.mul(kel[rest % qk], dual[i]));
          for (const auto& y : shifted) ++part.counts[psi_index(f, gamma, y)];
        }
        return part;
      },
      std::max<std::uint64_t>(1, kDefaultBlock * 64 / std::max<std::uint64_t>(a.size(), 1)));
  CharSum total(f.p());
  for (const auto& blk : blocks) total += blk;
  for (std::uint32_t t = 2; t < f.p(); ++t) {
    if (total.counts[t] != total.counts[1]) fail(ErrorCode::kInvalidArgument, "character sum is not rational");
  }
  const std::uint64_t scaled = total.counts[0] - (f.p() > 1 ? total.counts[1] : 0);
  if (scaled % outer != 0) fail(ErrorCode::kInvalidArgument, "character sum is not divisible by q^(r-m)");
  return scaled / outer;
}

struct IntersectReport {
  std::uint32_t p = 2;
  unsigned e = 1, r = 1, s = 0, m = 0;
  unsigned degree = 0;         // deg f
  unsigned cascade_degree = 0; // the family degree d driving the bound
  std::uint64_t count = 0;
  Rational main_term{0};       // q^{s+m-r}
  double deviation = 0;        // |I - q^{s+m-r}|
  double weil_ratio = 0;       // deviation / (deg f * q^{r/2})
  double bound_rhs = 0;        // 2 q^{s - r theta}
  std::map<std::string, bool> hypotheses;
  bool hyp_ok = false;         // every hypothesis of the subspace bound holds
  bool vacuous = true;
  bool image_inside = false;   // f(A) subset of B
};

/// Exact count together with the main term, the deviation ratio against
/// d q^{r/2} and the right-hand side 2 q^{s - r theta}.
inline IntersectReport intersect_report(const UniPoly& g, const AffineSubspace& a, const AffineSubspace& b,
                                        const Rational& eps, const Rational& eta) {
  const auto& f = a.field();
  IntersectReport rep;
  rep.p = f.p();
  rep.e = f.e();
  rep.r = f.r();
  rep.s = a.dim();
  rep.m = b.dim();
  rep.degree = static_cast<unsigned>(std::max(0, g.degree()));
  rep.count = intersect_bruteforce(g, a, b);

  const auto q = static_cast<std::int64_t>(f.q());
  const int excess = static_cast<int>(rep.s + rep.m) - static_cast<int>(rep.r);
  rep.main_term = excess >= 0 ? Rational(static_cast<std::int64_t>(*checked_pow(q, excess)))
                              : Rational(1, static_cast<std::int64_t>(*checked_pow(q, -excess)));
  rep.deviation = std::abs((Rational(static_cast<std::int64_t>(rep.count)) - rep.main_term).to_double());
  const double lq = std::log2(static_cast<double>(q));
  if (rep.degree > 0) rep.weil_ratio = rep.deviation / (rep.degree * std::exp2(rep.r * lq / 2));

  const auto family = classify_admissible_form(f, g);
  rep.cascade_degree = family ? family->d : rep.degree;
  const double theta = constants::theta(eps, rep.cascade_degree);
  rep.bound_rhs = 2.0 * std::exp2((rep.s - rep.r * theta) * lq);

  rep.hypotheses["s_ge_eps_r"] = Rational(rep.s) >= eps * Rational(rep.r);
  rep.hypotheses["d_ge_delta"] = Rational(rep.cascade_degree) >= constants::delta(eps, eta);
  rep.hypotheses["d_le_ceiling"] = rep.cascade_degree <= constants::degree_ceiling(f.p(), rep.r * lq);
  rep.hypotheses["form"] = family.has_value();
  rep.hypotheses["eta_good"] = is_eta_good(eta_goodness(a), f.e() * rep.s, eta);
  rep.hyp_ok = std::all_of(rep.hypotheses.begin(), rep.hypotheses.end(), [](const auto& kv) { return kv.second; });
  // Only the Weil-type estimate needs gcd(d, p) = 1; it does not enter hyp_ok.
  rep.hypotheses["gcd_d_p"] = std::gcd(rep.degree, f.p()) == 1 && rep.degree >= 2;
  rep.vacuous = !rep.hyp_ok || !(rep.bound_rhs < static_cast<double>(a.size()));
  rep.image_inside = rep.count == a.size();
  return rep;
}

inline nlohmann::json to_json(const IntersectReport& rep) {
  nlohmann::json hyp = nlohmann::json::object();
  for (const auto& [k, v] : rep.hypotheses) hyp[k] = v;
  return {{"p", rep.p},
          {"e", rep.e},
          {"r", rep.r},
          {"s", rep.s},
          {"m", rep.m},
          {"d", rep.degree},
          {"cascade_degree", rep.cascade_degree},
          {"I", rep.count},
          {"main_term", rep.main_term.to_double()},
          {"main_term_exact", rep.main_term.to_string()},
          {"deviation", rep.deviation},
          {"weil_ratio", rep.weil_ratio},
          {"bound_rhs", rep.bound_rhs},
          {"hypotheses", hyp},
          {"hyp_ok", rep.hyp_ok},
          {"vacuous", rep.vacuous},
          {"image_inside", rep.image_inside}};
}

inline std::string intersect_csv_header() { return "p,e,r,s,m,d,I,main_term,deviation,weil_ratio,bound_rhs,hyp_ok,vacuous"; }

inline std::string intersect_csv_row(const IntersectReport& rep) {
  std::ostringstream out;
  out.precision(12);
  out << rep.p << ',' << rep.e << ',' << rep.r << ',' << rep.s << ',' << rep.m << ',' << rep.degree << ','
      << rep.count << ',' << rep.main_term.to_double() << ',' << rep.deviation << ',' << rep.weil_ratio << ','
      << rep.bound_rhs << ',' << (rep.hyp_ok ? 1 : 0) << ',' << (rep.vacuous ? 1 : 0);
  return out.str();
}

// -- orbits ------------------------------------------------------------------

/// The forward orbit u, f(u), f(f(u)), ... up to its first repeat.
struct OrbitStats {
  Element u;
  std::vector<Element> orbit;  // T distinct elements in iteration order
  std::uint64_t tail = 0;      // index where the cycle starts
  std::uint64_t cycle = 0;     // cycle length; T = tail + cycle
  bool truncated = false;      // stopped at maxlen before a repeat

  std::uint64_t size() const { return orbit.size(); }

  /// f^{(n)}(u) for any n >= 0, following the cycle past the end of `orbit`.
  Element iterate(std::uint64_t n) const {
    if (n < orbit.size()) return orbit[n];
    if (truncated) fail(ErrorCode::kInvalidArgument, "orbit was truncated");
    return orbit[tail + (n - tail) % cycle];
  }
};

template <class Map>
OrbitStats orbit_of(const Field& f, Map&& step, Element u, std::optional<std::uint64_t> maxlen = std::nullopt) {
  OrbitStats out;
  out.u = u;
  std::unordered_map<std::uint32_t, std::uint64_t> seen;
  const std::uint64_t cap = maxlen.value_or(f.size());
  Element x = u;
  while (true) {
    if (auto it = seen.find(x.v); it != seen.end()) {
      out.tail = it->second;
      out.cycle = out.orbit.size() - it->second;
      return out;
    }
    if (out.orbit.size() == cap) {
      out.truncated = true;
      return out;
    }
    seen.emplace(x.v, out.orbit.size());
    out.orbit.push_back(x);
    x = step(x);
  }
}

inline OrbitStats orbit(const Field& f, const UniPoly& g, Element u, std::optional<std::uint64_t> maxlen = std::nullopt) {
  const PolyEvaluator ev(f, g);
  return orbit_of(f, ev, u, maxlen);
}

inline nlohmann::json to_json(const Field& f, const OrbitStats& o) {
  std::vector<std::string> elems;
  for (const auto& x : o.orbit) elems.push_back(f.format(x));
  return {{"u", f.format(o.u)}, {"T", o.size()},       {"tail", o.tail},
          {"cycle", o.cycle},   {"orbit", elems},     {"truncated", o.truncated}};
}

struct OrbitHits {
  std::uint64_t N = 0;
  std::uint64_t M = 0;
  double rho = 0;
  std::vector<std::uint64_t> hits;         // n in [1, N] with f^{(n)}(u) in A
  std::map<std::uint64_t, std::uint64_t> gaps;  // A(h)
  std::uint64_t max_run = 0;               // longest block of consecutive hits
  bool gap_count_ok = false;               // sum A(h) = M - 1
  bool gap_span_ok = false;                // sum h A(h) = n_M - n_1 <= N
  std::uint64_t H = 0;                     // floor(2 / rho)
  std::uint64_t k_star = 0;                // argmax_{k <= H} A(k)
  std::uint64_t A_k_star = 0;
  std::optional<bool> pigeonhole_ok;       // 16 N A(k*) >= M^2 when M >= 2 and rho N >= 2
  std::optional<bool> squared_gap_ok;      // 4 N A(k*) >= (M-1)^2, same range
  std::map<std::string, bool> hypotheses;
  double consecutive_rhs = 0;              // N' q^{r theta} / 2 for the longest run N'
  bool consecutive_holds = false;          // q^s >= consecutive_rhs
  double frequency_rhs = 0;                // rho^2 N q^{r theta_rho} / 32
  bool frequency_holds = false;            // q^s >= frequency_rhs
};

struct OrbitHitOptions {
  std::optional<std::uint64_t> N;  // default: T
  bool allow_beyond_orbit = false; // otherwise N is clamped to T
  Rational eps{1, 2};
  Rational eta{1};
};

/// Hit statistics of f^{(n)}(u), n = 1..N, in A, with the gap histogram and
/// the predicates for consecutive and frequent visits.
inline OrbitHits orbit_hits(const OrbitStats& o, const UniPoly& g, const AffineSubspace& a,
                            const OrbitHitOptions& opt = {}) {
  const auto& f = a.field();
  OrbitHits out;
  std::uint64_t n_max = opt.N.value_or(o.size());
  if (!opt.allow_beyond_orbit) n_max = std::min<std::uint64_t>(n_max, o.size());
  if (n_max < 1) fail(ErrorCode::kEmptyOrbitWindow, "orbit window N must be at least 1");
  out.N = n_max;
  std::uint64_t run = 0;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    if (a.contains(o.iterate(n))) {
      if (!out.hits.empty()) ++out.gaps[n - out.hits.back()];
      run = !out.hits.empty() && out.hits.back() == n - 1 ? run + 1 : 1;
      out.max_run = std::max(out.max_run, run);
      out.hits.push_back(n);
    }
  }
  out.M = out.hits.size();
  out.rho = static_cast<double>(out.M) / static_cast<double>(n_max);
  std::uint64_t count = 0, span = 0;
  for (const auto& [h, c] : out.gaps) {
    count += c;
    span += h * c;
  }
  out.gap_count_ok = count + 1 == std::max<std::uint64_t>(out.M, 1);
  out.gap_span_ok = out.M == 0 ? span == 0 : span == out.hits.back() - out.hits.front() && span <= n_max;

  if (out.M >= 1) {
    out.H = 2 * n_max / out.M;  // floor(2 / rho)
    for (const auto& [h, c] : out.gaps) {
      if (h <= out.H && c > out.A_k_star) {
        out.k_star = h;
        out.A_k_star = c;
      }
    }
  }
  if (out.M >= 2) {  // rho N = M
    out.pigeonhole_ok = 16 * n_max * out.A_k_star >= out.M * out.M;
    out.squared_gap_ok = 4 * n_max * out.A_k_star >= (out.M - 1) * (out.M - 1);
  }

  const unsigned d = static_cast<unsigned>(std::max(0, g.degree()));
  const double lq = std::log2(static_cast<double>(f.q()));
  const double qs = std::exp2(a.dim() * lq);
  out.consecutive_rhs = static_cast<double>(out.max_run) * std::exp2(f.r() * constants::theta(opt.eps, d) * lq) / 2;
  out.consecutive_holds = qs >= out.consecutive_rhs;
  if (out.rho > 0) {
    const double th = constants::theta_rho(opt.eps, out.rho, d);
    out.frequency_rhs = out.rho * out.rho * static_cast<double>(n_max) * std::exp2(f.r() * th * lq) / 32;
  }
  out.frequency_holds = qs >= out.frequency_rhs;

  const double d_pow = out.rho > 0 ? std::pow(static_cast<double>(d), 2.0 / out.rho) : INFINITY;
  out.hypotheses["s_ge_eps_r"] = Rational(a.dim()) >= opt.eps * Rational(f.r());
  out.hypotheses["eta_good"] = is_eta_good(eta_goodness(a), f.e() * a.dim(), opt.eta);
  out.hypotheses["form"] = classify_admissible_form(f, g).has_value();
  out.hypotheses["d_pow_ge_delta"] = d_pow >= constants::delta(opt.eps, opt.eta).to_double();
  out.hypotheses["d_pow_le_ceiling"] = d_pow <= constants::degree_ceiling(f.p(), f.r() * lq);
  out.hypotheses["rho_N_ge_2"] = out.M >= 2;
  out.hypotheses["N_le_T"] = n_max <= o.size();
  return out;
}

inline nlohmann::json to_json(const OrbitHits& h) {
  nlohmann::json gaps = nlohmann::json::object();
  for (const auto& [k, v] : h.gaps) gaps[std::to_string(k)] = v;
  nlohmann::json hyp = nlohmann::json::object();
  for (const auto& [k, v] : h.hypotheses) hyp[k] = v;
  nlohmann::json out = {{"N", h.N},
                        {"M", h.M},
                        {"rho", h.rho},
                        {"hits", h.hits},
                        {"gap_histogram", gaps},
                        {"max_run", h.max_run},
                        {"gap_count_ok", h.gap_count_ok},
                        {"gap_span_ok", h.gap_span_ok},
                        {"H", h.H},
                        {"k_star", h.k_star},
                        {"A_k_star", h.A_k_star},
                        {"hypotheses", hyp},
                        {"consecutive_rhs", h.consecutive_rhs},
                        {"consecutive_holds", h.consecutive_holds},
                        {"frequency_rhs", h.frequency_rhs},
                        {"frequency_holds", h.frequency_holds}};
  out["pigeonhole_ok"] = h.pigeonhole_ok ? nlohmann::json(*h.pigeonhole_ok) : nlohmann::json(nullptr);
  out["squared_gap_ok"] = h.squared_gap_ok ? nlohmann::json(*h.squared_gap_ok) : nlohmann::json(nullptr);
  return out;
}

struct OrbitIntersection {
  std::uint64_t T_f = 0, T_l = 0;
  std::uint64_t M = 0;
  double rho = 0;
  unsigned image_dim = 0;                 // dim_K l(L); 0 when l(L) is not a K-subspace
  bool image_is_subspace = false;
  std::map<std::string, bool> hypotheses;
  double rhs = 0;                         // rho^2 min(T) q^{r theta_rho} / 32
  bool holds = false;                     // q^s >= rhs
};

/// #(Orb_f(u) ∩ Orb_l(v)) and the frequency predicate for l(L).
inline OrbitIntersection orbit_intersection(const Field& f, const UniPoly& g, Element u, const LinearisedPoly& l,
                                            Element v, const Rational& eps, const Rational& eta) {
  require_valid(f, l);
  OrbitIntersection out;
  const auto of = orbit(f, g, u);
  const auto ol = orbit_of(f, [&](Element x) { return lin_apply(f, l, x); }, v);
  out.T_f = of.size();
  out.T_l = ol.size();
  std::unordered_set<std::uint32_t> in_l;
  for (const auto& x : ol.orbit) in_l.insert(x.v);
  for (const auto& x : of.orbit) out.M += in_l.count(x.v);
  const std::uint64_t tmin = std::min(out.T_f, out.T_l);
  out.rho = static_cast<double>(out.M) / static_cast<double>(tmin);

  const unsigned d = static_cast<unsigned>(std::max(0, g.degree()));
  const double lq = std::log2(static_cast<double>(f.q()));
  std::optional<AffineSubspace> image;
  try {
    image = lin_image(l, whole_field(f));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kHypothesisViolated) throw;
  }
  out.image_is_subspace = image.has_value();
  out.image_dim = image ? image->dim() : 0;
  if (out.rho > 0) {
    out.rhs = out.rho * out.rho * static_cast<double>(tmin) *
              std::exp2(f.r() * constants::theta_rho(eps, out.rho, d) * lq) / 32;
  }
  out.holds = std::exp2(out.image_dim * lq) >= out.rhs;
  const double d_pow = out.rho > 0 ? std::pow(static_cast<double>(d), 2.0 / out.rho) : INFINITY;
  out.hypotheses["image_is_subspace"] = out.image_is_subspace;
  out.hypotheses["q_polynomial"] = l.kind == LinKind::kQ;
  out.hypotheses["s_ge_eps_r"] = Rational(out.image_dim) >= eps * Rational(f.r());
  out.hypotheses["eta_good"] = image && is_eta_good(eta_goodness(*image), f.e() * image->dim(), eta);
  out.hypotheses["d_pow_ge_delta"] = d_pow >= constants::delta(eps, eta).to_double();
  out.hypotheses["d_pow_le_ceiling"] = d_pow <= constants::degree_ceiling(f.p(), f.r() * lq);
  return out;
}

inline nlohmann::json to_json(const OrbitIntersection& o) {
  nlohmann::json hyp = nlohmann::json::object();
  for (const auto& [k, v] : o.hypotheses) hyp[k] = v;
  return {{"T_f", o.T_f},         {"T_l", o.T_l}, {"M", o.M},         {"rho", o.rho},
          {"image_dim", o.image_dim}, {"hypotheses", hyp}, {"rhs", o.rhs}, {"holds", o.holds}};
}

// -- affine dispersers -------------------------------------------------------

struct DisperserReport {
  unsigned s = 0;
  bool exhaustive = false;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::optional<std::string> first_violation;  // subspace text of the first violating A
  bool pass() const { return violations == 0; }
};

/// Gaussian binomial [n choose k]_p.
inline std::uint64_t gaussian_binomial(unsigned n, unsigned k, std::uint64_t p) {
  if (k > n) return 0;
  // prod_{i<k} (p^{n-i} - 1) / (p^{i+1} - 1), applied one factor at a time;
  // each partial product is itself a Gaussian binomial and so an integer.
  unsigned __int128 acc = 1;
  for (unsigned i = 0; i < k; ++i) {
    acc = acc * (*checked_pow(p, n - i) - 1) / (*checked_pow(p, i + 1) - 1);
  }
  if (acc > UINT64_MAX) fail(ErrorCode::kOverflow, "Gaussian binomial overflows");
  return static_cast<std::uint64_t>(acc);
}

namespace detail {
/// Every s-dimensional F_p-subspace of F_p^r, as RREF rows packed into elements.
inline std::vector<std::vector<Element>> all_linear_subspaces(const Field& f, unsigned s) {
  const unsigned r = f.m();
  const std::uint32_t p = f.p();
  std::vector<std::vector<Element>> out;
  std::vector<unsigned> piv(s);
  std::iota(piv.begin(), piv.end(), 0u);
  while (true) {
    // Free positions: (row i, column j) with j > piv[i] and j not a pivot.
    std::vector<bool> is_pivot(r, false);
    for (auto c : piv) is_pivot[c] = true;
    std::vector<std::pair<unsigned, unsigned>> free;
    for (unsigned i = 0; i < s; ++i) {
      for (unsigned j = piv[i] + 1; j < r; ++j) {
        if (!is_pivot[j]) free.emplace_back(i, j);
      }
    }
    const std::uint64_t combos = *checked_pow(p, static_cast<unsigned>(free.size()));
    for (std::uint64_t c = 0; c < combos; ++c) {
      std::vector<std::vector<std::uint32_t>> rows(s, std::vector<std::uint32_t>(r, 0));
      for (unsigned i = 0; i < s; ++i) rows[i][piv[i]] = 1;
      std::uint64_t rest = c;
      for (const auto& [i, j] : free) {
        rows[i][j] = static_cast<std::uint32_t>(rest % p);
        rest /= p;
      }
      std::vector<Element> basis;
      for (const auto& row : rows) basis.push_back(f.from_coeffs(row));
      out.push_back(std::move(basis));
    }
    // Next pivot combination in lexicographic order.
    int i = static_cast<int>(s) - 1;
    while (i >= 0 && piv[i] == r - s + i) --i;
    if (i < 0) break;
    ++piv[i];
    for (unsigned j = i + 1; j < s; ++j) piv[j] = piv[j - 1] + 1;
  }
  return out;
}
}  // namespace detail

struct DisperserOptions {
  std::uint64_t samples = 2000;   // used when exhaustive enumeration is over budget
  std::uint64_t seed = 1;
  Element tau{1};                 // pi(x) = Tr_{L|F_p}(tau x)
};

/// Checks that pi(f(A)) takes more than one value for affine A of dimension
/// ceil(eps r): every A when their total size fits the budget, otherwise a
/// seeded random sample.
inline DisperserReport disperser_check(const Field& f, const UniPoly& g, const Rational& eps,
                                       const DisperserOptions& opt = {}) {
  if (f.e() != 1) fail(ErrorCode::kBaseNotPrime, "the disperser check needs q = p");
  if (opt.tau.v == 0) fail(ErrorCode::kInvalidArgument, "pi must be nontrivial");
  constants::require_unit_interval(eps, "eps");
  DisperserReport rep;
  const Rational er = eps * Rational(f.r());
  rep.s = static_cast<unsigned>((er.num() + er.den() - 1) / er.den());
  const PolyEvaluator ev(f, g);
  auto violates = [&](const AffineSubspace& a) {
    bool first = true, constant = true;
    std::uint32_t value = 0;
    a.for_each(0, a.size(), [&](Element x) {
      if (!constant) return;
      const auto t = psi_index(f, opt.tau, ev(x));
      if (first) {
        value = t;
        first = false;
      } else if (t != value) {
        constant = false;
      }
    });
    return constant;
  };

  const std::uint64_t cosets = *checked_pow(f.p(), f.r() - rep.s);
  const std::uint64_t per_subspace = *checked_pow(f.p(), rep.s);
  bool exhaustive = false;
  try {
    exhaustive = gaussian_binomial(f.r(), rep.s, f.p()) <= f.budget() / cosets / per_subspace;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kOverflow) throw;
  }
  rep.exhaustive = exhaustive;

  struct Part {
    std::uint64_t checked = 0, violations = 0;
    std::optional<std::string> first;
  };
  std::vector<Part> parts;
  if (exhaustive) {
    const auto linear = detail::all_linear_subspaces(f, rep.s);
    parts = map_blocks<Part>(linear.size(), [&](std::uint64_t begin, std::uint64_t end) {
      Part part;
      for (std::uint64_t i = begin; i < end; ++i) {
        const auto lin = make_subspace(f, f.zero(), linear[i]);
        // Coset representatives: vectors supported off the pivot columns.
        std::vector<unsigned> off;
        const auto pivots = lin.span().pivots();
        for (unsigned j = 0; j < f.r(); ++j) {
          if (!std::binary_search(pivots.begin(), pivots.end(), j)) off.push_back(j);
        }
        for (std::uint64_t c = 0; c < cosets; ++c) {
          std::vector<std::uint32_t> coords(f.r(), 0);
          std::uint64_t rest = c;
          for (auto j : off) {
            coords[j] = static_cast<std::uint32_t>(rest % f.p());
            rest /= f.p();
          }
          const auto a = lin.translated(f.from_coeffs(coords));
          ++part.checked;
          if (violates(a)) {
            ++part.violations;
            if (!part.first) part.first = format(a);
          }
        }
      }
      return part;
    }, 64);
  } else {
    std::mt19937_64 rng(opt.seed);
    Part part;
    for (std::uint64_t t = 0; t < opt.samples; ++t) {
      std::vector<Element> basis;
      FpSpan span(f);
      while (basis.size() < rep.s) {
        const Element v = f.from_index(rng());
        if (span.insert(v)) basis.push_back(v);
      }
      const auto a = make_subspace(f, f.from_index(rng()), basis);
      ++part.checked;
      if (violates(a)) {
        ++part.violations;
        if (!part.first) part.first = format(a);
      }
    }
    parts.push_back(std::move(part));
  }
  for (const auto& part : parts) {
    rep.checked += part.checked;
    rep.violations += part.violations;
    if (!rep.first_violation && part.first) rep.first_violation = part.first;
  }
  return rep;
}

inline nlohmann::json to_json(const DisperserReport& rep) {
  return {{"s", rep.s},
          {"exhaustive", rep.exhaustive},
          {"checked", rep.checked},
          {"violations", rep.violations},
          {"pass", rep.pass()},
          {"first_violation", rep.first_violation ? nlohmann::json(*rep.first_violation) : nlohmann::json(nullptr)}};
}

}  // namespace ffslab
