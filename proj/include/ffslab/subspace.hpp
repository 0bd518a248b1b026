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

// Affine K-subspaces a + span_K(b_1, ..., b_s) of L, their trace duals and
// exact eta-goodness measurement against the proper subfields of L.

#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ffslab/error.hpp"
#include "ffslab/field.hpp"
#include "ffslab/linalg.hpp"
#include "ffslab/linearised.hpp"
#include "ffslab/numeric.hpp"
#include "ffslab/parallel.hpp"
#include "ffslab/vecspace.hpp"
#include "json.hpp"

namespace ffslab {

/// Coordinates of elements of L over K in the basis 1, x, ..., x^{r-1}.
class KCoordinates {
 public:
  explicit KCoordinates(const Field& f) : field_(&f), kbasis_(f.k_basis()) {
    const unsigned m = f.m(), e = f.e();
    Matrix<std::uint32_t> aug(m, std::vector<std::uint32_t>(2 * m, 0));
    Element xj = f.one();
    for (unsigned j = 0; j < f.r(); ++j) {
      for (unsigned i = 0; i < e; ++i) {
        const auto col = f.coeffs(f.mul(kbasis_[i], xj));
        for (unsigned row = 0; row < m; ++row) aug[row][j * e + i] = col[row];
      }
      xj = f.mul(xj, f.gen_x());
    }
    for (unsigned row = 0; row < m; ++row) aug[row][m + row] = 1;
    const auto red = rref(f.prime_ops(), std::move(aug));
    inverse_.assign(m, std::vector<std::uint32_t>(m));
    for (unsigned row = 0; row < m; ++row) {
      std::copy(red.rows[row].begin() + m, red.rows[row].end(), inverse_[row].begin());
    }
  }

  /// The r coordinates of x; each lies in K.
  std::vector<Element> of(Element x) const {
    const auto& f = *field_;
    const auto ops = f.prime_ops();
    const auto c = f.coeffs(x);
    std::vector<Element> out(f.r(), f.zero());
    for (unsigned j = 0; j < f.r(); ++j) {
      for (unsigned i = 0; i < f.e(); ++i) {
        std::uint32_t y = 0;
        const auto& row = inverse_[j * f.e() + i];
        for (unsigned t = 0; t < f.m(); ++t) y = ops.add(y, ops.mul(row[t], c[t]));
        if (y != 0) out[j] = f.add(out[j], f.scale(y, kbasis_[i]));
      }
    }
    return out;
  }

  Element from(const std::vector<Element>& k) const {
    const auto& f = *field_;
    Element acc = f.zero(), xj = f.one();
    for (const auto& c : k) {
      acc = f.add(acc, f.mul(c, xj));
      xj = f.mul(xj, f.gen_x());
    }
    return acc;
  }

 private:
  const Field* field_;
  std::vector<Element> kbasis_;
  Matrix<std::uint32_t> inverse_;
};

/// All elements of K in increasing index order.
inline std::vector<Element> k_elements(const Field& f) {
  std::vector<Element> out{f.zero()};
  for (const auto& kb : f.k_basis()) {
    const std::size_t n = out.size();
    for (std::uint32_t c = 1; c < f.p(); ++c) {
      for (std::size_t i = 0; i < n; ++i) out.push_back(f.add(out[i], f.scale(c, kb)));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

class AffineSubspace {
 public:
  const Field& field() const { return *field_; }
  Element offset() const { return offset_; }
  const std::vector<Element>& basis() const { return basis_; }
  unsigned dim() const { return static_cast<unsigned>(basis_.size()); }
  bool is_linear() const { return offset_.v == 0; }
  /// q^s; never exceeds p^m, so it always fits.
  std::uint64_t size() const { return *checked_pow(field_->q(), dim()); }
  /// F_p-span of the linear part.
  const FpSpan& span() const { return *span_; }

  bool contains(Element x) const { return span_->contains(field_->sub(x, offset_)); }

  AffineSubspace linear_part() const {
    AffineSubspace out = *this;
    out.offset_ = field_->zero();
    return out;
  }

  AffineSubspace translated(Element a) const {
    AffineSubspace out = *this;
    out.offset_ = span_->reduce(field_->add(offset_, a));
    return out;
  }

  /// The element with K-coordinates given by the base-q digits of `index`
  /// (first basis vector most significant).
  Element at(std::uint64_t index) const {
    Element x = offset_;
    for (unsigned j = dim(); j-- > 0;) {
      x = field_->add(x, multiples_[j][index % kelems_.size()]);
      index /= kelems_.size();
    }
    return x;
  }

  /// Calls fn(x) for the elements at positions [begin, end) of the
  /// enumeration order, using only additions per step.
  template <class Fn>
  void for_each(std::uint64_t begin, std::uint64_t end, Fn&& fn) const {
    if (begin >= end) return;
    const auto& f = *field_;
    const std::size_t q = kelems_.size(), s = dim();
    std::vector<std::size_t> digit(s);
    std::uint64_t rest = begin;
    for (std::size_t j = s; j-- > 0;) {
      digit[j] = rest % q;
      rest /= q;
    }
    Element x = at(begin);
    for (std::uint64_t i = begin;;) {
      fn(x);
      if (++i == end) return;
      std::size_t j = s;
      while (j-- > 0) {
        if (digit[j] + 1 < q) {
          x = f.add(x, steps_[j][digit[j]]);
          ++digit[j];
          break;
        }
        x = f.sub(x, multiples_[j][q - 1]);
        digit[j] = 0;
      }
    }
  }

  template <class Fn>
  void for_each(Fn&& fn) const {
    field_->require_budget(size(), "subspace enumeration");
    for_each(0, size(), std::forward<Fn>(fn));
  }

  std::vector<Element> elements() const {
    std::vector<Element> out;
    field_->require_budget(size(), "subspace enumeration");
    out.reserve(size());
    for_each([&](Element x) { out.push_back(x); });
    return out;
  }

  friend bool operator==(const AffineSubspace& a, const AffineSubspace& b) {
    return a.field_->descriptor() == b.field_->descriptor() && a.offset_ == b.offset_ && a.basis_ == b.basis_;
  }

 private:
  friend AffineSubspace make_subspace(const Field&, Element, const std::vector<Element>&);

  std::shared_ptr<const Field> field_;
  Element offset_;
  std::vector<Element> basis_;
  std::shared_ptr<const FpSpan> span_;
  std::vector<Element> kelems_;
  std::vector<std::vector<Element>> multiples_;  // multiples_[j][t] = kelems_[t] * basis_[j]
  std::vector<std::vector<Element>> steps_;      // multiples_[j][t+1] - multiples_[j][t]
};

/// Builds offset + span_K(basis). The basis is brought to reduced echelon
/// form over K and the offset to its canonical coset representative, so two
/// descriptions of the same set compare equal.
inline AffineSubspace make_subspace(const Field& f, Element offset, const std::vector<Element>& basis) {
  if (basis.size() > f.r()) fail(ErrorCode::kDependentBasis, "more basis vectors than r");
  AffineSubspace a;
  a.field_ = std::make_shared<const Field>(f);
  const Field& fld = *a.field_;
  const KCoordinates kc(fld);
  Matrix<Element> rows;
  for (const auto& b : basis) rows.push_back(kc.of(b));
  const auto red = rref(fld, std::move(rows), fld.r());
  if (red.rank() != basis.size()) fail(ErrorCode::kDependentBasis, "basis is linearly dependent over K");
  for (const auto& row : red.rows) a.basis_.push_back(kc.from(row));

  auto span = std::make_shared<FpSpan>(fld);
  const auto kb = fld.k_basis();
  for (const auto& b : a.basis_) {
    for (const auto& c : kb) span->insert(fld.mul(c, b));
  }
  a.offset_ = span->reduce(offset);
  a.span_ = std::move(span);

  a.kelems_ = k_elements(fld);
  for (const auto& b : a.basis_) {
    std::vector<Element> mult, step;
    for (const auto& c : a.kelems_) mult.push_back(fld.mul(c, b));
    for (std::size_t t = 0; t + 1 < mult.size(); ++t) step.push_back(fld.sub(mult[t + 1], mult[t]));
    a.multiples_.push_back(std::move(mult));
    a.steps_.push_back(std::move(step));
  }
  return a;
}

inline AffineSubspace whole_field(const Field& f) {
  std::vector<Element> basis;
  Element xj = f.one();
  for (unsigned j = 0; j < f.r(); ++j) {
    basis.push_back(xj);
    xj = f.mul(xj, f.gen_x());
  }
  return make_subspace(f, f.zero(), basis);
}

/// Extracts a K-basis from a K-closed set of F_p-generators; throws
/// HypothesisViolated if their F_p-span is not closed under K.
inline std::vector<Element> k_basis_of_span(const Field& f, const std::vector<Element>& fp_gens) {
  const KCoordinates kc(f);
  Matrix<Element> rows;
  for (const auto& g : fp_gens) rows.push_back(kc.of(g));
  const auto red = rref(f, std::move(rows), f.r());
  if (red.rank() * f.e() != FpSpan(f, fp_gens).dim()) {
    fail(ErrorCode::kHypothesisViolated, "F_p-span is not a K-subspace");
  }
  std::vector<Element> out;
  for (const auto& row : red.rows) out.push_back(kc.from(row));
  return out;
}

/// F_p-basis of {y : Tr_{L|F_p}(y v) = 0 for all v in span(gens)}.
inline std::vector<Element> trace_annihilator(const Field& f, const std::vector<Element>& gens) {
  const FpSpan span(f, gens);
  Matrix<std::uint32_t> a;
  for (const auto& v : span.basis()) {
    std::vector<std::uint32_t> row(f.m());
    for (unsigned k = 0; k < f.m(); ++k) {
      row[k] = f.abs_trace(f.mul(Element{static_cast<std::uint32_t>(*checked_pow(f.p(), k))}, v));
    }
    a.push_back(std::move(row));
  }
  std::vector<Element> out;
  for (const auto& v : nullspace(f.prime_ops(), a, f.m())) out.push_back(f.from_coeffs(v));
  return out;
}

/// Elements beta_1..beta_{r-s} with u in the linear part iff
/// Tr_{L|K}(beta_i u) = 0 for every i.
struct TraceDual {
  std::vector<Element> betas;

  bool accepts(const Field& f, Element u) const {
    return std::all_of(betas.begin(), betas.end(), [&](Element b) { return f.trace(f.mul(b, u), f.e()).v == 0; });
  }
};

inline TraceDual trace_dual(const AffineSubspace& a) {
  const auto& f = a.field();
  return {k_basis_of_span(f, trace_annihilator(f, a.span().basis()))};
}

/// #(linear part of A ∩ b F) for the subfield F of degree d.
class SubfieldIntersector {
 public:
  SubfieldIntersector(const AffineSubspace& a, unsigned d) : field_(&a.field()), d_(d) {
    const auto& f = *field_;
    const auto ann = trace_annihilator(f, a.span().basis());
    const auto fb = f.subfield_basis(d);
    for (const auto& alpha : ann) {
      for (const auto& fi : fb) products_.push_back(f.mul(alpha, fi));
    }
    rows_ = ann.size();
  }

  /// Exponent k with #(L_1 ∩ bF) = p^k, for b != 0.
  unsigned log_size(Element b) const {
    const auto& f = *field_;
    Matrix<std::uint32_t> mat(rows_, std::vector<std::uint32_t>(d_));
    for (std::size_t k = 0; k < rows_; ++k) {
      for (unsigned i = 0; i < d_; ++i) mat[k][i] = f.abs_trace(f.mul(b, products_[k * d_ + i]));
    }
    return d_ - static_cast<unsigned>(rank(f.prime_ops(), mat));
  }

 private:
  const Field* field_;
  unsigned d_;
  std::size_t rows_ = 0;
  std::vector<Element> products_;
};

struct EtaReport {
  double eta_max = 1.0;
  Rational eta_exact{1};
  unsigned worst_d = 0;
  Element worst_b;
  std::uint64_t worst_index = 0;  // b = g^worst_index
  std::uint64_t M = 0;
  unsigned log_p_M = 0;
};

/// Measures the largest intersection of the linear part of A with a
/// multiplicative translate bF of a proper subfield, over coset
/// representatives b = g^j, j < (p^m - 1)/(p^d - 1).
inline EtaReport eta_goodness(const AffineSubspace& a) {
  const auto& f = a.field();
  EtaReport rep;
  struct Best {
    unsigned k = 0;
    std::uint64_t j = 0;
    bool any = false;
  };
  const Element g = f.generator();
  for (const auto& sub : f.subfields()) {
    if (!sub.proper) continue;
    const SubfieldIntersector inter(a, sub.degree);
    const std::uint64_t cosets = (f.size() - 1) / (sub.size - 1);
    f.require_budget(cosets, "eta-goodness coset sweep");
    const auto blocks = map_blocks<Best>(cosets, [&](std::uint64_t begin, std::uint64_t end) {
      Best best;
      Element b = f.pow(g, begin);
      for (std::uint64_t j = begin; j < end; ++j, b = f.mul(b, g)) {
        const unsigned k = inter.log_size(b);
        if (!best.any || k > best.k) best = {k, j, true};
      }
      return best;
    });
    for (const auto& best : blocks) {
      if (best.any && (rep.M == 0 || best.k > rep.log_p_M)) {
        rep.log_p_M = best.k;
        rep.M = *checked_pow(f.p(), best.k);
        rep.worst_d = sub.degree;
        rep.worst_index = best.j;
        rep.worst_b = f.pow(g, best.j);
      }
    }
  }
  const unsigned total = f.e() * a.dim();  // #A = p^total
  if (rep.M >= 2 && total > 0) {
    rep.eta_exact = Rational(1) - Rational(rep.log_p_M, total);
  } else {
    rep.eta_exact = Rational(1);
  }
  rep.eta_max = rep.eta_exact.to_double();
  return rep;
}

/// Whether #(A ∩ bF) <= (#A)^{1-eta} for all b and proper F, decided exactly.
inline bool is_eta_good(const EtaReport& rep, unsigned total_log_p, const Rational& eta) {
  if (rep.M <= 1) return true;
  return Rational(rep.log_p_M) <= Rational(total_log_p) * (Rational(1) - eta);
}

inline nlohmann::json to_json(const Field& f, const EtaReport& rep) {
  return {{"eta_max", rep.eta_max}, {"eta_exact", rep.eta_exact.to_string()}, {"worst_d", rep.worst_d},
          {"worst_b", f.format(rep.worst_b)}, {"worst_coset_index", rep.worst_index}, {"M", rep.M}};
}

/// span_{F_p}(omega_0, ..., omega_{s-1}); needs K = F_p.
inline AffineSubspace subspace_of_digits(const Field& f, const std::vector<Element>& omega, unsigned s) {
  if (f.e() != 1) fail(ErrorCode::kBaseNotPrime, "digit subspaces need q = p");
  if (s > omega.size() || s > f.r()) fail(ErrorCode::kInvalidArgument, "s exceeds the digit basis");
  return make_subspace(f, f.zero(), std::vector<Element>(omega.begin(), omega.begin() + s));
}

/// l(A) = l(a) + l(L_1); the image must be a K-subspace.
inline AffineSubspace lin_image(const LinearisedPoly& l, const AffineSubspace& a) {
  const auto& f = a.field();
  const auto img = lin_image_span(f, l, a.span().basis());
  return make_subspace(f, lin_apply(f, l, a.offset()), k_basis_of_span(f, img));
}

inline std::string format(const AffineSubspace& a) {
  std::string out = a.field().format(a.offset()) + "\n";
  for (const auto& b : a.basis()) out += a.field().format(b) + "\n";
  return out;
}

inline AffineSubspace parse_subspace(const Field& f, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<Element> items;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    items.push_back(f.parse_element(line));
  }
  if (items.empty()) fail(ErrorCode::kConfigError, "subspace text needs an offset line");
  return make_subspace(f, items.front(), std::vector<Element>(items.begin() + 1, items.end()));
}

}  // namespace ffslab
