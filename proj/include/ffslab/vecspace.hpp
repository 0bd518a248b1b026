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

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "ffslab/field.hpp"
#include "ffslab/linalg.hpp"

namespace ffslab {

/// F_p-span of field elements, maintained in reduced row-echelon form over
/// the power-basis coordinates (pivot columns in increasing order).
class FpSpan {
 public:
  explicit FpSpan(const Field& f) : field_(&f), ops_(f.prime_ops()) {}

  FpSpan(const Field& f, const std::vector<Element>& gens) : FpSpan(f) {
    for (const auto& g : gens) insert(g);
  }

  /// Adds x; returns false when x was already in the span.
  bool insert(Element x) {
    auto v = reduce_coords(field_->coeffs(x));
    std::size_t col = 0;
    while (col < v.size() && v[col] == 0) ++col;
    if (col == v.size()) return false;
    const auto inv = ops_.inv(v[col]);
    for (auto& c : v) c = ops_.mul(c, inv);
    for (auto& row : rows_) {
      const auto factor = row[col];
      if (factor == 0) continue;
      for (std::size_t j = col; j < row.size(); ++j) row[j] = ops_.sub(row[j], ops_.mul(factor, v[j]));
    }
    const auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), col) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, col);
    rows_.insert(rows_.begin() + pos, std::move(v));
    return true;
  }

  bool contains(Element x) const {
    const auto v = reduce_coords(field_->coeffs(x));
    return std::all_of(v.begin(), v.end(), [](auto c) { return c == 0; });
  }

  /// The canonical representative of x modulo the span.
  Element reduce(Element x) const { return field_->from_coeffs(reduce_coords(field_->coeffs(x))); }

  unsigned dim() const { return static_cast<unsigned>(rows_.size()); }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  std::vector<Element> basis() const {
    std::vector<Element> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) out.push_back(field_->from_coeffs(row));
    return out;
  }

  friend bool operator==(const FpSpan& a, const FpSpan& b) {
    return a.pivots_ == b.pivots_ && a.rows_ == b.rows_;
  }

 private:
  std::vector<std::uint32_t> reduce_coords(std::vector<std::uint32_t> v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const auto factor = v[pivots_[i]];
      if (factor == 0) continue;
      for (std::size_t j = pivots_[i]; j < v.size(); ++j) {
        v[j] = ops_.sub(v[j], ops_.mul(factor, rows_[i][j]));
      }
    }
    return v;
  }

  const Field* field_;
  PrimeOps ops_;
  std::vector<std::vector<std::uint32_t>> rows_;
  std::vector<std::size_t> pivots_;
};

/// Elements whose F_p-coordinates form the nullspace of the F_p-linear map
/// `apply` on L, as a canonical F_p-basis.
template <class Map>
std::vector<Element> fp_kernel(const Field& f, Map&& apply) {
  const unsigned m = f.m();
  Matrix<std::uint32_t> a(m, std::vector<std::uint32_t>(m));
  std::vector<std::uint32_t> unit(m, 0);
  for (unsigned j = 0; j < m; ++j) {
    unit.assign(m, 0);
    unit[j] = 1;
    const auto col = f.coeffs(apply(f.from_coeffs(unit)));
    for (unsigned i = 0; i < m; ++i) a[i][j] = col[i];
  }
  std::vector<Element> out;
  for (const auto& v : nullspace(f.prime_ops(), a, m)) out.push_back(f.from_coeffs(v));
  return out;
}

}  // namespace ffslab
