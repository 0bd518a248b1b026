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

// Dense Gaussian elimination over any field described by an "ops" object.
//
// An ops type supplies `value_type` plus zero/one/add/sub/mul/inv/is_zero.
// PrimeOps covers F_p on plain integers; ffslab::Field satisfies the same
// interface on Elements, which is how linear algebra over L (and over any
// subfield K, since K is closed under these operations) is done.

#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ffslab/error.hpp"
#include "ffslab/numeric.hpp"

namespace ffslab {

template <class Ops>
concept ScalarOps = requires(const Ops& ops, typename Ops::value_type a) {
  { ops.zero() } -> std::convertible_to<typename Ops::value_type>;
  { ops.one() } -> std::convertible_to<typename Ops::value_type>;
  { ops.add(a, a) } -> std::convertible_to<typename Ops::value_type>;
  { ops.sub(a, a) } -> std::convertible_to<typename Ops::value_type>;
  { ops.mul(a, a) } -> std::convertible_to<typename Ops::value_type>;
  { ops.inv(a) } -> std::convertible_to<typename Ops::value_type>;
  { ops.is_zero(a) } -> std::convertible_to<bool>;
};

/// Arithmetic in the prime field F_p on residues 0..p-1.
struct PrimeOps {
  using value_type = std::uint32_t;
  std::uint32_t p;

  value_type zero() const { return 0; }
  value_type one() const { return 1 % p; }
  value_type add(value_type a, value_type b) const {
    const std::uint64_t s = static_cast<std::uint64_t>(a) + b;
    return static_cast<value_type>(s >= p ? s - p : s);
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + (p - b); }
  value_type neg(value_type a) const { return a == 0 ? 0 : p - a; }
  value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>(static_cast<std::uint64_t>(a) * b % p);
  }
  value_type inv(value_type a) const {
    if (a == 0) fail(ErrorCode::kInvalidArgument, "inverse of zero in F_p");
    return static_cast<value_type>(pow_mod(a, p - 2, p));
  }
  bool is_zero(value_type a) const { return a == 0; }
};

template <class T>
using Matrix = std::vector<std::vector<T>>;

template <class T>
struct Rref {
  Matrix<T> rows;                    // reduced row-echelon form, zero rows dropped
  std::vector<std::size_t> pivots;   // pivot column of each row
  std::size_t cols = 0;
  std::size_t rank() const { return pivots.size(); }
};

namespace detail {

template <class T>
std::size_t checked_cols(const Matrix<T>& a, std::size_t cols_hint) {
  const std::size_t cols = a.empty() ? cols_hint : a.front().size();
  for (const auto& row : a) {
    if (row.size() != cols) fail(ErrorCode::kDimensionMismatch, "ragged matrix");
  }
  return cols;
}

}  // namespace detail

/// Reduced row-echelon form; pivots are chosen left to right, top to bottom,
/// so the result is canonical for the row space.
template <ScalarOps Ops>
Rref<typename Ops::value_type> rref(const Ops& ops, Matrix<typename Ops::value_type> a,
                                    std::size_t cols_hint = 0) {
  using T = typename Ops::value_type;
  Rref<T> out;
  out.cols = detail::checked_cols(a, cols_hint);
  std::size_t row = 0;
  for (std::size_t col = 0; col < out.cols && row < a.size(); ++col) {
    std::size_t sel = row;
    while (sel < a.size() && ops.is_zero(a[sel][col])) ++sel;
    if (sel == a.size()) continue;
    std::swap(a[sel], a[row]);
    const T inv = ops.inv(a[row][col]);
    for (auto& v : a[row]) v = ops.mul(v, inv);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == row || ops.is_zero(a[i][col])) continue;
      const T factor = a[i][col];
      for (std::size_t j = col; j < out.cols; ++j) {
        a[i][j] = ops.sub(a[i][j], ops.mul(factor, a[row][j]));
      }
    }
    out.pivots.push_back(col);
    ++row;
  }
  a.resize(row);
  out.rows = std::move(a);
  return out;
}

template <ScalarOps Ops>
std::size_t rank(const Ops& ops, const Matrix<typename Ops::value_type>& a) {
  return rref(ops, a).rank();
}

/// Canonical nullspace basis: one vector per free column, with a 1 in that
/// column and zeros in the other free columns.
template <ScalarOps Ops>
std::vector<std::vector<typename Ops::value_type>> nullspace(
    const Ops& ops, const Matrix<typename Ops::value_type>& a, std::size_t cols_hint = 0) {
  using T = typename Ops::value_type;
  const auto r = rref(ops, a, cols_hint);
  std::vector<bool> is_pivot(r.cols, false);
  for (auto c : r.pivots) is_pivot[c] = true;
  std::vector<std::vector<T>> basis;
  for (std::size_t free = 0; free < r.cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<T> v(r.cols, ops.zero());
    v[free] = ops.one();
    for (std::size_t i = 0; i < r.pivots.size(); ++i) {
      v[r.pivots[i]] = ops.sub(ops.zero(), r.rows[i][free]);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class T>
struct Solution {
  std::optional<std::vector<T>> particular;  // empty when the system is inconsistent
  std::vector<std::vector<T>> nullspace;
};

/// Solves a * x = rhs.
template <ScalarOps Ops>
Solution<typename Ops::value_type> solve(const Ops& ops, const Matrix<typename Ops::value_type>& a,
                                         const std::vector<typename Ops::value_type>& rhs,
                                         std::size_t cols_hint = 0) {
  using T = typename Ops::value_type;
  if (rhs.size() != a.size()) fail(ErrorCode::kDimensionMismatch, "rhs length differs from row count");
  const std::size_t cols = detail::checked_cols(a, cols_hint);
  Matrix<T> aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(rhs[i]);
  const auto r = rref(ops, aug, cols + 1);
  Solution<T> out;
  out.nullspace = nullspace(ops, a, cols);
  if (!r.pivots.empty() && r.pivots.back() == cols) return out;
  std::vector<T> x(cols, ops.zero());
  for (std::size_t i = 0; i < r.pivots.size(); ++i) x[r.pivots[i]] = r.rows[i][cols];
  out.particular = std::move(x);
  return out;
}

/// Reduces `v` against the rows of an Rref; returns the remainder.
template <ScalarOps Ops>
std::vector<typename Ops::value_type> reduce(const Ops& ops, const Rref<typename Ops::value_type>& r,
                                             std::vector<typename Ops::value_type> v) {
  for (std::size_t i = 0; i < r.pivots.size(); ++i) {
    const auto c = v[r.pivots[i]];
    if (ops.is_zero(c)) continue;
    for (std::size_t j = 0; j < r.cols; ++j) v[j] = ops.sub(v[j], ops.mul(c, r.rows[i][j]));
  }
  return v;
}

}  // namespace ffslab
