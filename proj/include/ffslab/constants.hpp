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

// Exponents and thresholds that appear in the character-sum and
// intersection bounds. Quantities that decide a hypothesis are exact
// rationals; the decay exponents are doubles.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "ffslab/error.hpp"
#include "ffslab/numeric.hpp"

namespace ffslab::constants {

inline void require_unit_interval(const Rational& x, const char* name) {
  if (x <= Rational(0) || x > Rational(1)) {
    fail(ErrorCode::kInvalidArgument, std::string(name) + " must lie in (0, 1]");
  }
}

/// gamma_eta = min(1/156450, eta/120).
inline Rational gamma(const Rational& eta) {
  require_unit_interval(eta, "eta");
  return std::min(Rational(1, 156450), eta / Rational(120));
}

/// delta(eps, eta) = max(4, (eps^{-1} - 1)/gamma_eta + 3).
inline Rational delta(const Rational& eps, const Rational& eta) {
  require_unit_interval(eps, "eps");
  const Rational value = (Rational(1) / eps - Rational(1)) / gamma(eta) + Rational(3);
  return std::max(Rational(4), value);
}

/// 0.9 eps / 2^{2d}.
inline double theta(const Rational& eps, double d) { return 0.9 * eps.to_double() / std::exp2(2.0 * d); }

/// 0.9 eps / 2^{2 d^{2/rho}}.
inline double theta_rho(const Rational& eps, double rho, double d) {
  if (!(rho > 0.0)) fail(ErrorCode::kInvalidArgument, "rho must be positive");
  return 0.9 * eps.to_double() / std::exp2(2.0 * std::pow(d, 2.0 / rho));
}

/// 0.9 eps (1 - eta/2) / 2^{2d - 2}.
inline double theta_eta(const Rational& eps, const Rational& eta, double d) {
  return 0.9 * eps.to_double() * (1.0 - eta.to_double() / 2.0) / std::exp2(2.0 * d - 2.0);
}

/// Variant with (1 - 0.9 eta) in place of (1 - eta/2).
inline double theta_eta_refined(const Rational& eps, const Rational& eta, double d) {
  return 0.9 * eps.to_double() * (1.0 - 0.9 * eta.to_double()) / std::exp2(2.0 * d - 2.0);
}

/// Upper end of the admissible degree window: min(p, 0.9 log2 log2 q^r) + 1.
inline double degree_ceiling(std::uint64_t p, double log2_field_size) {
  const double loglog = log2_field_size > 1.0 ? 0.9 * std::log2(log2_field_size) : 0.0;
  return std::min(static_cast<double>(p), loglog) + 1.0;
}

// Reference exponents of the earlier inductive method, for d >= 2.

inline std::int64_t rns_base(unsigned d) {
  if (d < 2) fail(ErrorCode::kInvalidArgument, "degree must be at least 2");
  const auto pw = checked_pow(5, d - 2, (INT64_MAX - 3) / 277);
  if (!pw) fail(ErrorCode::kOverflow, "277 * 5^(d-2) overflows");
  return 277 * static_cast<std::int64_t>(*pw);
}

inline Rational rns_eta(unsigned d) { return Rational(4, rns_base(d) - 1); }
inline Rational rns_kappa(unsigned d) { return Rational(4, rns_base(d) + 3); }

inline double rns_theta(unsigned d) {
  double theta = rns_eta(2).to_double();
  for (unsigned k = 3; k <= d; ++k) {
    const double eta = rns_eta(k).to_double();
    theta = eta + theta - eta * theta;
  }
  return theta;
}

inline double rns_rho(unsigned d) {
  if (d < 3) fail(ErrorCode::kInvalidArgument, "rho_d is defined for d >= 3");
  const double eta = rns_eta(d).to_double(), theta = rns_theta(d);
  return eta + theta - eta * theta;
}

}  // namespace ffslab::constants
