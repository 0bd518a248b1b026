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

// Seeded random sweeps of the difference-operator identity verifiers.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ffslab/identities.hpp"
#include "ffslab/parallel.hpp"
#include "json.hpp"

namespace ffslab {

struct IdentitySuiteConfig {
  std::uint32_t p = 7;
  unsigned dmin = 2;
  unsigned dmax = 6;          // clamped to p - 1
  unsigned trials = 100;      // random f per degree
  std::uint64_t seed = 1;
  unsigned r = 2;             // coefficients drawn from F_{p^r}
};

struct IdentityTally {
  std::uint64_t runs = 0;
  std::uint64_t passes = 0;
  std::optional<std::string> first_failure;

  void add(const VerifyReport& rep) { add(rep.pass(), rep); }
  void add(bool ok, const VerifyReport& rep) {
    ++runs;
    if (ok) {
      ++passes;
    } else if (!first_failure) {
      first_failure = nlohmann::json(rep).dump();
    }
  }
  void merge(const IdentityTally& o) {
    runs += o.runs;
    passes += o.passes;
    if (!first_failure) first_failure = o.first_failure;
  }
  bool pass() const { return runs == passes; }
};

struct IdentitySuiteResult {
  std::map<std::string, IdentityTally> tallies;
  /// Second-digit monomial form with d = 4, where the stage-d shape can
  /// fail; reported, not part of the verdict.
  std::uint64_t second_digit_d4_runs = 0;
  std::uint64_t second_digit_d4_failures = 0;

  void merge(const IdentitySuiteResult& o) {
    for (const auto& [k, v] : o.tallies) tallies[k].merge(v);
    second_digit_d4_runs += o.second_digit_d4_runs;
    second_digit_d4_failures += o.second_digit_d4_failures;
  }
  bool pass() const {
    for (const auto& [k, v] : tallies) {
      if (!v.pass()) return false;
    }
    return true;
  }
  std::uint64_t runs() const {
    std::uint64_t n = 0;
    for (const auto& [k, v] : tallies) n += v.runs;
    return n;
  }
};

namespace detail {

inline UniPoly random_exact_degree(const Field& f, int degree, std::mt19937_64& rng) {
  if (degree < 0) return {};
  std::vector<Element> c(degree + 1);
  for (auto& v : c) v = f.from_index(rng());
  while (c.back().v == 0) c.back() = f.from_index(rng());
  return UniPoly(std::move(c));
}

/// Every verifier on one random polynomial of degree d.
inline IdentitySuiteResult identity_trial(const Field& f, unsigned d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  IdentitySuiteResult out;
  const auto g = random_exact_degree(f, static_cast<int>(d), rng);
  for (unsigned k = 2; k <= d; ++k) out.tallies["quotient_shape"].add(verify_quotient_shape(f, g, k));
  out.tallies["terminal_differences"].add(verify_terminal_differences(f, g));
  for (unsigned nu = 1; nu <= 2; ++nu) {
    out.tallies["power_times_low_degree"].add(verify_power_times_low_degree(f, nu, g));
  }
  {
    std::vector<UniPoly> parts{g};
    const unsigned nu = 1 + static_cast<unsigned>(rng() % 2);
    for (unsigned i = 1; i <= nu; ++i) {
      parts.push_back(d >= 3 ? random_exact_degree(f, static_cast<int>(rng() % (d - 2)), rng) : UniPoly{});
    }
    out.tallies["power_sum_form"].add(verify_power_sum_form(f, parts));
  }
  if (d >= 4) {
    out.tallies["digit_monomial_form"].add(verify_digit_monomial_form(f, 1, g));
    // For the second digit only the stage-d shape is claimed, and only once
    // d clears the depth at which the monomial part vanishes.
    const auto second = verify_digit_monomial_form(f, 2, g);
    const Check* shape = second.find("final_shape");
    if (d >= 5) {
      out.tallies["digit_monomial_form_second_digit"].add(shape->pass, second);
    } else {
      ++out.second_digit_d4_runs;
      out.second_digit_d4_failures += !shape->pass;
    }
  }
  LinearisedPoly l{LinKind::kP, {f.from_index(rng()), f.from_index(rng())}};
  out.tallies["linearised_composition"].add(verify_linearised_composition(f, g, l));
  return out;
}

}  // namespace detail

/// Runs every verifier on `trials` random polynomials for each degree in
/// [dmin, min(dmax, p - 1)]. Trial seeds derive from (seed, d, t) only, so
/// results do not depend on the thread count.
inline IdentitySuiteResult run_identity_suite(const IdentitySuiteConfig& cfg) {
  const auto f = Field::make(cfg.p, 1, cfg.r);
  const unsigned dmax = std::min(cfg.dmax, cfg.p - 1);
  IdentitySuiteResult total;
  for (unsigned d = std::max(cfg.dmin, 2u); d <= dmax; ++d) {
    const auto parts = map_blocks<IdentitySuiteResult>(cfg.trials, [&](std::uint64_t begin, std::uint64_t end) {
      IdentitySuiteResult acc;
      for (std::uint64_t t = begin; t < end; ++t) {
        std::seed_seq seq{cfg.seed, static_cast<std::uint64_t>(cfg.p), static_cast<std::uint64_t>(d), t};
        std::array<std::uint32_t, 2> words{};
        seq.generate(words.begin(), words.end());
        acc.merge(detail::identity_trial(f, d, (std::uint64_t{words[0]} << 32) | words[1]));
      }
      return acc;
    }, 1);
    for (const auto& part : parts) total.merge(part);
  }
  return total;
}

inline nlohmann::json to_json(const IdentitySuiteResult& res) {
  nlohmann::json tallies = nlohmann::json::object();
  for (const auto& [name, t] : res.tallies) {
    tallies[name] = {{"runs", t.runs}, {"passes", t.passes}, {"pass", t.pass()}};
    if (t.first_failure) tallies[name]["first_failure"] = nlohmann::json::parse(*t.first_failure);
  }
  return {{"tallies", tallies},
          {"runs", res.runs()},
          {"pass", res.pass()},
          {"second_digit_d4_runs", res.second_digit_d4_runs},
          {"second_digit_d4_failures", res.second_digit_d4_failures}};
}

}  // namespace ffslab
