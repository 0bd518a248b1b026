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

#include "ffslab/charsum.hpp"

#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "gtest/gtest.h"

namespace ffslab {
namespace {

constexpr double kTol = 1e-9;

UniPoly random_poly(const Field& f, int degree, std::mt19937_64& rng) {
  std::vector<Element> c(degree + 1);
  for (auto& x : c) x = f.from_index(rng());
  if (c.back().v == 0) c.back() = f.one();
  return UniPoly(c);
}

/// Direct floating-point oracle: sum over the enumerated elements.
Complex naive_sum(const UniPoly& g, const AffineSubspace& a, Element tau) {
  const auto& f = a.field();
  Complex acc{};
  for (const auto& x : a.elements()) {
    const auto t = f.abs_trace(f.mul(tau, eval(f, g, x)));
    acc += std::polar(1.0, 2 * std::numbers::pi * t / f.p());
  }
  return acc;
}

TEST(Psi, Examples) {
  const auto f9 = Field::make(3, 1, 2);
  EXPECT_EQ(psi_index(f9, f9.one(), f9.one()), 2u);
  for (std::uint64_t i = 0; i < f9.size(); ++i) EXPECT_EQ(psi_index(f9, f9.zero(), f9.from_index(i)), 0u);
}

TEST(Psi, AdditiveExhaustively) {
  for (auto [p, e, r] : {std::tuple{2u, 1u, 4u}, {3u, 1u, 3u}, {5u, 1u, 2u}, {3u, 2u, 2u}}) {
    const auto f = Field::make(p, e, r);
    const Element tau = f.from_index(7);
    for (std::uint64_t i = 0; i < f.size(); ++i) {
      for (std::uint64_t j = 0; j < f.size(); ++j) {
        const Element x = f.from_index(i), y = f.from_index(j);
        ASSERT_EQ(psi_index(f, tau, f.add(x, y)), (psi_index(f, tau, x) + psi_index(f, tau, y)) % p);
      }
    }
  }
}

TEST(CharSum, OrthogonalityIsUniform) {
  for (auto [p, e, r] : {std::tuple{2u, 1u, 8u}, {3u, 2u, 2u}, {5u, 1u, 3u}, {7u, 1u, 2u}}) {
    const auto f = Field::make(p, e, r);
    const auto whole = whole_field(f);
    for (std::uint64_t t = 1; t < std::min<std::uint64_t>(f.size(), 40); ++t) {
      const auto s = sum_over_subspace(UniPoly::x(), whole, f.from_index(t));
      for (auto c : s.counts) ASSERT_EQ(c, f.size() / p);
      EXPECT_NEAR(s.magnitude(), 0.0, kTol);
    }
  }
}

TEST(CharSum, ZeroPolynomialCountsEverything) {
  const auto f = Field::make(3, 1, 4);
  std::mt19937_64 rng(61);
  const auto a = make_subspace(f, f.from_index(5), {f.from_index(rng()), f.from_index(rng())});
  const auto s = sum_over_subspace(UniPoly(), a, f.one());
  EXPECT_EQ(s.counts[0], 9u);
  EXPECT_EQ(s.terms(), 9u);
  EXPECT_NEAR(s.value().real(), 9.0, kTol);
  const auto j = to_json(s);
  EXPECT_TRUE(j.contains("counts") && j.contains("value_re") && j.contains("value_im") && j.contains("magnitude"));
}

TEST(CharSum, GaussSumMagnitude) {
  for (std::uint32_t p = 3; p <= 101; p += 2) {
    if (!is_prime(p)) continue;
    const auto f = Field::make(p, 1, 1);
    const auto s = sum_over_subspace(UniPoly::monomial(f.one(), 2), whole_field(f), f.one());
    EXPECT_NEAR(s.magnitude(), std::sqrt(static_cast<double>(p)), kTol) << p;
  }
}

TEST(CharSum, MatchesNaiveLoopOnAffineSubspaces) {
  std::mt19937_64 rng(62);
  for (auto [p, e, r] : {std::tuple{2u, 1u, 7u}, {3u, 2u, 2u}, {5u, 1u, 3u}, {2u, 2u, 3u}}) {
    const auto f = Field::make(p, e, r);
    for (unsigned s = 0; s <= r; ++s) {
      std::vector<Element> basis;
      const auto pb = whole_field(f).basis();
      for (unsigned j = 0; j < s; ++j) basis.push_back(pb[j]);
      const auto a = make_subspace(f, f.from_index(rng()), basis);
      const auto g = random_poly(f, 2 + static_cast<int>(rng() % 5), rng);
      const Element tau = f.from_index(1 + rng() % (f.size() - 1));
      const auto got = sum_over_subspace(g, a, tau);
      EXPECT_EQ(got.terms(), a.size());
      EXPECT_LT(std::abs(got.value() - naive_sum(g, a, tau)), 1e-8);
    }
  }
}

TEST(CharSum, WeilBoundOnSmallFields) {
  std::mt19937_64 rng(63);
  for (auto [p, e, r] : {std::tuple{2u, 1u, 10u}, {3u, 1u, 6u}, {5u, 1u, 4u}, {3u, 2u, 3u}, {7u, 1u, 3u}}) {
    const auto f = Field::make(p, e, r);
    const auto whole = whole_field(f);
    for (int t = 0; t < 10; ++t) {
      int d = 2 + static_cast<int>(rng() % 6);
      if (d % static_cast<int>(p) == 0) ++d;
      const auto g = random_poly(f, d, rng);
      const auto s = sum_over_subspace(g, whole, f.from_index(1 + rng() % (f.size() - 1)));
      EXPECT_LE(s.magnitude(), (d - 1) * std::sqrt(static_cast<double>(f.size())) + kTol);
    }
  }
}

TEST(CharSum, SparseEvaluatorAgreesWithHorner) {
  const auto f = Field::make(5, 1, 3);
  const auto g = parse_poly(f, "X^31 + 2*X^4 + X + 3");
  const PolyEvaluator ev(f, g);
  for (std::uint64_t i = 0; i < f.size(); ++i) ASSERT_EQ(ev(f.from_index(i)), eval(f, g, f.from_index(i)));
}

TEST(CharSum, DeterministicAcrossThreadCounts) {
  std::mt19937_64 rng(64);
  const auto f = Field::make(2, 1, 16);
  const auto g = random_poly(f, 5, rng);
  const auto a = whole_field(f);
  const LWeight chi = TraceTwist{{0.5}, {f.from_index(77)}}.weight(f);
  set_thread_count(1);
  const auto s1 = sum_over_subspace(g, a, f.one());
  const auto w1 = twisted_sum_over_subspace(g, a, f.one(), chi);
  set_thread_count(3);
  const auto s3 = sum_over_subspace(g, a, f.one());
  const auto w3 = twisted_sum_over_subspace(g, a, f.one(), chi);
  set_thread_count(1);
  EXPECT_EQ(s1.counts, s3.counts);
  EXPECT_EQ(w1.value(), w3.value());
}

TEST(TwistedSum, TrivialWeightMatchesCountVector) {
  std::mt19937_64 rng(65);
  const auto f = Field::make(3, 1, 5);
  const auto a = make_subspace(f, f.from_index(11), {f.from_index(rng()), f.from_index(rng()), f.from_index(rng())});
  const auto g = random_poly(f, 4, rng);
  const auto w = twisted_sum_over_subspace(g, a, f.one(), trivial_weight());
  const auto s = sum_over_subspace(g, a, f.one());
  EXPECT_LT(std::abs(w.value() - s.value()), kTol);
  EXPECT_EQ(w.terms, a.size());
  EXPECT_NEAR(weight_moment(a, trivial_weight(), 16), static_cast<double>(a.size()), kTol);
  EXPECT_TRUE(w.triangle_ok());
}

TEST(TwistedSum, TraceTwistIsHomomorphismOnlyForPthFractions) {
  std::mt19937_64 rng(66);
  const auto f = Field::make(5, 1, 3);
  const auto good = TraceTwist{{2.0 / 5, 3.0 / 5}, {f.from_index(3), f.from_index(40)}}.weight(f);
  const auto bad = TraceTwist{{0.3}, {f.one()}}.weight(f);
  EXPECT_LT(homomorphism_defect(f, good, 1000, rng), 1e-12);
  EXPECT_GT(homomorphism_defect(f, bad, 1000, rng), 1e-3);
  // A homomorphic twist is itself an additive character: chi * psi_tau = psi_{tau'}.
  const auto g = parse_poly(f, "X^2");
  const auto w = twisted_sum_over_subspace(g, whole_field(f), f.one(), good);
  EXPECT_TRUE(w.triangle_ok());
  EXPECT_NEAR(w.magnitude(), std::sqrt(125.0), 1e-9);
}

TEST(TwistedSum, TableWeightNeedsFullTable) {
  const auto f = Field::make(2, 1, 3);
  EXPECT_THROW(table_weight(f, std::vector<Complex>(7)), Error);
  const auto chi = table_weight(f, std::vector<Complex>(8, Complex(0, 1)));
  EXPECT_EQ(chi(f.from_index(3)), Complex(0, 1));
}

TEST(Multilinear, MatchesNestedLoops) {
  std::mt19937_64 rng(67);
  const auto f = Field::make(2, 1, 5);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + t % 3;
    std::vector<std::vector<Element>> sets(n);
    for (auto& s : sets) {
      for (int k = 0; k < 3 + static_cast<int>(rng() % 5); ++k) s.push_back(f.from_index(1 + rng() % (f.size() - 1)));
    }
    const Element tau = f.from_index(1 + rng() % (f.size() - 1));
    Complex direct{};
    double abs_sum = 0;
    std::vector<std::size_t> idx(n, 0);
    std::map<std::vector<std::size_t>, Complex> inner;
    for (;;) {
      Element prod = f.one();
      for (std::size_t i = 0; i < n; ++i) prod = f.mul(prod, sets[i][idx[i]]);
      const Complex z = root_of_unity(2, psi_index(f, tau, prod));
      direct += z;
      inner[std::vector<std::size_t>(idx.begin() + 1, idx.end())] += z;
      std::size_t i = 0;
      while (i < n && ++idx[i] == sets[i].size()) idx[i++] = 0;
      if (i == n) break;
    }
    for (const auto& [key, v] : inner) abs_sum += std::abs(v);
    EXPECT_LT(std::abs(multilinear_sum(f, sets, tau).value() - direct), kTol);
    EXPECT_NEAR(multilinear_abs_sum(f, sets, tau), abs_sum, 1e-8);
  }
}

TEST(Multilinear, FullGroupOverF4) {
  const auto f = Field::make(2, 1, 2);
  const std::vector<Element> star{f.from_index(1), f.from_index(2), f.from_index(3)};
  // sum_{a,b in L*} psi(ab) = sum_a (sum_{b in L} psi(ab) - 1) = -3.
  const auto s = multilinear_sum(f, {star, star}, f.one());
  EXPECT_NEAR(s.value().real(), -3.0, kTol);
  EXPECT_THROW(multilinear_sum(f, {{f.zero()}, star}, f.one()), Error);
}

TEST(DigitMap, Examples) {
  const auto f = Field::make(2, 1, 5);
  const auto dm = DigitMap::power_basis(f, 3);
  EXPECT_EQ(dm(5), f.add(dm.omega()[0], dm.omega()[2]));
  EXPECT_THROW(dm(8), Error);
  EXPECT_THROW(DigitMap::power_basis(Field::make(2, 2, 2), 1), Error);
  EXPECT_THROW(DigitMap(f, {f.one(), f.one()}, 2), Error);
}

TEST(DigitMap, BijectsOntoDigitSubspace) {
  for (auto [p, r, s] : {std::tuple{2u, 6u, 4u}, {3u, 4u, 3u}, {5u, 3u, 2u}}) {
    const auto f = Field::make(p, 1, r);
    std::mt19937_64 rng(68);
    std::vector<Element> omega;
    while (omega.size() < r) {
      omega.push_back(f.from_index(rng()));
      if (FpSpan(f, omega).dim() != omega.size()) omega.pop_back();
    }
    const DigitMap dm(f, omega, s);
    std::set<Element> image;
    for (std::uint64_t n = 0; n < dm.period(); ++n) image.insert(dm(n));
    const auto elems = subspace_of_digits(f, omega, s).elements();
    EXPECT_EQ(image, std::set<Element>(elems.begin(), elems.end()));
  }
}

TEST(PMultiplicative, Families) {
  std::mt19937_64 rng(69);
  const double alpha = 0.3183;
  for (std::uint32_t p : {2u, 3u, 7u}) {
    PMultiplicative constant{std::vector<double>(24, alpha)}, linear;
    double pj = 1;
    for (int j = 0; j < 24; ++j, pj *= p) linear.alphas.push_back(alpha * pj);
    for (int t = 0; t < 200; ++t) {
      const std::uint64_t n = rng() % *checked_pow(p, 10);
      std::uint64_t digits = 0;
      for (auto m = n; m; m /= p) digits += m % p;
      EXPECT_LT(std::abs(constant(n, p) - unit_phase(alpha * digits)), 1e-9);
      EXPECT_LT(std::abs(linear(n, p) - unit_phase(alpha * static_cast<double>(n))), 1e-6);
      const unsigned k = rng() % 10;
      const std::uint64_t pk = *checked_pow(p, k), m = rng() % pk, tt = rng() % 50;
      EXPECT_LT(std::abs(constant(m + tt * pk, p) - constant(m, p) * constant(tt * pk, p)), 1e-12);
    }
  }
}

TEST(DigitSums, FullBlockEqualsSubspaceSumMinusZero) {
  std::mt19937_64 rng(70);
  for (auto [p, r, s] : {std::tuple{2u, 8u, 6u}, {3u, 5u, 3u}, {5u, 3u, 2u}}) {
    const auto f = Field::make(p, 1, r);
    const auto dm = DigitMap::power_basis(f, s);
    const auto g = random_poly(f, 3, rng);
    const Element tau = f.from_index(1 + rng() % (f.size() - 1));
    const PMultiplicative one{std::vector<double>(s, 0.0)};
    const auto sn = twisted_sum_N(g, dm, one, tau, dm.period() - 1);
    const auto sub = sum_over_subspace(g, subspace_of_digits(f, dm.omega(), s), tau);
    const Complex zero_term = root_of_unity(p, psi_index(f, tau, eval(f, g, f.zero())));
    EXPECT_LT(std::abs(sn.value() - (sub.value() - zero_term)), kTol);
    EXPECT_EQ(sn.terms, dm.period() - 1);
    const auto with_zero = twisted_sum_N(g, dm, one, tau, dm.period() - 1, true);
    EXPECT_LT(std::abs(with_zero.value() - sub.value()), kTol);
    const auto rn = twisted_sum_R(g, dm, trivial_weight(), tau, dm.period() - 1);
    EXPECT_LT(std::abs(rn.value() - sn.value()), kTol);
  }
}

TEST(DigitSums, TriangleInequality) {
  std::mt19937_64 rng(71);
  const auto f = Field::make(3, 1, 6);
  const auto dm = DigitMap::power_basis(f, 6);
  for (int t = 0; t < 10; ++t) {
    const auto g = random_poly(f, 4, rng);
    const std::uint64_t n = 1 + rng() % (dm.period() - 1);
    const auto chi = TraceTwist{{1.0 / 3}, {f.from_index(rng())}}.weight(f);
    const auto rn = twisted_sum_R(g, dm, chi, f.one(), n);
    EXPECT_LE(rn.magnitude(), static_cast<double>(n) + kTol);
    PMultiplicative pm;
    for (int j = 0; j < 6; ++j) pm.alphas.push_back(std::uniform_real_distribution<double>(0, 1)(rng));
    EXPECT_TRUE(twisted_sum_N(g, dm, pm, f.one(), n).triangle_ok());
  }
  EXPECT_THROW(twisted_sum_N(UniPoly::x(), dm, PMultiplicative{}, f.one(), dm.period()), Error);
}

TEST(Bounds, SubspaceSumReport) {
  SubspaceSumParams in;
  in.p = 2;
  in.q = 2;
  in.r = 10;
  in.s = 10;
  in.d = 4;
  in.eps = Rational(1);
  in.B = 1024;
  EXPECT_DOUBLE_EQ(constants::theta(Rational(1), 4), 0.9 / 256);
  const auto rep = bound_subspace_sum(in, 10.0, 1024.0);
  EXPECT_TRUE(rep.hypotheses.at("s_ge_eps_r"));
  EXPECT_TRUE(rep.vacuous);
  in.eps = Rational(1, 2);
  in.eta = Rational(1);
  const auto gated = bound_subspace_sum(in, 10.0, 1024.0);
  EXPECT_FALSE(gated.hypotheses.at("d_ge_delta"));
  EXPECT_EQ(constants::delta(Rational(1, 2), Rational(1)), Rational(156453));
  const auto j = to_json(gated);
  for (const char* key : {"lhs", "rhs", "hypotheses", "vacuous"}) EXPECT_TRUE(j.contains(key)) << key;
  // Closed form for chi = 1: B = q^s and the B-power cancels part of the q-power.
  const double expected = 2.0 * std::pow(2.0, 10.0 - 10 * constants::theta(Rational(1, 2), 4));
  EXPECT_NEAR(gated.rhs, expected, 1e-9 * expected);
}

TEST(Bounds, MultilinearReports) {
  MultilinearParams in;
  in.p = 2;
  in.q = 2;
  in.r = 8;
  in.eps = Rational(1, 2);
  in.sizes = {255, 255, 255};
  in.eta_good = {true, true, true};
  const auto rep = bound_multilinear(in, 1.0);
  EXPECT_NEAR(rep.rhs, 100.0 * 255 * 255 * 255 * std::pow(2.0, -0.45 * 8 * 0.5 / 8), 1e-3);
  EXPECT_FALSE(rep.hypotheses.at("n_le_ceiling"));
  EXPECT_TRUE(rep.vacuous);
  EXPECT_EQ(constants::gamma(Rational(1)), Rational(1, 156450));
  in.sizes = {10, 255, 255, 255};
  in.eta_good = {false, true, true, true};
  const auto w = bound_weighted_multilinear(in, {10, 255, 255, 255}, 1.0);
  const double root = 10.0 * 255 * 255 * 255;
  EXPECT_NEAR(w.rhs, root * (1 / std::sqrt(10.0) + 10 * std::pow(2.0, -0.45 * 8 * 0.5 / 16)), 1e-6 * root);
}

TEST(Bounds, DigitSumReports) {
  DigitSumParams in;
  in.p = 3;
  in.r = 6;
  in.s = 4;
  in.d = 3;
  in.N = 50;
  in.eps = Rational(1, 2);
  in.eta = Rational(1, 2);
  const auto rep = bound_digit_sum(in, 7.0);
  EXPECT_TRUE(rep.hypotheses.at("N_in_window"));  // 27 <= 50 <= 80
  const double th = 0.9 * 0.5 * 0.75 / 16;
  EXPECT_NEAR(rep.rhs, std::pow(150.0, 1 - 0.125) + 100.0 * std::pow(3.0, -6 * th / 2), 1e-9);
  EXPECT_TRUE(rep.vacuous);
  const auto refined = bound_digit_sum(in, 7.0, true);
  EXPECT_NEAR(refined.rhs,
              std::pow(150.0, 1 - 0.225) + 100.0 * std::pow(3.0, -6 * (0.9 * 0.5 * 0.55 / 16) / 2), 1e-9);
  in.N = 80;
  const auto full = bound_digit_weighted_sum(in, 81.0, 1.0, 3.0);
  const double frac = 4.0 / 16;
  EXPECT_NEAR(full.rhs, 2 * std::pow(81.0, frac) * std::pow(3.0, 4 * (1 - frac) - 6 * constants::theta(in.eps, 2)),
              1e-9);
}

}  // namespace
}  // namespace ffslab
