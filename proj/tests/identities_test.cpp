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

#include "ffslab/identities.hpp"

#include <random>

#include "gtest/gtest.h"

namespace ffslab {
namespace {

UniPoly random_poly(const Field& f, int degree, std::mt19937_64& rng) {
  std::vector<Element> c(degree + 1);
  for (auto& v : c) v = f.from_index(rng());
  while (c.back().v == 0) c.back() = f.from_index(rng());
  return UniPoly(std::move(c));
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

TEST(QuotientShape, CubeOverF7) {
  const auto f = Field::make(7, 1, 1);
  const auto r = verify_quotient_shape(f, parse_poly(f, "X^3"), 2);
  EXPECT_TRUE(r.pass()) << r.witness().value_or("");
  // F_2 = X1^2 + 3 X1 X2 + 3 X2^2, leading coefficient 3 on X2^2.
  const auto c = delta_cascade(f, parse_poly(f, "X^3"), 2);
  EXPECT_EQ(c.quotients[1].coeff(Monomial{{0, 2}}), f.scalar(3));
}

TEST(QuotientShape, QuarticOverF11) {
  const auto f = Field::make(11, 1, 1);
  const auto g = parse_poly(f, "5*X^4 + X");
  EXPECT_TRUE(verify_quotient_shape(f, g, 4).pass());
  const auto c = delta_cascade(f, g, 4);
  EXPECT_EQ(c.quotients[3].coeff(Monomial{{0, 0, 0, 1}}), f.scalar(120 % 11));
  EXPECT_EQ(120 % 11, 10);
}

TEST(QuotientShape, RandomSuite) {
  std::mt19937_64 rng(21);
  int trials = 0;
  for (unsigned p : {3u, 5u, 7u, 11u, 13u}) {
    const auto f = Field::make(p, 1, 2);
    for (int t = 0; t < 40; ++t, ++trials) {
      const int d = 2 + static_cast<int>(rng() % (p - 2));
      const auto g = random_poly(f, d, rng);
      for (unsigned k = 2; k <= static_cast<unsigned>(d); ++k) {
        const auto r = verify_quotient_shape(f, g, k);
        ASSERT_TRUE(r.pass()) << nlohmann::json(r).dump();
      }
    }
  }
  EXPECT_EQ(trials, 200);
}

TEST(QuotientShape, RejectsLargeDegree) {
  const auto f = Field::make(3, 1, 1);
  EXPECT_EQ(code_of([&] { verify_quotient_shape(f, parse_poly(f, "X^3"), 2); }),
            ErrorCode::kHypothesisViolated);
}

TEST(TerminalDifferences, RandomSuite) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 500; ++t) {
    const unsigned p = std::vector<unsigned>{3, 5, 7, 11, 13}[rng() % 5];
    const auto f = Field::make(p, 1, 1 + static_cast<unsigned>(rng() % 2));
    const auto g = random_poly(f, 1 + static_cast<int>(rng() % (p - 1)), rng);
    const auto r = verify_terminal_differences(f, g);
    ASSERT_TRUE(r.pass()) << nlohmann::json(r).dump();
  }
}

TEST(PowerTimesLowDegree, SixthPowerOverF5) {
  const auto f = Field::make(5, 1, 1);
  const auto r = verify_power_times_low_degree(f, 1, parse_poly(f, "X"));
  EXPECT_TRUE(r.pass());
  const auto c = delta_cascade(f, parse_poly(f, "X^6"), 4);
  EXPECT_TRUE(c.delta(f, 4).is_zero());
  EXPECT_FALSE(c.delta(f, 3).is_zero());
}

TEST(PowerTimesLowDegree, RandomSuite) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 60; ++t) {
    const unsigned p = std::vector<unsigned>{5, 7, 11}[rng() % 3];
    const auto f = Field::make(p, 1, 2);
    const auto g = random_poly(f, static_cast<int>(rng() % p), rng);
    const auto r = verify_power_times_low_degree(f, 1 + static_cast<unsigned>(rng() % 2), g);
    ASSERT_TRUE(r.pass()) << nlohmann::json(r).dump();
    for (const auto& c : r.checks) EXPECT_TRUE(c.pass) << c.name;
  }
}

TEST(PowerSumForm, ConstantTopPart) {
  const auto f = Field::make(5, 1, 2);
  const Element c = f.gen_x();
  const auto g0 = parse_poly(f, "X^4");
  const auto r = verify_power_sum_form(f, {g0, UniPoly::constant(c)});
  EXPECT_TRUE(r.pass()) << r.witness().value_or("");
  const auto full = add(f, UniPoly::monomial(c, 5), g0);
  EXPECT_EQ(delta_cascade(f, full, 4).delta(f, 4), delta_cascade(f, g0, 4).delta(f, 4));
}

TEST(PowerSumForm, RandomSuite) {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 100; ++t) {
    const unsigned p = std::vector<unsigned>{5, 7, 11, 13}[rng() % 4];
    const auto f = Field::make(p, 1, 1 + static_cast<unsigned>(rng() % 2));
    const int d = 3 + static_cast<int>(rng() % (p - 3));
    std::vector<UniPoly> parts{random_poly(f, d, rng)};
    const unsigned nu = 1 + static_cast<unsigned>(rng() % 2);
    for (unsigned i = 1; i <= nu; ++i) parts.push_back(random_poly(f, static_cast<int>(rng() % (d - 2)), rng));
    const auto r = verify_power_sum_form(f, parts);
    ASSERT_TRUE(r.pass()) << nlohmann::json(r).dump();
  }
}

TEST(DigitMonomialForm, EighthPowerOverF7) {
  const auto f = Field::make(7, 1, 1);
  const auto r = verify_digit_monomial_form(f, 1, parse_poly(f, "X^4 + 2*X"));
  EXPECT_TRUE(r.pass()) << r.witness().value_or("");
  for (const char* name : {"quotient_2", "quotient_3", "delta_4_zero", "final_shape"}) {
    ASSERT_NE(r.find(name), nullptr);
    EXPECT_TRUE(r.find(name)->pass) << name;
  }
  // X1^7 + X2^7 + X2 X1^6 against a pointwise evaluation of the quotient.
  for (std::uint32_t a = 1; a < 7; ++a) {
    for (std::uint32_t b = 0; b < 7; ++b) {
      const Element x1 = f.scalar(a), x2 = f.scalar(b);
      const Element lhs = f.div(f.sub(f.pow(f.add(x1, x2), 8), f.pow(x2, 8)), x1);
      const Element rhs = f.add(f.add(f.pow(x1, 7), f.pow(x2, 7)), f.mul(x2, f.pow(x1, 6)));
      EXPECT_EQ(lhs, rhs);
    }
  }
}

TEST(DigitMonomialForm, SecondDigitAtP5) {
  // m = X^31 over F_5. The closed forms for F_2, F_3 and the vanishing of
  // Delta_4 fail; the monomial dies at depth nu + 3 = 5 instead.
  const auto f = Field::make(5, 1, 2);
  const auto r = verify_digit_monomial_form(f, 2, parse_poly(f, "X^4 + X"));
  EXPECT_FALSE(r.find("quotient_2")->pass);
  EXPECT_FALSE(r.find("quotient_3")->pass);
  EXPECT_FALSE(r.find("delta_4_zero")->pass);
  EXPECT_TRUE(r.find("delta_nu_plus_3_zero")->pass);
  EXPECT_FALSE(r.find("final_shape")->pass);
  EXPECT_FALSE(r.pass());
  // Independent confirmation at one point: (x1 + x2)^31 - x2^31 over x1 is
  // not x1^30 + x2^30 + x2 x1^29.
  bool differs = false;
  for (std::uint64_t a = 1; a < f.size() && !differs; ++a) {
    const Element x1 = f.from_index(a), x2 = f.gen_x();
    const Element lhs = f.div(f.sub(f.pow(f.add(x1, x2), 31), f.pow(x2, 31)), x1);
    const Element rhs = f.add(f.add(f.pow(x1, 30), f.pow(x2, 30)), f.mul(x2, f.pow(x1, 29)));
    differs = lhs != rhs;
  }
  EXPECT_TRUE(differs);
}

TEST(DigitMonomialForm, HoldsOnceDegreeClearsDigitDepth) {
  const auto f = Field::make(7, 1, 1);
  EXPECT_TRUE(verify_digit_monomial_form(f, 2, parse_poly(f, "X^5 + 3")).find("final_shape")->pass);
  EXPECT_EQ(code_of([&] { verify_digit_monomial_form(f, 1, parse_poly(f, "X^3")); }),
            ErrorCode::kHypothesisViolated);
}

TEST(LinearisedComposition, RandomSuite) {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 40; ++t) {
    const unsigned p = std::vector<unsigned>{5, 7}[rng() % 2];
    const auto f = Field::make(p, 1, 3);
    const auto g = random_poly(f, 2 + static_cast<int>(rng() % (p - 2)), rng);
    LinearisedPoly l{LinKind::kP, {f.zero(), f.from_index(rng()), f.from_index(rng())}};
    const auto r = verify_linearised_composition(f, g, l);
    ASSERT_TRUE(r.pass()) << nlohmann::json(r).dump();
  }
}

TEST(LinearisedComposition, PointwiseFactorisation) {
  // F_k(g o l)(x) = prod_{i<k} l(x_i)/x_i * G_k(l(x_1), ..., l(x_k)) at random points.
  const auto f = Field::make(5, 1, 3);
  std::mt19937_64 rng(26);
  const auto g = parse_poly(f, "X^4 + 2*X^3 + X");
  const LinearisedPoly l{LinKind::kP, {f.zero(), f.gen_x(), f.one()}};
  const auto lu = lin_to_uni(f, l);
  const auto fc = delta_cascade(f, compose(f, g, lu), 4);
  const auto gc = delta_cascade(f, g, 4);
  for (int t = 0; t < 200; ++t) {
    std::vector<Element> x(4), lx(4);
    for (int i = 0; i < 4; ++i) {
      do x[i] = f.from_index(rng());
      while (x[i].v == 0);
      lx[i] = lin_apply(f, l, x[i]);
    }
    for (unsigned k = 2; k <= 4; ++k) {
      Element factor = f.one();
      for (unsigned i = 0; i + 1 < k; ++i) factor = f.mul(factor, f.div(lx[i], x[i]));
      const std::vector<Element> px(x.begin(), x.begin() + k), plx(lx.begin(), lx.begin() + k);
      ASSERT_EQ(eval_multi(f, fc.quotients[k - 1], px), f.mul(factor, eval_multi(f, gc.quotients[k - 1], plx)));
    }
  }
}

TEST(LinearisedComposition, LiteralStatementNeedsTrivialFactors) {
  const auto f = Field::make(7, 1, 2);
  const LinearisedPoly frob{LinKind::kP, {f.zero(), f.one()}};
  const auto quad = verify_linearised_composition(f, parse_poly(f, "X^2 + X"), frob);
  EXPECT_TRUE(quad.find("literal_statement")->pass);
  const auto cubic = verify_linearised_composition(f, parse_poly(f, "X^3"), frob);
  EXPECT_TRUE(cubic.pass());
  EXPECT_FALSE(cubic.find("literal_statement")->pass);
}

TEST(Report, JsonShape) {
  const auto f = Field::make(5, 1, 1);
  const auto j = nlohmann::json(verify_terminal_differences(f, parse_poly(f, "X^3 + 1")));
  EXPECT_EQ(j["identity"], "terminal_differences");
  EXPECT_EQ(j["pass"], true);
  EXPECT_FALSE(j.contains("witness"));
  EXPECT_TRUE(j["params"].contains("field"));
}

}  // namespace
}  // namespace ffslab
