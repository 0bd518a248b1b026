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

#include <random>

#include "ffslab/family.hpp"
#include "ffslab/multipoly.hpp"
#include "ffslab/poly.hpp"
#include "gtest/gtest.h"

namespace ffslab {
namespace {

UniPoly random_poly(const Field& f, int degree, std::mt19937_64& rng) {
  std::vector<Element> c(degree + 1);
  for (auto& v : c) v = f.from_index(rng());
  while (c.back().v == 0) c.back() = f.from_index(rng());
  return UniPoly(std::move(c));
}

TEST(UniPoly, EvalExamples) {
  const auto f = Field::make(3, 1, 1);
  EXPECT_EQ(eval(f, parse_poly(f, "X^2 + 1"), f.one()), f.scalar(2));
  EXPECT_EQ(eval(f, UniPoly{}, f.scalar(2)), f.zero());
}

TEST(UniPoly, EvalMatchesNaivePowerSum) {
  const auto f = Field::make(5, 1, 4);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 1000; ++t) {
    const auto g = random_poly(f, static_cast<int>(rng() % 12), rng);
    const Element x = f.from_index(rng());
    Element naive{};
    for (std::size_t i = 0; i < g.coeffs().size(); ++i) {
      Element xi = f.one();
      for (std::size_t j = 0; j < i; ++j) xi = f.mul(xi, x);
      naive = f.add(naive, f.mul(g.coeffs()[i], xi));
    }
    ASSERT_EQ(eval(f, g, x), naive);
  }
}

TEST(UniPoly, ComposeByHand) {
  // Two quadratics over F_3 that agree on all of F_3 are equal.
  const auto f = Field::make(3, 1, 1);
  const auto got = compose(f, parse_poly(f, "X^2 + 1"), parse_poly(f, "X + 1"));
  const auto want = parse_poly(f, "X^2 + 2*X + 2");
  EXPECT_EQ(got.degree(), 2);
  for (std::uint32_t x = 0; x < 3; ++x) {
    const Element v = f.scalar(x);
    EXPECT_EQ(eval(f, got, v), eval(f, want, v));
  }
  EXPECT_EQ(got, want);
}

TEST(UniPoly, IterateExamples) {
  const auto f = Field::make(7, 1, 2);
  EXPECT_EQ(iterate(f, parse_poly(f, "X^2"), 3), parse_poly(f, "X^8"));
  EXPECT_EQ(iterate(f, parse_poly(f, "3*X^5 + 1"), 0), UniPoly::x());
  EXPECT_THROW(iterate(f, parse_poly(f, "X^2"), 17), Error);
  try {
    iterate(f, parse_poly(f, "X^2"), 17);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegreeBudgetExceeded);
  }
}

TEST(UniPoly, IterateAgreesWithRepeatedEvaluation) {
  const auto f = Field::make(3, 1, 3);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 500; ++t) {
    const auto g = random_poly(f, 1 + static_cast<int>(rng() % 4), rng);
    const Element x = f.from_index(rng());
    ASSERT_EQ(eval(f, iterate(f, g, 2), x), eval(f, g, eval(f, g, x)));
  }
  IterateCache cache(f, parse_poly(f, "X^2 + [0,1]"));
  const Element x = f.gen_x();
  Element cur = x;
  for (unsigned n = 0; n <= 6; ++n) {
    EXPECT_EQ(eval(f, cache.get(n), x), cur);
    cur = eval(f, cache.get(1), cur);
  }
}

TEST(UniPoly, TextRoundTrip) {
  const auto f = Field::make(5, 1, 2);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto g = random_poly(f, static_cast<int>(rng() % 9), rng);
    ASSERT_EQ(parse_poly(f, format(f, g)), g) << format(f, g);
  }
  EXPECT_EQ(parse_poly(f, "2*X - X + 4 - 4"), UniPoly::x());
  EXPECT_EQ(format(f, parse_poly(f, "[1,2]*X^3 + 7")), "2 + [1,2]*X^3");
  EXPECT_THROW(parse_poly(f, "X^^2"), Error);
  EXPECT_THROW(parse_poly(f, ""), Error);
}

TEST(MultiPoly, EvalAndArity) {
  const auto f = Field::make(7, 1, 1);
  MultiPoly g(2);
  g.add_term(f, Monomial{{1, 2}}, f.scalar(3));  // 3 X1 X2^2
  g.add_term(f, Monomial{{0, 0}}, f.one());
  EXPECT_EQ(eval_multi(f, g, {f.scalar(2), f.scalar(3)}), f.scalar((3 * 2 * 9 + 1) % 7));
  EXPECT_THROW(eval_multi(f, g, {f.one()}), Error);
  EXPECT_EQ(format(f, g), "1 + 3 * X1*X2^2");
  EXPECT_EQ(g.degree_in(1), 2);
}

TEST(MultiPoly, SubstitutionMatchesEvaluation) {
  const auto f = Field::make(5, 1, 2);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    MultiPoly g(3);
    for (int i = 0; i < 6; ++i) {
      g.add_term(f, Monomial{{static_cast<std::uint16_t>(rng() % 4), static_cast<std::uint16_t>(rng() % 4),
                              static_cast<std::uint16_t>(rng() % 4)}},
                 f.from_index(rng()));
    }
    std::vector<UniPoly> us;
    std::vector<MultiPoly> subs;
    for (unsigned i = 0; i < 3; ++i) {
      us.push_back(random_poly(f, 2, rng));
      subs.push_back(MultiPoly::from_uni(us.back(), i % 2, 2));
    }
    const auto h = substitute(f, g, subs, 2);
    const Element a = f.from_index(rng()), b = f.from_index(rng());
    const std::vector<Element> ab{a, b};
    const Element want = eval_multi(f, g, {eval(f, us[0], a), eval(f, us[1], b), eval(f, us[2], a)});
    ASSERT_EQ(eval_multi(f, h, ab), want);
  }
}

// Value of the k-th cascade quotient at a point, computed straight from the
// recursive definition; needs x_1..x_{k-1} nonzero.
Element quotient_oracle(const Field& f, const UniPoly& g, const std::vector<Element>& x, unsigned k) {
  if (k == 1) return eval(f, g, x[0]);
  std::vector<Element> shifted(x.begin(), x.begin() + k - 1);
  std::vector<Element> moved(x.begin(), x.begin() + k - 1);
  shifted[k - 2] = f.add(x[k - 2], x[k - 1]);
  moved[k - 2] = x[k - 1];
  const Element diff = f.sub(quotient_oracle(f, g, shifted, k - 1), quotient_oracle(f, g, moved, k - 1));
  return f.div(diff, x[k - 2]);
}

TEST(Cascade, SquareByHand) {
  const auto f = Field::make(5, 1, 1);
  const auto c = delta_cascade(f, parse_poly(f, "X^2"), 2);
  MultiPoly want(2);
  want.add_term(f, Monomial{{1, 0}}, f.one());
  want.add_term(f, Monomial{{0, 1}}, f.scalar(2));
  EXPECT_EQ(c.quotients[1], want);
  // (x1 + x2)^2 - x2^2 = x1 (x1 + 2 x2) on every pair.
  for (std::uint32_t a = 0; a < 5; ++a) {
    for (std::uint32_t b = 0; b < 5; ++b) {
      const Element x1 = f.scalar(a), x2 = f.scalar(b);
      const Element lhs = f.sub(f.mul(f.add(x1, x2), f.add(x1, x2)), f.mul(x2, x2));
      EXPECT_EQ(eval_multi(f, c.delta(f, 2), {x1, x2}), lhs);
    }
  }
}

TEST(Cascade, CubeTerminates) {
  const auto f = Field::make(7, 1, 1);
  const auto c = delta_cascade(f, parse_poly(f, "X^3"), 5);
  MultiPoly six_x3(4);
  six_x3.add_term(f, Monomial{{0, 0, 1, 0}}, f.scalar(6));
  EXPECT_EQ(c.delta(f, 4), six_x3);
  EXPECT_TRUE(c.delta(f, 5).is_zero());
}

TEST(Cascade, MatchesRecursiveDefinitionPointwise) {
  std::mt19937_64 rng(5);
  for (auto [p, m] : {std::pair{7u, 1u}, {5u, 2u}, {2u, 5u}, {3u, 3u}}) {
    const auto f = Field::make(p, 1, m);
    for (int t = 0; t < 30; ++t) {
      // Includes degrees >= p: divisibility holds for every polynomial.
      const auto g = random_poly(f, 1 + static_cast<int>(rng() % 12), rng);
      const auto c = delta_cascade(f, g, 5);
      for (int s = 0; s < 10; ++s) {
        std::vector<Element> x(5);
        for (auto& v : x) {
          do v = f.from_index(rng());
          while (v.v == 0);
        }
        for (unsigned k = 1; k <= 5; ++k) {
          const std::vector<Element> point(x.begin(), x.begin() + k);
          ASSERT_EQ(eval_multi(f, c.quotients[k - 1], point), quotient_oracle(f, g, x, k));
        }
      }
    }
  }
}

TEST(Cascade, DivisionGuard) {
  const auto f = Field::make(5, 1, 1);
  MultiPoly g(2);
  g.add_term(f, Monomial{{0, 3}}, f.one());
  try {
    divide_by_variable(g, 0);
    FAIL() << "expected NotDivisible";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotDivisible);
  }
}

TEST(Cascade, LucasRow) {
  // Row 7 over F_3: C(7, j) mod 3 by Pascal's triangle.
  const auto row = binomial_row_mod_p(7, 3);
  std::vector<std::uint64_t> pascal(8, 0);
  pascal[0] = 1;
  for (int n = 1; n <= 7; ++n) {
    for (int j = n; j > 0; --j) pascal[j] = (pascal[j] + pascal[j - 1]) % 3;
  }
  std::vector<std::pair<std::uint64_t, std::uint32_t>> want;
  for (std::uint64_t j = 0; j <= 7; ++j) {
    if (pascal[j] != 0) want.emplace_back(j, static_cast<std::uint32_t>(pascal[j]));
  }
  EXPECT_EQ(row, want);
}

TEST(Family, Examples) {
  const auto f = Field::make(5, 1, 2);
  const auto c1 = f.gen_x();
  const auto form1 = classify_admissible_form(f, add(f, UniPoly::monomial(c1, 5), parse_poly(f, "X^4 + X")));
  ASSERT_TRUE(form1.has_value());
  EXPECT_EQ(form1->tag, FormTag::kFormI);
  EXPECT_EQ(form1->d, 4u);
  EXPECT_EQ(form1->parts.at(1), UniPoly::constant(c1));
  EXPECT_EQ(form1->parts.at(0), parse_poly(f, "X^4 + X"));

  const auto f7 = Field::make(7, 1, 1);
  const auto form2 = classify_admissible_form(f7, parse_poly(f7, "X^8 + X^4 + 3"));
  ASSERT_TRUE(form2.has_value());
  EXPECT_EQ(form2->tag, FormTag::kFormII);
  EXPECT_EQ(form2->nu, 1u);
  EXPECT_EQ(form2->d, 4u);
  EXPECT_EQ(form2->big_d, 8u);

  const auto f2 = Field::make(2, 1, 3);
  EXPECT_FALSE(classify_admissible_form(f2, parse_poly(f2, "X^2 + X^3")).has_value());
  // g_1 too large relative to g_0.
  EXPECT_FALSE(classify_admissible_form(f7, parse_poly(f7, "X^9 + X^3")).has_value());
}

TEST(Family, FormThreeNeedsPermutation) {
  const auto f = Field::make(5, 1, 2);
  const LinearisedPoly frob{LinKind::kP, {f.zero(), f.one()}};
  const auto ok = classify_admissible_form(f, parse_poly(f, "X^3 + 1"), frob);
  ASSERT_TRUE(ok.has_value());
  EXPECT_EQ(ok->tag, FormTag::kFormIII);
  EXPECT_EQ(ok->big_d, 3u);
  // X^5 - X kills F_5.
  const LinearisedPoly singular{LinKind::kP, {f.scalar(-1), f.one()}};
  EXPECT_FALSE(classify_admissible_form(f, parse_poly(f, "X^3 + 1"), singular).has_value());
}

}  // namespace
}  // namespace ffslab
