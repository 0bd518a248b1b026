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

#include "ffslab/waring.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <random>
#include <tuple>

#include "gtest/gtest.h"

namespace ffslab {
namespace {

AffineSubspace random_subspace(const Field& f, unsigned s, std::mt19937_64& rng) {
  for (;;) {
    std::vector<Element> basis;
    for (unsigned i = 0; i < s; ++i) basis.push_back(f.from_index(rng()));
    try {
      return make_subspace(f, f.from_index(rng()), basis);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDependentBasis) throw;
    }
  }
}

UniPoly random_poly(const Field& f, unsigned degree, std::mt19937_64& rng) {
  std::vector<Element> c(degree + 1);
  for (auto& x : c) x = f.from_index(rng());
  if (c.back().v == 0) c.back() = f.one();
  return UniPoly(std::move(c));
}

template <class Count>
bool all_positive(const std::vector<Count>& v) {
  return std::all_of(v.begin(), v.end(), [](const Count& c) { return c > 0; });
}

TEST(ValueMultiset, IdentityOnWholeField) {
  const auto f = Field::make(3, 1, 3);
  const auto mult = value_multiset(UniPoly::x(), whole_field(f));
  EXPECT_TRUE(std::all_of(mult.begin(), mult.end(), [](auto m) { return m == 1; }));
}

TEST(ValueMultiset, SquaresOverF3) {
  const auto f = Field::make(3, 1, 1);
  const auto mult = value_multiset(UniPoly::monomial(f.one(), 2), whole_field(f));
  EXPECT_EQ(mult, (ValueMultiset{1, 2, 0}));
}

TEST(WaringG, SquaresOverF3) {
  const auto f = Field::make(3, 1, 1);
  const auto res = waring_g(UniPoly::monomial(f.one(), 2), whole_field(f));
  ASSERT_TRUE(res.g.has_value());
  EXPECT_EQ(*res.g, 2u);
  EXPECT_EQ(res.sizes, (std::vector<std::uint64_t>{2, 3}));
}

TEST(WaringG, IdentityAndConstant) {
  const auto f = Field::make(2, 1, 5);
  EXPECT_EQ(waring_g(UniPoly::x(), whole_field(f)).g, 1u);
  const auto c = waring_g(UniPoly::constant(f.gen_x()), whole_field(f));
  EXPECT_FALSE(c.g.has_value());
  EXPECT_EQ(c.sizes, (std::vector<std::uint64_t>{1}));
}

TEST(RepCounts, SquaresOverF3) {
  const auto f = Field::make(3, 1, 1);
  const auto mult = value_multiset(UniPoly::monomial(f.one(), 2), whole_field(f));
  const auto n1 = rep_counts(f, mult, 1);
  for (std::size_t i = 0; i < mult.size(); ++i) EXPECT_TRUE(n1[i] == mult[i]);
  const auto n2 = rep_counts(f, mult, 2);
  EXPECT_TRUE(n2[2] == 4);
  EXPECT_TRUE(n2[0] == 1);
  EXPECT_TRUE(n2[1] == 4);
}

TEST(RepCounts, EquivalentToSumsetClosure) {
  std::mt19937_64 rng(12);
  const std::vector<std::tuple<std::uint32_t, unsigned, unsigned>> shapes = {
      {2, 1, 4}, {2, 1, 6}, {3, 1, 3}, {5, 1, 2}, {2, 2, 2}, {3, 2, 2}, {7, 1, 2}};
  for (const auto& [p, e, r] : shapes) {
    const auto f = Field::make(p, e, r);
    for (int trial = 0; trial < 10; ++trial) {
      const auto a = random_subspace(f, rng() % (r + 1), rng);
      const auto g = random_poly(f, 1 + rng() % 5, rng);
      const auto mult = value_multiset(g, a);
      const auto closure = sumset_closure(f, support(mult));
      const unsigned limit = closure.g.value_or(static_cast<unsigned>(std::min<std::uint64_t>(f.size(), 12)));
      for (unsigned k = 1; k <= limit; ++k) {
        const auto counts = rep_counts<boost::multiprecision::cpp_int>(f, mult, k);
        boost::multiprecision::cpp_int total = 0;
        for (const auto& c : counts) total += c;
        EXPECT_EQ(total, boost::multiprecision::pow(boost::multiprecision::cpp_int(a.size()), static_cast<int>(k)));
        EXPECT_EQ(all_positive(counts), closure.g && k >= *closure.g)
            << f.descriptor() << " k=" << k << " f=" << format(f, g) << " A=" << format(a);
      }
    }
  }
}

TEST(RepCounts, InfiniteClosureNeverCovers) {
  // Images inside a proper additive subgroup: X^2 + X over F_2^r lands in
  // the trace-zero hyperplane.
  const auto f = Field::make(2, 1, 5);
  const UniPoly g({f.zero(), f.one(), f.one()});
  const auto mult = value_multiset(g, whole_field(f));
  EXPECT_FALSE(sumset_closure(f, support(mult)).g.has_value());
  for (unsigned k = 1; k <= f.size(); ++k) {
    EXPECT_FALSE(all_positive(rep_counts<boost::multiprecision::cpp_int>(f, mult, k)));
  }
}

TEST(RepCounts, CharacterIdentity) {
  std::mt19937_64 rng(21);
  for (const auto& [p, e, r] : std::vector<std::tuple<std::uint32_t, unsigned, unsigned>>{
           {2, 1, 6}, {3, 1, 4}, {5, 1, 2}, {2, 2, 3}}) {
    const auto f = Field::make(p, e, r);
    const auto a = random_subspace(f, 2, rng);
    const auto g = random_poly(f, 4, rng);
    const auto mult = value_multiset(g, a);
    for (unsigned k = 1; k <= 3; ++k) {
      const auto exact = rep_counts(f, mult, k);
      const auto approx = rep_counts_via_characters(f, mult, k);
      for (std::size_t y = 0; y < exact.size(); ++y) {
        ASSERT_NEAR(approx[y], static_cast<double>(exact[y]), 1e-6) << f.descriptor() << " k=" << k;
      }
    }
  }
}

TEST(RepCounts, ThreadIndependent) {
  const auto f = Field::make(3, 1, 6);
  std::mt19937_64 rng(4);
  const auto mult = value_multiset(random_poly(f, 3, rng), random_subspace(f, 3, rng));
  set_thread_count(1);
  const auto one = rep_counts(f, mult, 3);
  set_thread_count(3);
  const auto three = rep_counts(f, mult, 3);
  set_thread_count(1);
  EXPECT_TRUE(one == three);
}

TEST(RepCounts, OverflowIsReported) {
  const auto f = Field::make(2, 1, 10);
  const auto mult = value_multiset(UniPoly::x(), whole_field(f));
  EXPECT_THROW(rep_counts<std::uint64_t>(f, mult, 7), Error);
}

TEST(WaringDigits, FullBlockWithZeroMatchesSubspace) {
  const auto f = Field::make(3, 1, 4);
  std::mt19937_64 rng(30);
  const auto dm = DigitMap::power_basis(f, 4);
  for (int trial = 0; trial < 6; ++trial) {
    const auto g = random_poly(f, 2 + trial % 3, rng);
    const auto rep = waring_G(g, dm, 26, Rational(1, 2), Rational(1), true);
    EXPECT_EQ(rep.s, 3u);
    const auto sub = waring_g(g, subspace_of_digits(f, dm.omega(), 3));
    EXPECT_EQ(rep.closure.g, sub.g);
    EXPECT_EQ(rep.closure.sizes, sub.sizes);
  }
}

TEST(WaringDigits, SquaresOfFirstDigits) {
  const auto f = Field::make(3, 1, 1);
  const auto dm = DigitMap::power_basis(f, 1);
  const auto rep = waring_G(UniPoly::monomial(f.one(), 2), dm, 2, Rational(1, 2), Rational(1));
  EXPECT_EQ(rep.s, 1u);
  // Both values are 1, so k-fold sums are the single residue k.
  EXPECT_FALSE(rep.closure.g.has_value());
  EXPECT_EQ(rep.closure.sizes, (std::vector<std::uint64_t>{1}));
}

TEST(WaringDigits, MonotoneInN) {
  const auto f = Field::make(2, 1, 7);
  std::mt19937_64 rng(70);
  const auto dm = DigitMap::power_basis(f, 7);
  for (int trial = 0; trial < 5; ++trial) {
    const auto g = random_poly(f, 3 + trial % 3, rng);
    unsigned previous = UINT32_MAX;
    for (std::uint64_t n = 1; n < 128; n += 9) {
      const auto rep = waring_G(g, dm, n, Rational(1, 2), Rational(1));
      const unsigned now = rep.closure.g.value_or(UINT32_MAX);
      EXPECT_LE(now, previous) << "N=" << n;
      previous = now;
    }
  }
}

TEST(WaringDigits, RequiresPrimeBase) {
  const auto f = Field::make(2, 2, 2);
  EXPECT_THROW(DigitMap::power_basis(f, 1), Error);
}

TEST(Threshold, SmallestK) {
  EXPECT_EQ(detail::smallest_k(1.0, 2.5), 5u);
  EXPECT_EQ(detail::smallest_k(1.0, 2.0), 5u);
  EXPECT_EQ(detail::smallest_k(1.0, 1.9), 4u);
  EXPECT_EQ(detail::smallest_k(2.0, -1.0), 3u);
  EXPECT_FALSE(detail::smallest_k(-0.5, 1.0).has_value());
}

TEST(Threshold, VacuousAtDeskScale) {
  const auto f = Field::make(2, 1, 10);
  std::mt19937_64 rng(1);
  const auto a = random_subspace(f, 6, rng);
  const auto rep = waring_report(UniPoly::monomial(f.one(), 3), a, Rational(1, 2), Rational(1));
  EXPECT_TRUE(rep.threshold.vacuous);
  EXPECT_FALSE(rep.threshold.k0.has_value());
  EXPECT_EQ(rep.threshold.D, 3u);
  const auto j = to_json(rep);
  for (const char* key : {"g", "sizes_per_k", "threshold_k0", "D", "vacuous"}) EXPECT_TRUE(j.contains(key)) << key;
}

}  // namespace
}  // namespace ffslab
