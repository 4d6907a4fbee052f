#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "brickwright/almostprime.hpp"
#include "oracles.hpp"

namespace bw = brickwright;
using bw::FactorPair;
using bw::Int;
using bw::OrientedPair;

TEST(PointwiseMultiply, Examples) {
  EXPECT_EQ(bw::pointwise_multiply({3, 3}, {25, 1}), (OrientedPair{75, 3}));
  EXPECT_EQ(bw::pointwise_multiply({3, 3}, {25, 1}).normalized(), (FactorPair{3, 75}));
  EXPECT_EQ(bw::pointwise_multiply({1, 9}, {5, 5}), (OrientedPair{5, 45}));
  EXPECT_THROW(bw::pointwise_multiply({1, 9}, {3, 3}), std::invalid_argument);
}

TEST(PairMenuK, SmallExamples) {
  EXPECT_EQ(bw::pair_menu_k({}), (std::vector<FactorPair>{{1, 1}}));
  const std::vector<Int> one{3};
  EXPECT_EQ(bw::pair_menu_k(one), (std::vector<FactorPair>{{1, 9}, {3, 3}}));
  const std::vector<Int> two{3, 5};
  EXPECT_EQ(bw::pair_menu_k(two), (std::vector<FactorPair>{{1, 225}, {3, 75}, {3, 75}, {5, 45}, {9, 25}, {15, 15}}));
  const std::vector<Int> repeated{3, 3}, composite{3, 4};
  EXPECT_THROW(bw::pair_menu_k(repeated), std::invalid_argument);
  EXPECT_THROW(bw::pair_menu_k(composite), std::invalid_argument);
}

TEST(PairMenuK, DistinctSetEqualsDivisorPairs) {
  const auto primes = oracle::primes_up_to(5000);
  int checked = 0;
  std::vector<Int> chosen;
  std::function<void(std::size_t, std::uint64_t)> walk = [&](std::size_t start, std::uint64_t product) {
    if (!chosen.empty()) {
      const auto menu = bw::pair_menu_k(chosen);
      std::size_t expected = 2;
      for (std::size_t i = 1; i < chosen.size(); ++i) expected *= 3;
      ASSERT_EQ(menu.size(), expected);
      std::vector<FactorPair> distinct(menu.begin(), menu.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      ASSERT_EQ(distinct, bw::divisor_pairs_of_square(Int(product)));
      ++checked;
    }
    if (chosen.size() == 4) return;
    for (std::size_t i = start; i < primes.size() && product * primes[i] <= 10'000; ++i) {
      chosen.push_back(Int(primes[i]));
      walk(i + 1, product * primes[i]);
      chosen.pop_back();
    }
  };
  walk(0, 1);
  EXPECT_GT(checked, 3000);
}

TEST(ReduceCase, MergesEqualExponents) {
  const std::vector<Int> primes{3, 5, 7};
  const std::vector<int> exps{0, 2, 0};
  const auto v = bw::PairExponentVector::make(primes, exps);
  const auto r = bw::reduce_case(v);
  ASSERT_EQ(r.slots.size(), 2u);
  EXPECT_EQ(r.slots[0].base, Int(21));
  EXPECT_EQ(r.slots[0].provenance, (std::vector<Int>{3, 7}));
  EXPECT_EQ(r.slots[1].base, Int(5));
  EXPECT_EQ(r.components(), v.components());
  EXPECT_EQ(r.components(), (OrientedPair{25, 441}));

  const std::vector<int> bad{0, 3, 1};
  EXPECT_THROW(bw::PairExponentVector::make(primes, bad), std::invalid_argument);
  const std::vector<int> short_exps{0, 1};
  EXPECT_THROW(bw::PairExponentVector::make(primes, short_exps), std::invalid_argument);
}

TEST(ReduceCase, Properties) {
  const std::vector<Int> primes{2, 3, 5, 7};
  for (int code = 0; code < 81; ++code) {
    std::vector<int> exps;
    for (int i = 0, c = code; i < 4; ++i, c /= 3) exps.push_back(c % 3);
    const auto v = bw::PairExponentVector::make(primes, exps);
    const auto r = bw::reduce_case(v);
    EXPECT_EQ(bw::reduce_case(r), r);
    EXPECT_EQ(r.components(), v.components());
    std::set<int> seen;
    std::size_t total_provenance = 0;
    for (const auto& s : r.slots) {
      EXPECT_TRUE(seen.insert(s.exponent).second);
      total_provenance += s.provenance.size();
    }
    EXPECT_EQ(total_provenance, 4u);
  }
}

namespace {

std::map<std::size_t, int> by_width(const std::vector<bw::CaseSystem>& systems) {
  std::map<std::size_t, int> out;
  for (const auto& s : systems) ++out[s.width()];
  return out;
}

}  // namespace

TEST(CaseSystems, CountsMatchOrbitOracle) {
  const std::size_t legs[] = {0, 2, 15, 38};
  const std::size_t systems[] = {0, 4, 138, 1246};
  for (int k = 1; k <= 4; ++k) {
    const auto lc = bw::canonical_leg_classes(k);
    const auto cs = bw::canonical_case_systems(k);
    EXPECT_EQ(lc.size(), legs[k - 1]) << k;
    EXPECT_EQ(cs.size(), systems[k - 1]) << k;
    EXPECT_EQ(by_width(lc), oracle::count_systems(k, false)) << k;
    EXPECT_EQ(by_width(cs), oracle::count_systems(k, true)) << k;
  }
  EXPECT_EQ(by_width(bw::canonical_case_systems(4)), (std::map<std::size_t, int>{{2, 4}, {3, 134}, {4, 1108}}));
}

TEST(CaseSystems, TwoPrimesGiveTheTwoSemiprimeCases) {
  const auto classes = bw::canonical_leg_classes(2);
  ASSERT_EQ(classes.size(), 2u);
  // Instantiate with (3, 5) in both prime orders and compare against the
  // admissible assignments as unordered leg-pair sets.
  const auto instantiate = [](const bw::CaseSystem& s, Int x, Int y) {
    std::set<FactorPair> out;
    for (std::size_t i = 0; i < 2; ++i) {
      OrientedPair pair{1, 1};
      const Int base[] = {x, y};
      for (std::size_t col = 0; col < s.width(); ++col) {
        Int b = 1;
        for (int idx : s.provenance[col]) b *= base[idx];
        pair.first *= bw::pow(b, static_cast<unsigned>(s.patterns[i][col]));
        pair.second *= bw::pow(b, static_cast<unsigned>(2 - s.patterns[i][col]));
      }
      out.insert(pair.normalized());
    }
    return out;
  };
  std::set<std::set<FactorPair>> expected;
  for (const auto& a : bw::admissible_leg_assignments(3, 5)) expected.insert({a.pair_b, a.pair_c});
  for (const auto& a : bw::admissible_leg_assignments(5, 3)) expected.insert({a.pair_b, a.pair_c});
  std::set<std::set<FactorPair>> got_any;
  for (const auto& c : classes) {
    const auto x = instantiate(c, 3, 5), y = instantiate(c, 5, 3);
    EXPECT_TRUE(expected.count(x) || expected.count(y));
    got_any.insert(expected.count(x) ? x : y);
  }
  EXPECT_EQ(got_any.size(), 2u);
}

TEST(CaseSystems, Bounds) {
  EXPECT_TRUE(bw::canonical_leg_classes(1).empty());
  EXPECT_TRUE(bw::canonical_case_systems(1).empty());
  EXPECT_THROW(bw::canonical_leg_classes(0), std::invalid_argument);
  EXPECT_THROW(bw::canonical_case_systems(5), std::invalid_argument);
}

TEST(RenderPattern, NamesPrimes) {
  EXPECT_EQ(bw::render_pattern({0, 1}, {{0}, {1}}), "(p2, p1^2*p2)");
  EXPECT_EQ(bw::render_pattern({2, 0}, {{0, 2}, {1}}), "((p1*p3)^2, p2^2)");
  EXPECT_EQ(bw::render_pattern({0, 0}, {{0}, {1}}), "(1, p1^2*p2^2)");
}
