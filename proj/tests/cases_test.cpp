#include <gtest/gtest.h>

#include <random>

#include "brickwright/cases.hpp"
#include "oracles.hpp"

namespace bw = brickwright;
using bw::EliminationReason;
using bw::Int;

namespace {

const bw::BranchElimination* find_branch(const std::vector<bw::BranchElimination>& branches, std::string_view label) {
  for (const auto& b : branches)
    if (b.branch_label == label) return &b;
  return nullptr;
}

std::vector<std::uint64_t> divisors_of_square(std::uint64_t a) {
  std::vector<std::uint64_t> out;
  for (auto [s, t] : oracle::naive_divisor_pairs(a)) {
    out.push_back(s);
    if (s != t) out.push_back(t);
  }
  return out;
}

}  // namespace

TEST(GeneralCase, Examples) {
  // Case 2 pairs for a = 15 with the (a, a) space pair.
  auto s = bw::general_case_sides(15, {15, 25, 45, 15});
  EXPECT_EQ(s.lhs, Int(900));
  EXPECT_EQ(s.rhs, Int(2756));

  // (44, 117, 240): rhs is 4 (a^2 + b^2 + c^2).
  s = bw::general_case_sides(44, {44, 242, 484, 44});
  EXPECT_EQ(s.rhs, Int(292900));
  EXPECT_EQ(s.rhs, 4 * Int(44 * 44 + 117 * 117 + 240 * 240));

  EXPECT_THROW(bw::general_case_sides(15, {7, 25, 45, 15}), std::invalid_argument);
  EXPECT_THROW(bw::general_case_sides(15, {15, 25, 45, 16}), std::invalid_argument);
  EXPECT_THROW(bw::general_case_sides(0, {1, 1, 1, 0}), std::invalid_argument);
}

TEST(GeneralCase, RandomInstancesMatchDoubledQuantities) {
  std::mt19937_64 rng(2024);
  int equal_seen = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t a = 1 + rng() % 5000;
    const auto divs = divisors_of_square(a);
    const auto pick = [&] { return divs[rng() % divs.size()]; };
    std::uint64_t d_g = pick(), d_b = pick(), d_c = pick();
    if (i % 4 == 0) {
      // Zero b and g + f = e + c (or its cofactor) forces equality.
      d_b = a;
      d_g = (i % 8 == 0) ? d_c : a * a / d_c;
    }
    using U = unsigned __int128;
    const U a2 = U(a) * a;
    const auto diff = [](U x, U y) { return x > y ? x - y : y - x; };
    const U two_b = diff(d_b, a2 / d_b), two_c = diff(d_c, a2 / d_c), two_g = a2 / d_g + d_g;
    const U four_sum = 4 * a2 + two_b * two_b + two_c * two_c;

    const auto sides = bw::general_case_sides(Int(a), {Int(d_g), Int(d_b), Int(d_c), Int(a)});
    ASSERT_EQ(sides.rhs.raw(), static_cast<bw::int128_t>(four_sum)) << a;
    ASSERT_EQ(sides.lhs.raw(), static_cast<bw::int128_t>(two_g * two_g)) << a;
    ASSERT_EQ(sides.lhs == sides.rhs, four_sum == two_g * two_g) << a;
    if (i % 4 == 0) {
      ASSERT_EQ(sides.lhs, sides.rhs);
    }
    if (sides.lhs == sides.rhs) ++equal_seen;
  }
  EXPECT_GE(equal_seen, 250);
}

TEST(Case1, ThreeFive) {
  const auto r = bw::case1_solve(3, 5);
  EXPECT_TRUE(r.survivors.empty());
  ASSERT_EQ(r.eliminated.size(), 6u);
  const auto* full = find_branch(r.eliminated, "Case1/d_g=p^2*q^2");
  ASSERT_TRUE(full);
  EXPECT_EQ(full->reason, EliminationReason::NonzeroContradictionPolynomial);
  EXPECT_EQ(full->witness("lhs"), Int(51076));
  EXPECT_EQ(full->witness("rhs"), Int(7684));
  EXPECT_EQ(full->witness("contradiction_value"), Int(192));
  EXPECT_EQ(find_branch(r.eliminated, "Case1/d_g=p^2")->witness("lhs"), Int(1156));
  EXPECT_EQ(find_branch(r.eliminated, "Case1/d_g=p*q")->reason, EliminationReason::ZeroLeg);
  EXPECT_EQ(find_branch(r.eliminated, "Case1/d_g=p*q^2")->reason, EliminationReason::DiagonalEqualsLeg);
  EXPECT_EQ(find_branch(r.eliminated, "Case1/d_g=p^2*q")->reason, EliminationReason::DiagonalEqualsLeg);
  // b = 36 and c = 20 are legs of 15.
  EXPECT_EQ(bw::leg_from_pair({3, 75})->leg, Int(36));
  EXPECT_EQ(bw::leg_from_pair({5, 45})->leg, Int(20));
}

TEST(Case1, ThreeSevenAllEliminated) {
  const auto r = bw::case1_solve(3, 7);
  EXPECT_TRUE(r.survivors.empty());
  EXPECT_EQ(bw::leg_from_pair({3, 147})->leg, Int(72));
  EXPECT_EQ(bw::leg_from_pair({7, 63})->leg, Int(28));
  for (const auto& b : r.eliminated) EXPECT_NE(b.reason, EliminationReason::ParityFailure) << b.branch_label;
}

TEST(Case1, EvenPrimeFailsOnParity) {
  const auto r = bw::case1_solve(2, 3);
  EXPECT_TRUE(r.survivors.empty());
  const auto* legs = find_branch(r.eliminated, "Case1/legs");
  ASSERT_TRUE(legs);
  EXPECT_EQ(legs->reason, EliminationReason::ParityFailure);
}

TEST(Case1, ContradictionValue) {
  EXPECT_EQ(bw::case1_contradiction_value(3, 5), Int(192));
  EXPECT_EQ(bw::case1_contradiction_value(2, 3), Int(24));
  EXPECT_EQ(bw::case1_contradiction_value(1, 7), Int(0));
}

TEST(Case2, ThreeFiveWitnesses) {
  const auto r = bw::case2_solve(3, 5);
  EXPECT_TRUE(r.survivors.empty());
  const auto* p_pair = find_branch(r.eliminated, "Case2/g-pair=(p,p*q^2)");
  const auto* unit = find_branch(r.eliminated, "Case2/g-pair=(1,p^2*q^2)");
  ASSERT_TRUE(p_pair && unit);
  EXPECT_EQ(p_pair->witness("polynomial"), Int(-128));
  EXPECT_EQ(unit->witness("polynomial"), Int(6040));
  EXPECT_EQ(p_pair->witness("rhs"), Int(2756));
  EXPECT_EQ(p_pair->witness("lhs"), Int(6084));
  EXPECT_EQ(p_pair->reason, EliminationReason::NonzeroContradictionPolynomial);
  EXPECT_EQ(find_branch(r.eliminated, "Case2/g-pair=(p*q,p*q)")->reason, EliminationReason::ZeroLeg);
  EXPECT_EQ(find_branch(r.eliminated, "Case2/g-pair=(q,p^2*q)")->reason, EliminationReason::DiagonalEqualsLeg);
  EXPECT_EQ(find_branch(r.eliminated, "Case2/g-pair=(p^2,q^2)")->reason, EliminationReason::DiagonalEqualsLeg);
}

TEST(Case2, WitnessValues) {
  EXPECT_EQ(bw::case2_unit_pair_witness(2, 3), Int(373));
  EXPECT_EQ(bw::case2_unit_pair_witness(3, 5), Int(6040));
  EXPECT_EQ(bw::case2_p_pair_witness(3, 5), Int(-128));
  EXPECT_EQ(bw::case2_p_pair_witness(5, 3), Int(384));
}

TEST(Case2, DifferencesFactorThroughWitnesses) {
  const auto primes = oracle::primes_up_to(97);
  for (auto pu : primes)
    for (auto qu : primes) {
      if (pu == qu) continue;
      const Int p(pu), q(qu), p2 = bw::square(p), q2 = bw::square(q);
      const auto r = bw::case2_solve(p, q);
      ASSERT_TRUE(r.survivors.empty());
      const auto* p_pair = find_branch(r.eliminated, "Case2/g-pair=(p,p*q^2)");
      const auto* unit = find_branch(r.eliminated, "Case2/g-pair=(1,p^2*q^2)");
      ASSERT_TRUE(p_pair && unit);
      EXPECT_EQ(p_pair->witness("difference"), -(q2 + 1) * bw::case2_p_pair_witness(p, q));
      EXPECT_EQ(unit->witness("difference"), (p2 - 1) * bw::case2_unit_pair_witness(p, q));
      // Substituted right-hand side p^4 + q^4 + p^4 q^2 + q^2.
      EXPECT_EQ(unit->witness("rhs"), bw::square(p2) + bw::square(q2) + bw::square(p2) * q2 + q2);
    }
}

TEST(Case1, DifferencesFactorThroughContradictionValue) {
  const auto primes = oracle::primes_up_to(97);
  for (std::size_t i = 0; i < primes.size(); ++i)
    for (std::size_t j = i + 1; j < primes.size(); ++j) {
      const Int p(primes[i]), q(primes[j]), p2 = bw::square(p), q2 = bw::square(q);
      const auto r = bw::case1_solve(p, q);
      ASSERT_TRUE(r.survivors.empty());
      const Int k = bw::case1_contradiction_value(p, q);
      const auto diff = [&](std::string_view label) { return find_branch(r.eliminated, label)->witness("difference"); };
      EXPECT_EQ(diff("Case1/d_g=p^2*q^2"), (p2 * q2 + 1) * k);
      EXPECT_EQ(diff("Case1/d_g=q^2"), -(p2 + q2) * k);
      EXPECT_EQ(diff("Case1/d_g=p^2"), -(p2 + q2) * k);
    }
}

TEST(Algebra, CaseOneAndCaseTwoIdentities) {
  const auto primes = oracle::primes_up_to(97);
  for (std::size_t i = 0; i < primes.size(); ++i)
    for (std::size_t j = i + 1; j < primes.size(); ++j) {
      const Int p(primes[i]), q(primes[j]), p2 = bw::square(p), q2 = bw::square(q);
      const Int p4 = bw::square(p2), q4 = bw::square(q2);
      EXPECT_EQ(p2 * q4 + p2 + p4 * q2 + q2, (p2 * q2 + 1) * (p2 + q2));
      EXPECT_EQ(p4 * q4 - p4 - q4 + 1, (p4 - 1) * (q4 - 1));
      EXPECT_EQ(q2 * bw::square(p2 - 1), q2 * (p4 - 2 * p2 + 1));
    }
}

TEST(Algebra, UnitPairWitnessPositive) {
  const auto primes = oracle::primes_up_to(2000);
  for (auto p : primes)
    for (auto q : primes) ASSERT_GT(bw::case2_unit_pair_witness(Int(p), Int(q)), 0) << p << ' ' << q;
}

TEST(Verify, ThreeFive) {
  const auto t = bw::verify_semiprime_theorem(5, 3);
  EXPECT_EQ(t.p, Int(3));
  EXPECT_EQ(t.q, Int(5));
  EXPECT_EQ(t.verdict, bw::Verdict::AllEliminated);
  EXPECT_FALSE(t.counterexample);
  EXPECT_EQ(find_branch(t.branches, "Pairs/(p*q,p*q)")->reason, EliminationReason::ZeroLeg);
  EXPECT_EQ(find_branch(t.branches, "Pairs/(1,p^2*q^2)")->reason, EliminationReason::UnitPairExcluded);
  EXPECT_EQ(find_branch(t.branches, "Pairs/b=c")->witness("excluded_selections"), Int(3));
  EXPECT_TRUE(find_branch(t.branches, "Case1/d_g=p^2*q^2"));
  EXPECT_TRUE(find_branch(t.branches, "Case2/g-pair=(p,p*q^2)"));
  EXPECT_TRUE(find_branch(t.branches, "Case2[p<->q]/g-pair=(p,p*q^2)"));
  EXPECT_EQ(find_branch(t.branches, "Case2[p<->q]/g-pair=(p,p*q^2)")->witness("polynomial"), Int(384));
}

TEST(Verify, EvenPrime) {
  const auto t = bw::verify_semiprime_theorem(2, 3);
  EXPECT_EQ(t.verdict, bw::Verdict::AllEliminated);
  EXPECT_EQ(find_branch(t.branches, "Pairs/(1,p^2*q^2)")->reason, EliminationReason::ParityFailure);
}

TEST(Verify, ScopeErrors) {
  EXPECT_THROW(bw::verify_semiprime_theorem(3, 3), std::invalid_argument);
  EXPECT_THROW(bw::verify_semiprime_theorem(4, 5), std::invalid_argument);
  EXPECT_THROW(bw::verify_semiprime_theorem(1, 5), std::invalid_argument);
}

TEST(Verify, AgreesWithOracleForSmallSemiprimes) {
  const auto primes = oracle::primes_up_to(1000);
  for (std::size_t i = 0; i < primes.size(); ++i)
    for (std::size_t j = i + 1; j < primes.size() && primes[i] * primes[j] <= 3000; ++j) {
      const auto t = bw::verify_semiprime_theorem(Int(primes[i]), Int(primes[j]));
      ASSERT_EQ(t.verdict, bw::Verdict::AllEliminated);
      for (const auto& box : oracle::naive_boxes(primes[i] * primes[j])) ASSERT_FALSE(box.perfect);
    }
  EXPECT_EQ(bw::verify_semiprime_theorem(13, 17).verdict, bw::Verdict::AllEliminated);
}

TEST(PrimeSide, Examples) {
  auto t = bw::verify_prime_side(3);
  EXPECT_EQ(t.p, Int(1));
  EXPECT_EQ(t.verdict, bw::Verdict::AllEliminated);
  ASSERT_EQ(t.branches.size(), 2u);
  EXPECT_EQ(t.branches[0].branch_label, "Prime/(1,p^2)");
  EXPECT_EQ(t.branches[0].reason, EliminationReason::UnitPairExcluded);
  EXPECT_EQ(t.branches[0].witness("leg"), Int(4));
  EXPECT_EQ(t.branches[1].reason, EliminationReason::ZeroLeg);

  t = bw::verify_prime_side(2);
  EXPECT_EQ(t.branches[0].reason, EliminationReason::ParityFailure);

  EXPECT_EQ(bw::verify_prime_side(97).verdict, bw::Verdict::AllEliminated);
  EXPECT_THROW(bw::verify_prime_side(91), std::invalid_argument);
  EXPECT_THROW(bw::verify_prime_side(1), std::invalid_argument);
}

TEST(Absorb, NonPerfectSurvivorIsUnresolved) {
  bw::ProofTrace trace{3, 5, {}, bw::Verdict::AllEliminated, std::nullopt};
  bw::CaseResult fake;
  fake.survivors.push_back({"Fake/branch", 3, 8, 24});
  EXPECT_THROW(bw::detail::absorb(trace, fake), bw::UnresolvedBranch);
}

TEST(Absorb, RelabelsPrefix) {
  bw::ProofTrace trace{3, 5, {}, bw::Verdict::AllEliminated, std::nullopt};
  bw::detail::absorb(trace, bw::case2_solve(5, 3), "Case2/", "Case2[p<->q]/");
  ASSERT_FALSE(trace.branches.empty());
  for (const auto& b : trace.branches) EXPECT_TRUE(b.branch_label.starts_with("Case2[p<->q]/")) << b.branch_label;
}
