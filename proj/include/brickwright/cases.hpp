#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "brickwright/arith.hpp"
#include "brickwright/pairs.hpp"
#include "brickwright/search.hpp"

namespace brickwright {

struct DivisorTriple {
  Int d_g;  // g + f
  Int d_b;  // d + b
  Int d_c;  // e + c
  Int side_a;
  friend bool operator==(const DivisorTriple&, const DivisorTriple&) = default;
};

struct GeneralCaseSides {
  Int lhs;  // (a^2/d_g)^2 + 2a^2 + d_g^2 = 4 g^2
  Int rhs;  // (a^2/d_b)^2 + d_b^2 + (a^2/d_c)^2 + d_c^2 = 4 (a^2 + b^2 + c^2)
  friend bool operator==(const GeneralCaseSides&, const GeneralCaseSides&) = default;
};

/// Both sides of the divisor identity relating the space-diagonal pair to the
/// two leg pairs of side a. Equal exactly when g^2 = a^2 + b^2 + c^2.
inline GeneralCaseSides general_case_sides(Int a, const DivisorTriple& triple) {
  if (a < 1) throw std::invalid_argument("general_case_sides: positive side required");
  if (triple.side_a != a) throw std::invalid_argument("general_case_sides: triple belongs to another side");
  const Int a2 = square(a);
  for (Int d : {triple.d_g, triple.d_b, triple.d_c}) {
    if (d < 1 || a2 % d != 0) throw std::invalid_argument("general_case_sides: " + d.to_string() + " is not a divisor of a^2");
  }
  const auto term = [&](Int d) { return square(a2 / d) + square(d); };
  return {term(triple.d_g) + 2 * a2, term(triple.d_b) + term(triple.d_c)};
}

enum class EliminationReason {
  NonzeroContradictionPolynomial,
  NotPerfectSquare,
  ZeroLeg,
  DiagonalEqualsLeg,
  ParityFailure,
  UnitPairExcluded,  // (1, a^2) as a leg pair forces b >= f
  EqualLegPairs,     // b and c from the same pair forces f^2 = 2 c^2
};

inline const char* to_string(EliminationReason r) {
  switch (r) {
    case EliminationReason::NonzeroContradictionPolynomial: return "NonzeroContradictionPolynomial";
    case EliminationReason::NotPerfectSquare: return "NotPerfectSquare";
    case EliminationReason::ZeroLeg: return "ZeroLeg";
    case EliminationReason::DiagonalEqualsLeg: return "DiagonalEqualsLeg";
    case EliminationReason::ParityFailure: return "ParityFailure";
    case EliminationReason::UnitPairExcluded: return "UnitPairExcluded";
    case EliminationReason::EqualLegPairs: return "EqualLegPairs";
  }
  return "?";
}

struct Witness {
  std::string name;
  Int value;
  friend bool operator==(const Witness&, const Witness&) = default;
};

struct BranchElimination {
  std::string branch_label;
  std::vector<Witness> witness_values;
  EliminationReason reason;

  std::optional<Int> witness(std::string_view name) const {
    for (const auto& w : witness_values)
      if (w.name == name) return w.value;
    return std::nullopt;
  }
  friend bool operator==(const BranchElimination&, const BranchElimination&) = default;
};

/// A branch whose identity held. Legs are given doubled so half-integers show.
struct SurvivingBranch {
  std::string branch_label;
  Int a, two_b, two_c;
  friend bool operator==(const SurvivingBranch&, const SurvivingBranch&) = default;
};

struct CaseResult {
  std::vector<BranchElimination> eliminated;
  std::vector<SurvivingBranch> survivors;
};

enum class Verdict { AllEliminated, CounterexampleFound };

inline const char* to_string(Verdict v) { return v == Verdict::AllEliminated ? "AllEliminated" : "CounterexampleFound"; }

struct ProofTrace {
  Int p, q;  // p = 1 for a prime side q
  std::vector<BranchElimination> branches;
  Verdict verdict = Verdict::AllEliminated;
  std::optional<BoxReport> counterexample;
  friend bool operator==(const ProofTrace&, const ProofTrace&) = default;
};

/// (p^2 - 1)(q^2 - 1); zero only when p or q is 1.
inline Int case1_contradiction_value(Int p, Int q) { return (square(p) - 1) * (square(q) - 1); }

/// p^2 (q^4 - q^2 - 1) + q^4 + q^2 - 1, the (1, p^2 q^2) space-diagonal residue.
inline Int case2_unit_pair_witness(Int p, Int q) {
  const Int q2 = square(q), q4 = square(q2);
  return square(p) * (q4 - q2 - 1) + q4 + q2 - 1;
}

/// (p^2 - q^2)(p^2 - 1), the (p, pq^2) space-diagonal residue.
inline Int case2_p_pair_witness(Int p, Int q) { return (square(p) - square(q)) * (square(p) - 1); }

namespace detail {

inline void require_case_primes(Int p, Int q, const char* what) { require_distinct_primes(p, q, what); }

// Shared tail of a branch whose space-diagonal pair is admissible: compare
// 4 g^2 against 4 (a^2 + b^2 + c^2) and classify.
inline void settle_branch(CaseResult& out, std::string label, std::vector<Witness> witnesses, Int a, Int two_b,
                          Int two_c, const FactorPair& g_pair, Int lhs, Int rhs) {
  witnesses.push_back({"lhs", lhs});
  witnesses.push_back({"rhs", rhs});
  witnesses.push_back({"difference", lhs - rhs});
  if (lhs != rhs) {
    out.eliminated.push_back({std::move(label), std::move(witnesses), EliminationReason::NonzeroContradictionPolynomial});
    return;
  }
  const bool integral = two_b.is_even() && two_c.is_even() && g_pair.s.is_even() == g_pair.t.is_even();
  if (!integral) {
    out.eliminated.push_back({std::move(label), std::move(witnesses), EliminationReason::ParityFailure});
    return;
  }
  out.survivors.push_back({std::move(label), a, two_b, two_c});
}

inline void leg_parity_branch(CaseResult& out, const std::string& label, const FactorPair& pb, const FactorPair& pc) {
  if (leg_from_pair(pb) && leg_from_pair(pc)) return;
  out.eliminated.push_back({label,
                            {{"pair_b_s", pb.s}, {"pair_b_t", pb.t}, {"pair_c_s", pc.s}, {"pair_c_t", pc.t},
                             {"two_b", pb.t - pb.s}, {"two_c", pc.t - pc.s}},
                            EliminationReason::ParityFailure});
}

}  // namespace detail

/// Case 1: (d - b, d + b) = (p, pq^2), (e - c, e + c) = (q, p^2 q). Walks every
/// divisor d_g = g + f of a^2 and checks the general-case identity.
inline CaseResult case1_solve(Int p, Int q) {
  detail::require_case_primes(p, q, "case1_solve");
  const Int a = p * q, a2 = square(a);
  const Int p2 = square(p), q2 = square(q);
  const FactorPair pair_b{p, p * q2}, pair_c{q, p2 * q};
  const Int d_b = p * q2, d_c = p2 * q;
  const Int two_b = pair_b.t - pair_b.s, two_c = pair_c.t - pair_c.s;

  CaseResult out;
  detail::leg_parity_branch(out, "Case1/legs", pair_b, pair_c);

  const std::pair<const char*, Int> candidates[] = {
      {"p^2*q^2", p2 * q2}, {"p*q^2", p * q2}, {"p*q", p * q}, {"p^2*q", p2 * q}, {"p^2", p2}, {"q^2", q2},
  };
  for (const auto& [name, d_g] : candidates) {
    std::string label = std::string("Case1/d_g=") + name;
    if (d_g == d_b || d_g == d_c) {
      out.eliminated.push_back({std::move(label),
                                {{"d_g", d_g}, {"equal_leg_divisor", d_g == d_b ? d_b : d_c}},
                                EliminationReason::DiagonalEqualsLeg});
      continue;
    }
    if (d_g == a) {
      out.eliminated.push_back(
          {std::move(label), {{"g_minus_f", a2 / d_g}, {"g_plus_f", d_g}, {"two_f", Int{0}}}, EliminationReason::ZeroLeg});
      continue;
    }
    const auto sides = general_case_sides(a, {d_g, d_b, d_c, a});
    detail::settle_branch(out, std::move(label),
                          {{"d_g", d_g}, {"d_b", d_b}, {"d_c", d_c}, {"contradiction_value", case1_contradiction_value(p, q)}},
                          a, two_b, two_c, FactorPair{a2 / d_g, d_g}, sides.lhs, sides.rhs);
  }
  return out;
}

/// Case 2: (d - b, d + b) = (min(p^2, q^2), max(p^2, q^2)) with
/// c = q (p^2 - 1) / 2, i.e. (e - c, e + c) = (q, p^2 q). Argument order
/// matters; the p <-> q image is case2_solve(q, p).
inline CaseResult case2_solve(Int p, Int q) {
  detail::require_case_primes(p, q, "case2_solve");
  const Int a = p * q, a2 = square(a);
  const Int p2 = square(p), q2 = square(q);
  const FactorPair pair_b{std::min(p2, q2), std::max(p2, q2)}, pair_c{q, p2 * q};
  const Int two_b = abs(p2 - q2), two_c = q * (p2 - 1);
  const Int four_diag = 4 * a2 + square(two_b) + square(two_c);  // 4 (a^2 + b^2 + c^2)

  CaseResult out;
  detail::leg_parity_branch(out, "Case2/legs", pair_b, pair_c);

  const std::pair<const char*, FactorPair> candidates[] = {
      {"(1,p^2*q^2)", {1, a2}},   {"(p,p*q^2)", {p, p * q2}}, {"(p*q,p*q)", {a, a}},
      {"(q,p^2*q)", {q, p2 * q}}, {"(p^2,q^2)", pair_b},
  };
  for (const auto& [name, g_pair] : candidates) {
    std::string label = std::string("Case2/g-pair=") + name;
    if (g_pair == pair_b || g_pair == pair_c) {
      out.eliminated.push_back({std::move(label),
                                {{"g_minus_f", g_pair.s}, {"g_plus_f", g_pair.t}},
                                EliminationReason::DiagonalEqualsLeg});
      continue;
    }
    if (g_pair.s == g_pair.t) {
      out.eliminated.push_back(
          {std::move(label), {{"g_minus_f", g_pair.s}, {"g_plus_f", g_pair.t}, {"two_f", Int{0}}}, EliminationReason::ZeroLeg});
      continue;
    }
    std::vector<Witness> witnesses{{"g_minus_f", g_pair.s}, {"g_plus_f", g_pair.t}};
    if (g_pair.s == 1)
      witnesses.push_back({"polynomial", case2_unit_pair_witness(p, q)});
    else
      witnesses.push_back({"polynomial", case2_p_pair_witness(p, q)});
    detail::settle_branch(out, std::move(label), std::move(witnesses), a, two_b, two_c, g_pair,
                          square(g_pair.s + g_pair.t), four_diag);
  }
  return out;
}

/// Raised when a branch satisfies its identity without yielding a perfect box.
class UnresolvedBranch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void absorb(ProofTrace& trace, CaseResult result, const std::string& relabel_from = {},
                   const std::string& relabel_to = {}) {
  for (auto& b : result.eliminated) {
    if (!relabel_from.empty() && b.branch_label.starts_with(relabel_from))
      b.branch_label.replace(0, relabel_from.size(), relabel_to);
    trace.branches.push_back(std::move(b));
  }
  for (const auto& s : result.survivors) {
    // Survivors have integral legs and an integral space diagonal by construction.
    auto box = verify_box(s.a, s.two_b / 2, s.two_c / 2);
    if (box.classification != BoxClass::Perfect)
      throw UnresolvedBranch("branch " + s.branch_label + " satisfied the identity but (" + s.a.to_string() + ", " +
                             (s.two_b / 2).to_string() + ", " + (s.two_c / 2).to_string() +
                             ") is not a perfect box");
    trace.verdict = Verdict::CounterexampleFound;
    if (!trace.counterexample) trace.counterexample = box;
  }
}

}  // namespace detail

/// Runs the full elimination for side a = pq: the three leg-pair filters, then
/// Case 1 and both orientations of Case 2.
inline ProofTrace verify_semiprime_theorem(Int p, Int q) {
  if (!is_prime(p) || !is_prime(q) || p == q)
    throw std::invalid_argument("verify_semiprime_theorem: outside theorem scope (need distinct primes)");
  if (p > q) std::swap(p, q);
  if (p * q > kMaxSide) throw std::invalid_argument("verify_semiprime_theorem: p*q exceeds supported side");

  ProofTrace trace{p, q, {}, Verdict::AllEliminated, std::nullopt};
  const Int a = p * q;
  trace.branches.push_back({"Pairs/(p*q,p*q)", {{"s", a}, {"t", a}, {"leg", Int{0}}}, EliminationReason::ZeroLeg});
  {
    const FactorPair unit{1, square(a)};
    const auto leg = leg_from_pair(unit);
    std::vector<Witness> w{{"s", unit.s}, {"t", unit.t}};
    if (leg) {
      w.push_back({"leg", leg->leg});
      w.push_back({"hyp", leg->hyp});
    }
    trace.branches.push_back({"Pairs/(1,p^2*q^2)", std::move(w),
                              leg ? EliminationReason::UnitPairExcluded : EliminationReason::ParityFailure});
  }
  // Ordered selections (B, C) with B = C among the pairs that remain.
  const auto remaining = static_cast<std::int64_t>(semiprime_pair_menu(p, q).size()) - 2;
  trace.branches.push_back({"Pairs/b=c", {{"excluded_selections", Int{remaining}}}, EliminationReason::EqualLegPairs});

  for (const auto& assignment : admissible_leg_assignments(p, q)) {
    if (assignment.kind == CaseKind::Case1) {
      detail::absorb(trace, case1_solve(p, q));
    } else {
      detail::absorb(trace, case2_solve(p, q));
      detail::absorb(trace, case2_solve(q, p), "Case2/", "Case2[p<->q]/");
    }
  }
  return trace;
}

/// The prime-side corollary: the menu of p^2 is {(1, p^2), (p, p)} and neither
/// pair can carry a leg of a perfect box.
inline ProofTrace verify_prime_side(Int p) {
  if (!is_prime(p)) throw std::invalid_argument("verify_prime_side: composite input " + p.to_string());
  if (p > kMaxSide) throw std::invalid_argument("verify_prime_side: side exceeds supported range");
  ProofTrace trace{1, p, {}, Verdict::AllEliminated, std::nullopt};
  for (const auto& pair : divisor_pairs_of_square(p)) {
    std::vector<Witness> w{{"s", pair.s}, {"t", pair.t}};
    if (pair.s == pair.t) {
      w.push_back({"leg", Int{0}});
      trace.branches.push_back({"Prime/(p,p)", std::move(w), EliminationReason::ZeroLeg});
    } else if (auto leg = leg_from_pair(pair)) {
      w.push_back({"leg", leg->leg});
      w.push_back({"hyp", leg->hyp});
      trace.branches.push_back({"Prime/(1,p^2)", std::move(w), EliminationReason::UnitPairExcluded});
    } else {
      w.push_back({"two_leg", pair.t - pair.s});
      trace.branches.push_back({"Prime/(1,p^2)", std::move(w), EliminationReason::ParityFailure});
    }
  }
  return trace;
}

}  // namespace brickwright
