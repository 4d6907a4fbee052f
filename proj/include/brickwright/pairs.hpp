#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "brickwright/arith.hpp"

namespace brickwright {

/// Ordered factor pair (s, t) with s <= t. Holds (hyp - leg, hyp + leg).
struct FactorPair {
  Int s, t;

  FactorPair() = default;
  FactorPair(Int first, Int second) : s(first), t(second) {
    if (s > t) std::swap(s, t);
  }

  Int product() const { return s * t; }

  friend bool operator==(const FactorPair&, const FactorPair&) = default;
  friend auto operator<=>(const FactorPair&, const FactorPair&) = default;
};

struct LegSolution {
  Int leg;  // b (or c)
  Int hyp;  // d (or e)
  friend bool operator==(const LegSolution&, const LegSolution&) = default;
};

/// Every (s, t) with s <= t and s * t = a^2, sorted by s.
inline std::vector<FactorPair> divisor_pairs_of_square(Int a) {
  if (a < 1) throw std::invalid_argument("divisor_pairs_of_square: positive integer required");
  const Int n = square(a);
  std::vector<Int> divisors{1};
  for (const auto& [prime, exponent] : factorize(a).factors) {
    const std::size_t base = divisors.size();
    Int power = 1;
    for (int e = 1; e <= 2 * exponent; ++e) {
      power *= prime;
      for (std::size_t i = 0; i < base; ++i) divisors.push_back(divisors[i] * power);
    }
  }
  std::vector<FactorPair> out;
  for (Int d : divisors) {
    if (d <= a) out.emplace_back(d, n / d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// leg = (t - s) / 2, hyp = (t + s) / 2 when both are positive integers.
inline std::optional<LegSolution> leg_from_pair(const FactorPair& pair) {
  if (pair.t <= pair.s) return std::nullopt;
  if (pair.s.is_even() != pair.t.is_even()) return std::nullopt;
  return LegSolution{(pair.t - pair.s) / 2, (pair.t + pair.s) / 2};
}

namespace detail {

inline void require_distinct_primes(Int p, Int q, const char* what) {
  if (!is_prime(p) || !is_prime(q)) throw std::invalid_argument(std::string(what) + ": arguments must be primes");
  if (p == q) throw std::invalid_argument(std::string(what) + ": not semiprime-distinct (p = q)");
}

}  // namespace detail

// The five factor pairs of (pq)^2 written out by shape.
inline std::vector<FactorPair> semiprime_pair_menu(Int p, Int q) {
  detail::require_distinct_primes(p, q, "semiprime_pair_menu");
  const Int p2 = square(p), q2 = square(q);
  std::vector<FactorPair> menu{
      {1, p2 * q2}, {p, p * q2}, {p * q, p * q}, {q, p2 * q}, {std::min(p2, q2), std::max(p2, q2)},
  };
  std::sort(menu.begin(), menu.end());
  return menu;
}

enum class CaseKind { Case1, Case2 };

inline const char* to_string(CaseKind k) { return k == CaseKind::Case1 ? "Case1" : "Case2"; }

struct LegAssignment {
  CaseKind kind;
  FactorPair pair_b;  // (d - b, d + b)
  FactorPair pair_c;  // (e - c, e + c)
  friend bool operator==(const LegAssignment&, const LegAssignment&) = default;
};

namespace detail {

// Image of a pair of (pq)^2 under the relabeling p <-> q.
inline FactorPair swap_primes(const FactorPair& pair, Int p, Int q) {
  Int s = pair.s;
  int ep = 0, eq = 0;
  while (s % p == 0) {
    s /= p;
    ++ep;
  }
  while (s % q == 0) {
    s /= q;
    ++eq;
  }
  const Int image = pow(p, static_cast<unsigned>(eq)) * pow(q, static_cast<unsigned>(ep));
  return {image, pair.product() / image};
}

}  // namespace detail

/// Leg-pair selections that survive the equal-pair, (pq, pq) and (1, p^2 q^2)
/// filters, one representative per orbit under b <-> c and p <-> q.
/// The representative keeps pair_c = (q, p^2 q) with p < q, so the list is
/// Case 1 {(p, pq^2), (q, p^2 q)} then Case 2 {(p^2, q^2), (q, p^2 q)}.
inline std::vector<LegAssignment> admissible_leg_assignments(Int p, Int q) {
  detail::require_distinct_primes(p, q, "admissible_leg_assignments");
  if (p > q) std::swap(p, q);
  const auto menu = semiprime_pair_menu(p, q);
  const FactorPair zero_leg{p * q, p * q};
  const FactorPair unit{1, square(p * q)};
  const FactorPair q_pair{q, square(p) * q};
  const FactorPair square_pair{square(p), square(q)};

  struct Selection {
    FactorPair b, c;
    bool operator==(const Selection&) const = default;
  };
  std::vector<Selection> survivors;
  for (const auto& b : menu) {
    for (const auto& c : menu) {
      if (b == c) continue;
      if (b == zero_leg || c == zero_leg) continue;
      if (b == unit || c == unit) continue;
      survivors.push_back({b, c});
    }
  }

  std::vector<LegAssignment> out;
  std::vector<Selection> covered;
  for (const auto& sel : survivors) {
    if (std::find(covered.begin(), covered.end(), sel) != covered.end()) continue;
    const Selection swapped_pq{detail::swap_primes(sel.b, p, q), detail::swap_primes(sel.c, p, q)};
    const std::array<Selection, 4> orbit{
        sel, Selection{sel.c, sel.b}, swapped_pq, Selection{swapped_pq.c, swapped_pq.b}};
    covered.insert(covered.end(), orbit.begin(), orbit.end());
    auto rep = std::find_if(orbit.begin(), orbit.end(), [&](const Selection& s) { return s.c == q_pair; });
    if (rep == orbit.end()) throw std::logic_error("admissible_leg_assignments: orbit without (q, p^2 q)");
    const CaseKind kind = (rep->b == square_pair || rep->c == square_pair) ? CaseKind::Case2 : CaseKind::Case1;
    out.push_back({kind, rep->b, rep->c});
  }
  std::sort(out.begin(), out.end(), [](const LegAssignment& x, const LegAssignment& y) { return x.kind < y.kind; });
  return out;
}

}  // namespace brickwright
