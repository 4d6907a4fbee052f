#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "brickwright/arith.hpp"
#include "brickwright/pairs.hpp"

namespace brickwright {

/// Factor pair whose orientation is kept as produced.
struct OrientedPair {
  Int first, second;
  FactorPair normalized() const { return {first, second}; }
  friend bool operator==(const OrientedPair&, const OrientedPair&) = default;
};

inline OrientedPair pointwise_multiply(const OrientedPair& x, const OrientedPair& y) {
  if (gcd(x.first * x.second, y.first * y.second) != 1) throw std::invalid_argument("pointwise_multiply: non-coprime menus");
  return {x.first * y.first, x.second * y.second};
}

namespace detail {

inline void require_distinct_prime_list(std::span<const Int> primes, const char* what) {
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (!is_prime(primes[i])) throw std::invalid_argument(std::string(what) + ": " + primes[i].to_string() + " is not prime");
    for (std::size_t j = 0; j < i; ++j)
      if (primes[i] == primes[j]) throw std::invalid_argument(std::string(what) + ": repeated prime " + primes[i].to_string());
  }
}

}  // namespace detail

/// Factor pairs of (p1 ... pk)^2 built by pointwise multiplication of the
/// single-prime menus, with multiplicity; 2 * 3^(k-1) entries for k >= 1.
inline std::vector<FactorPair> pair_menu_k(std::span<const Int> primes) {
  detail::require_distinct_prime_list(primes, "pair_menu_k");
  std::vector<OrientedPair> menu{{1, 1}};
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const Int p = primes[i];
    std::vector<OrientedPair> base{{1, square(p)}, {p, p}};
    if (i > 0) base.push_back({square(p), 1});
    std::vector<OrientedPair> next;
    next.reserve(menu.size() * base.size());
    for (const auto& x : menu)
      for (const auto& y : base) next.push_back(pointwise_multiply(x, y));
    menu = std::move(next);
  }
  std::vector<FactorPair> out;
  out.reserve(menu.size());
  for (const auto& m : menu) out.push_back(m.normalized());
  std::sort(out.begin(), out.end());
  return out;
}

struct ExponentSlot {
  Int base;                     // a prime, or a product of merged primes
  int exponent = 0;             // in {0, 1, 2}
  std::vector<Int> provenance;  // original primes multiplied into base
  friend bool operator==(const ExponentSlot&, const ExponentSlot&) = default;
};

/// The pair (prod base_i^e_i, prod base_i^(2 - e_i)) of (prod base_i)^2.
struct PairExponentVector {
  std::vector<ExponentSlot> slots;

  static PairExponentVector make(std::span<const Int> primes, std::span<const int> exponents) {
    if (primes.size() != exponents.size())
      throw std::invalid_argument("PairExponentVector: primes and exponents differ in length");
    detail::require_distinct_prime_list(primes, "PairExponentVector");
    PairExponentVector v;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (exponents[i] < 0 || exponents[i] > 2) throw std::invalid_argument("PairExponentVector: exponent outside {0,1,2}");
      v.slots.push_back({primes[i], exponents[i], {primes[i]}});
    }
    return v;
  }

  OrientedPair components() const {
    OrientedPair r{1, 1};
    for (const auto& s : slots) {
      r.first *= pow(s.base, static_cast<unsigned>(s.exponent));
      r.second *= pow(s.base, static_cast<unsigned>(2 - s.exponent));
    }
    return r;
  }
  friend bool operator==(const PairExponentVector&, const PairExponentVector&) = default;
};

/// Merges slots with equal exponents (leftmost pair first) until all
/// exponents are distinct.
inline PairExponentVector reduce_case(PairExponentVector v) {
  for (;;) {
    bool merged = false;
    for (std::size_t i = 0; i < v.slots.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < v.slots.size(); ++j) {
        if (v.slots[i].exponent != v.slots[j].exponent) continue;
        auto& keep = v.slots[i];
        keep.base *= v.slots[j].base;
        keep.provenance.insert(keep.provenance.end(), v.slots[j].provenance.begin(), v.slots[j].provenance.end());
        v.slots.erase(v.slots.begin() + static_cast<std::ptrdiff_t>(j));
        merged = true;
        break;
      }
    }
    if (!merged) return v;
  }
}

// ---------------------------------------------------------------------------
// Case systems over k abstract primes.
//
// A pattern is the exponent vector of one component of a factor pair; the
// pattern e and its complement 2 - e denote the same unordered pair. A system
// lists the patterns of (d - b, d + b), (e - c, e + c) and optionally
// (g - f, g + f). Columns are primes; identical columns are merged (the joint
// form of reduce_case) and systems are identified up to prime relabeling,
// b <-> c, and complementing any pattern.

using ExponentPattern = std::vector<int>;

struct CaseSystem {
  std::vector<ExponentPattern> patterns;     // b, c[, g]; each of length width()
  std::vector<std::vector<int>> provenance;  // original prime indices per column
  std::size_t width() const { return patterns.empty() ? 0 : patterns.front().size(); }
  friend bool operator==(const CaseSystem&, const CaseSystem&) = default;
};

namespace detail {

inline ExponentPattern complement(const ExponentPattern& v) {
  ExponentPattern r(v.size());
  std::transform(v.begin(), v.end(), r.begin(), [](int e) { return 2 - e; });
  return r;
}

inline bool uniform(const ExponentPattern& v, int e) {
  return std::all_of(v.begin(), v.end(), [e](int x) { return x == e; });
}

inline bool same_pair(const ExponentPattern& x, const ExponentPattern& y) { return x == y || x == complement(y); }

struct Column {
  std::vector<int> exps;  // one entry per pattern
  std::vector<int> provenance;
};

inline std::vector<Column> columns_of(const std::vector<ExponentPattern>& patterns,
                                      const std::vector<std::vector<int>>& provenance) {
  std::vector<Column> cols;
  for (std::size_t i = 0; i < provenance.size(); ++i) {
    Column c{{}, provenance[i]};
    for (const auto& p : patterns) c.exps.push_back(p[i]);
    cols.push_back(std::move(c));
  }
  return cols;
}

inline CaseSystem from_columns(const std::vector<Column>& cols, std::size_t n_patterns) {
  CaseSystem s;
  s.patterns.assign(n_patterns, {});
  for (const auto& c : cols) {
    for (std::size_t i = 0; i < n_patterns; ++i) s.patterns[i].push_back(c.exps[i]);
    s.provenance.push_back(c.provenance);
  }
  return s;
}

inline std::vector<Column> merge_equal_columns(std::vector<Column> cols) {
  std::vector<Column> out;
  for (auto& c : cols) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Column& o) { return o.exps == c.exps; });
    if (it == out.end()) {
      out.push_back(std::move(c));
    } else {
      it->provenance.insert(it->provenance.end(), c.provenance.begin(), c.provenance.end());
    }
  }
  return out;
}

// Minimal sorted-column form over b <-> c swaps and pattern complements.
// Returns the key and the transformed system.
inline std::pair<std::vector<std::vector<int>>, CaseSystem> canonical_form(const CaseSystem& s) {
  const std::size_t n = s.patterns.size();
  std::vector<std::vector<int>> best_key;
  CaseSystem best;
  for (int swap = 0; swap < 2; ++swap) {
    for (unsigned flips = 0; flips < (1u << n); ++flips) {
      auto patterns = s.patterns;
      if (swap) std::swap(patterns[0], patterns[1]);
      for (std::size_t i = 0; i < n; ++i)
        if (flips & (1u << i)) patterns[i] = complement(patterns[i]);
      auto cols = columns_of(patterns, s.provenance);
      std::sort(cols.begin(), cols.end(), [](const Column& x, const Column& y) { return x.exps < y.exps; });
      std::vector<std::vector<int>> key;
      for (const auto& c : cols) key.push_back(c.exps);
      if (best_key.empty() || key < best_key) {
        best_key = std::move(key);
        best = from_columns(cols, n);
      }
    }
  }
  return {best_key, best};
}

inline std::vector<CaseSystem> enumerate_systems(int k, bool with_diagonal) {
  if (k < 1 || k > 4) throw std::invalid_argument("canonical_case_systems: k must be in 1..4");
  std::vector<ExponentPattern> all;
  const int total = [&] { int t = 1; for (int i = 0; i < k; ++i) t *= 3; return t; }();
  for (int code = 0; code < total; ++code) {
    ExponentPattern v(static_cast<std::size_t>(k));
    for (int i = k - 1, c = code; i >= 0; --i, c /= 3) v[static_cast<std::size_t>(i)] = c % 3;
    all.push_back(std::move(v));
  }
  // Leg patterns: not (1, N^2) in either orientation, not the zero leg.
  std::vector<ExponentPattern> legs;
  for (const auto& v : all)
    if (!uniform(v, 0) && !uniform(v, 1) && !uniform(v, 2)) legs.push_back(v);

  std::vector<std::vector<int>> identity_provenance;
  for (int i = 0; i < k; ++i) identity_provenance.push_back({i});

  std::map<std::vector<std::vector<int>>, CaseSystem> seen;
  auto consider = [&](std::vector<ExponentPattern> patterns) {
    auto cols = merge_equal_columns(columns_of(patterns, identity_provenance));
    auto [key, canon] = canonical_form(from_columns(cols, patterns.size()));
    seen.try_emplace(std::move(key), std::move(canon));
  };
  for (const auto& b : legs) {
    for (const auto& c : legs) {
      if (same_pair(b, c)) continue;
      if (!with_diagonal) {
        consider({b, c});
        continue;
      }
      for (const auto& g : all) {
        // Zero f, or a space diagonal equal to one of the face diagonals.
        if (uniform(g, 1) || same_pair(g, b) || same_pair(g, c)) continue;
        consider({b, c, g});
      }
    }
  }
  std::vector<CaseSystem> out;
  for (auto& [key, sys] : seen) out.push_back(std::move(sys));
  std::stable_sort(out.begin(), out.end(), [](const CaseSystem& x, const CaseSystem& y) { return x.width() < y.width(); });
  return out;
}

}  // namespace detail

/// Distinct (b, c) leg-pair patterns over k primes after the leg filters and
/// symmetry reduction. k = 1 gives none; k = 2 gives the two semiprime cases.
inline std::vector<CaseSystem> canonical_leg_classes(int k) { return detail::enumerate_systems(k, false); }

/// Distinct (b, c, g) pattern triples over k primes. Systems narrower than k
/// reduce to an already-enumerated smaller case.
inline std::vector<CaseSystem> canonical_case_systems(int k) { return detail::enumerate_systems(k, true); }

/// "(p1*p2^2 | p1*p2^0 ...)" style rendering of one pattern of a system.
inline std::string render_pattern(const ExponentPattern& pattern, const std::vector<std::vector<int>>& provenance) {
  const auto slot_name = [&](std::size_t i) {
    std::string name;
    for (int idx : provenance[i]) name += (name.empty() ? "p" : "*p") + std::to_string(idx + 1);
    return provenance[i].size() > 1 ? "(" + name + ")" : name;
  };
  const auto side = [&](bool first) {
    std::string term;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      const int e = first ? pattern[i] : 2 - pattern[i];
      if (e == 0) continue;
      if (!term.empty()) term += "*";
      term += slot_name(i) + (e == 2 ? "^2" : "");
    }
    return term.empty() ? std::string("1") : term;
  };
  return "(" + side(true) + ", " + side(false) + ")";
}

}  // namespace brickwright
