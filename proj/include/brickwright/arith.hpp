#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "brickwright/integer.hpp"

namespace brickwright {

// Largest side accepted by the side-level operations. Legs of a side reach
// (a^2 - 1) / 2, so a^2 + b^2 + c^2 must stay below 2^127.
inline constexpr std::int64_t kMaxSide = 2147483647;

/// floor(sqrt(n)) by Newton iteration on integers.
inline Int isqrt(Int n) {
  if (n.is_negative()) throw std::domain_error("isqrt of negative value");
  if (n < 2) return n;
  // Start above the root: 2^ceil(bits/2).
  int bits = 0;
  for (uint128_t m = static_cast<uint128_t>(n.raw()); m != 0; m >>= 1) ++bits;
  Int x = Int::from_raw(int128_t(1) << ((bits + 1) / 2));
  for (;;) {
    Int next = (x + n / x) / 2;
    if (next >= x) return x;
    x = next;
  }
}

inline std::optional<Int> is_perfect_square(Int n) {
  if (n.is_negative()) throw std::domain_error("is_perfect_square of negative value");
  Int r = isqrt(n);
  if (r * r == n) return r;
  return std::nullopt;
}

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<uint128_t>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t r = 1;
  base %= m;
  while (exp != 0) {
    if (exp & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

}  // namespace detail

// Deterministic Miller-Rabin; the first twelve prime bases are exact for
// every n < 2^64.
inline bool is_prime(Int n) {
  if (n < 2) return false;
  const std::uint64_t v = n.to_uint64();
  static constexpr std::array<std::uint64_t, 12> bases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : bases) {
    if (v % p == 0) return v == p;
  }
  std::uint64_t d = v - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : bases) {
    std::uint64_t x = detail::powmod(a, d, v);
    if (x == 1 || x == v - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = detail::mulmod(x, x, v);
      if (x == v - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

struct PrimePower {
  Int prime;
  int exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  std::vector<PrimePower> factors;  // ascending by prime

  Int value() const {
    Int r = 1;
    for (const auto& f : factors) r *= pow(f.prime, static_cast<unsigned>(f.exponent));
    return r;
  }
  friend bool operator==(const Factorization&, const Factorization&) = default;
};

/// Trial division. Deterministic and complete; intended for desk-scale n.
inline Factorization factorize(Int n) {
  if (n < 1) throw std::invalid_argument("factorize: nonpositive input " + n.to_string());
  Factorization out;
  auto strip = [&](Int d) {
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    if (e > 0) out.factors.push_back({d, e});
  };
  strip(2);
  for (Int d = 3; d * d <= n; d += 2) strip(d);
  if (n > 1) out.factors.push_back({n, 1});
  return out;
}

namespace side {

struct Unit {
  friend bool operator==(const Unit&, const Unit&) = default;
};
struct Prime {
  Int p;
  friend bool operator==(const Prime&, const Prime&) = default;
};
struct Semiprime {
  Int p, q;  // p < q
  friend bool operator==(const Semiprime&, const Semiprime&) = default;
};
struct PrimeSquare {
  Int p;
  friend bool operator==(const PrimeSquare&, const PrimeSquare&) = default;
};
struct Composite {
  Factorization factors;
  friend bool operator==(const Composite&, const Composite&) = default;
};

}  // namespace side

using SideClass = std::variant<side::Unit, side::Prime, side::Semiprime, side::PrimeSquare, side::Composite>;

inline SideClass classify_side(Int n) {
  const Factorization f = factorize(n);
  const auto& fs = f.factors;
  if (fs.empty()) return side::Unit{};
  if (fs.size() == 1 && fs[0].exponent == 1) return side::Prime{fs[0].prime};
  if (fs.size() == 1 && fs[0].exponent == 2) return side::PrimeSquare{fs[0].prime};
  if (fs.size() == 2 && fs[0].exponent == 1 && fs[1].exponent == 1) return side::Semiprime{fs[0].prime, fs[1].prime};
  return side::Composite{f};
}

inline bool is_semiprime_distinct(Int n) { return std::holds_alternative<side::Semiprime>(classify_side(n)); }

}  // namespace brickwright
