#pragma once

#include <charconv>
#include <compare>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace brickwright {

__extension__ typedef __int128 int128_t;
__extension__ typedef unsigned __int128 uint128_t;

// Signed 128-bit integer whose arithmetic throws std::overflow_error instead
// of wrapping. Every quantity in the library (sides, squares, witnesses)
// flows through this type.
class Int {
 public:
  constexpr Int() = default;

  template <std::integral T>
    requires(!std::same_as<T, bool>)
  constexpr Int(T v) : v_(static_cast<int128_t>(v)) {
    if constexpr (std::is_unsigned_v<T> && sizeof(T) >= sizeof(int128_t)) {
      if (v > static_cast<T>(max().v_)) throw std::overflow_error("integer exceeds 127 bits");
    }
  }

  static constexpr Int max() { return from_raw(std::numeric_limits<int128_t>::max()); }
  static constexpr Int min() { return from_raw(std::numeric_limits<int128_t>::min()); }
  static constexpr Int from_raw(int128_t v) {
    Int r;
    r.v_ = v;
    return r;
  }
  constexpr int128_t raw() const { return v_; }

  friend Int operator+(Int a, Int b) {
    int128_t r;
    if (__builtin_add_overflow(a.v_, b.v_, &r)) throw std::overflow_error("overflow in addition");
    return from_raw(r);
  }
  friend Int operator-(Int a, Int b) {
    int128_t r;
    if (__builtin_sub_overflow(a.v_, b.v_, &r)) throw std::overflow_error("overflow in subtraction");
    return from_raw(r);
  }
  friend Int operator*(Int a, Int b) {
    int128_t r;
    if (__builtin_mul_overflow(a.v_, b.v_, &r)) throw std::overflow_error("overflow in multiplication");
    return from_raw(r);
  }
  friend Int operator/(Int a, Int b) {
    if (b.v_ == 0) throw std::domain_error("division by zero");
    if (a == min() && b.v_ == -1) throw std::overflow_error("overflow in division");
    return from_raw(a.v_ / b.v_);
  }
  friend Int operator%(Int a, Int b) {
    if (b.v_ == 0) throw std::domain_error("division by zero");
    if (b.v_ == -1) return Int{};
    return from_raw(a.v_ % b.v_);
  }
  Int operator-() const { return Int{} - *this; }

  Int& operator+=(Int o) { return *this = *this + o; }
  Int& operator-=(Int o) { return *this = *this - o; }
  Int& operator*=(Int o) { return *this = *this * o; }
  Int& operator/=(Int o) { return *this = *this / o; }
  Int& operator%=(Int o) { return *this = *this % o; }
  Int& operator++() { return *this += 1; }

  friend constexpr bool operator==(Int a, Int b) { return a.v_ == b.v_; }
  friend constexpr std::strong_ordering operator<=>(Int a, Int b) {
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (a.v_ > b.v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  constexpr bool is_even() const { return (v_ & 1) == 0; }
  constexpr bool is_negative() const { return v_ < 0; }
  constexpr bool fits_int64() const {
    return v_ >= std::numeric_limits<std::int64_t>::min() && v_ <= std::numeric_limits<std::int64_t>::max();
  }
  constexpr bool fits_uint64() const { return v_ >= 0 && v_ <= std::numeric_limits<std::uint64_t>::max(); }

  std::int64_t to_int64() const {
    if (!fits_int64()) throw std::overflow_error("value " + to_string() + " does not fit in 64 bits");
    return static_cast<std::int64_t>(v_);
  }
  std::uint64_t to_uint64() const {
    if (!fits_uint64()) throw std::overflow_error("value " + to_string() + " does not fit in unsigned 64 bits");
    return static_cast<std::uint64_t>(v_);
  }

  std::string to_string() const {
    if (v_ == 0) return "0";
    uint128_t mag = v_ < 0 ? uint128_t(0) - static_cast<uint128_t>(v_) : static_cast<uint128_t>(v_);
    std::string digits;
    while (mag != 0) {
      digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(mag % 10)));
      mag /= 10;
    }
    if (v_ < 0) digits.insert(digits.begin(), '-');
    return digits;
  }

  // Decimal with optional leading '-'; no whitespace, no '+'. Absent on
  // malformed text or when the value leaves the 127-bit range.
  static std::optional<Int> parse(std::string_view text) {
    bool negative = false;
    if (!text.empty() && text.front() == '-') {
      negative = true;
      text.remove_prefix(1);
    }
    if (text.empty()) return std::nullopt;
    uint128_t mag = 0;
    const uint128_t limit = static_cast<uint128_t>(std::numeric_limits<int128_t>::max()) + (negative ? 1 : 0);
    for (char ch : text) {
      if (ch < '0' || ch > '9') return std::nullopt;
      const unsigned digit = static_cast<unsigned>(ch - '0');
      if (mag > (limit - digit) / 10) return std::nullopt;
      mag = mag * 10 + digit;
    }
    if (negative) return from_raw(static_cast<int128_t>(uint128_t(0) - mag));
    return from_raw(static_cast<int128_t>(mag));
  }

  friend std::ostream& operator<<(std::ostream& os, Int v) { return os << v.to_string(); }

 private:
  int128_t v_ = 0;
};

inline Int square(Int x) { return x * x; }

inline Int abs(Int x) { return x.is_negative() ? -x : x; }

inline Int pow(Int base, unsigned exponent) {
  Int r = 1;
  while (exponent-- > 0) r *= base;
  return r;
}

inline Int gcd(Int a, Int b) {
  a = abs(a);
  b = abs(b);
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace brickwright
