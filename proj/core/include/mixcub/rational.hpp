#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace mixcub {

__extension__ using i128 = __int128;
__extension__ using u128 = unsigned __int128;

i128 gcd128(i128 a, i128 b) noexcept;
std::string to_string(i128 v);
std::string to_string(u128 v);

/// Floor division and non-negative remainder for a positive modulus.
inline i128 floor_div(i128 a, i128 b) noexcept {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
inline i128 mod_pos(i128 a, i128 m) noexcept {
  i128 r = a % m;
  return r < 0 ? r + m : r;
}

/// Exact rational with 64-bit numerator and positive 64-bit denominator, kept
/// in lowest terms. Arithmetic runs in 128 bits and throws overflow_guard when
/// the reduced result leaves the 64-bit range.
class Rational {
 public:
  constexpr Rational() noexcept = default;
  constexpr Rational(std::int64_t n) noexcept : num_(n), den_(1) {}  // NOLINT(implicit)
  Rational(i128 num, i128 den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept;
  bool is_integer() const noexcept { return den_ == 1; }

  /// Parses "p/q", an integer, or a finite decimal such as "0.125" exactly.
  static Rational parse(std::string_view text);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(-static_cast<i128>(num_), den_); }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    const i128 lhs = static_cast<i128>(a.num_) * b.den_;
    const i128 rhs = static_cast<i128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string str() const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace mixcub
