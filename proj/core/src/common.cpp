#include "mixcub/besov.hpp"
#include "mixcub/error.hpp"
#include "mixcub/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <vector>

namespace mixcub {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::overflow_guard: return "OverflowGuard";
    case Errc::range_guard: return "RangeGuard";
    case Errc::size_guard: return "SizeGuard";
    case Errc::cap_exceeded: return "CapExceeded";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::missing_exact_integral: return "MissingExactIntegral";
    case Errc::unsupported_exponent: return "UnsupportedExponent";
    case Errc::insufficient_cells: return "InsufficientCells";
    case Errc::vanishing_check_failed: return "VanishingCheckFailed";
    case Errc::degenerate_fit: return "DegenerateFit";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

i128 gcd128(i128 a, i128 b) noexcept {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string to_string(i128 v) {
  if (v < 0) return "-" + to_string(static_cast<u128>(-(v + 1)) + 1);
  return to_string(static_cast<u128>(v));
}

namespace {

constexpr i128 kInt64Max = std::numeric_limits<std::int64_t>::max();

std::int64_t narrow(i128 v) {
  if (v > kInt64Max || v < -kInt64Max) {
    throw Error(Errc::overflow_guard, "rational component " + to_string(v) + " exceeds 64 bits");
  }
  return static_cast<std::int64_t>(v);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

i128 parse_integer(std::string_view s) {
  s = trim(s);
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw Error(Errc::parse_error, "empty integer");
  i128 v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw Error(Errc::parse_error, "bad digit in '" + std::string(s) + "'");
    }
    v = v * 10 + (c - '0');
    if (v > kInt64Max) throw Error(Errc::overflow_guard, "integer too large");
  }
  return neg ? -v : v;
}

}  // namespace

Rational::Rational(i128 num, i128 den) {
  if (den == 0) throw Error(Errc::invalid_argument, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = narrow(num);
  den_ = narrow(den);
}

double Rational::to_double() const noexcept {
  const i128 q = floor_div(num_, den_);
  const i128 r = static_cast<i128>(num_) - q * den_;
  return static_cast<double>(q) + static_cast<double>(r) / static_cast<double>(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  const i128 g = gcd128(a.den_, b.den_);
  const i128 num = static_cast<i128>(a.num_) * (b.den_ / g) + static_cast<i128>(b.num_) * (a.den_ / g);
  return Rational(num, static_cast<i128>(a.den_ / g) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  const i128 g1 = gcd128(a.num_, b.den_);
  const i128 g2 = gcd128(b.num_, a.den_);
  const i128 n1 = g1 == 0 ? a.num_ : a.num_ / g1;
  const i128 d2 = g1 == 0 ? b.den_ : b.den_ / g1;
  const i128 n2 = g2 == 0 ? b.num_ : b.num_ / g2;
  const i128 d1 = g2 == 0 ? a.den_ : a.den_ / g2;
  return Rational(n1 * n2, d1 * d2);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw Error(Errc::invalid_argument, "division by zero");
  return a * Rational(static_cast<i128>(b.den_), static_cast<i128>(b.num_));
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw Error(Errc::parse_error, "empty rational");
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    return Rational(parse_integer(s.substr(0, slash)), parse_integer(s.substr(slash + 1)));
  }
  // Decimal with optional exponent, parsed exactly.
  std::int64_t exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    exponent = static_cast<std::int64_t>(parse_integer(s.substr(e + 1)));
    s = s.substr(0, e);
  }
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  i128 mantissa = 0;
  int frac_digits = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (char c : s) {
    if (c == '.' && !seen_point) {
      seen_point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw Error(Errc::parse_error, "bad rational literal '" + std::string(text) + "'");
    }
    seen_digit = true;
    mantissa = mantissa * 10 + (c - '0');
    if (seen_point) ++frac_digits;
    if (mantissa > (static_cast<i128>(1) << 100)) throw Error(Errc::overflow_guard, "decimal too long");
  }
  if (!seen_digit) throw Error(Errc::parse_error, "bad rational literal '" + std::string(text) + "'");
  std::int64_t scale = exponent - frac_digits;
  i128 num = neg ? -mantissa : mantissa;
  i128 den = 1;
  if (scale > 36 || scale < -36) throw Error(Errc::overflow_guard, "decimal exponent out of range");
  for (; scale > 0; --scale) num *= 10;
  for (; scale < 0; ++scale) den *= 10;
  return Rational(num, den);
}

BesovParams BesovParams::parse(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::string_view t = trim(item);
    if (t == "inf" || t == "infinity" || t == "Inf") {
      values.push_back(infinity);
      continue;
    }
    char* end = nullptr;
    const std::string tmp(t);
    const double v = std::strtod(tmp.c_str(), &end);
    if (tmp.empty() || end != tmp.c_str() + tmp.size()) {
      throw Error(Errc::parse_error, "bad Besov parameter '" + tmp + "'");
    }
    values.push_back(v);
  }
  if (values.size() != 3) throw Error(Errc::parse_error, "expected a,p,t but got '" + text + "'");
  BesovParams out{values[0], values[1], values[2]};
  if (!(out.alpha > 0) || !(out.p > 0) || !(out.theta > 0)) {
    throw Error(Errc::invalid_argument, "Besov parameters must be positive");
  }
  return out;
}

}  // namespace mixcub
