#include "mixcub/fiblattice.hpp"

#include <string>

#include "mixcub/error.hpp"

namespace mixcub::fiblattice {

FibonacciIndex fibonacci(int n) {
  if (n < 0) throw Error(Errc::range_guard, "Fibonacci index must be nonnegative");
  if (n > kMaxIndex) {
    throw Error(Errc::overflow_guard, "Fibonacci index " + std::to_string(n) + " exceeds " +
                                          std::to_string(kMaxIndex));
  }
  FibonacciIndex out;
  out.n = n;
  if (n == 0) return out;
  u128 prev = 1;  // b_0
  u128 cur = 1;   // b_1
  for (int i = 2; i <= n; ++i) {
    const u128 next = cur + prev;
    prev = cur;
    cur = next;
  }
  out.b = cur;
  out.b_prev = prev;
  return out;
}

std::vector<LatticePoint2> fibonacci_lattice(int n) {
  if (n < 1) throw Error(Errc::range_guard, "lattice index must be >= 1");
  const FibonacciIndex fib = fibonacci(n);
  const i128 b = static_cast<i128>(fib.b);
  const i128 bp = static_cast<i128>(fib.b_prev);
  std::vector<LatticePoint2> pts;
  pts.reserve(static_cast<std::size_t>(fib.b));
  for (i128 mu = 0; mu < b; ++mu) {
    LatticePoint2 p;
    p.mu = static_cast<std::int64_t>(mu);
    p.x = Rational(mu, b);
    p.y = Rational((mu * bp) % b, b);
    p.as_float = {p.x.to_double(), p.y.to_double()};
    pts.push_back(p);
  }
  return pts;
}

bool dual_membership(DualVector k, int n) {
  const FibonacciIndex fib = fibonacci(n);
  const i128 b = static_cast<i128>(fib.b);
  const i128 bp = static_cast<i128>(fib.b_prev);
  return (static_cast<i128>(k.k1) + bp * k.k2) % b == 0;
}

namespace {

// b_{n-2}, b_{n-3} for n >= 3.
std::pair<i128, i128> lower_pair(int n) {
  if (n < 3) throw Error(Errc::range_guard, "dual representation requires n >= 3");
  const FibonacciIndex f2 = fibonacci(n - 2);
  const FibonacciIndex f3 = fibonacci(n - 3);
  return {static_cast<i128>(f2.b), static_cast<i128>(f3.b)};
}

std::int64_t checked(i128 v) {
  constexpr i128 lim = static_cast<i128>(INT64_MAX);
  if (v > lim || v < -lim) throw Error(Errc::overflow_guard, "dual vector component exceeds 64 bits");
  return static_cast<std::int64_t>(v);
}

}  // namespace

DualVector dual_representation(std::int64_t u, std::int64_t v, int n) {
  const auto [b2, b3] = lower_pair(n);
  return {checked(u * b2 - v * b3), checked(static_cast<i128>(u) + 2 * static_cast<i128>(v))};
}

std::optional<std::pair<std::int64_t, std::int64_t>> dual_coordinates(DualVector k, int n) {
  const auto [b2, b3] = lower_pair(n);
  const i128 det = 2 * b2 + b3;  // = b_n
  const i128 u_num = 2 * static_cast<i128>(k.k1) + b3 * k.k2;
  const i128 v_num = b2 * k.k2 - k.k1;
  if (u_num % det != 0 || v_num % det != 0) return std::nullopt;
  return std::make_pair(checked(u_num / det), checked(v_num / det));
}

std::vector<DualVector> dual_enumerate_box(int n, std::int64_t k1_max, std::int64_t k2_max,
                                           bool include_zero) {
  if (k1_max < 0 || k2_max < 0) throw Error(Errc::invalid_argument, "box half-widths must be >= 0");
  std::vector<DualVector> out;
  for_each_dual_in_box(n, k1_max, k2_max, [&](std::int64_t k1, std::int64_t k2) {
    if (include_zero || k1 != 0 || k2 != 0) out.push_back({k1, k2});
  });
  return out;
}

std::vector<DualVector> dual_enumerate(int n, std::int64_t K) {
  if (K < 1) throw Error(Errc::invalid_argument, "box size K must be >= 1");
  return dual_enumerate_box(n, K, K, false);
}

ZarembaResult zaremba_min_product(int n) {
  if (n < 3 || n > kMaxZarembaIndex) {
    throw Error(Errc::range_guard, "Zaremba scan supports 3 <= n <= " +
                                       std::to_string(kMaxZarembaIndex) + ", got " + std::to_string(n));
  }
  const FibonacciIndex fib = fibonacci(n);
  const std::int64_t b = static_cast<std::int64_t>(fib.b);
  const std::int64_t bp = static_cast<std::int64_t>(fib.b_prev);
  const std::int64_t half = b / 2;

  ZarembaResult best;
  best.value = INT64_MAX;
  std::int64_t residue = 0;  // -bp * k2 mod b, updated incrementally
  for (std::int64_t k2 = 1; k2 <= b; ++k2) {
    if (k2 > best.value) break;  // every later product is at least k2
    residue -= bp;
    if (residue < 0) residue += b;
    const std::int64_t k1 = residue > half ? residue - b : residue;
    const std::int64_t a1 = k1 < 0 ? -k1 : k1;
    const std::int64_t prod = (a1 > 1 ? a1 : 1) * k2;
    if (prod < best.value) {
      best.value = prod;
      best.witness = {k1, k2};
    }
  }
  best.ratio = static_cast<double>(best.value) / static_cast<double>(b);
  return best;
}

}  // namespace mixcub::fiblattice
