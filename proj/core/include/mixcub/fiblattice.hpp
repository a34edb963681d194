#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mixcub/rational.hpp"

/// Fibonacci numbers, the two-dimensional Fibonacci lattice and its dual
/// lattice L(n) = {k in Z^2 : k1 + b_{n-1} k2 = 0 mod b_n}.
///
/// All lattice and dual arithmetic is carried out in 128-bit integers;
/// floating point values are only produced at the boundary (as_float).
namespace mixcub::fiblattice {

inline constexpr int kMaxIndex = 80;
inline constexpr int kMaxZarembaIndex = 45;

/// b_0 = b_1 = 1, b_n = b_{n-1} + b_{n-2}. b_prev holds b_{n-1}, with the
/// convention b_{-1} = 0 for n = 0.
struct FibonacciIndex {
  int n = 0;
  u128 b = 1;
  u128 b_prev = 0;

  std::int64_t size() const noexcept { return static_cast<std::int64_t>(b); }
};

/// Throws overflow_guard for n > 80.
FibonacciIndex fibonacci(int n);

/// Lattice point mu of X_{b_n}: (mu / b_n, (mu b_{n-1} mod b_n) / b_n).
struct LatticePoint2 {
  std::int64_t mu = 0;
  Rational x;
  Rational y;
  std::array<double, 2> as_float{};
};

/// All b_n points in increasing mu. Requires n >= 1.
std::vector<LatticePoint2> fibonacci_lattice(int n);

struct DualVector {
  std::int64_t k1 = 0;
  std::int64_t k2 = 0;

  friend auto operator<=>(const DualVector&, const DualVector&) = default;
  bool is_zero() const noexcept { return k1 == 0 && k2 == 0; }
};

bool dual_membership(DualVector k, int n);

/// (u b_{n-2} - v b_{n-3}, u + 2v), which always lies in L(n). Requires n >= 3.
DualVector dual_representation(std::int64_t u, std::int64_t v, int n);

/// Inverse of dual_representation: solves the 2x2 integer system by Cramer's
/// rule (the matrix has determinant b_n). Empty when k is not in L(n).
std::optional<std::pair<std::int64_t, std::int64_t>> dual_coordinates(DualVector k, int n);

/// Calls visit(k1, k2) for every k in L(n) with |k1| <= k1_max, |k2| <= k2_max,
/// row-major in k2 then ascending k1. The zero vector is included.
template <class Visitor>
void for_each_dual_in_box(int n, std::int64_t k1_max, std::int64_t k2_max, Visitor&& visit);

/// Nonzero members of L(n) in the box [-K, K]^2, row-major in k2 then k1.
std::vector<DualVector> dual_enumerate(int n, std::int64_t K);

/// Rectangular variant of dual_enumerate; optionally keeps the zero vector.
std::vector<DualVector> dual_enumerate_box(int n, std::int64_t k1_max, std::int64_t k2_max,
                                           bool include_zero = false);

struct ZarembaResult {
  std::int64_t value = 0;
  DualVector witness;
  double ratio = 0.0;  // value / b_n
};

/// Minimum of max(1,|k1|) max(1,|k2|) over nonzero k in L(n). Scans
/// k2 = 1..b_n with the centered residue k1 in (-b_n/2, b_n/2]; the first
/// minimiser in scan order is the witness. Requires 3 <= n <= 45.
ZarembaResult zaremba_min_product(int n);

// ---------------------------------------------------------------------------

template <class Visitor>
void for_each_dual_in_box(int n, std::int64_t k1_max, std::int64_t k2_max, Visitor&& visit) {
  const FibonacciIndex fib = fibonacci(n);
  const i128 b = static_cast<i128>(fib.b);
  const i128 bp = static_cast<i128>(fib.b_prev);
  for (std::int64_t k2 = -k2_max; k2 <= k2_max; ++k2) {
    const i128 r = mod_pos(-bp * k2, b);
    // smallest k1 >= -k1_max with k1 = r (mod b)
    i128 k1 = r + b * floor_div(-static_cast<i128>(k1_max) - r + b - 1, b);
    for (; k1 <= k1_max; k1 += b) visit(static_cast<std::int64_t>(k1), k2);
  }
}

}  // namespace mixcub::fiblattice
