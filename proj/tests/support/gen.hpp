#pragma once

// Small seeded generators for property tests.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "mixcub/cubature.hpp"
#include "mixcub/fourier.hpp"

namespace testgen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  // Sparse trigonometric polynomial with `terms` random frequencies in
  // [-K, K]^2 and coefficients in the unit square of C.
  mixcub::fourier::TrigPoly2 trig_poly(int terms, std::int64_t K) {
    mixcub::fourier::TrigPoly2 p;
    for (int i = 0; i < terms; ++i) {
      p.add(integer(-K, K), integer(-K, K), {real(-1, 1), real(-1, 1)});
    }
    return p;
  }

  // Same, but every other frequency is a dual vector of L(n) built from
  // random (u, v); without this almost no random frequency hits L(n).
  mixcub::fourier::TrigPoly2 trig_poly_hitting_dual(int n, int terms, std::int64_t K);

  // Smooth non-polynomial bivariate test function with random parameters.
  mixcub::Integrand smooth_function() {
    const double a = real(0.5, 2.0), b = real(-1.5, 1.5), c = real(0.0, 3.0), w = real(1.0, 4.0);
    return mixcub::Integrand::real_valued(2, [=](mixcub::Point x) {
      return a * std::exp(b * x[0] * x[1]) + std::sin(w * x[0] + c) * std::cos(c * x[1]) + x[1] * x[1] * x[1];
    });
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testgen

#include "mixcub/fiblattice.hpp"

inline mixcub::fourier::TrigPoly2 testgen::Gen::trig_poly_hitting_dual(int n, int terms, std::int64_t K) {
  mixcub::fourier::TrigPoly2 p;
  for (int i = 0; i < terms; ++i) {
    const std::complex<double> c{real(-1, 1), real(-1, 1)};
    if (i % 2 == 0 && n >= 3) {
      const auto k = mixcub::fiblattice::dual_representation(integer(-3, 3), integer(-3, 3), n);
      p.add(k.k1, k.k2, c);
    } else {
      p.add(integer(-K, K), integer(-K, K), c);
    }
  }
  return p;
}
