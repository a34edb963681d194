#include <cmath>

#include "doctest.h"
#include "gen.hpp"
#include "mixcub/error.hpp"
#include "mixcub/splines.hpp"

using namespace mixcub;
using namespace mixcub::splines;

namespace {

// closed forms on the integer pieces
double quadratic_bspline(double x) {
  if (x < 0 || x >= 3) return 0;
  if (x < 1) return x * x / 2;
  if (x < 2) return (-2 * x * x + 6 * x - 3) / 2;
  return (3 - x) * (3 - x) / 2;
}

double cubic_bspline(double x) {
  if (x < 0 || x >= 4) return 0;
  if (x < 1) return x * x * x / 6;
  if (x < 2) return (-3 * x * x * x + 12 * x * x - 12 * x + 4) / 6;
  if (x < 3) return (3 * x * x * x - 24 * x * x + 60 * x - 44) / 6;
  return (4 - x) * (4 - x) * (4 - x) / 6;
}

// The coefficient table written case by case.
double faber_oracle(const Integrand& f, int j1, int j2, std::int64_t m1, std::int64_t m2) {
  auto F = [&](double x, double y) {
    const double p[2] = {x, y};
    return f.real(Point(p, 2));
  };
  auto axis = [](int j, std::int64_t m, int which) {  // which: 0 left, 1 mid, 2 right
    const double h = std::ldexp(1.0, -j);
    return m * h + which * h / 2;
  };
  if (j1 < 0 && j2 < 0) return F(m1, m2);
  if (j1 < 0) {
    return -0.5 * (F(m1, axis(j2, m2, 0)) - 2 * F(m1, axis(j2, m2, 1)) + F(m1, axis(j2, m2, 2)));
  }
  if (j2 < 0) {
    return -0.5 * (F(axis(j1, m1, 0), m2) - 2 * F(axis(j1, m1, 1), m2) + F(axis(j1, m1, 2), m2));
  }
  double s = 0;
  const double w[3] = {1, -2, 1};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) s += w[a] * w[b] * F(axis(j1, m1, a), axis(j2, m2, b));
  }
  return 0.25 * s;
}

Integrand bump() {
  return Integrand::real_valued(2, [](Point x) { return x[0] * (1 - x[0]) * x[1] * (1 - x[1]); });
}

}  // namespace

TEST_SUITE("splines") {

TEST_CASE("B-spline values") {
  CHECK(eval_bspline(2, 1.0) == 1.0);
  CHECK(eval_bspline(3, 1.5) == doctest::Approx(0.75));
  CHECK(eval_bspline(1, 0.0) == 1.0);
  CHECK(eval_bspline(1, 1.0) == 0.0);
  for (int r = 1; r <= 6; ++r) {
    CHECK(eval_bspline(r, -0.1) == 0.0);
    CHECK(eval_bspline(r, r + 0.1) == 0.0);
    CHECK(eval_bspline(r, r) == 0.0);
  }
  CHECK(bspline_peak(2) == 1.0);
  CHECK(bspline_peak(3) == doctest::Approx(0.75));
  CHECK(bspline_peak(4) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("recursion matches closed forms") {
  for (double x = -0.5; x < 4.5; x += 0.0137) {
    CHECK(eval_bspline(3, x) == doctest::Approx(quadratic_bspline(x)).epsilon(1e-13));
    CHECK(eval_bspline(4, x) == doctest::Approx(cubic_bspline(x)).epsilon(1e-13));
  }
}

TEST_CASE("partition of unity and unit integral") {
  for (int r = 1; r <= 6; ++r) {
    for (double x = 0; x < 1; x += 0.031) {
      double s = 0;
      for (int j = -r; j <= r; ++j) s += eval_bspline(r, x - j);
      CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
    }
    // composite Simpson on each unit piece (exact for r <= 4)
    double integral = 0;
    const int steps = 200;
    for (int piece = 0; piece < r; ++piece) {
      for (int i = 0; i < steps; ++i) {
        const double a = piece + static_cast<double>(i) / steps, h = 1.0 / steps;
        const double right = (piece == r - 1 && i == steps - 1) ? eval_bspline(r, std::nextafter(a + h, 0.0)) : eval_bspline(r, a + h);
        integral += h / 6 * (eval_bspline(r, a) + 4 * eval_bspline(r, a + h / 2) + right);
      }
    }
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("tensor atoms") {
  BSplineAtom a{{0, 0}, {0, 0}, 2};
  const double x[2] = {1, 1};
  CHECK(eval_atom(a, Point(x, 2)) == 1.0);
  BSplineAtom b{{2, 1}, {1, 0}, 3};
  CHECK(atom_integral(b) == 0.125);
  // midpoint rule over the support box
  const int M = 400;
  double s = 0;
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      const double p[2] = {0.25 + 0.75 * (i + 0.5) / M, 1.5 * (j + 0.5) / M};
      s += eval_atom(b, Point(p, 2));
    }
  }
  CHECK(s * 0.75 * 1.5 / (M * M) == doctest::Approx(0.125).epsilon(1e-4));
  // zero on the grid 2^{-k} Z^2 outside the open support
  const double q[2] = {0.25, 0.5};
  CHECK(eval_atom(b, Point(q, 2)) == 0.0);
}

TEST_CASE("Faber coefficients of the bump") {
  const auto c = faber_decompose(bump(), 3);
  CHECK(c.at(0, 0, 0, 0) == doctest::Approx(1.0 / 16));
  for (int m1 = 0; m1 < 2; ++m1) {
    for (int m2 = 0; m2 < 2; ++m2) CHECK(c.at(-1, -1, m1, m2) == 0.0);
  }
}

TEST_CASE("coefficients agree with the case table") {
  testgen::Gen g(41);
  for (int t = 0; t < 4; ++t) {
    const auto f = g.smooth_function();
    const int J = 3;
    const auto c = faber_decompose(f, J);
    for (int j1 = -1; j1 <= J; ++j1) {
      for (int j2 = -1; j2 <= J; ++j2) {
        for (std::int64_t m1 = 0; m1 < faber_count(j1); ++m1) {
          for (std::int64_t m2 = 0; m2 < faber_count(j2); ++m2) {
            CHECK(c.at(j1, j2, m1, m2) == doctest::Approx(faber_oracle(f, j1, j2, m1, m2)).epsilon(1e-12));
          }
        }
      }
    }
  }
}

TEST_CASE("bilinear functions only have corner coefficients") {
  const auto f = Integrand::real_valued(2, [](Point x) { return 1 + 2 * x[0] - 3 * x[1] + 5 * x[0] * x[1]; });
  const auto c = faber_decompose(f, 4);
  c.for_each([](int j1, int j2, std::int64_t, std::int64_t, double v) {
    if (j1 >= 0 || j2 >= 0) CHECK(std::abs(v) < 1e-13);
  });
  const auto xy = faber_decompose(Integrand::real_valued(2, [](Point x) { return x[0] * x[1]; }), 0);
  for (double a = 0; a <= 1; a += 0.07) {
    for (double b = 0; b <= 1; b += 0.09) {
      const double p[2] = {a, b};
      CHECK(faber_reconstruct(xy, Point(p, 2)) == doctest::Approx(a * b).epsilon(1e-14));
    }
  }
}

TEST_CASE("interpolation on dyadic points of resolution J+1") {
  testgen::Gen g(43);
  for (int t = 0; t < 5; ++t) {
    const auto f = g.smooth_function();
    const int J = static_cast<int>(g.integer(0, 5));
    const auto c = faber_decompose(f, J);
    const std::int64_t n = std::int64_t{1} << (J + 1);
    for (std::int64_t i = 0; i <= n; ++i) {
      for (std::int64_t j = 0; j <= n; ++j) {
        const double p[2] = {static_cast<double>(i) / n, static_cast<double>(j) / n};
        CHECK(std::abs(faber_reconstruct(c, Point(p, 2)) - f.real(Point(p, 2))) <= 1e-12);
      }
    }
  }
  FaberCoefficients zero(2);
  zero.ensure_level(1, 0);
  const double p[2] = {0.3, 0.8};
  CHECK(faber_reconstruct(zero, Point(p, 2)) == 0.0);
}

TEST_CASE("integral of the expansion") {
  // exact for the bump interpolant limit; here compare with a fine midpoint rule of the interpolant
  const auto c = faber_decompose(bump(), 2);
  double s = 0;
  const int M = 512;
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      const double p[2] = {(i + 0.5) / M, (j + 0.5) / M};
      s += faber_reconstruct(c, Point(p, 2));
    }
  }
  CHECK(faber_integral(c) == doctest::Approx(s / (M * M)).epsilon(1e-5));
}

TEST_CASE("Faber sequence norm") {
  const BesovParams bp{1.5, 2, 3};
  FaberCoefficients one(3);
  one.ensure_level(0, 0)[0] = 1.0;
  CHECK(besov_norm_faber(one, bp) == doctest::Approx(1.0));
  for (int j1 = 0; j1 <= 3; ++j1) {
    for (int j2 = -1; j2 <= 3; ++j2) {
      for (const BesovParams q : {BesovParams{1.5, 2, 3}, BesovParams{0.7, 1, 1}, BesovParams{2, infinity, infinity}}) {
        FaberCoefficients c(3);
        const int level = j1 + std::max(j2, 0);
        c.ensure_level(j1, j2)[0] = std::exp2(-level * (q.alpha - q.inv_p()));
        CHECK(besov_norm_faber(c, q) == doctest::Approx(1.0).epsilon(1e-14));
      }
    }
  }
  testgen::Gen g(47);
  const auto f = faber_decompose(g.smooth_function(), 4);
  const auto h = faber_decompose(g.smooth_function(), 4);
  for (const BesovParams q : {BesovParams{1.5, 2, 2}, BesovParams{1, 0.5, 0.7}, BesovParams{2, infinity, 1}}) {
    FaberCoefficients scaled = f, sum = f;
    for (int j1 = -1; j1 <= 4; ++j1) {
      for (int j2 = -1; j2 <= 4; ++j2) {
        for (std::size_t i = 0; i < f.block(j1, j2).size(); ++i) {
          scaled.block(j1, j2)[i] *= -3.0;
          sum.block(j1, j2)[i] += h.block(j1, j2)[i];
        }
      }
    }
    CHECK(besov_norm_faber(scaled, q) == doctest::Approx(3.0 * besov_norm_faber(f, q)).epsilon(1e-14));
    const double K = std::exp2(std::max({1.0, q.inv_p(), q.inv_theta()}));
    CHECK(besov_norm_faber(sum, q) <= K * (besov_norm_faber(f, q) + besov_norm_faber(h, q)));
  }
}

TEST_CASE("B-spline sequence quasi-norm") {
  const BesovParams bp{1.5, 2, 2};
  std::vector<SplineTerm> one = {{{0, 0}, {0, 0}, 1.0}};
  CHECK(bspline_quasinorm(one, bp) == doctest::Approx(1.0));
  one[0].c = -2.5;
  CHECK(bspline_quasinorm(one, bp) == doctest::Approx(2.5));
  for (int k1 = 0; k1 <= 3; ++k1) {
    for (int k2 = 0; k2 <= 3; ++k2) {
      std::vector<SplineTerm> level;
      for (std::int64_t s = 0; s < (std::int64_t{1} << (k1 + k2)); ++s) level.push_back({{k1, k2}, {s, 0}, 1.0});
      for (double p : {1.0, 2.0, 3.0}) {
        const BesovParams q{1.25, p, p};
        CHECK(bspline_quasinorm(level, q) == doctest::Approx(std::exp2(1.25 * (k1 + k2))).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("stability check basic cases") {
  for (int r : {2, 3, 4}) {
    for (int k : {0, 2, 4}) {
      const std::int64_t n = shift_extent(r, k);
      std::vector<double> unit(static_cast<std::size_t>(n), 0.0);
      unit[static_cast<std::size_t>(r - 1)] = 1.0;  // shift 0, fully inside [0,1] when k >= 2
      const int kk[1] = {k};
      const auto inf = stability_check(r, kk, unit, infinity);
      CHECK(inf.rhs == 1.0);
      CHECK(inf.lhs <= bspline_peak(r));
      if (k >= 2) {
        CHECK(inf.lhs >= 0.95 * bspline_peak(r));
        const auto l1 = stability_check(r, kk, unit, 1.0);
        CHECK(l1.rhs == doctest::Approx(std::exp2(-k)));
        CHECK(l1.lhs == doctest::Approx(std::exp2(-k)).epsilon(1e-4));
      }
      std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
      const auto all = stability_check(r, kk, ones, infinity);
      CHECK(all.lhs == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(all.rhs == 1.0);
    }
  }
  const int k2[2] = {1, 2};
  const std::vector<double> ones(static_cast<std::size_t>(shift_extent(3, 1) * shift_extent(3, 2)), 1.0);
  CHECK(stability_check(3, k2, ones, infinity).lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(stability_check(3, k2, ones, 2.0).lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(stability_check(3, k2, std::vector<double>(3, 1.0), 2.0), Error);
}

TEST_CASE("stability check separable evaluation against direct summation") {
  testgen::Gen g(53);
  const int r = 3;
  const int k[2] = {1, 1};
  const std::int64_t n1 = shift_extent(r, 1), n2 = shift_extent(r, 1);
  std::vector<double> a(static_cast<std::size_t>(n1 * n2));
  for (double& v : a) v = g.real(-1, 1);
  // direct midpoint rule with the same 2^{k+6} resolution
  const int M = 128;
  double s2 = 0, smax = 0;
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      const double p[2] = {(i + 0.5) / M, (j + 0.5) / M};
      double gv = 0;
      for (std::int64_t s1 = 0; s1 < n1; ++s1) {
        for (std::int64_t t = 0; t < n2; ++t) {
          BSplineAtom atom{{1, 1}, {s1 - (r - 1), t - (r - 1)}, r};
          gv += a[static_cast<std::size_t>(s1 * n2 + t)] * eval_atom(atom, Point(p, 2));
        }
      }
      s2 += gv * gv;
      smax = std::max(smax, std::abs(gv));
    }
  }
  const double ps[2] = {2.0, infinity};
  const auto res = stability_check(r, k, a, std::span<const double>(ps, 2));
  CHECK(res[0].lhs == doctest::Approx(std::sqrt(s2 / (M * M))).epsilon(1e-12));
  CHECK(res[1].lhs == doctest::Approx(smax).epsilon(1e-12));
}

}  // TEST_SUITE
