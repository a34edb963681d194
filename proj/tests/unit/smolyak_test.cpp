#include <cmath>
#include <functional>
#include <set>

#include "doctest.h"
#include "gen.hpp"
#include "mixcub/error.hpp"
#include "mixcub/smolyak.hpp"

using namespace mixcub;
using namespace mixcub::smolyak;

namespace {

// Union of the generating grids, collected in a set of numerators over 2^m.
std::set<std::vector<std::int64_t>> brute_union(int d, int m, bool closed) {
  std::set<std::vector<std::int64_t>> pts;
  std::vector<int> k(static_cast<std::size_t>(d), 0);
  auto visit_k = [&]() {
    std::vector<std::int64_t> l(static_cast<std::size_t>(d), 0);
    while (true) {
      std::vector<std::int64_t> p(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) p[i] = l[i] << (m - k[i]);
      pts.insert(p);
      int i = d - 1;
      for (; i >= 0; --i) {
        const std::int64_t top = (std::int64_t{1} << k[i]) - (closed ? 0 : 1);
        if (++l[i] <= top) break;
        l[i] = 0;
      }
      if (i < 0) break;
    }
  };
  // all k with |k|_1 = m
  std::function<void(int, int)> rec = [&](int axis, int left) {
    if (axis == d - 1) {
      k[axis] = left;
      visit_k();
      return;
    }
    for (int v = 0; v <= left; ++v) {
      k[axis] = v;
      rec(axis + 1, left - v);
    }
  };
  rec(0, m);
  return pts;
}

}  // namespace

TEST_SUITE("smolyak") {

TEST_CASE("grid sizes") {
  const std::int64_t periodic[] = {1, 3, 8, 20, 48, 112, 256, 576, 1280, 2816, 6144, 13312, 28672, 61440, 131072};
  for (int m = 0; m <= 14; ++m) {
    CHECK(smolyak_grid_size(2, m) == periodic[m]);
    CHECK(static_cast<std::int64_t>(smolyak_grid(2, m).size()) == periodic[m]);
  }
  const std::int64_t closed[] = {4, 8, 17, 37, 81, 177, 385, 833, 1793, 3841, 8193, 17409, 36865};
  for (int m = 0; m <= 12; ++m) CHECK(smolyak_grid_size(2, m, Boundary::closed) == closed[m]);
  const std::int64_t three[] = {1, 4, 13, 38, 104, 272, 688};
  for (int m = 0; m <= 6; ++m) CHECK(static_cast<std::int64_t>(smolyak_grid(3, m).size()) == three[m]);
  CHECK_THROWS_AS(smolyak_grid(2, 30), Error);
}

TEST_CASE("grids equal the brute-force union") {
  for (int d = 1; d <= 3; ++d) {
    for (int m = 0; m <= (d == 3 ? 6 : 9); ++m) {
      for (bool closed : {false, true}) {
        const auto g = smolyak_grid(d, m, closed ? Boundary::closed : Boundary::periodic);
        std::set<std::vector<std::int64_t>> got;
        for (std::size_t i = 0; i < g.size(); ++i) {
          got.insert(std::vector<std::int64_t>(g.points.begin() + i * d, g.points.begin() + (i + 1) * d));
        }
        CHECK(got.size() == g.size());
        CHECK(got == brute_union(d, m, closed));
      }
    }
  }
}

TEST_CASE("small grids written out") {
  CHECK(smolyak_grid(2, 0).points == std::vector<std::int64_t>{0, 0});
  const auto g1 = smolyak_grid(2, 1);
  const auto nodes = g1.nodes();
  REQUIRE(nodes.size() == 3);
  std::set<std::pair<Rational, Rational>> pts;
  for (std::size_t i = 0; i < 3; ++i) pts.insert({nodes.point(i)[0], nodes.point(i)[1]});
  CHECK(pts == std::set<std::pair<Rational, Rational>>{{0, 0}, {Rational(1, 2), 0}, {0, Rational(1, 2)}});
  CHECK(g1.level_sets.size() == 2);
}

TEST_CASE("interpolation at grid nodes") {
  testgen::Gen g(83);
  for (int t = 0; t < 4; ++t) {
    const auto f = g.smooth_function();
    const int m = static_cast<int>(g.integer(0, 8));
    const auto s = smolyak_interpolate(f, m);
    const auto grid = smolyak_grid(2, m, Boundary::closed);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double x[2] = {std::ldexp(static_cast<double>(grid.points[2 * i]), -m),
                           std::ldexp(static_cast<double>(grid.points[2 * i + 1]), -m)};
      CHECK(std::abs(s.eval(Point(x, 2)) - f.real(Point(x, 2))) <= 1e-12);
    }
  }
}

TEST_CASE("bilinear functions are reproduced") {
  const auto f = Integrand::real_valued(2, [](Point x) { return 1 + 2 * x[0] - 3 * x[1] + 5 * x[0] * x[1]; });
  for (int m = 0; m <= 6; ++m) {
    const auto s = smolyak_interpolate(f, m);
    for (double a = 0; a <= 1; a += 0.13) {
      for (double b = 0; b <= 1; b += 0.17) {
        const double x[2] = {a, b};
        CHECK(s.eval(Point(x, 2)) == doctest::Approx(f.real(Point(x, 2))).epsilon(1e-13));
      }
    }
    CHECK(sampling_error(f, m, 1.0) < 1e-13);
  }
}

TEST_CASE("refinement keeps coarser coefficients") {
  testgen::Gen g(89);
  const auto f = g.smooth_function();
  const auto a = smolyak_interpolate(f, 5);
  const auto b = smolyak_interpolate(f, 6);
  for (int j1 = -1; j1 <= 4; ++j1) {
    for (int j2 = -1; j2 <= 4; ++j2) {
      if (!admissible(j1, j2, 5)) continue;
      CHECK(a.coeffs.block(j1, j2) == b.coeffs.block(j1, j2));
    }
  }
}

TEST_CASE("cubature weights") {
  testgen::Gen g(97);
  for (int m = 0; m <= 9; ++m) {
    const auto rule = smolyak_cubature(m);
    CHECK(rule.weight_sum() == doctest::Approx(1.0).epsilon(1e-14));
    const auto xy = Integrand::real_valued(2, [](Point x) { return x[0] * x[1]; });
    CHECK(std::abs(cubature::apply_rule(rule, xy) - 0.25) <= 1e-15);
    CHECK(rule.size() == static_cast<std::size_t>(smolyak_grid_size(2, m, Boundary::closed)));
    const auto f = g.smooth_function();
    CHECK(std::abs(cubature::apply_rule(rule, f) - smolyak_interpolate(f, m).integral()) <= 1e-12);
  }
}

TEST_CASE("periodic fold lands on G^2(m)") {
  for (int m = 0; m <= 9; ++m) {
    const auto rule = smolyak_cubature(m, Boundary::periodic);
    CHECK(rule.size() == static_cast<std::size_t>(smolyak_grid_size(2, m)));
    const auto grid = smolyak_grid(2, m).nodes();
    std::set<std::pair<Rational, Rational>> pts;
    for (std::size_t i = 0; i < grid.size(); ++i) pts.insert({grid.point(i)[0], grid.point(i)[1]});
    for (std::size_t i = 0; i < rule.size(); ++i) CHECK(pts.count({rule.exact_node(i)[0], rule.exact_node(i)[1]}) == 1);
    CHECK(rule.weight_sum() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("sampling error behaviour") {
  const auto bump = Integrand::real_valued(2, [](Point x) { return x[0] * (1 - x[0]) * x[1] * (1 - x[1]); });
  double prev = infinity;
  for (int m = 2; m <= 7; ++m) {
    const auto s = smolyak_interpolate(bump, m);
    const auto e = sampling_errors(s, bump);
    CHECK(e[0] <= e[1] + 1e-16);
    CHECK(e[1] <= e[2] + 1e-16);
    CHECK(e[2] < prev);
    prev = e[2];
    const double quad = std::abs(1.0 / 36 - cubature::apply_rule(smolyak_cubature(m), bump));
    CHECK(quad <= e[0] + 1e-12);
  }
  CHECK_THROWS_AS(sampling_error(bump, 2, 3.0), Error);
}

}  // TEST_SUITE
