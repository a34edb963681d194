#include <cmath>

#include "doctest.h"
#include "gen.hpp"
#include "mixcub/error.hpp"
#include "mixcub/fooling.hpp"
#include "mixcub/smolyak.hpp"

using namespace mixcub;
using namespace mixcub::fooling;

namespace {

// Tensor Gauss-Legendre (3 points per axis) on the dyadic grid of resolution
// `res`; exact for piecewise polynomials of degree <= 5 with dyadic breaks.
double dense_integral(const WitnessFunction& w, int res) {
  const double g[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  const double gw[3] = {5.0 / 9, 8.0 / 9, 5.0 / 9};
  const std::int64_t n = std::int64_t{1} << res;
  const double h = 1.0 / static_cast<double>(n);
  double total = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          const double x[2] = {(i + 0.5 + 0.5 * g[a]) * h, (j + 0.5 + 0.5 * g[b]) * h};
          total += gw[a] * gw[b] * w.eval(Point(x, 2));
        }
      }
    }
  }
  return total * h * h / 4;
}

int finest(const WitnessFunction& w) {
  int top = 0;
  for (const auto& lv : w.levels) {
    for (int k : lv.k) top = std::max(top, k);
  }
  return top + w.config.nu;
}

NodeSet from_points(std::vector<std::pair<Rational, Rational>> pts) {
  NodeSet s;
  for (const auto& [a, b] : pts) {
    s.coords.push_back(a);
    s.coords.push_back(b);
  }
  return s;
}

const FoolingConfig kCfg = FoolingConfig::make(2, 3, BesovParams{2.0, 2.0, 2.0});

}  // namespace

TEST_SUITE("fooling") {

TEST_CASE("config validation") {
  CHECK(kCfg.nu == 2);
  CHECK(FoolingConfig::make(2, 2, BesovParams{1.2, 2.0, 2.0}).nu == 1);
  CHECK(FoolingConfig::make(2, 4, BesovParams{2.0, 2.0, 2.0}).nu == 2);
  CHECK(FoolingConfig::make(2, 5, BesovParams{2.0, 2.0, 2.0}).nu == 3);
  CHECK_THROWS_AS(FoolingConfig::make(2, 1, BesovParams{0.5, 2.0, 2.0}), Error);
  CHECK_THROWS_AS(FoolingConfig::make(2, 3, BesovParams{2.6, 2.0, 2.0}), Error);   // above r - 1 + 1/p
  CHECK_THROWS_AS(FoolingConfig::make(2, 3, BesovParams{2.0, infinity, 2.0}), Error);
  CHECK_NOTHROW(FoolingConfig::make(2, 3, BesovParams{1.9, infinity, 2.0}));
  CHECK_THROWS_AS(FoolingConfig::make(2, 3, BesovParams{0.0, 2.0, 2.0}), Error);
  CHECK_THROWS_AS(parse_witness_kind("phi5"), Error);
  for (auto k : {WitnessKind::gstar, WitnessKind::gk, WitnessKind::phi1, WitnessKind::phi2, WitnessKind::phi3,
                 WitnessKind::phi4}) {
    CHECK(parse_witness_kind(to_string(k)) == k);
  }
}

TEST_CASE("free cells of a small lattice") {
  const auto nodes = cubature::fibonacci_qmc(4).nodes();  // 5 points
  const auto free = cells_avoiding(nodes, {3, 0});
  CHECK(free == std::vector<std::vector<std::int64_t>>{{0, 0}, {2, 0}, {5, 0}, {7, 0}});
}

TEST_CASE("origin node leaves every open cell free") {
  const auto nodes = from_points({{0, 0}});
  CHECK(cells_avoiding(nodes, {1, 1}).size() == 4);
  const auto face = from_points({{Rational(1, 2), Rational(1, 4)}});
  CHECK(cells_avoiding(face, {1, 1}).size() == 4);
  const auto inner = from_points({{Rational(1, 3), Rational(1, 3)}});
  CHECK(cells_avoiding(inner, {1, 1}) == std::vector<std::vector<std::int64_t>>{{0, 1}, {1, 0}, {1, 1}});
}

TEST_CASE("cell index round trip") {
  const std::vector<int> k{2, 3};
  for (std::int64_t i = 0; i < 32; ++i) CHECK(cell_index(k, cell_shift(k, i)) == i);
  CHECK(cell_index(k, {1, 2}) == 10);
}

TEST_CASE("pigeonhole leaves enough free cells") {
  testgen::Gen g(101);
  for (int t = 0; t < 20; ++t) {
    const std::size_t count = static_cast<std::size_t>(g.integer(1, 40));
    NodeSet s;
    for (std::size_t i = 0; i < 2 * count; ++i) s.coords.push_back(Rational(g.integer(0, 255), 256));
    const int m = level_for_size(count);
    CHECK((std::size_t{1} << m) >= count);
    for (int k1 = 0; k1 <= m + 1; ++k1) {
      const std::vector<int> k{k1, m + 1 - k1};
      CHECK(cells_avoiding(s, k).size() >= (std::size_t{1} << m));
    }
  }
}

TEST_CASE("gstar vanishes on the nodes and integrates exactly") {
  for (int n : {3, 4, 5, 6, 7}) {
    const auto nodes = cubature::fibonacci_qmc(n).nodes();
    const auto w = build_gstar(nodes, kCfg);
    CHECK(check_vanishing(w, nodes) <= 1e-14);
    CHECK(w.exact_integral > 0);
    CHECK(dense_integral(w, finest(w)) == doctest::Approx(w.exact_integral).epsilon(1e-12));
    CHECK(w.atom_count() == (std::size_t{1} << w.m) * static_cast<std::size_t>(w.m + 2));
  }
}

TEST_CASE("normalisation matches the sequence quasi-norm") {
  testgen::Gen g(103);
  for (int t = 0; t < 6; ++t) {
    const double alpha = g.real(0.6, 1.95);
    const double p = t % 3 == 0 ? infinity : g.real(1.0, 4.0);
    const double theta = t % 2 == 0 ? infinity : g.real(1.0, 4.0);
    const auto cfg = FoolingConfig::make(2, 3, BesovParams{alpha, p, theta});
    const auto nodes = cubature::fibonacci_qmc(static_cast<int>(g.integer(4, 9))).nodes();
    for (const auto& w : {build_gstar(nodes, cfg), build_gk(nodes, cfg)}) {
      const auto terms = w.terms();
      CHECK(splines::bspline_quasinorm(terms, cfg.params) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("gk vanishes and integrates exactly") {
  const auto nodes = cubature::fibonacci_qmc(6).nodes();
  const int m = level_for_size(nodes.size());
  for (int k1 = 0; k1 <= m + 1; ++k1) {
    const auto w = build_gk(nodes, kCfg, std::nullopt, std::vector<int>{k1, m + 1 - k1});
    CHECK(check_vanishing(w, nodes) <= 1e-14);
    CHECK(w.levels.size() == 1);
    CHECK(dense_integral(w, finest(w)) == doctest::Approx(w.exact_integral).epsilon(1e-12));
  }
}

TEST_CASE("Smolyak witnesses vanish on the grid") {
  for (int m = 1; m <= 5; ++m) {
    const auto grid = smolyak::smolyak_grid(2, m).nodes();
    const auto ws = build_smolyak_witnesses(m, kCfg);
    REQUIRE(ws.size() == 4);
    for (const auto& w : ws) {
      CHECK(check_vanishing(w, grid) <= 1e-14);
      CHECK(dense_integral(w, finest(w)) == doctest::Approx(w.exact_integral).epsilon(1e-12));
      CHECK(splines::bspline_quasinorm(w.terms(), kCfg.params) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(ws[0].levels.size() == 1);
    CHECK(ws[0].levels[0].k == std::vector<int>{0, m});
    CHECK(ws[2].atom_count() == 1);
    CHECK(ws[3].atom_count() == static_cast<std::size_t>(m + 1));
  }
}

TEST_CASE("witness on a node that it fails to avoid") {
  const auto nodes = cubature::fibonacci_qmc(5).nodes();
  auto w = build_gstar(nodes, kCfg);
  const auto bad = from_points({{Rational(1, 3), Rational(1, 7)}, {Rational(5, 11), Rational(2, 3)}});
  // the witness is positive on most of the square, so one of these is hit
  const double x1[2] = {1.0 / 3, 1.0 / 7}, x2[2] = {5.0 / 11, 2.0 / 3};
  if (std::abs(w.eval(Point(x1, 2))) > 1e-14 || std::abs(w.eval(Point(x2, 2))) > 1e-14) {
    CHECK_THROWS_AS(check_vanishing(w, bad), Error);
  }
  const auto lb = witness_lower_bound(nodes, WitnessKind::gstar, kCfg);
  CHECK(lb.bound == doctest::Approx(w.exact_integral));
  CHECK(lb.max_node_value <= 1e-14);
}

}  // TEST_SUITE
