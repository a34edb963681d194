#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mixcub/error.hpp"
#include "mixcub/fiblattice.hpp"
#include "mixcub/integrands.hpp"
#include "mixcub/smolyak.hpp"

using namespace mixcub;
using namespace mixcub::integrands;

TEST_SUITE("integrands") {

TEST_CASE("korobov factor matches direct cosine sums") {
  for (double r : {1.5, 2.0, 3.0}) {
    for (double t : {0.0, 0.1, 0.37, 0.5, 0.99}) {
      double direct = 1.0;
      for (int k = 1; k <= 50; ++k) direct += 2 * std::pow(k, -r) * std::cos(2 * std::numbers::pi * k * t);
      CHECK(korobov_factor(r, 50, t) == doctest::Approx(direct).epsilon(1e-12));
    }
  }
  // at t = 0 the factor is 1 + 2 H_K^{(r)}
  double h = 0;
  for (int k = 1; k <= 4096; ++k) h += 1.0 / (double(k) * k);
  CHECK(korobov_factor(2, 4096, 0.0) == doctest::Approx(1 + 2 * h).epsilon(1e-12));
}

TEST_CASE("built-in integrals") {
  CHECK(bilinear().exact_integral->real() == doctest::Approx(1.75));
  CHECK(expsum().exact_integral->real() == doctest::Approx((std::numbers::e - 1) * (std::numbers::e - 1)));
  CHECK(bump().exact_integral->real() == doctest::Approx(1.0 / 36));
  CHECK(one().exact_integral->real() == 1.0);
  CHECK(korobov(2).exact_integral->real() == 1.0);
  CHECK(korobov(2).periodic);
  CHECK_FALSE(bump().periodic);
  // cross-check with a fine Smolyak rule where it is exact or near-exact
  const auto rule = smolyak::smolyak_cubature(12);
  CHECK(cubature::apply_rule(rule, bilinear()) == doctest::Approx(1.75).epsilon(1e-14));
  CHECK(cubature::apply_rule(rule, expsum()) == doctest::Approx((std::numbers::e - 1) * (std::numbers::e - 1)).epsilon(1e-5));
}

TEST_CASE("spec parsing") {
  const auto k = parse_function("korobov:r=3,K=64");
  CHECK(k.family == "korobov");
  CHECK(k.params.at("r") == "3");
  REQUIRE(k.spectrum().has_value());
  CHECK(k.spectrum()->K1 == 64);
  CHECK_FALSE(k.needs_nodes());
  const auto t = parse_function(R"(trig:{"1,2":[1,0],"0,0":[0.5,0]})");
  REQUIRE(t.trig.has_value());
  CHECK(t.trig->size() == 2);
  CHECK(t.make().exact_integral->real() == 0.5);
  const auto w = parse_function("witness:kind=gk,r=3,a=1.5,p=2,t=inf");
  CHECK(w.needs_nodes());
  CHECK(w.witness_kind() == fooling::WitnessKind::gk);
  CHECK(std::isinf(w.witness_config().params.theta));
  CHECK_THROWS_AS(w.make(), Error);
  CHECK_FALSE(parse_function("witness:kind=gstar,fib=8").needs_nodes());
  CHECK_THROWS_AS(parse_function("nosuch"), Error);
  CHECK_THROWS_AS(parse_function("korobov:r=abc"), Error);
  CHECK_THROWS_AS(parse_function("trig:{bad json"), Error);
}

TEST_CASE("witness specs vanish on their nodes") {
  const auto rule = cubature::fibonacci_qmc(9);
  const auto f = parse_function("witness:kind=gstar,r=3,a=2,p=2,t=2").make_for(rule);
  for (std::size_t i = 0; i < rule.size(); ++i) CHECK(std::abs(f.real(rule.node(i))) <= 1e-14);
  CHECK(std::abs(cubature::apply_rule(rule, f)) <= 1e-13);
  CHECK(f.exact_integral->real() > 0);
}

}  // TEST_SUITE
