#pragma once

#include <map>
#include <optional>
#include <string>

#include "mixcub/cubature.hpp"
#include "mixcub/fooling.hpp"
#include "mixcub/fourier.hpp"

/// Built-in test integrands on [0,1]^2, addressed by text specs:
///   one                         f = 1
///   bilinear                    1 + 2x - 3y + 5xy
///   expsum                      e^{x+y}, integral (e-1)^2
///   bump                        x(1-x)y(1-y), integral 1/36
///   korobov:r=<r>,K=<K>         prod_i (1 + 2 sum_{k<=K} k^{-r} cos 2 pi k x_i), integral 1
///   trig:<json>                 trigonometric polynomial {"k1,k2": [re, im]}
///   witness:kind=..,r=..,a=..,p=..,t=..[,fib=<n>|smolyak=<m>][,m=<m>]
/// A witness without fib= or smolyak= is built on the nodes of the rule it is
/// applied to.
namespace mixcub::integrands {

inline constexpr std::int64_t kKorobovDefaultTerms = 4096;

/// 1 + 2 sum_{k=1}^{K} k^{-r} cos(2 pi k t), by the cosine recurrence.
double korobov_factor(double r, std::int64_t K, double t);
Integrand korobov(double r, std::int64_t K = kKorobovDefaultTerms);
fourier::SeparableSpectrum korobov_spectrum(double r, std::int64_t K = kKorobovDefaultTerms);

Integrand one();
Integrand bilinear();
Integrand expsum();
Integrand bump();

struct FunctionSpec {
  std::string text;
  std::string family;
  std::map<std::string, std::string> params;
  std::optional<fourier::TrigPoly2> trig;

  bool needs_nodes() const;
  /// Integrand for a node-independent spec; throws invalid_argument otherwise.
  Integrand make() const;
  /// Integrand for use with a rule; witness specs without explicit nodes are
  /// built on the rule's nodes (smolyak_m selects the Smolyak witness level).
  Integrand make_for(const CubatureRule& rule, std::optional<int> smolyak_m = std::nullopt) const;
  /// Separable spectrum for Korobov specs.
  std::optional<fourier::SeparableSpectrum> spectrum() const;
  /// Witness parameters (kind, order, Besov triple).
  fooling::WitnessKind witness_kind() const;
  fooling::FoolingConfig witness_config() const;
};

FunctionSpec parse_function(const std::string& text);

}  // namespace mixcub::integrands
