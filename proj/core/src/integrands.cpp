#include "mixcub/integrands.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include "mixcub/error.hpp"
#include "mixcub/fiblattice.hpp"
#include "mixcub/smolyak.hpp"

namespace mixcub::integrands {

double korobov_factor(double r, std::int64_t K, double t) {
  const double c1 = std::cos(2.0 * std::numbers::pi * t);
  double prev = 1.0;  // cos(0)
  double cur = c1;
  double sum = 0.0;
  for (std::int64_t k = 1; k <= K; ++k) {
    sum += std::pow(static_cast<double>(k), -r) * cur;
    const double next = 2.0 * c1 * cur - prev;
    prev = cur;
    cur = next;
  }
  return 1.0 + 2.0 * sum;
}

Integrand korobov(double r, std::int64_t K) {
  if (!(r > 1.0)) throw Error(Errc::invalid_argument, "Korobov smoothness r must exceed 1");
  if (K < 1) throw Error(Errc::invalid_argument, "Korobov truncation K must be >= 1");
  // k^{-r} precomputed once
  auto weights = std::make_shared<std::vector<double>>(static_cast<std::size_t>(K));
  for (std::int64_t k = 1; k <= K; ++k) (*weights)[static_cast<std::size_t>(k - 1)] = std::pow(static_cast<double>(k), -r);
  auto factor = [weights](double t) {
    const double c1 = std::cos(2.0 * std::numbers::pi * t);
    double prev = 1.0;
    double cur = c1;
    double sum = 0.0;
    for (double w : *weights) {
      sum += w * cur;
      const double next = 2.0 * c1 * cur - prev;
      prev = cur;
      cur = next;
    }
    return 1.0 + 2.0 * sum;
  };
  Integrand f = Integrand::real_valued(2, [factor](Point x) { return factor(x[0]) * factor(x[1]); },
                                       "korobov:r=" + std::to_string(r) + ",K=" + std::to_string(K));
  f.exact_integral = 1.0;
  f.periodic = true;
  return f;
}

fourier::SeparableSpectrum korobov_spectrum(double r, std::int64_t K) {
  fourier::SeparableSpectrum s;
  s.K1 = K;
  s.K2 = K;
  s.a.assign(static_cast<std::size_t>(2 * K + 1), 0.0);
  for (std::int64_t k = -K; k <= K; ++k) {
    s.a[static_cast<std::size_t>(k + K)] = k == 0 ? 1.0 : std::pow(static_cast<double>(k < 0 ? -k : k), -r);
  }
  s.b = s.a;
  return s;
}

Integrand one() {
  Integrand f = Integrand::real_valued(2, [](Point) { return 1.0; }, "one");
  f.exact_integral = 1.0;
  f.periodic = true;
  return f;
}

Integrand bilinear() {
  Integrand f = Integrand::real_valued(
      2, [](Point x) { return 1.0 + 2.0 * x[0] - 3.0 * x[1] + 5.0 * x[0] * x[1]; }, "bilinear");
  f.exact_integral = 1.75;
  return f;
}

Integrand expsum() {
  Integrand f = Integrand::real_valued(2, [](Point x) { return std::exp(x[0] + x[1]); }, "expsum");
  const double e1 = std::numbers::e - 1.0;
  f.exact_integral = e1 * e1;
  return f;
}

Integrand bump() {
  Integrand f = Integrand::real_valued(
      2, [](Point x) { return x[0] * (1.0 - x[0]) * x[1] * (1.0 - x[1]); }, "bump");
  f.exact_integral = 1.0 / 36.0;
  f.smoothness = BesovParams{2.0, infinity, infinity};
  return f;
}

namespace {

std::map<std::string, std::string> parse_params(const std::string& text) {
  std::map<std::string, std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    const std::string item = text.substr(pos, end - pos);
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(Errc::parse_error, "expected key=value, got '" + item + "'");
    out[item.substr(0, eq)] = item.substr(eq + 1);
    pos = end + 1;
  }
  return out;
}

double to_number(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw Error(Errc::parse_error, "parameter " + key + "='" + v + "' is not a number");
  }
}

}  // namespace

FunctionSpec parse_function(const std::string& text) {
  FunctionSpec spec;
  spec.text = text;
  const auto colon = text.find(':');
  spec.family = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? std::string() : text.substr(colon + 1);
  if (spec.family == "trig") {
    spec.trig = fourier::TrigPoly2::parse_json(rest);
    return spec;
  }
  if (spec.family == "one" || spec.family == "bilinear" || spec.family == "expsum" || spec.family == "bump") {
    if (!rest.empty()) throw Error(Errc::parse_error, "'" + spec.family + "' takes no parameters");
    return spec;
  }
  if (spec.family == "korobov" || spec.family == "witness") {
    spec.params = parse_params(rest);
    const std::vector<std::string> allowed =
        spec.family == "korobov" ? std::vector<std::string>{"r", "K"}
                                 : std::vector<std::string>{"kind", "r", "a", "p", "t", "fib", "smolyak", "m"};
    for (const auto& [k, v] : spec.params) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
        throw Error(Errc::parse_error, "unknown parameter '" + k + "' for " + spec.family);
      }
    }
    if (spec.family == "witness") {
      spec.witness_kind();
      spec.witness_config();
      if (spec.params.count("fib") && spec.params.count("smolyak")) {
        throw Error(Errc::parse_error, "witness takes fib= or smolyak=, not both");
      }
    } else {
      spec.make();
    }
    return spec;
  }
  throw Error(Errc::parse_error, "unknown integrand '" + text + "'");
}

bool FunctionSpec::needs_nodes() const {
  return family == "witness" && !params.count("fib") && !params.count("smolyak");
}

fooling::WitnessKind FunctionSpec::witness_kind() const {
  const auto it = params.find("kind");
  return fooling::parse_witness_kind(it == params.end() ? "gstar" : it->second);
}

fooling::FoolingConfig FunctionSpec::witness_config() const {
  auto get = [&](const char* key, double def) {
    const auto it = params.find(key);
    if (it == params.end()) return def;
    if (it->second == "inf") return infinity;
    return to_number(key, it->second);
  };
  BesovParams bp{get("a", 2.0), get("p", 2.0), get("t", 2.0)};
  return fooling::FoolingConfig::make(2, static_cast<int>(get("r", 3.0)), bp);
}

namespace {

std::optional<int> int_param(const std::map<std::string, std::string>& params, const char* key) {
  const auto it = params.find(key);
  if (it == params.end()) return std::nullopt;
  const double v = to_number(key, it->second);
  if (v != std::floor(v)) throw Error(Errc::parse_error, std::string(key) + " must be an integer");
  return static_cast<int>(v);
}

Integrand witness_on(const FunctionSpec& spec, const NodeSet& nodes, std::optional<int> m) {
  const auto kind = spec.witness_kind();
  const auto cfg = spec.witness_config();
  const auto lb = fooling::witness_lower_bound(nodes, kind, cfg, m);
  Integrand f = lb.witness.to_integrand();
  f.name = spec.text;
  return f;
}

}  // namespace

Integrand FunctionSpec::make() const {
  if (trig) return trig->to_integrand(text);
  if (family == "one") return one();
  if (family == "bilinear") return bilinear();
  if (family == "expsum") return expsum();
  if (family == "bump") return bump();
  if (family == "korobov") {
    const auto it = params.find("r");
    const double r = it == params.end() ? 2.0 : to_number("r", it->second);
    const auto K = int_param(params, "K").value_or(static_cast<int>(kKorobovDefaultTerms));
    Integrand f = korobov(r, K);
    f.name = text;
    return f;
  }
  if (family == "witness") {
    if (const auto n = int_param(params, "fib")) {
      NodeSet nodes;
      for (const auto& p : fiblattice::fibonacci_lattice(*n)) {
        nodes.coords.push_back(p.x);
        nodes.coords.push_back(p.y);
      }
      return witness_on(*this, nodes, int_param(params, "m"));
    }
    if (const auto m = int_param(params, "smolyak")) {
      const auto grid = smolyak::smolyak_grid(2, *m, smolyak::Boundary::periodic);
      const auto kind = witness_kind();
      const bool phi = kind != fooling::WitnessKind::gstar && kind != fooling::WitnessKind::gk;
      return witness_on(*this, grid.nodes(), phi ? std::optional<int>(*m) : int_param(params, "m"));
    }
    throw Error(Errc::invalid_argument, "witness '" + text + "' needs nodes (fib=, smolyak= or a rule)");
  }
  throw Error(Errc::parse_error, "unknown integrand '" + text + "'");
}

Integrand FunctionSpec::make_for(const CubatureRule& rule, std::optional<int> smolyak_m) const {
  if (!needs_nodes()) return make();
  const auto kind = witness_kind();
  const bool phi = kind != fooling::WitnessKind::gstar && kind != fooling::WitnessKind::gk;
  std::optional<int> m = int_param(params, "m");
  if (phi) {
    if (!smolyak_m) throw Error(Errc::invalid_argument, "phi witnesses are defined on Smolyak grids");
    m = smolyak_m;
  }
  return witness_on(*this, rule.nodes(), m);
}

std::optional<fourier::SeparableSpectrum> FunctionSpec::spectrum() const {
  if (family != "korobov") return std::nullopt;
  const auto it = params.find("r");
  const double r = it == params.end() ? 2.0 : to_number("r", it->second);
  return korobov_spectrum(r, int_param(params, "K").value_or(static_cast<int>(kKorobovDefaultTerms)));
}

}  // namespace mixcub::integrands
