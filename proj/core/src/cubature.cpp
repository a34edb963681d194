#include "mixcub/cubature.hpp"

#include <algorithm>
#include <numeric>
#include <thread>
#include <tuple>

#include "mixcub/error.hpp"
#include "mixcub/fiblattice.hpp"
#include "mixcub/summation.hpp"

namespace mixcub {

Integrand Integrand::real_valued(int dim, std::function<double(Point)> fn, std::string name) {
  Integrand f;
  f.dim = dim;
  f.real = std::move(fn);
  f.name = std::move(name);
  return f;
}

Integrand Integrand::complex_valued(int dim, std::function<std::complex<double>(Point)> fn,
                                    std::string name) {
  Integrand f;
  f.dim = dim;
  f.complex = std::move(fn);
  f.real = [g = f.complex](Point x) { return g(x).real(); };
  f.name = std::move(name);
  return f;
}

namespace {

int compare_points(std::span<const Rational> a, std::span<const Rational> b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return -1;
    if (b[i] < a[i]) return 1;
  }
  return 0;
}

}  // namespace

CubatureRule::CubatureRule(NodeSet nodes, std::vector<double> weights, std::string label)
    : label_(std::move(label)) {
  if (nodes.dim < 1) throw Error(Errc::invalid_argument, "rule dimension must be >= 1");
  const std::size_t d = static_cast<std::size_t>(nodes.dim);
  if (nodes.coords.size() % d != 0 || nodes.size() != weights.size()) {
    throw Error(Errc::dimension_mismatch, "node and weight counts differ");
  }
  const std::size_t n = weights.size();

  bool sorted_unique = true;
  for (std::size_t i = 1; i < n && sorted_unique; ++i) {
    sorted_unique = compare_points(nodes.point(i - 1), nodes.point(i)) < 0;
  }

  if (sorted_unique) {
    nodes_ = std::move(nodes);
    weights_ = std::move(weights);
  } else {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return compare_points(nodes.point(a), nodes.point(b)) < 0;
    });
    nodes_.dim = nodes.dim;
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      CompensatedSum w;
      while (j < n && compare_points(nodes.point(order[i]), nodes.point(order[j])) == 0) {
        w.add(weights[order[j]]);
        ++j;
      }
      const auto p = nodes.point(order[i]);
      nodes_.coords.insert(nodes_.coords.end(), p.begin(), p.end());
      weights_.push_back(w.value());
      i = j;
    }
  }
  floats_.reserve(nodes_.coords.size());
  for (const Rational& c : nodes_.coords) floats_.push_back(c.to_double());
}

double CubatureRule::weight_sum() const {
  CompensatedSum s;
  for (double w : weights_) s.add(w);
  return s.value();
}

std::size_t CubatureRule::support_size() const {
  return static_cast<std::size_t>(std::count_if(weights_.begin(), weights_.end(),
                                                [](double w) { return w != 0.0; }));
}

}  // namespace mixcub

namespace mixcub::cubature {

namespace {

template <class T, class Eval>
std::vector<T> evaluate_nodes(const CubatureRule& rule, Eval&& eval, unsigned threads) {
  const std::size_t n = rule.size();
  std::vector<T> values(n);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n / 1024 + 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) values[i] = eval(rule.node(i));
    return values;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) values[i] = eval(rule.node(i));
    });
  }
  for (auto& t : pool) t.join();
  return values;
}

void check_dim(const CubatureRule& rule, const Integrand& f) {
  if (rule.dim() != f.dim) {
    throw Error(Errc::dimension_mismatch, "rule has dimension " + std::to_string(rule.dim()) +
                                              ", integrand " + std::to_string(f.dim));
  }
}

}  // namespace

double apply_rule(const CubatureRule& rule, const Integrand& f, ApplyOptions opts) {
  check_dim(rule, f);
  if (f.is_complex()) return apply_rule_complex(rule, f, opts).real();
  const auto values = evaluate_nodes<double>(rule, f.real, opts.threads);
  CompensatedSum s;
  const auto& w = rule.weights();
  for (std::size_t i = 0; i < values.size(); ++i) s.add(w[i] * values[i]);
  return s.value();
}

std::complex<double> apply_rule_complex(const CubatureRule& rule, const Integrand& f,
                                        ApplyOptions opts) {
  check_dim(rule, f);
  if (!f.is_complex()) return apply_rule(rule, f, opts);
  const auto values = evaluate_nodes<std::complex<double>>(rule, f.complex, opts.threads);
  ComplexCompensatedSum s;
  const auto& w = rule.weights();
  for (std::size_t i = 0; i < values.size(); ++i) s.add(w[i] * values[i]);
  return s.value();
}

CubatureRule fibonacci_qmc(int n) {
  const auto pts = fiblattice::fibonacci_lattice(n);
  NodeSet nodes;
  nodes.dim = 2;
  nodes.coords.reserve(2 * pts.size());
  for (const auto& p : pts) {
    nodes.coords.push_back(p.x);
    nodes.coords.push_back(p.y);
  }
  const double w = 1.0 / static_cast<double>(pts.size());
  return CubatureRule(std::move(nodes), std::vector<double>(pts.size(), w),
                      "fib:" + std::to_string(n) + " b=" + std::to_string(pts.size()));
}

namespace {

// Q_N as integer coordinates over b and weight numerators over 4 b^3,
// merged and sorted.
struct NonperiodicData {
  i128 b = 0;
  i128 den = 0;
  std::vector<std::tuple<i128, i128, i128>> entries;  // (x_num, y_num, weight_num)
};

NonperiodicData nonperiodic_data(int n) {
  if (n < 2 || n > kMaxNonperiodicIndex) {
    throw Error(Errc::range_guard, "non-periodic rule supports 2 <= n <= " +
                                       std::to_string(kMaxNonperiodicIndex));
  }
  const auto fib = fiblattice::fibonacci(n);
  const i128 b = static_cast<i128>(fib.b);
  const i128 bp = static_cast<i128>(fib.b_prev);
  NonperiodicData out;
  out.b = b;
  out.den = 4 * b * b * b;
  std::vector<std::tuple<i128, i128, i128>> raw;
  raw.reserve(static_cast<std::size_t>(5 * b + 4));
  i128 s = 0;  // sum of mu * y_num, so that sum x_i y_i = s / b^2
  for (i128 mu = 0; mu < b; ++mu) {
    const i128 y = (mu * bp) % b;
    s += mu * y;
    raw.emplace_back(mu, y, 4 * b * b);
    const i128 wy = 2 * b * (2 * y - b);   // (y - 1/2)/b over 4b^3
    const i128 wx = 2 * b * (2 * mu - b);  // (x - 1/2)/b over 4b^3
    raw.emplace_back(mu, 0, wy);
    raw.emplace_back(mu, b, -wy);
    raw.emplace_back(0, y, wx);
    raw.emplace_back(b, y, -wx);
  }
  const i128 c = 2 * b * b - b * b * b + 4 * s;
  raw.emplace_back(0, 0, c);
  raw.emplace_back(b, 0, -c);
  raw.emplace_back(b, b, c);
  raw.emplace_back(0, b, -c);

  std::sort(raw.begin(), raw.end(), [](const auto& l, const auto& r) {
    return std::tie(std::get<0>(l), std::get<1>(l)) < std::tie(std::get<0>(r), std::get<1>(r));
  });
  for (const auto& e : raw) {
    if (!out.entries.empty() && std::get<0>(out.entries.back()) == std::get<0>(e) &&
        std::get<1>(out.entries.back()) == std::get<1>(e)) {
      std::get<2>(out.entries.back()) += std::get<2>(e);
    } else {
      out.entries.push_back(e);
    }
  }
  return out;
}

}  // namespace

NonperiodicCounts nonperiodic_counts(int n) {
  const auto data = nonperiodic_data(n);
  NonperiodicCounts c;
  c.b = static_cast<std::int64_t>(data.b);
  c.nominal = 5 * c.b - 2;
  c.distinct = static_cast<std::int64_t>(data.entries.size());
  c.support = static_cast<std::int64_t>(std::count_if(
      data.entries.begin(), data.entries.end(), [](const auto& e) { return std::get<2>(e) != 0; }));
  return c;
}

CubatureRule fibonacci_nonperiodic(int n) {
  const auto data = nonperiodic_data(n);
  NodeSet nodes;
  nodes.dim = 2;
  nodes.coords.reserve(2 * data.entries.size());
  std::vector<double> weights;
  weights.reserve(data.entries.size());
  const long double den = static_cast<long double>(data.den);
  std::int64_t support = 0;
  for (const auto& [x, y, w] : data.entries) {
    nodes.coords.emplace_back(x, data.b);
    nodes.coords.emplace_back(y, data.b);
    weights.push_back(static_cast<double>(static_cast<long double>(w) / den));
    if (w != 0) ++support;
  }
  const std::int64_t b = static_cast<std::int64_t>(data.b);
  std::string label = "fibnp:" + std::to_string(n) + " b=" + std::to_string(b) +
                      " N=5b-2=" + std::to_string(5 * b - 2) +
                      " distinct=" + std::to_string(data.entries.size()) +
                      " support=" + std::to_string(support);
  return CubatureRule(std::move(nodes), std::move(weights), std::move(label));
}

std::complex<double> qmc_error_complex(const CubatureRule& rule, const Integrand& f,
                                       ApplyOptions opts) {
  if (!f.exact_integral) {
    throw Error(Errc::missing_exact_integral, "integrand '" + f.name + "' has no exact integral");
  }
  return apply_rule_complex(rule, f, opts) - *f.exact_integral;
}

double qmc_error(const CubatureRule& rule, const Integrand& f, ApplyOptions opts) {
  if (!f.exact_integral) {
    throw Error(Errc::missing_exact_integral, "integrand '" + f.name + "' has no exact integral");
  }
  return apply_rule(rule, f, opts) - f.exact_integral->real();
}

}  // namespace mixcub::cubature
