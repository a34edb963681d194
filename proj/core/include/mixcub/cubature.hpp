#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixcub/besov.hpp"
#include "mixcub/rational.hpp"

namespace mixcub {

using Point = std::span<const double>;

/// A function on [0,1]^dim, real or complex valued, with optional metadata.
struct Integrand {
  int dim = 2;
  std::function<double(Point)> real;
  std::function<std::complex<double>(Point)> complex;  // set for complex-valued integrands
  std::optional<std::complex<double>> exact_integral;
  std::optional<BesovParams> smoothness;
  bool periodic = false;  // smooth 1-periodic extension; selects the periodic Smolyak fold
  std::string name;

  bool is_complex() const noexcept { return static_cast<bool>(complex); }
  std::complex<double> eval(Point x) const { return complex ? complex(x) : std::complex<double>(real(x)); }

  static Integrand real_valued(int dim, std::function<double(Point)> fn, std::string name = {});
  static Integrand complex_valued(int dim, std::function<std::complex<double>(Point)> fn,
                                  std::string name = {});
};

/// Points in [0,1]^dim with exact rational coordinates, stored row by row.
struct NodeSet {
  int dim = 2;
  std::vector<Rational> coords;

  std::size_t size() const noexcept { return dim > 0 ? coords.size() / static_cast<std::size_t>(dim) : 0; }
  std::span<const Rational> point(std::size_t i) const {
    return {coords.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};

/// Weighted node set. Construction merges coincident nodes (exact comparison)
/// by summing their weights and sorts nodes lexicographically; that order is
/// the summation order of apply_rule.
class CubatureRule {
 public:
  CubatureRule() = default;
  CubatureRule(NodeSet nodes, std::vector<double> weights, std::string label);

  int dim() const noexcept { return nodes_.dim; }
  std::size_t size() const noexcept { return weights_.size(); }
  const NodeSet& nodes() const noexcept { return nodes_; }
  Point node(std::size_t i) const {
    return {floats_.data() + i * static_cast<std::size_t>(dim()), static_cast<std::size_t>(dim())};
  }
  std::span<const Rational> exact_node(std::size_t i) const { return nodes_.point(i); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::string& label() const noexcept { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  double weight_sum() const;
  /// Number of nodes whose merged weight is nonzero.
  std::size_t support_size() const;

 private:
  NodeSet nodes_;
  std::vector<double> floats_;
  std::vector<double> weights_;
  std::string label_;
};

}  // namespace mixcub

namespace mixcub::cubature {

struct ApplyOptions {
  /// Worker threads used to evaluate f at the nodes. The reduction is always
  /// sequential in node order, so results differ from the single-threaded
  /// run only if f itself is nondeterministic.
  unsigned threads = 1;
};

/// Sum of w_j f(x_j) with compensated summation. For complex integrands the
/// real part is returned; use apply_rule_complex for the full value.
double apply_rule(const CubatureRule& rule, const Integrand& f, ApplyOptions opts = {});
std::complex<double> apply_rule_complex(const CubatureRule& rule, const Integrand& f,
                                        ApplyOptions opts = {});

/// Equal-weight rule on the Fibonacci lattice X_{b_n}.
CubatureRule fibonacci_qmc(int n);

inline constexpr int kMaxNonperiodicIndex = 45;

/// Boundary-corrected Fibonacci rule Q_N: lattice points, their projections
/// to the four edges and the four corners. Weights are accumulated exactly
/// over the common denominator 4 b_n^3 before conversion. Requires
/// 2 <= n <= 45.
CubatureRule fibonacci_nonperiodic(int n);

struct NonperiodicCounts {
  std::int64_t b = 0;
  std::int64_t nominal = 0;   // 5 b_n - 2, the count quoted for Q_N
  std::int64_t distinct = 0;  // distinct evaluation points after merging
  std::int64_t support = 0;   // distinct points with nonzero weight
};
NonperiodicCounts nonperiodic_counts(int n);

/// apply_rule(rule, f) - I(f). Throws missing_exact_integral if f carries no
/// exact integral. The complex variant keeps the imaginary part.
double qmc_error(const CubatureRule& rule, const Integrand& f, ApplyOptions opts = {});
std::complex<double> qmc_error_complex(const CubatureRule& rule, const Integrand& f,
                                       ApplyOptions opts = {});

}  // namespace mixcub::cubature
