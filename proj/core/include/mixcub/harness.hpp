#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixcub/cubature.hpp"
#include "mixcub/smolyak.hpp"

/// Convergence sweeps, rate fits and matched-budget comparisons.
namespace mixcub::harness {

enum class RuleFamily { fib, fibnp, smolyak };
RuleFamily parse_rule_family(const std::string& name);
const char* to_string(RuleFamily f) noexcept;

enum class OutputFormat { csv, json };
OutputFormat parse_format(const std::string& name);

struct ExperimentSpec {
  RuleFamily rule = RuleFamily::fib;
  std::string fn = "korobov:r=2";
  int lo = 8;   // first n (Fibonacci) or m (Smolyak)
  int hi = 20;  // last, inclusive
  /// Smolyak boundary handling; default follows the integrand's periodic flag.
  std::optional<smolyak::Boundary> boundary;
  unsigned threads = 1;

  /// Canonical text used for the provenance hash.
  std::string canonical() const;
};

struct ConvergenceRow {
  int index = 0;        // n or m
  std::int64_t N = 0;   // nodes with nonzero weight
  double error = 0.0;   // rule(f) - I(f)
  std::string method;   // "dual" (exact via the dual lattice) or "rule"
};

/// One row per index in [lo, hi]; trigonometric and Korobov integrands on the
/// Fibonacci rule use the dual-lattice identity, everything else evaluates
/// the rule against the exact integral. Rows are returned in index order.
std::vector<ConvergenceRow> converge(const ExperimentSpec& spec);

/// Model log e = c - alpha log N + beta log log N (natural logarithms).
struct FitOptions {
  std::optional<double> pin_beta = 0.0;
  std::optional<double> pin_alpha;
};

struct RateFit {
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS in log scale
  std::size_t points = 0;
  bool alpha_pinned = false;
  bool beta_pinned = false;
  std::string model = "log e = c - a*log N + b*log log N";
};

inline constexpr std::size_t kMinFitPoints = 6;

/// Least squares on (N, |e|). Throws degenerate_fit for fewer than 6 rows,
/// nonpositive errors, N <= e (log log N undefined), or errors spanning less
/// than two decades.
RateFit fit_rate(const std::vector<std::pair<double, double>>& points, const FitOptions& opts = {});
RateFit fit_rate(const std::vector<ConvergenceRow>& rows, const FitOptions& opts = {});

struct BudgetRow {
  std::int64_t budget = 0;
  int fib_n = 0;
  std::int64_t fib_nodes = 0;
  double fib_error = 0.0;
  int smolyak_m = 0;
  std::int64_t smolyak_nodes = 0;
  double smolyak_error = 0.0;
  /// |error| of each family at exactly `budget` nodes, interpolating log|e|
  /// linearly in log N between the two rules whose node counts bracket it.
  double fib_error_matched = 0.0;
  double smolyak_error_matched = 0.0;
  double ratio() const { return std::abs(smolyak_error) / std::abs(fib_error); }
  double matched_ratio() const { return smolyak_error_matched / fib_error_matched; }
};

/// For each budget: the largest Fibonacci rule and the largest Smolyak rule
/// with at most that many nodes, and both errors, plus the equal-N errors
/// (which remove the staircase of the two node-count ladders). Budgets below 3
/// are rejected with range_guard.
std::vector<BudgetRow> compare_budget(const std::string& fnspec, const std::vector<std::int64_t>& budgets,
                                      std::optional<smolyak::Boundary> boundary = std::nullopt);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::uint64_t fnv1a(const std::string& text);
std::string spec_hash(const std::string& canonical);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

std::string converge_csv(const std::vector<ConvergenceRow>& rows, const std::string& hash);
std::string converge_json(const std::vector<ConvergenceRow>& rows, const std::string& hash);
std::string fit_csv(const RateFit& fit, const std::string& hash);
std::string fit_json(const RateFit& fit, const std::string& hash);
std::string compare_csv(const std::vector<BudgetRow>& rows, const std::string& hash);
std::string compare_json(const std::vector<BudgetRow>& rows, const std::string& hash);

}  // namespace mixcub::harness
