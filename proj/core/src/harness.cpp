#include "mixcub/harness.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "mixcub/error.hpp"
#include "mixcub/fiblattice.hpp"
#include "mixcub/fourier.hpp"
#include "mixcub/integrands.hpp"

namespace mixcub::harness {

RuleFamily parse_rule_family(const std::string& name) {
  if (name == "fib") return RuleFamily::fib;
  if (name == "fibnp") return RuleFamily::fibnp;
  if (name == "smolyak") return RuleFamily::smolyak;
  throw Error(Errc::parse_error, "rule family must be fib, fibnp or smolyak, got '" + name + "'");
}

const char* to_string(RuleFamily f) noexcept {
  switch (f) {
    case RuleFamily::fib: return "fib";
    case RuleFamily::fibnp: return "fibnp";
    case RuleFamily::smolyak: return "smolyak";
  }
  return "?";
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw Error(Errc::parse_error, "format must be csv or json, got '" + name + "'");
}

std::string ExperimentSpec::canonical() const {
  std::string s = "converge|rule=" + std::string(to_string(rule)) + "|fn=" + fn + "|range=" + std::to_string(lo) +
                  ":" + std::to_string(hi);
  if (boundary) s += std::string("|boundary=") + smolyak::to_string(*boundary);
  return s;
}

namespace {

template <class Fn>
void parallel_indices(std::size_t count, unsigned threads, Fn&& fn) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex mu;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct Evaluator {
  integrands::FunctionSpec spec;
  std::optional<fourier::SeparableSpectrum> spectrum;
  std::optional<Integrand> fixed;  // node-independent integrand
  bool periodic = false;

  explicit Evaluator(const std::string& text) : spec(integrands::parse_function(text)) {
    spectrum = spec.spectrum();
    if (!spec.needs_nodes()) {
      fixed = spec.make();
      periodic = fixed->periodic;
    }
  }

  // Exact Fibonacci error through the dual lattice, when the spectrum is known.
  std::optional<double> dual_error(int n) const {
    if (spectrum) return fourier::fib_error_exact(*spectrum, n).real();
    if (spec.trig) return fourier::fib_error_exact(*spec.trig, n).real();
    return std::nullopt;
  }

  double rule_error(const CubatureRule& rule, std::optional<int> smolyak_m) const {
    if (fixed) return cubature::qmc_error(rule, *fixed);
    return cubature::qmc_error(rule, spec.make_for(rule, smolyak_m));
  }
};

ConvergenceRow fib_row(const Evaluator& ev, int n) {
  ConvergenceRow row;
  row.index = n;
  row.N = fiblattice::fibonacci(n).size();
  if (const auto e = ev.dual_error(n)) {
    row.error = *e;
    row.method = "dual";
  } else {
    row.error = ev.rule_error(cubature::fibonacci_qmc(n), std::nullopt);
    row.method = "rule";
  }
  return row;
}

}  // namespace

std::vector<ConvergenceRow> converge(const ExperimentSpec& spec) {
  if (spec.hi < spec.lo) throw Error(Errc::invalid_argument, "empty sweep range");
  const Evaluator ev(spec.fn);
  const smolyak::Boundary boundary =
      spec.boundary.value_or(ev.periodic ? smolyak::Boundary::periodic : smolyak::Boundary::closed);
  const std::size_t count = static_cast<std::size_t>(spec.hi - spec.lo + 1);
  std::vector<ConvergenceRow> rows(count);
  parallel_indices(count, spec.threads, [&](std::size_t i) {
    const int idx = spec.lo + static_cast<int>(i);
    ConvergenceRow row;
    switch (spec.rule) {
      case RuleFamily::fib:
        row = fib_row(ev, idx);
        break;
      case RuleFamily::fibnp: {
        const CubatureRule rule = cubature::fibonacci_nonperiodic(idx);
        row.index = idx;
        row.N = static_cast<std::int64_t>(rule.support_size());
        row.error = ev.rule_error(rule, std::nullopt);
        row.method = "rule";
        break;
      }
      case RuleFamily::smolyak: {
        const CubatureRule rule = smolyak::smolyak_cubature(idx, boundary);
        row.index = idx;
        row.N = static_cast<std::int64_t>(rule.support_size());
        row.error = ev.rule_error(rule, idx);
        row.method = "rule";
        break;
      }
    }
    rows[i] = row;
  });
  return rows;
}

// ---------------------------------------------------------------------------

namespace {

// Solves the k x k system A x = y (k <= 3) by Gaussian elimination with pivoting.
std::array<long double, 3> solve(std::array<std::array<long double, 3>, 3> A, std::array<long double, 3> y, int k) {
  for (int c = 0; c < k; ++c) {
    int piv = c;
    for (int r = c + 1; r < k; ++r) {
      if (std::fabs(A[r][c]) > std::fabs(A[piv][c])) piv = r;
    }
    if (A[piv][c] == 0.0L) throw Error(Errc::degenerate_fit, "singular normal equations");
    std::swap(A[c], A[piv]);
    std::swap(y[c], y[piv]);
    for (int r = c + 1; r < k; ++r) {
      const long double f = A[r][c] / A[c][c];
      for (int j = c; j < k; ++j) A[r][j] -= f * A[c][j];
      y[r] -= f * y[c];
    }
  }
  std::array<long double, 3> x{};
  for (int c = k - 1; c >= 0; --c) {
    long double s = y[c];
    for (int j = c + 1; j < k; ++j) s -= A[c][j] * x[j];
    x[c] = s / A[c][c];
  }
  return x;
}

}  // namespace

RateFit fit_rate(const std::vector<std::pair<double, double>>& points, const FitOptions& opts) {
  if (points.size() < kMinFitPoints) {
    throw Error(Errc::degenerate_fit, "need at least " + std::to_string(kMinFitPoints) + " points, got " +
                                          std::to_string(points.size()));
  }
  double emin = infinity;
  double emax = 0.0;
  for (const auto& [N, e] : points) {
    if (!(e > 0.0) || !std::isfinite(e)) throw Error(Errc::degenerate_fit, "errors must be positive and finite");
    if (!(N > std::exp(1.0))) throw Error(Errc::degenerate_fit, "node counts must exceed e");
    emin = std::min(emin, e);
    emax = std::max(emax, e);
  }
  if (emax / emin < 100.0) {
    throw Error(Errc::degenerate_fit, "errors span " + format_double(std::log10(emax / emin)) + " decades, need 2");
  }

  // unknown vector: c, then a (unless pinned), then b (unless pinned)
  const bool fit_a = !opts.pin_alpha.has_value();
  const bool fit_b = !opts.pin_beta.has_value();
  const int k = 1 + (fit_a ? 1 : 0) + (fit_b ? 1 : 0);
  std::array<std::array<long double, 3>, 3> A{};
  std::array<long double, 3> rhs{};
  auto features = [&](double N, std::array<long double, 3>& phi, long double& target, double e) {
    const long double X = std::log(static_cast<long double>(N));
    const long double Z = std::log(X);
    target = std::log(static_cast<long double>(e));
    int c = 0;
    phi[c++] = 1.0L;
    if (fit_a) {
      phi[c++] = -X;
    } else {
      target += static_cast<long double>(*opts.pin_alpha) * X;
    }
    if (fit_b) {
      phi[c++] = Z;
    } else {
      target -= static_cast<long double>(*opts.pin_beta) * Z;
    }
  };
  for (const auto& [N, e] : points) {
    std::array<long double, 3> phi{};
    long double t = 0.0L;
    features(N, phi, t, e);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) A[i][j] += phi[i] * phi[j];
      rhs[i] += phi[i] * t;
    }
  }
  const auto x = solve(A, rhs, k);
  RateFit fit;
  fit.points = points.size();
  int c = 0;
  fit.intercept = static_cast<double>(x[c++]);
  fit.alpha_pinned = !fit_a;
  fit.beta_pinned = !fit_b;
  fit.alpha_hat = fit_a ? static_cast<double>(x[c++]) : *opts.pin_alpha;
  fit.beta_hat = fit_b ? static_cast<double>(x[c++]) : *opts.pin_beta;
  long double ss = 0.0L;
  for (const auto& [N, e] : points) {
    const long double X = std::log(static_cast<long double>(N));
    const long double pred = fit.intercept - fit.alpha_hat * X + fit.beta_hat * std::log(X);
    const long double d = std::log(static_cast<long double>(e)) - pred;
    ss += d * d;
  }
  fit.residual = static_cast<double>(std::sqrt(ss / points.size()));
  return fit;
}

RateFit fit_rate(const std::vector<ConvergenceRow>& rows, const FitOptions& opts) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(rows.size());
  for (const auto& r : rows) pts.emplace_back(static_cast<double>(r.N), std::abs(r.error));
  return fit_rate(pts, opts);
}

// ---------------------------------------------------------------------------

namespace {

struct Sample {
  std::int64_t N = 0;
  double error = 0.0;
};

// log|e| linear in log N between the two samples.
double loglog_interp(const Sample& a, const Sample& b, double N) {
  if (a.error == 0.0 || b.error == 0.0 || a.N == b.N) return std::abs(a.error);
  const double t = (std::log(N) - std::log(double(a.N))) / (std::log(double(b.N)) - std::log(double(a.N)));
  return std::exp(std::log(std::abs(a.error)) + t * (std::log(std::abs(b.error)) - std::log(std::abs(a.error))));
}

}  // namespace

std::vector<BudgetRow> compare_budget(const std::string& fnspec, const std::vector<std::int64_t>& budgets,
                                      std::optional<smolyak::Boundary> boundary_opt) {
  const Evaluator ev(fnspec);
  const smolyak::Boundary boundary =
      boundary_opt.value_or(ev.periodic ? smolyak::Boundary::periodic : smolyak::Boundary::closed);
  std::map<int, Sample> fib_cache, smol_cache;
  auto fib = [&](int n) {
    auto it = fib_cache.find(n);
    if (it == fib_cache.end()) {
      const auto fr = fib_row(ev, n);
      it = fib_cache.emplace(n, Sample{fr.N, fr.error}).first;
    }
    return it->second;
  };
  auto smol = [&](int m) {
    auto it = smol_cache.find(m);
    if (it == smol_cache.end()) {
      const CubatureRule rule = smolyak::smolyak_cubature(m, boundary);
      it = smol_cache.emplace(m, Sample{static_cast<std::int64_t>(rule.support_size()), ev.rule_error(rule, m)}).first;
    }
    return it->second;
  };

  std::vector<BudgetRow> out;
  for (const std::int64_t budget : budgets) {
    if (budget < 3) throw Error(Errc::range_guard, "budget " + std::to_string(budget) + " is below 3 nodes");
    BudgetRow row;
    row.budget = budget;
    int n = 2;
    while (n + 1 <= fiblattice::kMaxIndex && fiblattice::fibonacci(n + 1).size() <= budget) ++n;
    const Sample f = fib(n);
    row.fib_n = n;
    row.fib_nodes = f.N;
    row.fib_error = f.error;

    int m = -1;
    while (smolyak::smolyak_grid_size(2, m + 1, boundary) <= budget) ++m;
    if (m < 0) throw Error(Errc::range_guard, "budget " + std::to_string(budget) + " admits no Smolyak grid");
    const Sample s = smol(m);
    row.smolyak_m = m;
    row.smolyak_nodes = s.N;
    row.smolyak_error = s.error;

    // equal-N errors: bracket the budget by node counts of consecutive rules
    const double B = static_cast<double>(budget);
    row.fib_error_matched = f.N == budget ? std::abs(f.error) : loglog_interp(f, fib(n + 1), B);
    int ms = m;
    while (smol(ms + 1).N <= budget) ++ms;
    while (ms > 0 && smol(ms).N > budget) --ms;
    const Sample s0 = smol(ms);
    row.smolyak_error_matched = s0.N == budget ? std::abs(s0.error) : loglog_interp(s0, smol(ms + 1), B);
    out.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string spec_hash(const std::string& canonical) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical)));
  return buf;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

std::string converge_csv(const std::vector<ConvergenceRow>& rows, const std::string& hash) {
  std::ostringstream os;
  os << "index,N,error,abs_error,method,spec_hash\n";
  for (const auto& r : rows) {
    os << r.index << ',' << r.N << ',' << format_double(r.error) << ',' << format_double(std::abs(r.error)) << ','
       << r.method << ',' << hash << '\n';
  }
  return os.str();
}

std::string converge_json(const std::vector<ConvergenceRow>& rows, const std::string& hash) {
  std::ostringstream os;
  for (const auto& r : rows) {
    nlohmann::json j = {{"index", r.index}, {"N", r.N}, {"error", number(r.error)},
                        {"abs_error", number(std::abs(r.error))}, {"method", r.method}, {"spec_hash", hash}};
    os << j.dump() << '\n';
  }
  return os.str();
}

std::string fit_csv(const RateFit& fit, const std::string& hash) {
  std::ostringstream os;
  os << "# fit,alpha_hat,beta_hat,intercept,residual,points,alpha_pinned,beta_pinned,spec_hash\n";
  os << "# fit," << format_double(fit.alpha_hat) << ',' << format_double(fit.beta_hat) << ','
     << format_double(fit.intercept) << ',' << format_double(fit.residual) << ',' << fit.points << ','
     << (fit.alpha_pinned ? 1 : 0) << ',' << (fit.beta_pinned ? 1 : 0) << ',' << hash << '\n';
  return os.str();
}

std::string fit_json(const RateFit& fit, const std::string& hash) {
  nlohmann::json j = {{"fit", {{"alpha_hat", number(fit.alpha_hat)},
                               {"beta_hat", number(fit.beta_hat)},
                               {"intercept", number(fit.intercept)},
                               {"residual", number(fit.residual)},
                               {"points", fit.points},
                               {"alpha_pinned", fit.alpha_pinned},
                               {"beta_pinned", fit.beta_pinned},
                               {"model", fit.model}}},
                      {"spec_hash", hash}};
  return j.dump() + "\n";
}

std::string compare_csv(const std::vector<BudgetRow>& rows, const std::string& hash) {
  std::ostringstream os;
  os << "budget,fib_n,fib_nodes,fib_error,smolyak_m,smolyak_nodes,smolyak_error,ratio,matched_ratio,spec_hash\n";
  for (const auto& r : rows) {
    os << r.budget << ',' << r.fib_n << ',' << r.fib_nodes << ',' << format_double(r.fib_error) << ','
       << r.smolyak_m << ',' << r.smolyak_nodes << ',' << format_double(r.smolyak_error) << ','
       << format_double(r.ratio()) << ',' << format_double(r.matched_ratio()) << ',' << hash << '\n';
  }
  return os.str();
}

std::string compare_json(const std::vector<BudgetRow>& rows, const std::string& hash) {
  std::ostringstream os;
  for (const auto& r : rows) {
    nlohmann::json j = {{"budget", r.budget},
                        {"fib_n", r.fib_n},
                        {"fib_nodes", r.fib_nodes},
                        {"fib_error", number(r.fib_error)},
                        {"smolyak_m", r.smolyak_m},
                        {"smolyak_nodes", r.smolyak_nodes},
                        {"smolyak_error", number(r.smolyak_error)},
                        {"ratio", number(r.ratio())},
                        {"matched_ratio", number(r.matched_ratio())},
                        {"spec_hash", hash}};
    os << j.dump() << '\n';
  }
  return os.str();
}

}  // namespace mixcub::harness
