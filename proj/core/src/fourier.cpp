#include "mixcub/fourier.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "mixcub/error.hpp"
#include "mixcub/fiblattice.hpp"
#include "mixcub/summation.hpp"

namespace mixcub::fourier {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex unit(double phase) { return {std::cos(kTwoPi * phase), std::sin(kTwoPi * phase)}; }

std::int64_t parse_int(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(Errc::parse_error, "bad frequency component '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

void TrigPoly2::add(std::int64_t k1, std::int64_t k2, Complex c) {
  auto [it, inserted] = coeffs_.try_emplace({k1, k2}, c);
  if (!inserted) it->second += c;
  if (it->second == Complex(0.0, 0.0)) coeffs_.erase(it);
}

Complex TrigPoly2::coefficient(std::int64_t k1, std::int64_t k2) const {
  const auto it = coeffs_.find({k1, k2});
  return it == coeffs_.end() ? Complex(0.0, 0.0) : it->second;
}

Complex TrigPoly2::eval(double x1, double x2) const {
  ComplexCompensatedSum s;
  for (const auto& [k, c] : coeffs_) {
    // reduce the phase modulo 1 before scaling by 2 pi
    const double ph = std::fmod(static_cast<double>(k.first) * x1, 1.0) + std::fmod(static_cast<double>(k.second) * x2, 1.0);
    s.add(c * unit(ph));
  }
  return s.value();
}

std::pair<std::int64_t, std::int64_t> TrigPoly2::degree() const {
  std::int64_t d1 = 0;
  std::int64_t d2 = 0;
  for (const auto& [k, c] : coeffs_) {
    d1 = std::max(d1, k.first < 0 ? -k.first : k.first);
    d2 = std::max(d2, k.second < 0 ? -k.second : k.second);
  }
  return {d1, d2};
}

Integrand TrigPoly2::to_integrand(std::string name) const {
  auto self = std::make_shared<TrigPoly2>(*this);
  Integrand f = Integrand::complex_valued(
      2, [self](Point x) { return self->eval(x[0], x[1]); }, std::move(name));
  f.exact_integral = integral();
  f.periodic = true;
  return f;
}

TrigPoly2 TrigPoly2::parse_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string("polynomial spec: ") + e.what());
  }
  if (!j.is_object()) throw Error(Errc::parse_error, "polynomial spec must be a JSON object");
  TrigPoly2 out;
  for (const auto& [key, val] : j.items()) {
    const auto comma = key.find(',');
    if (comma == std::string::npos) throw Error(Errc::parse_error, "frequency key '" + key + "' needs 'k1,k2'");
    const std::int64_t k1 = parse_int(std::string_view(key).substr(0, comma));
    const std::int64_t k2 = parse_int(std::string_view(key).substr(comma + 1));
    Complex c;
    if (val.is_number()) {
      c = {val.get<double>(), 0.0};
    } else if (val.is_array() && val.size() == 2 && val[0].is_number() && val[1].is_number()) {
      c = {val[0].get<double>(), val[1].get<double>()};
    } else {
      throw Error(Errc::parse_error, "coefficient of '" + key + "' must be a number or [re, im]");
    }
    out.add(k1, k2, c);
  }
  return out;
}

std::string TrigPoly2::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, c] : coeffs_) {
    j[std::to_string(k.first) + "," + std::to_string(k.second)] = {c.real(), c.imag()};
  }
  return j.dump();
}

TrigPoly2 operator+(const TrigPoly2& a, const TrigPoly2& b) {
  TrigPoly2 out = a;
  for (const auto& [k, c] : b.coeffs_) out.add(k.first, k.second, c);
  return out;
}

TrigPoly2 operator*(Complex c, const TrigPoly2& a) {
  TrigPoly2 out;
  for (const auto& [k, v] : a.coeffs_) out.add(k.first, k.second, c * v);
  return out;
}

Complex fib_error_exact(const TrigPoly2& poly, int n) {
  ComplexCompensatedSum s;
  for (const auto& [k, c] : poly.coeffs()) {
    if (k.first == 0 && k.second == 0) continue;
    if (fiblattice::dual_membership({k.first, k.second}, n)) s.add(c);
  }
  return s.value();
}

Complex fib_error_exact(const SeparableSpectrum& spec, int n) {
  if (spec.a.size() != static_cast<std::size_t>(2 * spec.K1 + 1) ||
      spec.b.size() != static_cast<std::size_t>(2 * spec.K2 + 1)) {
    throw Error(Errc::dimension_mismatch, "separable spectrum arrays do not match K1, K2");
  }
  ComplexCompensatedSum s;
  fiblattice::for_each_dual_in_box(n, spec.K1, spec.K2, [&](std::int64_t k1, std::int64_t k2) {
    if (k1 == 0 && k2 == 0) return;
    s.add(spec.a[static_cast<std::size_t>(k1 + spec.K1)] * spec.b[static_cast<std::size_t>(k2 + spec.K2)]);
  });
  return s.value();
}

// ---------------------------------------------------------------------------

CutoffKind parse_cutoff(const std::string& name) {
  if (name == "sharp") return CutoffKind::sharp;
  if (name == "smooth") return CutoffKind::smooth;
  throw Error(Errc::parse_error, "cutoff system must be 'sharp' or 'smooth', got '" + name + "'");
}

int sharp_band(std::int64_t k) {
  const std::uint64_t a = static_cast<std::uint64_t>(k < 0 ? -k : k);
  if (a <= 1) return 0;
  // smallest j with 2^j >= a
  int j = 0;
  while ((std::uint64_t{1} << j) < a) ++j;
  return j;
}

double phi0(double t) {
  const double a = std::abs(t);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const auto psi = [](double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; };
  const double u = a - 1.0;
  const double up = psi(u);
  return 1.0 - up / (up + psi(1.0 - u));
}

double cutoff(CutoffKind kind, int j, double t) {
  if (j < 0) return 0.0;
  if (kind == CutoffKind::sharp) {
    const double a = std::abs(t);
    if (j == 0) return a <= 1.0 ? 1.0 : 0.0;
    return (a > std::ldexp(1.0, j - 1) && a <= std::ldexp(1.0, j)) ? 1.0 : 0.0;
  }
  if (j == 0) return phi0(t);
  return phi0(std::ldexp(t, -j)) - phi0(std::ldexp(t, -j + 1));
}

namespace {

// (level, value) pairs of nonzero cutoffs at integer frequency k.
std::vector<std::pair<int, double>> levels_of(std::int64_t k, CutoffKind kind) {
  std::vector<std::pair<int, double>> out;
  const int band = sharp_band(k);
  if (kind == CutoffKind::sharp) {
    out.emplace_back(band, 1.0);
    return out;
  }
  for (int j = 0; j <= band + 1; ++j) {
    const double v = cutoff(kind, j, static_cast<double>(k));
    if (v != 0.0) out.emplace_back(j, v);
  }
  return out;
}

}  // namespace

TrigPoly2 dyadic_block(const TrigPoly2& poly, int j1, int j2, CutoffKind kind) {
  TrigPoly2 out;
  for (const auto& [k, c] : poly.coeffs()) {
    const double w = cutoff(kind, j1, static_cast<double>(k.first)) * cutoff(kind, j2, static_cast<double>(k.second));
    if (w != 0.0) out.add(k.first, k.second, w * c);
  }
  return out;
}

std::map<std::pair<int, int>, TrigPoly2> dyadic_blocks(const TrigPoly2& poly, CutoffKind kind) {
  std::map<std::pair<int, int>, TrigPoly2> out;
  for (const auto& [k, c] : poly.coeffs()) {
    const auto l1 = levels_of(k.first, kind);
    const auto l2 = levels_of(k.second, kind);
    for (const auto& [a, wa] : l1) {
      for (const auto& [b, wb] : l2) out[{a, b}].add(k.first, k.second, wa * wb * c);
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    it = it->second.empty() ? out.erase(it) : std::next(it);
  }
  return out;
}

// ---------------------------------------------------------------------------

NormGrid default_norm_grid(const TrigPoly2& poly, std::optional<int> lattice_n) {
  const auto [K1, K2] = poly.degree();
  NormGrid g;
  g.M1 = 4 * (2 * K1 + 1);
  g.M2 = 4 * (2 * K2 + 1);
  g.lattice_n = lattice_n;
  if (lattice_n) {
    const std::int64_t b = fiblattice::fibonacci(*lattice_n).size();
    g.M1 = (g.M1 + b - 1) / b * b;
    g.M2 = (g.M2 + b - 1) / b * b;
  }
  return g;
}

namespace {

constexpr std::int64_t kMaxNormPoints = std::int64_t{1} << 23;

struct Axis {
  std::int64_t M = 1;       // grid size
  std::int64_t count = 1;   // sampled indices 0..count-1
  std::vector<Complex> table;  // e^{2 pi i t / M}
};

Axis make_axis(std::int64_t M, std::int64_t count) {
  Axis a;
  a.M = M;
  a.count = count;
  a.table.resize(static_cast<std::size_t>(M));
  for (std::int64_t t = 0; t < M; ++t) {
    a.table[static_cast<std::size_t>(t)] = unit(static_cast<double>(t) / static_cast<double>(M));
  }
  return a;
}

Complex twiddle(const Axis& a, std::int64_t k, std::int64_t i) {
  const std::int64_t r = static_cast<std::int64_t>(mod_pos(static_cast<i128>(k) * i, a.M));
  return a.table[static_cast<std::size_t>(r)];
}

// Values on outer x inner indices; coefficients grouped by the outer frequency.
// terms: (k_outer, k_inner, c) sorted by k_outer.
std::vector<Complex> sample_grid(const std::vector<std::tuple<std::int64_t, std::int64_t, Complex>>& terms,
                                 const Axis& outer, const Axis& inner) {
  std::vector<Complex> G(static_cast<std::size_t>(outer.count * inner.count), Complex(0.0, 0.0));
  std::vector<Complex> row(static_cast<std::size_t>(inner.count));
  for (std::size_t t = 0; t < terms.size();) {
    const std::int64_t ko = std::get<0>(terms[t]);
    std::fill(row.begin(), row.end(), Complex(0.0, 0.0));
    for (; t < terms.size() && std::get<0>(terms[t]) == ko; ++t) {
      const std::int64_t ki = std::get<1>(terms[t]);
      const Complex c = std::get<2>(terms[t]);
      for (std::int64_t j = 0; j < inner.count; ++j) row[static_cast<std::size_t>(j)] += c * twiddle(inner, ki, j);
    }
    for (std::int64_t i = 0; i < outer.count; ++i) {
      const Complex w = twiddle(outer, ko, i);
      Complex* g = G.data() + i * inner.count;
      for (std::int64_t j = 0; j < inner.count; ++j) g[j] += w * row[static_cast<std::size_t>(j)];
    }
  }
  return G;
}

}  // namespace

std::vector<double> lp_norms(const TrigPoly2& poly, const std::vector<double>& ps, const NormGrid& grid) {
  for (double p : ps) {
    if (!(p >= 1.0)) throw Error(Errc::unsupported_exponent, "L_p sampling requires p >= 1");
  }
  std::vector<double> out(ps.size(), 0.0);
  if (poly.empty()) return out;
  if (grid.M1 < 1 || grid.M2 < 1) throw Error(Errc::invalid_argument, "grid sizes must be positive");

  std::int64_t count1 = grid.M1;
  if (grid.lattice_n) {
    const std::int64_t b = fiblattice::fibonacci(*grid.lattice_n).size();
    if (grid.M1 % b != 0 || grid.M2 % b != 0) {
      throw Error(Errc::invalid_argument, "lattice-reduced grids need sizes divisible by b_n");
    }
    count1 = grid.M1 / b;
  }
  const std::int64_t points = count1 * grid.M2;
  if (points > kMaxNormPoints) {
    throw Error(Errc::size_guard, "norm grid of " + std::to_string(points) + " points exceeds 2^23");
  }
  const Axis ax1 = make_axis(grid.M1, count1);
  const Axis ax2 = make_axis(grid.M2, grid.M2);

  // pick the cheaper grouping: by k1 (outer axis 1) or by k2 (outer axis 2)
  std::vector<std::int64_t> k1s;
  std::vector<std::int64_t> k2s;
  for (const auto& [k, c] : poly.coeffs()) {
    k1s.push_back(k.first);
    k2s.push_back(k.second);
  }
  std::sort(k2s.begin(), k2s.end());
  const auto rows1 = static_cast<std::int64_t>(std::unique(k1s.begin(), k1s.end()) - k1s.begin());
  const auto rows2 = static_cast<std::int64_t>(std::unique(k2s.begin(), k2s.end()) - k2s.begin());
  const auto nnz = static_cast<std::int64_t>(poly.size());
  const std::int64_t cost1 = nnz * ax2.count + rows1 * points;
  const std::int64_t cost2 = nnz * ax1.count + rows2 * points;

  std::vector<std::tuple<std::int64_t, std::int64_t, Complex>> terms;
  terms.reserve(poly.size());
  const bool by_k1 = cost1 <= cost2;
  for (const auto& [k, c] : poly.coeffs()) {
    if (by_k1) {
      terms.emplace_back(k.first, k.second, c);
    } else {
      terms.emplace_back(k.second, k.first, c);
    }
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
  const std::vector<Complex> G = by_k1 ? sample_grid(terms, ax1, ax2) : sample_grid(terms, ax2, ax1);

  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double p = ps[i];
    if (std::isinf(p)) {
      double m = 0.0;
      for (const Complex& z : G) m = std::max(m, std::abs(z));
      out[i] = m;
    } else {
      CompensatedSum s;
      for (const Complex& z : G) {
        const double a = std::abs(z);
        s.add(p == 1.0 ? a : (p == 2.0 ? a * a : std::pow(a, p)));
      }
      out[i] = std::pow(s.value() / static_cast<double>(G.size()), 1.0 / p);
    }
  }
  return out;
}

double lp_norm(const TrigPoly2& poly, double p) {
  return lp_norms(poly, {p}, default_norm_grid(poly)).front();
}

double fourier_besov_norm(const TrigPoly2& poly, const BesovParams& params, CutoffKind kind) {
  if (!(params.p >= 1.0)) throw Error(Errc::unsupported_exponent, "Fourier-side norms require p >= 1");
  LpAccumulator outer(params.theta);
  for (const auto& [j, block] : dyadic_blocks(poly, kind)) {
    const double norm = lp_norm(block, params.p);
    outer.add(std::exp2(params.alpha * (j.first + j.second)) * norm);
  }
  return outer.value();
}

// ---------------------------------------------------------------------------

double chi_v0(double t) {
  const double a = std::abs(t);
  if (a <= 2.0) return 1.0;
  if (a <= 4.0) return 2.0 - 0.5 * a;
  return 0.0;
}

double chi_v(double t) { return chi_v0(t) - chi_v0(8.0 * t); }

double chi_vs(int s, double t) { return s == 0 ? chi_v0(t) : chi_v(std::ldexp(t, -s)); }

TrigPoly2 build_chi_s(int n, int s1, int s2) {
  if (s1 < 0 || s2 < 0) throw Error(Errc::invalid_argument, "s must be nonnegative");
  if (s1 > 40 || s2 > 40) throw Error(Errc::cap_exceeded, "level s too large");
  const std::int64_t K1 = std::int64_t{1} << (s1 + 2);
  const std::int64_t K2 = std::int64_t{1} << (s2 + 2);
  const double b = static_cast<double>(fiblattice::fibonacci(n).size());
  const double box = static_cast<double>(2 * K1 + 1) * static_cast<double>(2 * K2 + 1);
  if (box > kChiTermCap * b) {
    throw Error(Errc::cap_exceeded, "chi_s box holds about " + std::to_string(box / b) + " terms, cap 2^20");
  }
  TrigPoly2 out;
  fiblattice::for_each_dual_in_box(n, K1, K2, [&](std::int64_t k1, std::int64_t k2) {
    const double v = chi_vs(s1, static_cast<double>(k1)) * chi_vs(s2, static_cast<double>(k2));
    if (v != 0.0) out.add(k1, k2, Complex(v, 0.0));
  });
  return out;
}

std::vector<ChiNormResult> chi_norm_check(int n, int s1, int s2, const std::vector<double>& ps) {
  const TrigPoly2 chi = build_chi_s(n, s1, s2);
  const double b = static_cast<double>(fiblattice::fibonacci(n).size());
  const auto lhs = lp_norms(chi, ps, default_norm_grid(chi, n));
  std::vector<ChiNormResult> out;
  const double base = std::ldexp(1.0, s1 + s2) / b;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    ChiNormResult r;
    r.lhs = lhs[i];
    r.rhs = std::isinf(ps[i]) ? base : std::pow(base, 1.0 - 1.0 / ps[i]);
    r.terms = chi.size();
    out.push_back(r);
  }
  return out;
}

ChiNormResult chi_norm_check(int n, int s1, int s2, double p) {
  return chi_norm_check(n, s1, s2, std::vector<double>{p}).front();
}

}  // namespace mixcub::fourier
