#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mixcub/besov.hpp"
#include "mixcub/cubature.hpp"

namespace mixcub::fourier {

using Freq = std::pair<std::int64_t, std::int64_t>;
using Complex = std::complex<double>;

/// Finitely supported Fourier series sum_k c_k e^{2 pi i k.x} on the torus.
class TrigPoly2 {
 public:
  TrigPoly2() = default;

  /// Adds c to the coefficient of k; entries that become exactly zero are dropped.
  void add(std::int64_t k1, std::int64_t k2, Complex c);
  Complex coefficient(std::int64_t k1, std::int64_t k2) const;
  const std::map<Freq, Complex>& coeffs() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  bool empty() const noexcept { return coeffs_.empty(); }

  /// Integral over [0,1]^2, i.e. the zero coefficient.
  Complex integral() const { return coefficient(0, 0); }
  Complex eval(double x1, double x2) const;
  /// max |k1| and max |k2| over the support.
  std::pair<std::int64_t, std::int64_t> degree() const;

  /// Complex integrand with exact integral, flagged periodic.
  Integrand to_integrand(std::string name = "trig") const;

  /// JSON object {"k1,k2": [re, im], ...}; a bare number means a real coefficient.
  static TrigPoly2 parse_json(const std::string& text);
  std::string to_json() const;

  friend TrigPoly2 operator+(const TrigPoly2& a, const TrigPoly2& b);
  friend TrigPoly2 operator*(Complex c, const TrigPoly2& a);

 private:
  std::map<Freq, Complex> coeffs_;
};

/// R_n(f) = Phi_n(f) - I(f) = sum of c_k over nonzero k in L(n).
Complex fib_error_exact(const TrigPoly2& poly, int n);

/// Tensor-product spectrum c(k1, k2) = a(k1) b(k2) with |k_i| <= K_i.
struct SeparableSpectrum {
  std::int64_t K1 = 0;
  std::int64_t K2 = 0;
  std::vector<Complex> a;  // a[k1 + K1]
  std::vector<Complex> b;  // b[k2 + K2]
};

/// fib_error_exact for a separable spectrum, enumerating L(n) row by row
/// inside the box instead of materialising the coefficient map.
Complex fib_error_exact(const SeparableSpectrum& spec, int n);

// ---------------------------------------------------------------------------
// Dyadic decomposition

enum class CutoffKind { sharp, smooth };

CutoffKind parse_cutoff(const std::string& name);

/// Band level of an integer frequency: 0 for |k| <= 1, else the j with
/// 2^{j-1} < |k| <= 2^j.
int sharp_band(std::int64_t k);

/// Even bump: 1 on [-1,1], exp-based monotone ramp on 1 < |t| < 2, 0 beyond.
double phi0(double t);

/// phi_0 and phi_j(t) = phi_0(2^{-j} t) - phi_0(2^{-j+1} t) for j >= 1.
/// For the sharp system, the indicator of band j.
double cutoff(CutoffKind kind, int j, double t);

/// Multiplies coefficient k by phi_{j1}(k1) phi_{j2}(k2).
TrigPoly2 dyadic_block(const TrigPoly2& poly, int j1, int j2, CutoffKind kind);

/// All nonzero blocks keyed by (j1, j2).
std::map<std::pair<int, int>, TrigPoly2> dyadic_blocks(const TrigPoly2& poly, CutoffKind kind);

// ---------------------------------------------------------------------------
// L_p norms on the torus

/// Uniform-grid sampling plan for ||.||_p of a trigonometric polynomial.
struct NormGrid {
  std::int64_t M1 = 0;
  std::int64_t M2 = 0;
  /// When set, the polynomial is assumed to have spectrum in L(n) and is then
  /// invariant under shifts by the lattice X_{b_n}; the grid sizes are
  /// multiples of b_n and only one point per coset is evaluated.
  std::optional<int> lattice_n;
};

/// Grid with M_i >= 4 (2 K_i + 1), K_i the degree in axis i.
NormGrid default_norm_grid(const TrigPoly2& poly, std::optional<int> lattice_n = std::nullopt);

/// ||poly||_p for each p in ps by the rectangle rule on the grid (max at p = inf).
std::vector<double> lp_norms(const TrigPoly2& poly, const std::vector<double>& ps, const NormGrid& grid);
double lp_norm(const TrigPoly2& poly, double p);

/// (sum_j 2^{|j|_1 alpha theta} ||delta_j(poly)||_p^theta)^{1/theta}. Requires p >= 1.
double fourier_besov_norm(const TrigPoly2& poly, const BesovParams& params, CutoffKind kind);

// ---------------------------------------------------------------------------
// chi_s polynomials

/// v_0(t) = 1 on |t| <= 2, 2 - |t|/2 on 2 < |t| <= 4, 0 otherwise.
double chi_v0(double t);
/// v(t) = v_0(t) - v_0(8t).
double chi_v(double t);
/// v_0 for s = 0, v(t / 2^s) for s >= 1.
double chi_vs(int s, double t);

inline constexpr double kChiTermCap = 1048576.0;  // 2^20

/// chi_s = sum over k in L(n) of v_{s1}(k1) v_{s2}(k2) e^{2 pi i k.x}. Throws
/// cap_exceeded when the box |k_i| <= 2^{s_i+2} holds more than 2^20 b_n
/// integer points (about 2^20 expected terms).
TrigPoly2 build_chi_s(int n, int s1, int s2);

struct ChiNormResult {
  double lhs = 0.0;  // ||chi_s||_p
  double rhs = 0.0;  // (2^{|s|_1} / b_n)^{1 - 1/p}
  std::size_t terms = 0;
  double ratio() const { return lhs / rhs; }
};

ChiNormResult chi_norm_check(int n, int s1, int s2, double p);
/// Several exponents with one polynomial build and one sampling pass.
std::vector<ChiNormResult> chi_norm_check(int n, int s1, int s2, const std::vector<double>& ps);

}  // namespace mixcub::fourier
