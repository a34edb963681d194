#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mixcub/besov.hpp"
#include "mixcub/cubature.hpp"

namespace mixcub::splines {

// ---------------------------------------------------------------------------
// Cardinal B-splines and tensor atoms

/// Cardinal B-spline of order r (support [0, r], N_1 the indicator of [0,1)),
/// by the recursion N_q(t) = (t N_{q-1}(t) + (q - t) N_{q-1}(t - 1)) / (q - 1).
double eval_bspline(int r, double x);

/// max_t N_r(t), attained at t = r/2.
double bspline_peak(int r);

struct BSplineAtom {
  std::vector<int> k;
  std::vector<std::int64_t> s;
  int r = 2;
};

/// prod_i N_r(2^{k_i} x_i - s_i).
double eval_atom(const BSplineAtom& atom, Point x);

/// Integral over R^d: 2^{-|k|_1}.
double atom_integral(const BSplineAtom& atom);

// ---------------------------------------------------------------------------
// Level-weighted sequence norms

/// (sum_k 2^{theta (alpha - 1/p) |k|_1} [sum_s |c_{k,s}|^p]^{theta/p})^{1/theta}.
struct SplineTerm {
  std::vector<int> k;
  std::vector<std::int64_t> s;
  double c = 0.0;
};
double bspline_quasinorm(std::span<const SplineTerm> terms, const BesovParams& params);

// ---------------------------------------------------------------------------
// Bivariate Faber basis

/// Univariate hat v_{j,m}: level -1 gives 1 - x (m = 0) and x (m = 1); level
/// j >= 0 gives the hat of height 1 on [m 2^-j, (m+1) 2^-j].
double faber_hat(int j, std::int64_t m, double x);
/// Integral of v_{j,m} over [0,1]: 1/2 for j = -1, 2^{-j-1} otherwise.
double faber_hat_integral(int j);
/// |D_j|: 2 for j = -1, 2^j otherwise.
inline std::int64_t faber_count(int j) { return j < 0 ? 2 : std::int64_t{1} << j; }

/// Sample positions (as integers over 2^L) and weights whose weighted sum of
/// f values is the univariate coefficient of v_{j,m}. Requires j + 1 <= L.
struct Stencil {
  int size = 0;
  std::array<std::int64_t, 3> index{};
  std::array<double, 3> weight{};
};
Stencil faber_stencil(int j, std::int64_t m, int L);

/// Coefficients D_{j,m}(f) for levels j in {-1..J}^2. Levels may be absent
/// (sparse variants keep only admissible levels); absent blocks are empty.
class FaberCoefficients {
 public:
  explicit FaberCoefficients(int max_level = 0);

  int max_level() const noexcept { return J_; }
  bool has_level(int j1, int j2) const { return !block(j1, j2).empty(); }
  /// Allocates (zero-filled) the block of level (j1, j2).
  std::vector<double>& ensure_level(int j1, int j2);
  std::vector<double>& block(int j1, int j2) { return blocks_[slot(j1, j2)]; }
  const std::vector<double>& block(int j1, int j2) const { return blocks_[slot(j1, j2)]; }

  double at(int j1, int j2, std::int64_t m1, std::int64_t m2) const {
    return block(j1, j2)[static_cast<std::size_t>(m1 * faber_count(j2) + m2)];
  }
  double& at(int j1, int j2, std::int64_t m1, std::int64_t m2) {
    return block(j1, j2)[static_cast<std::size_t>(m1 * faber_count(j2) + m2)];
  }

  /// Calls visit(j1, j2, m1, m2, value) over present levels, j1 then j2 then m1, m2.
  void for_each(const std::function<void(int, int, std::int64_t, std::int64_t, double)>& visit) const;

 private:
  std::size_t slot(int j1, int j2) const {
    return static_cast<std::size_t>((j1 + 1) * (J_ + 2) + (j2 + 1));
  }
  int J_;
  std::vector<std::vector<double>> blocks_;
};

/// Samples f on the (2^{J+1}+1)^2 dyadic grid and extracts every coefficient
/// with j in {-1..J}^2.
FaberCoefficients faber_decompose(const Integrand& f, int J);

/// Same, from a sampler sample(i1, i2) = f(i1 / 2^L, i2 / 2^L), L = J + 1.
FaberCoefficients faber_decompose_samples(const std::function<double(std::int64_t, std::int64_t)>& sample,
                                          int J);

/// sum_j sum_m D_{j,m} v_{j1,m1}(x1) v_{j2,m2}(x2) over present levels.
double faber_reconstruct(const FaberCoefficients& coeffs, Point x);

/// Integral over [0,1]^2 of the Faber expansion.
double faber_integral(const FaberCoefficients& coeffs);

/// [sum_j 2^{|j_+|_1 (alpha - 1/p) theta} (sum_m |D_{j,m}|^p)^{theta/p}]^{1/theta},
/// levels -1 counted as 0 in the weight.
double besov_norm_faber(const FaberCoefficients& coeffs, const BesovParams& params);

// ---------------------------------------------------------------------------
// Stability of the B-spline system on [0,1]^d, d in {1, 2}

/// Number of shifts s_i with N_{k,s} not vanishing on [0,1]: 2^{k_i} + r - 1,
/// s_i running from -(r-1) to 2^{k_i} - 1.
inline std::int64_t shift_extent(int r, int k) { return (std::int64_t{1} << k) + r - 1; }

struct StabilityResult {
  double lhs = 0.0;  // ||g||_p on [0,1]^d
  double rhs = 0.0;  // 2^{-|k|_1/p} (sum |a_s|^p)^{1/p}
  double ratio() const { return lhs / rhs; }
};

/// g = sum_s a_s N_{k,s}; a is the dense row-major coefficient array over the
/// shift box (first axis slowest). ||g||_p uses the midpoint rule on the
/// dyadic grid of resolution k + 6.
StabilityResult stability_check(int r, std::span<const int> k, std::span<const double> a, double p);

/// Same for several exponents, sharing one evaluation of g.
std::vector<StabilityResult> stability_check(int r, std::span<const int> k, std::span<const double> a,
                                             std::span<const double> ps);

}  // namespace mixcub::splines
