#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mixcub/cubature.hpp"
#include "mixcub/splines.hpp"

namespace mixcub::smolyak {

/// periodic: G^d(m) = union over |k|_1 = m of prod {l 2^{-k_i} : 0 <= l < 2^{k_i}}.
/// closed: the same union with 0 <= l <= 2^{k_i}, i.e. including the faces
/// x_i = 1. The closed grid carries the non-periodic sampling operator; the
/// periodic grid is its image under x_i = 1 -> 0.
enum class Boundary { closed, periodic };

Boundary parse_boundary(const std::string& name);
const char* to_string(Boundary b) noexcept;

struct SmolyakGrid {
  int d = 2;
  int m = 0;
  Boundary boundary = Boundary::periodic;
  /// Point coordinates as integers over 2^m, d per point; ordered by the sum
  /// of coordinate levels, then lexicographically.
  std::vector<std::int64_t> points;
  /// Multi-indices k with |k|_1 = m generating the union.
  std::vector<std::vector<int>> level_sets;

  std::size_t size() const noexcept { return points.size() / static_cast<std::size_t>(d); }
  NodeSet nodes() const;
};

inline constexpr std::int64_t kMaxGridPoints = std::int64_t{1} << 24;

/// Throws size_guard when the generating grids hold more than 2^24 points.
SmolyakGrid smolyak_grid(int d, int m, Boundary boundary = Boundary::periodic);

/// Cardinality without materialising the points (inclusion by dedup of a
/// per-coordinate level count).
std::int64_t smolyak_grid_size(int d, int m, Boundary boundary = Boundary::periodic);

/// Hierarchical Faber interpolant on the closed grid G^2(m): coefficients of
/// the levels j in {-1,0,...}^2 with (j1+1) + (j2+1) <= m.
struct SparseSurplus {
  int m = 0;
  Boundary boundary = Boundary::closed;
  splines::FaberCoefficients coeffs{-1};

  double eval(Point x) const;
  double integral() const;
};

/// True when level j belongs to the sparse set for m.
inline bool admissible(int j1, int j2, int m) { return (j1 + 1) + (j2 + 1) <= m; }

/// For Boundary::periodic, samples at x_i = 1 are taken at x_i = 0 (meant for
/// 1-periodic integrands), so the interpolant only uses nodes of the periodic grid.
SparseSurplus smolyak_interpolate(const Integrand& f, int m, Boundary boundary = Boundary::closed);

/// Weights from integrating the interpolant: each coefficient's stencil is
/// charged with the product of the hat integrals. Nodes lie in the closed
/// (or, folded, the periodic) grid.
CubatureRule smolyak_cubature(int m, Boundary boundary = Boundary::closed);

/// ||f - S_m f||_q for q in {1, 2, inf}, estimated on the uniform grid of
/// resolution m + 4 with 2x2 Gauss-Legendre points per cell (q = inf: max over
/// those points). oracle_extra overrides the +4.
double sampling_error(const Integrand& f, int m, double q, Boundary boundary = Boundary::closed,
                      int oracle_extra = 4);

/// All three norms from one pass: {L1, L2, Linf}.
std::vector<double> sampling_errors(const SparseSurplus& interp, const Integrand& f, int oracle_extra = 4);

}  // namespace mixcub::smolyak
