#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixcub/besov.hpp"
#include "mixcub/cubature.hpp"
#include "mixcub/splines.hpp"

/// Functions in the unit ball of a mixed Besov class that vanish on a given
/// node set. Their integrals are lower bounds for the error of every cubature
/// rule using those nodes.
namespace mixcub::fooling {

struct FoolingConfig {
  int d = 2;
  int r = 3;
  int nu = 2;  // minimal with 2^{nu-1} < r <= 2^nu
  BesovParams params;

  /// Validates r >= 2 and 0 < alpha < min(r, r - 1 + 1/p); computes nu.
  static FoolingConfig make(int d, int r, const BesovParams& params);
};

enum class WitnessKind { gstar, gk, phi1, phi2, phi3, phi4 };
WitnessKind parse_witness_kind(const std::string& name);
const char* to_string(WitnessKind kind) noexcept;

/// Cell shifts s in S^d(k) (0 <= s_i < 2^{k_i}) whose open cell
/// prod (s_i 2^{-k_i}, (s_i + 1) 2^{-k_i}) contains no node, in lexicographic
/// order. Cells are located by exact rational arithmetic; a node on a cell
/// face lies in no open cell.
std::vector<std::vector<std::int64_t>> cells_avoiding(const NodeSet& nodes, const std::vector<int>& k);

/// Row-major linear cell index (first axis slowest).
std::int64_t cell_index(const std::vector<int>& k, const std::vector<std::int64_t>& s);
std::vector<std::int64_t> cell_shift(const std::vector<int>& k, std::int64_t index);

/// Atoms g_{k,s} = N_{k+nu, 2^nu s}, supported in the closure of cell (k, s),
/// grouped by the cell level k; all atoms of a level share one coefficient.
struct WitnessLevel {
  std::vector<int> k;
  std::vector<std::int64_t> cells;  // sorted linear cell indices
  double coefficient = 0.0;         // before normalisation
};

struct WitnessFunction {
  WitnessKind kind = WitnessKind::gstar;
  FoolingConfig config;
  int m = 0;
  std::vector<WitnessLevel> levels;
  double C = 1.0;               // normalisation, B(C g) = 1
  double exact_integral = 0.0;  // C sum_levels coefficient * #cells * 2^{-|k|_1 - d nu}

  std::size_t atom_count() const;
  /// Normalised witness at x; only the cell containing x is inspected per level.
  double eval(Point x) const;
  /// B-spline representation of the normalised witness (levels k + nu, shifts 2^nu s).
  std::vector<splines::SplineTerm> terms() const;
  Integrand to_integrand() const;
};

/// m for a node set: ceil(log2 |X|).
int level_for_size(std::size_t count);

/// C 2^{-alpha m} m^{-(d-1)/theta} sum_{|k|_1 = m+1} sum_{s in S_*(k)} g_{k,s},
/// S_*(k) the lexicographically first 2^m free cells. m defaults to
/// level_for_size(|X|); max(m, 1) enters the logarithmic factor.
WitnessFunction build_gstar(const NodeSet& nodes, const FoolingConfig& config, std::optional<int> m = std::nullopt);

/// C' 2^{-alpha m} sum_{s in S_*(k)} g_{k,s} for one k with |k|_1 = m + 1
/// (default: the lexicographically first such k).
WitnessFunction build_gk(const NodeSet& nodes, const FoolingConfig& config, std::optional<int> m = std::nullopt,
                         std::optional<std::vector<int>> k = std::nullopt);

/// phi_1..phi_4 for the grid G^d(m): phi_1 uses the lexicographically first
/// k with |k|_1 = m and all cells, phi_2 all k and all cells, phi_3 the single
/// atom of that k at s = 0, phi_4 the atom s = 0 of every k.
std::vector<WitnessFunction> build_smolyak_witnesses(int m, const FoolingConfig& config);
WitnessFunction build_smolyak_witness(WitnessKind kind, int m, const FoolingConfig& config);

/// Builds the requested witness for the node set, checks in floating point
/// that it vanishes (|value| <= 1e-14) at every node, and returns
/// |exact_integral|. For the phi kinds m is the Smolyak level and must be given.
struct LowerBound {
  WitnessFunction witness;
  double bound = 0.0;
  double max_node_value = 0.0;
};
LowerBound witness_lower_bound(const NodeSet& nodes, WitnessKind kind, const FoolingConfig& config,
                               std::optional<int> m = std::nullopt);

/// Throws vanishing_check_failed if |w(x)| > tol at some node; returns the max.
double check_vanishing(const WitnessFunction& w, const NodeSet& nodes, double tol = 1e-14);

}  // namespace mixcub::fooling
