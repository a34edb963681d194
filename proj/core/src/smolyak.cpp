#include "mixcub/smolyak.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

#include "mixcub/error.hpp"
#include "mixcub/summation.hpp"

namespace mixcub::smolyak {

Boundary parse_boundary(const std::string& name) {
  if (name == "closed") return Boundary::closed;
  if (name == "periodic") return Boundary::periodic;
  throw Error(Errc::parse_error, "boundary must be 'closed' or 'periodic', got '" + name + "'");
}

const char* to_string(Boundary b) noexcept { return b == Boundary::closed ? "closed" : "periodic"; }

namespace {

// Coordinates of exact level l as integers over 2^m.
std::vector<std::int64_t> axis_points(int l, int m, Boundary boundary) {
  std::vector<std::int64_t> out;
  if (l == 0) {
    out.push_back(0);
    if (boundary == Boundary::closed) out.push_back(std::int64_t{1} << m);
    return out;
  }
  const std::int64_t step = std::int64_t{1} << (m - l);
  for (std::int64_t odd = 1; odd < (std::int64_t{1} << l); odd += 2) out.push_back(odd * step);
  return out;
}

std::int64_t axis_count(int l, Boundary boundary) {
  if (l == 0) return boundary == Boundary::closed ? 2 : 1;
  return std::int64_t{1} << (l - 1);
}

void check_args(int d, int m) {
  if (d < 1) throw Error(Errc::invalid_argument, "d must be >= 1");
  if (m < 0) throw Error(Errc::invalid_argument, "m must be >= 0");
  if (m > 40) throw Error(Errc::size_guard, "m too large");
}

// Visits every level vector with sum <= m (sum-major, then lexicographic).
void for_each_level_vector(int d, int m, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> l(static_cast<std::size_t>(d), 0);
  for (int total = 0; total <= m; ++total) {
    std::function<void(int, int)> rec = [&](int axis, int left) {
      if (axis == d - 1) {
        l[static_cast<std::size_t>(axis)] = left;
        visit(l);
        return;
      }
      for (int v = left; v >= 0; --v) {
        l[static_cast<std::size_t>(axis)] = v;
        rec(axis + 1, left - v);
      }
    };
    rec(0, total);
  }
}

}  // namespace

std::int64_t smolyak_grid_size(int d, int m, Boundary boundary) {
  check_args(d, m);
  // ways[t] = number of points of the first i axes with level sum t
  std::vector<double> ways(static_cast<std::size_t>(m + 1), 0.0);
  ways[0] = 1.0;
  for (int axis = 0; axis < d; ++axis) {
    std::vector<double> next(ways.size(), 0.0);
    for (int t = 0; t <= m; ++t) {
      if (ways[static_cast<std::size_t>(t)] == 0.0) continue;
      for (int l = 0; t + l <= m; ++l) {
        next[static_cast<std::size_t>(t + l)] += ways[static_cast<std::size_t>(t)] * static_cast<double>(axis_count(l, boundary));
      }
    }
    ways = std::move(next);
  }
  double total = 0.0;
  for (double w : ways) total += w;
  if (total > static_cast<double>(kMaxGridPoints)) {
    throw Error(Errc::size_guard, "Smolyak grid with d=" + std::to_string(d) + ", m=" + std::to_string(m) +
                                      " has more than 2^24 points");
  }
  return static_cast<std::int64_t>(total);
}

NodeSet SmolyakGrid::nodes() const {
  NodeSet out;
  out.dim = d;
  out.coords.reserve(points.size());
  const i128 den = i128{1} << m;
  for (std::int64_t v : points) out.coords.emplace_back(static_cast<i128>(v), den);
  return out;
}

SmolyakGrid smolyak_grid(int d, int m, Boundary boundary) {
  smolyak_grid_size(d, m, boundary);  // size guard
  SmolyakGrid g;
  g.d = d;
  g.m = m;
  g.boundary = boundary;

  std::vector<std::vector<std::int64_t>> axis_sets(static_cast<std::size_t>(m + 1));
  for (int l = 0; l <= m; ++l) axis_sets[static_cast<std::size_t>(l)] = axis_points(l, m, boundary);

  int current_sum = -1;
  std::size_t block_start = 0;
  const std::size_t du = static_cast<std::size_t>(d);
  auto sort_block = [&]() {
    // lexicographic order inside one level sum
    const std::size_t count = (g.points.size() - block_start) / du;
    std::vector<std::vector<std::int64_t>> rows(count);
    for (std::size_t i = 0; i < count; ++i) {
      rows[i].assign(g.points.begin() + static_cast<std::ptrdiff_t>(block_start + i * du),
                     g.points.begin() + static_cast<std::ptrdiff_t>(block_start + (i + 1) * du));
    }
    std::sort(rows.begin(), rows.end());
    for (std::size_t i = 0; i < count; ++i) std::copy(rows[i].begin(), rows[i].end(), g.points.begin() + static_cast<std::ptrdiff_t>(block_start + i * du));
  };

  for_each_level_vector(d, m, [&](const std::vector<int>& l) {
    int sum = 0;
    for (int v : l) sum += v;
    if (sum != current_sum) {
      if (current_sum >= 0) sort_block();
      current_sum = sum;
      block_start = g.points.size();
    }
    if (sum == m) g.level_sets.push_back(l);
    // cartesian product of the per-axis sets
    std::vector<std::size_t> idx(du, 0);
    while (true) {
      for (std::size_t a = 0; a < du; ++a) g.points.push_back(axis_sets[static_cast<std::size_t>(l[a])][idx[a]]);
      std::size_t a = du;
      while (a > 0) {
        --a;
        if (++idx[a] < axis_sets[static_cast<std::size_t>(l[a])].size()) break;
        idx[a] = 0;
        if (a == 0) return;
      }
      if (du == 0) return;
    }
  });
  if (current_sum >= 0) sort_block();
  std::sort(g.level_sets.begin(), g.level_sets.end(), std::greater<>());
  return g;
}

// ---------------------------------------------------------------------------

double SparseSurplus::eval(Point x) const { return splines::faber_reconstruct(coeffs, x); }

double SparseSurplus::integral() const { return splines::faber_integral(coeffs); }

namespace {

template <class Visit>
void for_each_admissible(int m, Visit&& visit) {
  const int J = m - 1;
  for (int j1 = -1; j1 <= J; ++j1) {
    for (int j2 = -1; j2 <= J; ++j2) {
      if (admissible(j1, j2, m)) visit(j1, j2);
    }
  }
}

}  // namespace

SparseSurplus smolyak_interpolate(const Integrand& f, int m, Boundary boundary) {
  if (f.dim != 2) throw Error(Errc::dimension_mismatch, "Smolyak interpolation is bivariate");
  smolyak_grid_size(2, m, Boundary::closed);
  SparseSurplus out;
  out.m = m;
  out.boundary = boundary;
  out.coeffs = splines::FaberCoefficients(m - 1);
  const std::int64_t top = std::int64_t{1} << m;
  std::unordered_map<std::int64_t, double> cache;
  auto sample = [&](std::int64_t i1, std::int64_t i2) {
    if (boundary == Boundary::periodic) {
      if (i1 == top) i1 = 0;
      if (i2 == top) i2 = 0;
    }
    const std::int64_t key = i1 * (top + 1) + i2;
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double x[2] = {std::ldexp(static_cast<double>(i1), -m), std::ldexp(static_cast<double>(i2), -m)};
    const double v = f.real(Point(x, 2));
    cache.emplace(key, v);
    return v;
  };
  for_each_admissible(m, [&](int j1, int j2) {
    auto& blk = out.coeffs.ensure_level(j1, j2);
    const std::int64_t c2 = splines::faber_count(j2);
    for (std::int64_t m1 = 0; m1 < splines::faber_count(j1); ++m1) {
      const auto s1 = splines::faber_stencil(j1, m1, m);
      for (std::int64_t m2 = 0; m2 < c2; ++m2) {
        const auto s2 = splines::faber_stencil(j2, m2, m);
        double v = 0.0;
        for (int a = 0; a < s1.size; ++a) {
          for (int b = 0; b < s2.size; ++b) v += s1.weight[a] * s2.weight[b] * sample(s1.index[a], s2.index[b]);
        }
        blk[static_cast<std::size_t>(m1 * c2 + m2)] = v;
      }
    }
  });
  return out;
}

CubatureRule smolyak_cubature(int m, Boundary boundary) {
  smolyak_grid_size(2, m, Boundary::closed);
  const std::int64_t top = std::int64_t{1} << m;
  std::unordered_map<std::int64_t, CompensatedSum> acc;
  for_each_admissible(m, [&](int j1, int j2) {
    const double vol = splines::faber_hat_integral(j1) * splines::faber_hat_integral(j2);
    for (std::int64_t m1 = 0; m1 < splines::faber_count(j1); ++m1) {
      const auto s1 = splines::faber_stencil(j1, m1, m);
      for (std::int64_t m2 = 0; m2 < splines::faber_count(j2); ++m2) {
        const auto s2 = splines::faber_stencil(j2, m2, m);
        for (int a = 0; a < s1.size; ++a) {
          for (int b = 0; b < s2.size; ++b) {
            std::int64_t i1 = s1.index[a];
            std::int64_t i2 = s2.index[b];
            if (boundary == Boundary::periodic) {
              if (i1 == top) i1 = 0;
              if (i2 == top) i2 = 0;
            }
            acc[i1 * (top + 1) + i2].add(vol * s1.weight[a] * s2.weight[b]);
          }
        }
      }
    }
  });
  std::vector<std::pair<std::int64_t, double>> entries;
  entries.reserve(acc.size());
  for (const auto& [key, w] : acc) entries.emplace_back(key, w.value());
  std::sort(entries.begin(), entries.end());
  NodeSet nodes;
  nodes.dim = 2;
  std::vector<double> weights;
  const i128 den = i128{1} << m;
  for (const auto& [key, w] : entries) {
    nodes.coords.emplace_back(static_cast<i128>(key / (top + 1)), den);
    nodes.coords.emplace_back(static_cast<i128>(key % (top + 1)), den);
    weights.push_back(w);
  }
  return CubatureRule(std::move(nodes), std::move(weights),
                      "smolyak:2," + std::to_string(m) + " " + to_string(boundary));
}

std::vector<double> sampling_errors(const SparseSurplus& interp, const Integrand& f, int oracle_extra) {
  if (f.dim != 2) throw Error(Errc::dimension_mismatch, "sampling error is bivariate");
  const int level = interp.m + oracle_extra;
  if (2 * level + 2 > 26) {
    throw Error(Errc::size_guard, "sampling oracle at resolution " + std::to_string(level) + " too large");
  }
  const std::int64_t cells = std::int64_t{1} << level;
  const double h = std::ldexp(1.0, -level);
  const double g = 0.5 / std::sqrt(3.0);
  const double offs[2] = {0.5 - g, 0.5 + g};
  CompensatedSum l1;
  CompensatedSum l2;
  double linf = 0.0;
  for (std::int64_t c1 = 0; c1 < cells; ++c1) {
    for (int a = 0; a < 2; ++a) {
      const double x1 = (static_cast<double>(c1) + offs[a]) * h;
      for (std::int64_t c2 = 0; c2 < cells; ++c2) {
        for (int b = 0; b < 2; ++b) {
          const double x[2] = {x1, (static_cast<double>(c2) + offs[b]) * h};
          const double e = std::abs(f.real(Point(x, 2)) - interp.eval(Point(x, 2)));
          l1.add(e);
          l2.add(e * e);
          linf = std::max(linf, e);
        }
      }
    }
  }
  const double n = 4.0 * static_cast<double>(cells) * static_cast<double>(cells);
  return {l1.value() / n, std::sqrt(l2.value() / n), linf};
}

double sampling_error(const Integrand& f, int m, double q, Boundary boundary, int oracle_extra) {
  if (!(q == 1.0 || q == 2.0 || std::isinf(q))) {
    throw Error(Errc::unsupported_exponent, "sampling error supports q in {1, 2, inf}");
  }
  const auto interp = smolyak_interpolate(f, m, boundary);
  const auto e = sampling_errors(interp, f, oracle_extra);
  return q == 1.0 ? e[0] : (q == 2.0 ? e[1] : e[2]);
}

}  // namespace mixcub::smolyak
