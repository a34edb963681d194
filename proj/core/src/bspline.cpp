#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "mixcub/error.hpp"
#include "mixcub/splines.hpp"

namespace mixcub::splines {

double eval_bspline(int r, double x) {
  if (r < 1) throw Error(Errc::invalid_argument, "B-spline order must be >= 1");
  if (!(x >= 0.0) || x >= static_cast<double>(r)) return 0.0;
  // v[i] holds N_q(x - i)
  double v[64];
  if (r > 63) throw Error(Errc::invalid_argument, "B-spline order too large");
  for (int i = 0; i <= r; ++i) {
    const double t = x - i;
    v[i] = (t >= 0.0 && t < 1.0) ? 1.0 : 0.0;
  }
  for (int q = 2; q <= r; ++q) {
    for (int i = 0; i <= r - q; ++i) {
      const double t = x - i;
      v[i] = (t * v[i] + (q - t) * v[i + 1]) / (q - 1);
    }
  }
  return v[0];
}

double bspline_peak(int r) { return eval_bspline(r, 0.5 * r); }

double eval_atom(const BSplineAtom& atom, Point x) {
  if (atom.k.size() != x.size() || atom.s.size() != x.size()) {
    throw Error(Errc::dimension_mismatch, "atom and point dimensions differ");
  }
  double v = 1.0;
  for (std::size_t i = 0; i < x.size() && v != 0.0; ++i) {
    v *= eval_bspline(atom.r, std::ldexp(x[i], atom.k[i]) - static_cast<double>(atom.s[i]));
  }
  return v;
}

double atom_integral(const BSplineAtom& atom) {
  int total = 0;
  for (int kj : atom.k) total += kj;
  return std::ldexp(1.0, -total);
}

double bspline_quasinorm(std::span<const SplineTerm> terms, const BesovParams& params) {
  std::map<std::vector<int>, LpAccumulator> levels;
  for (const auto& t : terms) {
    auto it = levels.try_emplace(t.k, params.p).first;
    it->second.add(t.c);
  }
  LpAccumulator outer(params.theta);
  const double e = params.alpha - params.inv_p();
  for (const auto& [k, inner] : levels) {
    int total = 0;
    for (int kj : k) total += kj;
    outer.add(std::exp2(e * total) * inner.value());
  }
  return outer.value();
}

namespace {

constexpr int kSub = 64;  // midpoints per cell and axis (resolution k + 6)

// T[i * r + a] = N_r(a + (i + 1/2) / 64)
std::vector<double> midpoint_table(int r) {
  std::vector<double> t(static_cast<std::size_t>(kSub * r));
  for (int i = 0; i < kSub; ++i) {
    for (int a = 0; a < r; ++a) t[i * r + a] = eval_bspline(r, a + (i + 0.5) / kSub);
  }
  return t;
}

struct NormSet {
  std::vector<double> ps;
  std::vector<double> acc;
  explicit NormSet(std::span<const double> p) : ps(p.begin(), p.end()), acc(p.size(), 0.0) {}
  void add(double g) {
    const double a = std::abs(g);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const double p = ps[i];
      if (std::isinf(p)) {
        acc[i] = std::max(acc[i], a);
      } else if (p == 1.0) {
        acc[i] += a;
      } else if (p == 2.0) {
        acc[i] += a * a;
      } else {
        acc[i] += std::pow(a, p);
      }
    }
  }
};

}  // namespace

std::vector<StabilityResult> stability_check(int r, std::span<const int> k, std::span<const double> a,
                                             std::span<const double> ps) {
  if (r < 1) throw Error(Errc::invalid_argument, "B-spline order must be >= 1");
  const std::size_t d = k.size();
  if (d != 1 && d != 2) throw Error(Errc::invalid_argument, "stability check supports d = 1 or 2");
  int ksum = 0;
  std::size_t expected = 1;
  for (int kj : k) {
    if (kj < 0) throw Error(Errc::invalid_argument, "levels must be nonnegative");
    ksum += kj;
    expected *= static_cast<std::size_t>(shift_extent(r, kj));
  }
  if (a.size() != expected) {
    throw Error(Errc::dimension_mismatch, "coefficient array has " + std::to_string(a.size()) +
                                              " entries, expected " + std::to_string(expected));
  }
  if (ksum + 6 * static_cast<int>(d) > 26) {
    throw Error(Errc::size_guard, "quadrature grid 2^" + std::to_string(ksum + 6 * d) + " too large");
  }
  for (double p : ps) {
    if (!(p > 0.0)) throw Error(Errc::invalid_argument, "p must be positive");
  }

  const auto T = midpoint_table(r);
  NormSet norms(ps);
  const std::int64_t cells1 = std::int64_t{1} << k[0];

  if (d == 1) {
    for (std::int64_t c = 0; c < cells1; ++c) {
      for (int i = 0; i < kSub; ++i) {
        double g = 0.0;
        for (int q = 0; q < r; ++q) g += T[i * r + q] * a[static_cast<std::size_t>(c - q + r - 1)];
        norms.add(g);
      }
    }
  } else {
    const std::int64_t n1 = shift_extent(r, k[0]);
    const std::int64_t n2 = shift_extent(r, k[1]);
    const std::int64_t cells2 = std::int64_t{1} << k[1];
    const std::int64_t pts2 = cells2 * kSub;
    // H[s1][x2] = sum_{s2} a[s1][s2] N(2^{k2} x2 - s2)
    std::vector<double> H(static_cast<std::size_t>(n1 * pts2), 0.0);
    for (std::int64_t s1 = 0; s1 < n1; ++s1) {
      const double* row = a.data() + s1 * n2;
      double* h = H.data() + s1 * pts2;
      for (std::int64_t c = 0; c < cells2; ++c) {
        for (int i = 0; i < kSub; ++i) {
          double g = 0.0;
          for (int q = 0; q < r; ++q) g += T[i * r + q] * row[c - q + r - 1];
          h[c * kSub + i] = g;
        }
      }
    }
    std::vector<double> line(static_cast<std::size_t>(pts2));
    for (std::int64_t c = 0; c < cells1; ++c) {
      for (int i = 0; i < kSub; ++i) {
        std::fill(line.begin(), line.end(), 0.0);
        for (int q = 0; q < r; ++q) {
          const double w = T[i * r + q];
          const double* h = H.data() + (c - q + r - 1) * pts2;
          for (std::int64_t x = 0; x < pts2; ++x) line[x] += w * h[x];
        }
        for (double g : line) norms.add(g);
      }
    }
  }

  const double volume = std::ldexp(1.0, -(ksum + 6 * static_cast<int>(d)));
  std::vector<StabilityResult> out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double p = ps[i];
    LpAccumulator coef(p);
    for (double v : a) coef.add(v);
    StabilityResult res;
    if (std::isinf(p)) {
      res.lhs = norms.acc[i];
      res.rhs = coef.value();
    } else {
      res.lhs = std::pow(norms.acc[i] * volume, 1.0 / p);
      res.rhs = std::exp2(-ksum / p) * coef.value();
    }
    out.push_back(res);
  }
  return out;
}

StabilityResult stability_check(int r, std::span<const int> k, std::span<const double> a, double p) {
  const double ps[1] = {p};
  return stability_check(r, k, a, std::span<const double>(ps, 1)).front();
}

}  // namespace mixcub::splines
