#include <algorithm>
#include <cmath>
#include <string>

#include "mixcub/error.hpp"
#include "mixcub/splines.hpp"

namespace mixcub::splines {

double faber_hat(int j, std::int64_t m, double x) {
  if (j < 0) return m == 0 ? 1.0 - x : x;
  const double t = std::ldexp(x, j + 1) - static_cast<double>(2 * m + 1);
  return std::max(0.0, 1.0 - std::abs(t));
}

double faber_hat_integral(int j) { return j < 0 ? 0.5 : std::ldexp(1.0, -j - 1); }

Stencil faber_stencil(int j, std::int64_t m, int L) {
  if (j + 1 > L) throw Error(Errc::invalid_argument, "stencil level exceeds sampling resolution");
  Stencil st;
  if (j < 0) {
    st.size = 1;
    st.index[0] = m << L;
    st.weight[0] = 1.0;
    return st;
  }
  const std::int64_t h = std::int64_t{1} << (L - j);
  st.size = 3;
  st.index = {m * h, m * h + h / 2, (m + 1) * h};
  st.weight = {-0.5, 1.0, -0.5};
  return st;
}

FaberCoefficients::FaberCoefficients(int max_level) : J_(max_level) {
  if (max_level < -1) throw Error(Errc::invalid_argument, "max level must be >= -1");
  blocks_.resize(static_cast<std::size_t>((J_ + 2) * (J_ + 2)));
}

std::vector<double>& FaberCoefficients::ensure_level(int j1, int j2) {
  if (j1 < -1 || j2 < -1 || j1 > J_ || j2 > J_) throw Error(Errc::invalid_argument, "level out of range");
  auto& b = block(j1, j2);
  if (b.empty()) b.assign(static_cast<std::size_t>(faber_count(j1) * faber_count(j2)), 0.0);
  return b;
}

void FaberCoefficients::for_each(
    const std::function<void(int, int, std::int64_t, std::int64_t, double)>& visit) const {
  for (int j1 = -1; j1 <= J_; ++j1) {
    for (int j2 = -1; j2 <= J_; ++j2) {
      const auto& b = block(j1, j2);
      if (b.empty()) continue;
      const std::int64_t c2 = faber_count(j2);
      for (std::size_t i = 0; i < b.size(); ++i) {
        visit(j1, j2, static_cast<std::int64_t>(i) / c2, static_cast<std::int64_t>(i) % c2, b[i]);
      }
    }
  }
}

FaberCoefficients faber_decompose_samples(const std::function<double(std::int64_t, std::int64_t)>& sample,
                                          int J) {
  if (J < -1) throw Error(Errc::invalid_argument, "J must be >= -1");
  const int L = J + 1;
  FaberCoefficients out(J);
  for (int j1 = -1; j1 <= J; ++j1) {
    for (int j2 = -1; j2 <= J; ++j2) {
      auto& blk = out.ensure_level(j1, j2);
      const std::int64_t c1 = faber_count(j1);
      const std::int64_t c2 = faber_count(j2);
      for (std::int64_t m1 = 0; m1 < c1; ++m1) {
        const Stencil s1 = faber_stencil(j1, m1, L);
        for (std::int64_t m2 = 0; m2 < c2; ++m2) {
          const Stencil s2 = faber_stencil(j2, m2, L);
          double v = 0.0;
          for (int a = 0; a < s1.size; ++a) {
            for (int b = 0; b < s2.size; ++b) v += s1.weight[a] * s2.weight[b] * sample(s1.index[a], s2.index[b]);
          }
          blk[static_cast<std::size_t>(m1 * c2 + m2)] = v;
        }
      }
    }
  }
  return out;
}

FaberCoefficients faber_decompose(const Integrand& f, int J) {
  if (f.dim != 2) throw Error(Errc::dimension_mismatch, "Faber decomposition needs a bivariate integrand");
  if (J < 0) throw Error(Errc::invalid_argument, "J must be >= 0");
  if (J > 12) throw Error(Errc::size_guard, "Faber level J=" + std::to_string(J) + " exceeds 12");
  const int L = J + 1;
  const std::int64_t n = (std::int64_t{1} << L) + 1;
  std::vector<double> grid(static_cast<std::size_t>(n * n));
  for (std::int64_t i1 = 0; i1 < n; ++i1) {
    for (std::int64_t i2 = 0; i2 < n; ++i2) {
      const double x[2] = {std::ldexp(static_cast<double>(i1), -L), std::ldexp(static_cast<double>(i2), -L)};
      grid[static_cast<std::size_t>(i1 * n + i2)] = f.real(Point(x, 2));
    }
  }
  return faber_decompose_samples(
      [&](std::int64_t i1, std::int64_t i2) { return grid[static_cast<std::size_t>(i1 * n + i2)]; }, J);
}

namespace {

struct AxisTerms {
  int size = 0;
  std::int64_t m[2]{};
  double v[2]{};
};

AxisTerms axis_terms(int j, double x) {
  AxisTerms t;
  if (j < 0) {
    t.size = 2;
    t.m[0] = 0;
    t.v[0] = 1.0 - x;
    t.m[1] = 1;
    t.v[1] = x;
    return t;
  }
  const std::int64_t count = std::int64_t{1} << j;
  std::int64_t m = static_cast<std::int64_t>(std::floor(std::ldexp(x, j)));
  m = std::clamp<std::int64_t>(m, 0, count - 1);
  t.size = 1;
  t.m[0] = m;
  t.v[0] = faber_hat(j, m, x);
  return t;
}

}  // namespace

double faber_reconstruct(const FaberCoefficients& coeffs, Point x) {
  if (x.size() != 2) throw Error(Errc::dimension_mismatch, "Faber reconstruction is bivariate");
  const int J = coeffs.max_level();
  double sum = 0.0;
  for (int j1 = -1; j1 <= J; ++j1) {
    const AxisTerms t1 = axis_terms(j1, x[0]);
    for (int j2 = -1; j2 <= J; ++j2) {
      if (!coeffs.has_level(j1, j2)) continue;
      const AxisTerms t2 = axis_terms(j2, x[1]);
      for (int a = 0; a < t1.size; ++a) {
        if (t1.v[a] == 0.0) continue;
        for (int b = 0; b < t2.size; ++b) sum += coeffs.at(j1, j2, t1.m[a], t2.m[b]) * t1.v[a] * t2.v[b];
      }
    }
  }
  return sum;
}

double faber_integral(const FaberCoefficients& coeffs) {
  double total = 0.0;
  const int J = coeffs.max_level();
  for (int j1 = -1; j1 <= J; ++j1) {
    for (int j2 = -1; j2 <= J; ++j2) {
      const auto& b = coeffs.block(j1, j2);
      if (b.empty()) continue;
      double s = 0.0;
      for (double v : b) s += v;
      total += s * faber_hat_integral(j1) * faber_hat_integral(j2);
    }
  }
  return total;
}

double besov_norm_faber(const FaberCoefficients& coeffs, const BesovParams& params) {
  const double e = params.alpha - params.inv_p();
  LpAccumulator outer(params.theta);
  const int J = coeffs.max_level();
  for (int j1 = -1; j1 <= J; ++j1) {
    for (int j2 = -1; j2 <= J; ++j2) {
      const auto& b = coeffs.block(j1, j2);
      if (b.empty()) continue;
      LpAccumulator inner(params.p);
      for (double v : b) inner.add(v);
      const int level = std::max(j1, 0) + std::max(j2, 0);
      outer.add(std::exp2(e * level) * inner.value());
    }
  }
  return outer.value();
}

}  // namespace mixcub::splines
