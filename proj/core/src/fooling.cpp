#include "mixcub/fooling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>

#include "mixcub/error.hpp"

namespace mixcub::fooling {

FoolingConfig FoolingConfig::make(int d, int r, const BesovParams& params) {
  if (d < 1) throw Error(Errc::invalid_argument, "d must be >= 1");
  if (r < 2 || r > 32) throw Error(Errc::invalid_argument, "spline order r must be in [2, 32]");
  if (!(params.alpha > 0.0)) throw Error(Errc::invalid_argument, "alpha must be positive");
  const double limit = std::min(static_cast<double>(r), r - 1 + params.inv_p());
  if (!(params.alpha < limit)) {
    throw Error(Errc::invalid_argument, "alpha must be below min(r, r - 1 + 1/p) = " + std::to_string(limit));
  }
  FoolingConfig c;
  c.d = d;
  c.r = r;
  c.params = params;
  c.nu = 0;
  while ((1 << c.nu) < r) ++c.nu;
  return c;
}

WitnessKind parse_witness_kind(const std::string& name) {
  if (name == "gstar") return WitnessKind::gstar;
  if (name == "gk") return WitnessKind::gk;
  if (name == "phi1") return WitnessKind::phi1;
  if (name == "phi2") return WitnessKind::phi2;
  if (name == "phi3") return WitnessKind::phi3;
  if (name == "phi4") return WitnessKind::phi4;
  throw Error(Errc::parse_error, "unknown witness kind '" + name + "'");
}

const char* to_string(WitnessKind kind) noexcept {
  switch (kind) {
    case WitnessKind::gstar: return "gstar";
    case WitnessKind::gk: return "gk";
    case WitnessKind::phi1: return "phi1";
    case WitnessKind::phi2: return "phi2";
    case WitnessKind::phi3: return "phi3";
    case WitnessKind::phi4: return "phi4";
  }
  return "?";
}

std::int64_t cell_index(const std::vector<int>& k, const std::vector<std::int64_t>& s) {
  std::int64_t idx = 0;
  for (std::size_t i = 0; i < k.size(); ++i) idx = (idx << k[i]) + s[i];
  return idx;
}

std::vector<std::int64_t> cell_shift(const std::vector<int>& k, std::int64_t index) {
  std::vector<std::int64_t> s(k.size());
  for (std::size_t i = k.size(); i-- > 0;) {
    s[i] = index & ((std::int64_t{1} << k[i]) - 1);
    index >>= k[i];
  }
  return s;
}

namespace {

int level_sum(const std::vector<int>& k) {
  int t = 0;
  for (int v : k) t += v;
  return t;
}

void check_level(const std::vector<int>& k) {
  for (int v : k) {
    if (v < 0) throw Error(Errc::invalid_argument, "levels must be nonnegative");
  }
  if (level_sum(k) > 30) throw Error(Errc::size_guard, "cell level too large");
}

// Sorted free cell indices of level k.
std::vector<std::int64_t> free_cells(const NodeSet& nodes, const std::vector<int>& k) {
  if (static_cast<int>(k.size()) != nodes.dim) throw Error(Errc::dimension_mismatch, "level and node dimensions differ");
  check_level(k);
  const std::int64_t total = std::int64_t{1} << level_sum(k);
  std::vector<char> occupied(static_cast<std::size_t>(total), 0);
  std::vector<std::int64_t> s(k.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto x = nodes.point(i);
    bool interior = true;
    for (std::size_t a = 0; a < k.size() && interior; ++a) {
      const i128 num = static_cast<i128>(x[a].num()) << k[a];
      const i128 den = x[a].den();
      if (num % den == 0) {
        interior = false;  // on a cell face
        break;
      }
      const i128 cell = floor_div(num, den);
      if (cell < 0 || cell >= (i128{1} << k[a])) {
        interior = false;  // outside [0,1]
        break;
      }
      s[a] = static_cast<std::int64_t>(cell);
    }
    if (interior) occupied[static_cast<std::size_t>(cell_index(k, s))] = 1;
  }
  std::vector<std::int64_t> out;
  for (std::int64_t c = 0; c < total; ++c) {
    if (!occupied[static_cast<std::size_t>(c)]) out.push_back(c);
  }
  return out;
}

// All k in N_0^d with |k|_1 = total, lexicographically ascending.
std::vector<std::vector<int>> levels_with_sum(int d, int total) {
  std::vector<std::vector<int>> out;
  std::vector<int> k(static_cast<std::size_t>(d), 0);
  std::function<void(int, int)> rec = [&](int axis, int left) {
    if (axis == d - 1) {
      k[static_cast<std::size_t>(axis)] = left;
      out.push_back(k);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      k[static_cast<std::size_t>(axis)] = v;
      rec(axis + 1, left - v);
    }
  };
  rec(0, total);
  return out;
}

void finalize(WitnessFunction& w) {
  const auto& cfg = w.config;
  const double e = cfg.params.alpha - cfg.params.inv_p();
  LpAccumulator outer(cfg.params.theta);
  double integral = 0.0;
  for (const auto& lvl : w.levels) {
    const double count = static_cast<double>(lvl.cells.size());
    if (count == 0.0) continue;
    const int total = level_sum(lvl.k) + cfg.d * cfg.nu;
    const double inner = std::isinf(cfg.params.p) ? std::abs(lvl.coefficient)
                                                  : std::abs(lvl.coefficient) * std::pow(count, 1.0 / cfg.params.p);
    outer.add(std::exp2(e * total) * inner);
    integral += lvl.coefficient * count * std::exp2(-total);
  }
  const double B = outer.value();
  if (!(B > 0.0)) throw Error(Errc::insufficient_cells, "witness has no atoms");
  w.C = 1.0 / B;
  w.exact_integral = w.C * integral;
}

double log_factor(int m, const FoolingConfig& cfg) {
  return std::pow(static_cast<double>(std::max(m, 1)), -(cfg.d - 1) * cfg.params.inv_theta());
}

int resolve_m(const NodeSet& nodes, std::optional<int> m) {
  const int need = level_for_size(nodes.size());
  if (!m) return need;
  if (*m < need) {
    throw Error(Errc::invalid_argument, "m=" + std::to_string(*m) + " is below ceil(log2 |X|)=" + std::to_string(need));
  }
  return *m;
}

WitnessLevel avoiding_level(const NodeSet& nodes, const std::vector<int>& k, int m, double coefficient) {
  WitnessLevel lvl;
  lvl.k = k;
  lvl.coefficient = coefficient;
  lvl.cells = free_cells(nodes, k);
  const std::size_t want = std::size_t{1} << m;
  if (lvl.cells.size() < want) {
    throw Error(Errc::insufficient_cells, "level k has " + std::to_string(lvl.cells.size()) +
                                              " free cells, need " + std::to_string(want));
  }
  lvl.cells.resize(want);
  return lvl;
}

}  // namespace

std::vector<std::vector<std::int64_t>> cells_avoiding(const NodeSet& nodes, const std::vector<int>& k) {
  std::vector<std::vector<std::int64_t>> out;
  for (std::int64_t c : free_cells(nodes, k)) out.push_back(cell_shift(k, c));
  return out;
}

int level_for_size(std::size_t count) {
  int m = 0;
  while ((std::size_t{1} << m) < count) ++m;
  return m;
}

std::size_t WitnessFunction::atom_count() const {
  std::size_t n = 0;
  for (const auto& l : levels) n += l.cells.size();
  return n;
}

double WitnessFunction::eval(Point x) const {
  const int d = config.d;
  if (static_cast<int>(x.size()) != d) throw Error(Errc::dimension_mismatch, "witness dimension mismatch");
  const int r = config.r;
  const int nu = config.nu;
  double sum = 0.0;
  std::vector<std::int64_t> s(static_cast<std::size_t>(d));
  for (const auto& lvl : levels) {
    bool inside = true;
    for (int a = 0; a < d && inside; ++a) {
      const double t = std::ldexp(x[a], lvl.k[a]);
      const std::int64_t cells = std::int64_t{1} << lvl.k[a];
      if (!(t >= 0.0) || t > static_cast<double>(cells)) {
        inside = false;
        break;
      }
      s[a] = std::min(static_cast<std::int64_t>(std::floor(t)), cells - 1);
    }
    if (!inside) continue;
    const std::int64_t idx = cell_index(lvl.k, s);
    if (!std::binary_search(lvl.cells.begin(), lvl.cells.end(), idx)) continue;
    double v = lvl.coefficient;
    for (int a = 0; a < d && v != 0.0; ++a) {
      v *= splines::eval_bspline(r, std::ldexp(x[a], lvl.k[a] + nu) - std::ldexp(static_cast<double>(s[a]), nu));
    }
    sum += v;
  }
  return C * sum;
}

std::vector<splines::SplineTerm> WitnessFunction::terms() const {
  std::vector<splines::SplineTerm> out;
  for (const auto& lvl : levels) {
    std::vector<int> kk = lvl.k;
    for (int& v : kk) v += config.nu;
    for (std::int64_t c : lvl.cells) {
      auto s = cell_shift(lvl.k, c);
      for (auto& v : s) v <<= config.nu;
      out.push_back({kk, std::move(s), C * lvl.coefficient});
    }
  }
  return out;
}

Integrand WitnessFunction::to_integrand() const {
  auto self = std::make_shared<WitnessFunction>(*this);
  Integrand f = Integrand::real_valued(config.d, [self](Point x) { return self->eval(x); },
                                       std::string("witness:") + to_string(kind));
  f.exact_integral = exact_integral;
  f.smoothness = config.params;
  return f;
}

WitnessFunction build_gstar(const NodeSet& nodes, const FoolingConfig& config, std::optional<int> m_opt) {
  if (nodes.dim != config.d) throw Error(Errc::dimension_mismatch, "node set and config dimensions differ");
  const int m = resolve_m(nodes, m_opt);
  WitnessFunction w;
  w.kind = WitnessKind::gstar;
  w.config = config;
  w.m = m;
  const double coef = std::exp2(-config.params.alpha * m) * log_factor(m, config);
  for (const auto& k : levels_with_sum(config.d, m + 1)) w.levels.push_back(avoiding_level(nodes, k, m, coef));
  finalize(w);
  return w;
}

WitnessFunction build_gk(const NodeSet& nodes, const FoolingConfig& config, std::optional<int> m_opt,
                         std::optional<std::vector<int>> k_opt) {
  if (nodes.dim != config.d) throw Error(Errc::dimension_mismatch, "node set and config dimensions differ");
  const int m = resolve_m(nodes, m_opt);
  std::vector<int> k = k_opt ? *k_opt : levels_with_sum(config.d, m + 1).front();
  if (static_cast<int>(k.size()) != config.d || level_sum(k) != m + 1) {
    throw Error(Errc::invalid_argument, "gk needs a level k with |k|_1 = m + 1");
  }
  WitnessFunction w;
  w.kind = WitnessKind::gk;
  w.config = config;
  w.m = m;
  w.levels.push_back(avoiding_level(nodes, k, m, std::exp2(-config.params.alpha * m)));
  finalize(w);
  return w;
}

WitnessFunction build_smolyak_witness(WitnessKind kind, int m, const FoolingConfig& config) {
  if (m < 0) throw Error(Errc::invalid_argument, "m must be >= 0");
  const auto& P = config.params;
  const auto ks = levels_with_sum(config.d, m);
  WitnessFunction w;
  w.kind = kind;
  w.config = config;
  w.m = m;
  auto all_cells = [&](const std::vector<int>& k, double c) {
    check_level(k);
    WitnessLevel lvl;
    lvl.k = k;
    lvl.coefficient = c;
    lvl.cells.resize(std::size_t{1} << level_sum(k));
    for (std::size_t i = 0; i < lvl.cells.size(); ++i) lvl.cells[i] = static_cast<std::int64_t>(i);
    return lvl;
  };
  auto first_cell = [&](const std::vector<int>& k, double c) {
    WitnessLevel lvl;
    lvl.k = k;
    lvl.coefficient = c;
    lvl.cells = {0};
    return lvl;
  };
  switch (kind) {
    case WitnessKind::phi1:
      w.levels.push_back(all_cells(ks.front(), std::exp2(-P.alpha * m)));
      break;
    case WitnessKind::phi2:
      for (const auto& k : ks) w.levels.push_back(all_cells(k, std::exp2(-P.alpha * m) * log_factor(m, config)));
      break;
    case WitnessKind::phi3:
      w.levels.push_back(first_cell(ks.front(), std::exp2(-(P.alpha - P.inv_p()) * m)));
      break;
    case WitnessKind::phi4:
      for (const auto& k : ks) {
        w.levels.push_back(first_cell(k, std::exp2(-(P.alpha - P.inv_p()) * m) * log_factor(m, config)));
      }
      break;
    default:
      throw Error(Errc::invalid_argument, "Smolyak witnesses are phi1..phi4");
  }
  finalize(w);
  return w;
}

std::vector<WitnessFunction> build_smolyak_witnesses(int m, const FoolingConfig& config) {
  return {build_smolyak_witness(WitnessKind::phi1, m, config), build_smolyak_witness(WitnessKind::phi2, m, config),
          build_smolyak_witness(WitnessKind::phi3, m, config), build_smolyak_witness(WitnessKind::phi4, m, config)};
}

double check_vanishing(const WitnessFunction& w, const NodeSet& nodes, double tol) {
  double worst = 0.0;
  std::vector<double> x(static_cast<std::size_t>(nodes.dim));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto p = nodes.point(i);
    for (std::size_t a = 0; a < x.size(); ++a) x[a] = p[a].to_double();
    const double v = std::abs(w.eval(x));
    worst = std::max(worst, v);
    if (v > tol) {
      throw Error(Errc::vanishing_check_failed,
                  "witness takes value " + std::to_string(v) + " at node " + std::to_string(i));
    }
  }
  return worst;
}

LowerBound witness_lower_bound(const NodeSet& nodes, WitnessKind kind, const FoolingConfig& config,
                               std::optional<int> m) {
  LowerBound out;
  switch (kind) {
    case WitnessKind::gstar:
      out.witness = build_gstar(nodes, config, m);
      break;
    case WitnessKind::gk:
      out.witness = build_gk(nodes, config, m);
      break;
    default:
      if (!m) throw Error(Errc::invalid_argument, "phi witnesses need the Smolyak level m");
      out.witness = build_smolyak_witness(kind, *m, config);
      break;
  }
  out.max_node_value = check_vanishing(out.witness, nodes);
  out.bound = std::abs(out.witness.exact_integral);
  return out;
}

}  // namespace mixcub::fooling
