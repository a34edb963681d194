// mixcub command line front end.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mixcub/besov.hpp"
#include "mixcub/cubature.hpp"
#include "mixcub/error.hpp"
#include "mixcub/fiblattice.hpp"
#include "mixcub/fooling.hpp"
#include "mixcub/fourier.hpp"
#include "mixcub/harness.hpp"
#include "mixcub/integrands.hpp"
#include "mixcub/rational.hpp"
#include "mixcub/smolyak.hpp"
#include "mixcub/splines.hpp"

using namespace mixcub;
using nlohmann::json;
using harness::format_double;

namespace {

constexpr int kExitError = 1;
constexpr int kExitGuard = 2;

bool is_json(const std::string& format) {
  if (format == "csv") return false;
  if (format == "json") return true;
  throw Error(Errc::parse_error, "unknown format '" + format + "' (csv or json)");
}

json num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

std::string rat_str(const Rational& r) {
  return r.den() == 1 ? std::to_string(r.num()) : std::to_string(r.num()) + "/" + std::to_string(r.den());
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

int to_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw Error(Errc::parse_error, "expected an integer, got '" + s + "'");
  return v;
}

double to_exponent(const std::string& s) {
  if (s == "inf" || s == "infinity") return infinity;
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw Error(Errc::parse_error, "expected a number, got '" + s + "'");
  return v;
}

// "fib:<n>", "fibnp:<n>" or "smolyak:<d>,<m>"
struct RuleSpec {
  std::string family;
  int n = 0;
  int d = 2;
  std::optional<int> smolyak_m;
  CubatureRule rule;
};

RuleSpec parse_rule(const std::string& text, std::optional<smolyak::Boundary> boundary, bool build) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(Errc::parse_error, "rule must look like fib:<n>, fibnp:<n> or smolyak:<d>,<m>");
  RuleSpec r;
  r.family = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  if (r.family == "fib" || r.family == "fibnp") {
    r.n = to_int(arg);
    if (build) r.rule = r.family == "fib" ? cubature::fibonacci_qmc(r.n) : cubature::fibonacci_nonperiodic(r.n);
  } else if (r.family == "smolyak") {
    const auto parts = split(arg, ',');
    if (parts.size() != 2) throw Error(Errc::parse_error, "smolyak rule needs <d>,<m>");
    r.d = to_int(parts[0]);
    r.smolyak_m = to_int(parts[1]);
    if (build) {
      if (r.d != 2) throw Error(Errc::invalid_argument, "Smolyak cubature is implemented for d=2");
      r.rule = smolyak::smolyak_cubature(*r.smolyak_m, boundary.value_or(smolyak::Boundary::closed));
    }
  } else {
    throw Error(Errc::parse_error, "unknown rule family '" + r.family + "'");
  }
  return r;
}

std::optional<smolyak::Boundary> parse_boundary_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return smolyak::parse_boundary(s);
}

NodeSet read_node_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, "cannot open node file '" + path + "'");
  NodeSet nodes;
  nodes.dim = 0;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto fields = split(line, ',');
    if (nodes.dim == 0) nodes.dim = static_cast<int>(fields.size());
    if (static_cast<int>(fields.size()) != nodes.dim) throw Error(Errc::parse_error, "ragged node file '" + path + "'");
    for (const auto& f : fields) nodes.coords.push_back(Rational::parse(f));
  }
  if (nodes.dim == 0) throw Error(Errc::parse_error, "node file '" + path + "' holds no points");
  return nodes;
}

// --config: a JSON object of flag values, either flat or keyed by subcommand.
// Values are spliced in front of the command line flags, which win on conflict.
std::vector<std::string> config_args(const std::string& path, const std::string& sub) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, "cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error(Errc::parse_error, "config must be a JSON object");
  const json& section = j.contains(sub) && j[sub].is_object() ? j[sub] : j;
  std::vector<std::string> args;
  for (const auto& [key, value] : section.items()) {
    if (value.is_object()) continue;  // another subcommand's section
    const std::string flag = "--" + key;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) joined += (joined.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
      args.push_back(flag);
      args.push_back(joined);
    } else {
      args.push_back(flag);
      args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
  }
  return args;
}

// ---------------------------------------------------------------------------

void cmd_lattice(int n, const std::string& format) {
  const bool js = is_json(format);
  const auto fi = fiblattice::fibonacci(n);
  const auto pts = fiblattice::fibonacci_lattice(n);
  if (!js) std::cout << "mu,x_num,x_den,y_num,y_den\n";
  // numerators over the common denominator b_n, not reduced
  const auto den = fi.size();
  for (const auto& p : pts) {
    const auto y_num = static_cast<std::int64_t>(mod_pos(i128(p.mu) * i128(fi.b_prev), i128(fi.b)));
    if (js) {
      std::cout << json{{"mu", p.mu}, {"x_num", p.mu}, {"x_den", den}, {"y_num", y_num}, {"y_den", den}}.dump() << '\n';
    } else {
      std::cout << p.mu << ',' << p.mu << ',' << den << ',' << y_num << ',' << den << '\n';
    }
  }
}

void cmd_dual(int n, std::int64_t box, const std::string& format) {
  const bool js = is_json(format);
  if (!js) std::cout << "k1,k2\n";
  for (const auto& k : fiblattice::dual_enumerate(n, box)) {
    if (js) {
      std::cout << json{{"k1", k.k1}, {"k2", k.k2}}.dump() << '\n';
    } else {
      std::cout << k.k1 << ',' << k.k2 << '\n';
    }
  }
}

void cmd_zaremba(int n, const std::string& format) {
  const auto z = fiblattice::zaremba_min_product(n);
  const auto b = fiblattice::fibonacci(n).size();
  if (is_json(format)) {
    std::cout << json{{"n", n}, {"b", b}, {"value", z.value}, {"k1", z.witness.k1}, {"k2", z.witness.k2}, {"ratio", z.ratio}}.dump()
              << '\n';
  } else {
    std::cout << "n,b,value,k1,k2,ratio\n"
              << n << ',' << b << ',' << z.value << ',' << z.witness.k1 << ',' << z.witness.k2 << ','
              << format_double(z.ratio) << '\n';
  }
}

void cmd_integrate(const std::string& rule_text, const std::string& fn_text, const std::string& boundary,
                   unsigned threads, const std::string& format) {
  const bool js = is_json(format);
  const auto spec = integrands::parse_function(fn_text);
  const auto r = parse_rule(rule_text, parse_boundary_opt(boundary), true);
  const Integrand f = spec.make_for(r.rule, r.smolyak_m);
  const cubature::ApplyOptions opts{threads};
  double value = 0.0, imag = 0.0;
  if (f.is_complex()) {
    const auto z = cubature::apply_rule_complex(r.rule, f, opts);
    value = z.real();
    imag = z.imag();
  } else {
    value = cubature::apply_rule(r.rule, f, opts);
  }
  const double exact = f.exact_integral ? f.exact_integral->real() : std::nan("");
  const double error = value - exact;
  const auto N = static_cast<std::int64_t>(r.rule.support_size());
  if (js) {
    json j{{"rule", r.rule.label()}, {"N", N}, {"value", num(value)}, {"exact", num(exact)}, {"error", num(error)}};
    if (f.is_complex()) j["value_imag"] = num(imag);
    std::cout << j.dump() << '\n';
  } else {
    std::cout << "rule,N,value,exact,error\n"
              << r.rule.label() << ',' << N << ',' << format_double(value) << ',' << format_double(exact) << ','
              << format_double(error) << '\n';
  }
}

void cmd_faber(const std::string& fn_text, int levels, const std::string& besov, const std::string& format) {
  const bool js = is_json(format);
  const auto f = integrands::parse_function(fn_text).make();
  if (f.dim != 2) throw Error(Errc::dimension_mismatch, "the Faber transform is bivariate");
  const auto coeffs = splines::faber_decompose(f, levels);
  const auto params = BesovParams::parse(besov);
  if (!js) std::cout << "j1,j2,m1,m2,coef\n";
  coeffs.for_each([&](int j1, int j2, std::int64_t m1, std::int64_t m2, double c) {
    if (js) {
      std::cout << json{{"j1", j1}, {"j2", j2}, {"m1", m1}, {"m2", m2}, {"coef", num(c)}}.dump() << '\n';
    } else {
      std::cout << j1 << ',' << j2 << ',' << m1 << ',' << m2 << ',' << format_double(c) << '\n';
    }
  });
  const double norm = splines::besov_norm_faber(coeffs, params);
  if (js) {
    std::cout << json{{"besov_norm", num(norm)}, {"levels", levels}, {"besov", besov}}.dump() << '\n';
  } else {
    std::cout << "# besov_norm," << format_double(norm) << '\n';
  }
}

void cmd_chinorm(int n, int smax, const std::string& ps_text, const std::string& format) {
  const bool js = is_json(format);
  std::vector<double> ps;
  for (const auto& p : split(ps_text, ',')) ps.push_back(to_exponent(p));
  if (smax < 0) throw Error(Errc::invalid_argument, "--smax must be >= 0");
  if (!js) std::cout << "n,s1,s2,p,terms,norm,bound,ratio\n";
  for (int s1 = 0; s1 <= smax; ++s1) {
    for (int s2 = 0; s1 + s2 <= smax; ++s2) {
      const auto res = fourier::chi_norm_check(n, s1, s2, ps);
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto& r = res[i];
        if (js) {
          std::cout << json{{"n", n}, {"s1", s1}, {"s2", s2}, {"p", num(ps[i])}, {"terms", r.terms},
                            {"norm", num(r.lhs)}, {"bound", num(r.rhs)}, {"ratio", num(r.ratio())}}
                           .dump()
                    << '\n';
        } else {
          std::cout << n << ',' << s1 << ',' << s2 << ',' << format_double(ps[i]) << ',' << r.terms << ','
                    << format_double(r.lhs) << ',' << format_double(r.rhs) << ',' << format_double(r.ratio()) << '\n';
        }
      }
    }
  }
}

void cmd_fnorm(const std::string& poly_text, const std::string& besov, const std::string& system,
               const std::string& format) {
  const std::string text = poly_text.rfind("trig:", 0) == 0 ? poly_text.substr(5) : poly_text;
  const auto poly = fourier::TrigPoly2::parse_json(text);
  const auto params = BesovParams::parse(besov);
  const double norm = fourier::fourier_besov_norm(poly, params, fourier::parse_cutoff(system));
  if (is_json(format)) {
    std::cout << json{{"system", system}, {"besov", besov}, {"terms", poly.size()}, {"norm", num(norm)}}.dump() << '\n';
  } else {
    std::cout << "system,terms,norm\n" << system << ',' << poly.size() << ',' << format_double(norm) << '\n';
  }
}

void cmd_smolyak(int d, int m, const std::string& boundary_text, bool dump, bool weights, const std::string& format) {
  const bool js = is_json(format);
  const auto boundary = boundary_text.empty() ? smolyak::Boundary::periodic : smolyak::parse_boundary(boundary_text);
  if (weights) {
    if (d != 2) throw Error(Errc::invalid_argument, "Smolyak weights are implemented for d=2");
    const auto rule = smolyak::smolyak_cubature(m, boundary);
    if (!js) std::cout << "x1,x2,weight\n";
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const auto x = rule.exact_node(i);
      if (js) {
        std::cout << json{{"x1", rat_str(x[0])}, {"x2", rat_str(x[1])}, {"weight", num(rule.weights()[i])}}.dump()
                  << '\n';
      } else {
        std::cout << rat_str(x[0]) << ',' << rat_str(x[1]) << ',' << format_double(rule.weights()[i]) << '\n';
      }
    }
    return;
  }
  const auto grid = smolyak::smolyak_grid(d, m, boundary);
  if (dump) {
    const auto nodes = grid.nodes();
    if (!js) {
      for (int a = 0; a < d; ++a) std::cout << (a ? "," : "") << 'x' << (a + 1);
      std::cout << '\n';
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto p = nodes.point(i);
      if (js) {
        json row = json::array();
        for (const auto& v : p) row.push_back(rat_str(v));
        std::cout << row.dump() << '\n';
      } else {
        for (int a = 0; a < d; ++a) std::cout << (a ? "," : "") << rat_str(p[a]);
        std::cout << '\n';
      }
    }
    return;
  }
  if (js) {
    std::cout << json{{"d", d}, {"m", m}, {"boundary", smolyak::to_string(boundary)}, {"points", grid.size()},
                      {"level_sets", grid.level_sets.size()}}
                     .dump()
              << '\n';
  } else {
    std::cout << "d,m,boundary,points,level_sets\n"
              << d << ',' << m << ',' << smolyak::to_string(boundary) << ',' << grid.size() << ','
              << grid.level_sets.size() << '\n';
  }
}

void cmd_compare(const std::string& fn, const std::string& budgets_text, const std::string& boundary,
                 const std::string& format) {
  std::vector<std::int64_t> budgets;
  for (const auto& b : split(budgets_text, ',')) budgets.push_back(to_int(b));
  if (budgets.empty()) throw Error(Errc::invalid_argument, "no budgets given");
  const auto rows = harness::compare_budget(fn, budgets, parse_boundary_opt(boundary));
  const std::string hash = harness::spec_hash("compare|" + fn + "|" + budgets_text + "|" + boundary);
  std::cout << (is_json(format) ? harness::compare_json(rows, hash) : harness::compare_csv(rows, hash));
}

struct ConvergeArgs {
  std::string rule = "fib";
  std::string fn = "korobov:r=2";
  std::string range = "8:20";
  std::string boundary;
  bool fit = false;
  bool free_beta = false;
  std::optional<double> pin_beta;
  std::optional<double> pin_alpha;
  unsigned threads = 1;
};

void cmd_converge(const ConvergeArgs& a, const std::string& format) {
  const bool js = is_json(format);
  harness::ExperimentSpec spec;
  spec.rule = harness::parse_rule_family(a.rule);
  spec.fn = a.fn;
  const auto r = split(a.range, ':');
  if (r.size() != 2) throw Error(Errc::parse_error, "--range must be lo:hi");
  spec.lo = to_int(r[0]);
  spec.hi = to_int(r[1]);
  spec.boundary = parse_boundary_opt(a.boundary);
  spec.threads = a.threads;
  const auto rows = harness::converge(spec);
  const std::string hash = harness::spec_hash(spec.canonical());
  std::cout << (js ? harness::converge_json(rows, hash) : harness::converge_csv(rows, hash));
  if (a.fit) {
    harness::FitOptions opts;
    if (a.free_beta) opts.pin_beta.reset();
    if (a.pin_beta) opts.pin_beta = a.pin_beta;
    opts.pin_alpha = a.pin_alpha;
    const auto fit = harness::fit_rate(rows, opts);
    std::cout << (js ? harness::fit_json(fit, hash) : harness::fit_csv(fit, hash));
  }
}

struct WitnessArgs {
  std::string nodes;
  std::string besov = "2,2,2";
  int r = 3;
  std::string kind = "gstar";
  std::optional<int> m;
};

void cmd_witness(const WitnessArgs& a, const std::string& format) {
  const auto params = BesovParams::parse(a.besov);
  const auto kind = fooling::parse_witness_kind(a.kind);
  NodeSet nodes;
  std::optional<int> m = a.m;
  const auto colon = a.nodes.find(':');
  const std::string family = a.nodes.substr(0, colon);
  const std::string arg = colon == std::string::npos ? std::string() : a.nodes.substr(colon + 1);
  if (family == "fib") {
    nodes = cubature::fibonacci_qmc(to_int(arg)).nodes();
  } else if (family == "smolyak") {
    const auto parts = split(arg, ',');
    if (parts.size() != 2) throw Error(Errc::parse_error, "smolyak nodes need <d>,<m>");
    const int sm = to_int(parts[1]);
    nodes = smolyak::smolyak_grid(to_int(parts[0]), sm).nodes();
    if (!m && kind != fooling::WitnessKind::gstar && kind != fooling::WitnessKind::gk) m = sm;
  } else if (family == "file") {
    nodes = read_node_file(arg);
  } else {
    throw Error(Errc::parse_error, "--nodes must be fib:<n>, smolyak:<d>,<m> or file:<path>");
  }
  const auto cfg = fooling::FoolingConfig::make(nodes.dim, a.r, params);
  const auto lb = fooling::witness_lower_bound(nodes, kind, cfg, m);
  const auto& w = lb.witness;
  if (is_json(format)) {
    std::cout << json{{"kind", fooling::to_string(kind)}, {"nodes", nodes.size()}, {"d", nodes.dim}, {"m", w.m},
                      {"atoms", w.atom_count()}, {"C", num(w.C)}, {"integral", num(w.exact_integral)},
                      {"bound", num(lb.bound)}, {"max_node_value", num(lb.max_node_value)}}
                     .dump()
              << '\n';
  } else {
    std::cout << "kind,nodes,d,m,atoms,C,integral,bound,max_node_value\n"
              << fooling::to_string(kind) << ',' << nodes.size() << ',' << nodes.dim << ',' << w.m << ','
              << w.atom_count() << ',' << format_double(w.C) << ',' << format_double(w.exact_integral) << ','
              << format_double(lb.bound) << ',' << format_double(lb.max_node_value) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fibonacci lattice and sparse grid cubature toolkit"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  std::string config;
  app.add_option("--config", config, "JSON file with flag values (command line wins)");

  std::string format = "csv";
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };

  int n = 0;
  std::int64_t box = 0;
  auto* lattice = app.add_subcommand("lattice", "Fibonacci lattice points as exact fractions");
  lattice->add_option("--n", n, "lattice index")->required();
  add_format(lattice);

  auto* dual = app.add_subcommand("dual", "nonzero dual lattice vectors in a box");
  dual->add_option("--n", n, "lattice index")->required();
  dual->add_option("--box", box, "half width K of the box [-K,K]^2")->required();
  add_format(dual);

  auto* zaremba = app.add_subcommand("zaremba", "minimal frequency product over the dual lattice");
  zaremba->add_option("--n", n, "lattice index")->required();
  add_format(zaremba);

  std::string rule, fn, boundary;
  unsigned threads = 1;
  auto* integrate = app.add_subcommand("integrate", "apply a cubature rule to an integrand");
  integrate->add_option("--rule", rule, "fib:<n> | fibnp:<n> | smolyak:<d>,<m>")->required();
  integrate->add_option("--fn", fn, "integrand spec")->required();
  integrate->add_option("--boundary", boundary, "Smolyak grid: closed or periodic");
  integrate->add_option("--threads", threads, "evaluation threads");
  add_format(integrate);

  int levels = 0;
  std::string besov = "2,2,2";
  auto* faber = app.add_subcommand("faber", "Faber coefficients and discrete Besov norm");
  faber->add_option("--fn", fn, "integrand spec")->required();
  faber->add_option("--levels", levels, "maximal level J")->required();
  faber->add_option("--besov", besov, "alpha,p,theta");
  add_format(faber);

  int smax = 0;
  std::string ps = "1,2,inf";
  auto* chinorm = app.add_subcommand("chinorm", "Lp norms of the chi_s polynomials");
  chinorm->add_option("--n", n, "lattice index")->required();
  chinorm->add_option("--smax", smax, "largest |s|_1")->required();
  chinorm->add_option("--p", ps, "exponent(s), comma separated; inf allowed");
  add_format(chinorm);

  std::string system = "sharp";
  auto* fnorm = app.add_subcommand("fnorm", "Fourier-analytic Besov norm of a trigonometric polynomial");
  fnorm->add_option("--fn", fn, R"(polynomial as JSON {"k1,k2": [re, im]})")->required();
  fnorm->add_option("--besov", besov, "alpha,p,theta");
  fnorm->add_option("--system", system, "sharp or smooth")->check(CLI::IsMember({"sharp", "smooth"}));
  add_format(fnorm);

  int d = 2, m = 0;
  bool dump = false, weights = false;
  auto* smol = app.add_subcommand("smolyak", "sparse grid summary, points or weights");
  smol->add_option("--d", d, "dimension");
  smol->add_option("--m", m, "level")->required();
  smol->add_option("--boundary", boundary, "periodic (default) or closed");
  smol->add_flag("--dump", dump, "print the grid points");
  smol->add_flag("--weights", weights, "print the cubature nodes and weights (d=2)");
  add_format(smol);

  std::string budgets;
  auto* compare = app.add_subcommand("compare", "Fibonacci versus Smolyak at matched node budgets");
  compare->add_option("--fn", fn, "integrand spec")->required();
  compare->add_option("--budgets,--budget", budgets, "node budget(s), comma separated")->required();
  compare->add_option("--boundary", boundary, "Smolyak grid: closed or periodic");
  add_format(compare);

  ConvergeArgs ca;
  auto* converge = app.add_subcommand("converge", "error sweep with optional rate fit");
  converge->add_option("--rule", ca.rule, "fib | fibnp | smolyak")->check(CLI::IsMember({"fib", "fibnp", "smolyak"}));
  converge->add_option("--fn", ca.fn, "integrand spec");
  converge->add_option("--range", ca.range, "lo:hi (n for lattices, m for Smolyak)");
  converge->add_option("--boundary", ca.boundary, "Smolyak grid: closed or periodic");
  converge->add_flag("--fit", ca.fit, "append a rate fit");
  converge->add_option("--pin-beta", ca.pin_beta, "log exponent held fixed (default 0)");
  converge->add_option("--pin-alpha", ca.pin_alpha, "rate held fixed while fitting beta");
  converge->add_flag("--free-beta", ca.free_beta, "fit beta as well");
  converge->add_option("--threads", ca.threads, "sweep threads");
  add_format(converge);

  WitnessArgs wa;
  auto* witness = app.add_subcommand("witness", "fooling function lower bound for a node set");
  witness->add_option("--nodes", wa.nodes, "fib:<n> | smolyak:<d>,<m> | file:<path>")->required();
  witness->add_option("--besov", wa.besov, "alpha,p,theta");
  witness->add_option("--r", wa.r, "B-spline order");
  witness->add_option("--kind", wa.kind, "gstar | gk | phi1..phi4");
  witness->add_option("--m", wa.m, "level (phi kinds on non-Smolyak nodes, or override)");
  add_format(witness);

  // splice --config values in front of the subcommand's own flags
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config" && i + 1 < args.size()) {
        path = args[i + 1];
      } else if (args[i].rfind("--config=", 0) == 0) {
        path = args[i].substr(9);
      }
      if (path.empty()) continue;
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + (args[i] == "--config" ? 2 : 1));
      std::size_t sub = 0;
      while (sub < args.size() && !app.get_subcommand_no_throw(args[sub])) ++sub;
      if (sub == args.size()) throw Error(Errc::parse_error, "--config needs a subcommand");
      const auto extra = config_args(path, args[sub]);
      args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub) + 1, extra.begin(), extra.end());
      break;
    }
  } catch (const Error& e) {
    std::cerr << "mixcub: " << e.what() << '\n';
    return kExitError;
  }
  std::reverse(args.begin(), args.end());

  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*lattice) cmd_lattice(n, format);
    if (*dual) cmd_dual(n, box, format);
    if (*zaremba) cmd_zaremba(n, format);
    if (*integrate) cmd_integrate(rule, fn, boundary, threads, format);
    if (*faber) cmd_faber(fn, levels, besov, format);
    if (*chinorm) cmd_chinorm(n, smax, ps, format);
    if (*fnorm) cmd_fnorm(fn, besov, system, format);
    if (*smol) cmd_smolyak(d, m, boundary, dump, weights, format);
    if (*compare) cmd_compare(fn, budgets, boundary, format);
    if (*converge) cmd_converge(ca, format);
    if (*witness) cmd_witness(wa, format);
  } catch (const Error& e) {
    std::cerr << "mixcub: " << e.what() << '\n';
    return e.is_guard() ? kExitGuard : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "mixcub: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
