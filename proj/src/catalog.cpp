#include "reluapprox/catalog.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <sstream>

#include "reluapprox/analytic_nets.hpp"
#include "reluapprox/cheb_nets.hpp"
#include "reluapprox/error.hpp"
#include "reluapprox/product_nets.hpp"
#include "reluapprox/serialize.hpp"

namespace reluapprox {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

double to_double(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw FormatError("parameter " + key + ": not a number: '" + text + "'");
  }
  return v;
}

PointFn net_output(const NetworkGraph& net, int output) {
  return [net, output](std::span<const double> x) {
    return net.evaluate_scalar(x, output);
  };
}

PointFn product_oracle() {
  return [](std::span<const double> x) {
    double p = 1.0;
    for (double v : x) p *= v;
    return p;
  };
}

template <class F>
PointFn scalar_oracle(F f) {
  return [f](std::span<const double> x) { return f(x[0]); };
}

ChebSeries series_from_params(const Params& p) {
  if (p.count("file")) {
    return cheb_series_from_json(read_text_file(p.at("file")));
  }
  ChebSeries s;
  s.coeffs = parse_number_list(param_string(p, "coeffs", ""));
  s.M = param_double(p, "M", 1.0);
  if (p.count("C")) s.C = param_double(p, "C", 0.0);
  s.validate();
  return s;
}

}  // namespace

ParsedSpec parse_spec(std::string_view spec) {
  ParsedSpec out;
  const auto colon = spec.find(':');
  out.name = trim(spec.substr(0, colon));
  if (out.name.empty()) throw FormatError("empty spec");
  if (colon == std::string_view::npos) return out;
  out.rest = std::string(spec.substr(colon + 1));
  std::string_view body = out.rest;
  while (!body.empty()) {
    const auto comma = body.find(',');
    const std::string item = trim(body.substr(0, comma));
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw FormatError("spec item '" + item + "' is not key=value");
      }
      out.params[trim(std::string_view(item).substr(0, eq))] =
          trim(std::string_view(item).substr(eq + 1));
    }
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return out;
}

double param_double(const Params& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : to_double(key, it->second);
}

int param_int(const Params& p, const std::string& key, int fallback) {
  const double v = param_double(p, key, fallback);
  if (v != std::floor(v)) throw FormatError("parameter " + key + " must be an integer");
  return static_cast<int>(v);
}

std::string param_string(const Params& p, const std::string& key,
                         const std::string& fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) out.push_back(to_double("list", token));
    token.clear();
  };
  for (char c : text) {
    if (c == ',' || c == ';' || c == '|' ||
        std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      token.push_back(c);
    }
  }
  flush();
  return out;
}

std::string format_params(const Params& p) {
  std::string out;
  for (const auto& [k, v] : p) {
    if (!out.empty()) out += ';';
    out += k + '=' + v;
  }
  return out;
}

Box Box::cube(int d, double lo, double hi) {
  return {std::vector<double>(static_cast<std::size_t>(d), lo),
          std::vector<double>(static_cast<std::size_t>(d), hi)};
}

SpectralDensity density_from_spec(std::string_view spec, int d, double M) {
  const ParsedSpec s = parse_spec(spec);
  const double phase = param_double(s.params, "phase", 0.0);
  if (s.name == "gauss") {
    return gaussian_density(d, M, param_double(s.params, "sigma", 1.0), phase);
  }
  if (s.name == "uniform") return uniform_density(d, M, phase);
  if (s.name == "bump") {
    return bump_density(d, M, param_double(s.params, "center", 0.0),
                        param_double(s.params, "width", 0.1), phase);
  }
  throw FormatError("unknown density '" + s.name + "'");
}

KernelSpec kernel_from_spec(std::string_view spec) {
  const ParsedSpec s = parse_spec(spec);
  if (s.name == "cexp") return cexp_kernel();
  throw FormatError("unknown kernel '" + s.name + "'");
}

MeasureSpec measure_from_spec(std::string_view spec, const Box& box) {
  const ParsedSpec s = parse_spec(spec);
  const int d = box.dim();
  const double lo = box.lo.at(0), hi = box.hi.at(0);
  for (int i = 0; i < d; ++i) {
    if (box.lo[static_cast<std::size_t>(i)] != lo ||
        box.hi[static_cast<std::size_t>(i)] != hi) {
      throw FormatError("measures are defined on cubes only");
    }
  }
  if (s.name == "lebesgue") return lebesgue_measure(d, lo, hi);
  if (s.name == "uniform") {
    return scaled_uniform_measure(d, param_double(s.params, "mass", 1.0), lo, hi);
  }
  if (s.name == "gauss") {
    return gaussian_measure(d, param_double(s.params, "center", 0.5 * (lo + hi)),
                            param_double(s.params, "sigma", 0.25),
                            param_double(s.params, "mass", 1.0), lo, hi);
  }
  throw FormatError("unknown measure '" + s.name + "'");
}

PointFn oracle_from_spec(std::string_view spec, int d, double M) {
  const ParsedSpec s = parse_spec(spec);
  if (s.name == "product") return product_oracle();
  if (s.name == "square") return scalar_oracle([](double x) { return x * x; });
  if (s.name == "cos") return scalar_oracle([](double x) { return std::cos(x); });
  if (s.name == "sin") return scalar_oracle([](double x) { return std::sin(x); });
  if (s.name == "cheb") {
    const int k = param_int(s.params, "k", 2);
    return scalar_oracle([k](double x) { return chebyshev_t(k, x); });
  }
  if (s.name == "runge") {
    const double beta = param_double(s.params, "beta", 2.0);
    return scalar_oracle([beta](double x) { return runge(beta, x); });
  }
  if (s.name == "poly") {
    MonomialPoly p;
    p.coeffs = parse_number_list(param_string(s.params, "coeffs", "0"));
    return scalar_oracle([p](double x) { return p(x); });
  }
  if (s.name == "series") {
    const ChebSeries series = series_from_params(s.params);
    return scalar_oracle([series](double x) { return clenshaw_eval(series, x); });
  }
  if (s.name == "bandlimited") {
    const SpectralDensity F = density_from_spec(s.rest, d, M);
    const KernelSpec K = cexp_kernel();
    return [F, K](std::span<const double> x) {
      return quadrature_reference(F, K, x);
    };
  }
  throw FormatError("unknown oracle '" + s.name + "'");
}

TargetBuild build_target(const std::string& target, const Params& params,
                         std::uint64_t seed) {
  TargetBuild t;
  t.target = target;
  t.params = params;
  auto set_net = [&t](NetworkGraph net, int output) {
    t.output = output;
    t.approx = net_output(net, output);
    t.net = std::move(net);
  };

  if (target == "mul2") {
    MulBudget budget{param_double(params, "M", 1.0), param_double(params, "N", 1.0),
                     param_double(params, "eps", 1e-3)};
    t.eps = budget.eps;
    set_net(build_mul2(budget), 0);
    t.oracle = product_oracle();
    t.domain = {{-budget.M, -budget.N}, {budget.M, budget.N}};
  } else if (target == "muld") {
    const int d = param_int(params, "d", 3);
    const double M = param_double(params, "M", 1.0);
    t.eps = param_double(params, "eps", 1e-2);
    set_net(build_muld(d, M, t.eps), d - 2);
    t.oracle = product_oracle();
    t.domain = Box::cube(d, -M, M);
  } else if (target == "poly") {
    MonomialPoly p;
    p.coeffs = parse_number_list(param_string(params, "coeffs", "0;0;1"));
    p.M = param_double(params, "M", 1.0);
    if (params.count("C")) p.C = param_double(params, "C", 0.0);
    t.eps = param_double(params, "eps", 1e-3);
    set_net(build_poly(p, t.eps), 0);
    t.oracle = scalar_oracle([p](double x) { return p(x); });
    t.domain = Box::cube(1, -p.M, p.M);
  } else if (target == "cheb") {
    const int n = param_int(params, "n", 4);
    t.eps = param_double(params, "eps", 1e-3);
    set_net(build_chebyshev(n, t.eps), n);
    t.oracle = scalar_oracle([n](double x) { return chebyshev_t(n, x); });
    t.domain = Box::cube(1, -1.0, 1.0);
  } else if (target == "series") {
    const ChebSeries s = series_from_params(params);
    t.eps = param_double(params, "eps", 1e-3);
    set_net(build_cheb_series(s, t.eps), 0);
    t.oracle = scalar_oracle([s](double x) { return clenshaw_eval(s, x); });
    t.domain = Box::cube(1, -s.M, s.M);
  } else if (target == "analytic") {
    const ParsedSpec k = parse_spec(param_string(params, "kernel", "runge:beta=2"));
    const double M = param_double(params, "M", 1.0);
    t.eps = param_double(params, "eps", 1e-3);
    t.domain = Box::cube(1, -M, M);
    if (k.name == "custom") {
      Params sp = k.params;
      if (params.count("series")) sp["file"] = params.at("series");
      const ChebSeries s = series_from_params(sp);
      set_net(build_cheb_series(s, t.eps), 0);
      t.oracle = scalar_oracle([s](double x) { return clenshaw_eval(s, x); });
      t.domain = Box::cube(1, -s.M, s.M);
      return t;
    }
    EllipseParams cert;
    std::function<double(double)> f;
    if (k.name == "runge") {
      const double beta = param_double(k.params, "beta", 2.0);
      f = [beta](double x) { return runge(beta, x); };
      cert = runge_params(beta, M);
    } else if (k.name == "cos" || k.name == "cexp") {
      f = [](double x) { return std::cos(x); };
      cert = params.count("s")
                 ? EllipseParams{param_double(params, "s", 2.0),
                                 exp_kernel_bound(param_double(params, "s", 2.0), M),
                                 M}
                 : select_exp_certificate(M, t.eps / 2.0);
    } else {
      throw FormatError("unknown analytic kernel '" + k.name + "'");
    }
    if (params.count("s")) cert.s = param_double(params, "s", cert.s);
    if (params.count("Cf")) cert.C_f = param_double(params, "Cf", cert.C_f);
    if (k.name == "cexp") {
      // Real and imaginary parts of e^{ix} as two outputs.
      const std::vector<NetworkGraph> parts{
          build_analytic(f, cert, t.eps),
          build_analytic([](double x) { return std::sin(x); }, cert, t.eps)};
      const int output = param_int(params, "output", 0);
      set_net(parallel(parts), output);
      if (output == 0) {
        t.oracle = scalar_oracle([](double x) { return std::cos(x); });
      } else {
        t.oracle = scalar_oracle([](double x) { return std::sin(x); });
      }
    } else {
      set_net(build_analytic(f, cert, t.eps), 0);
      t.oracle = scalar_oracle(f);
    }
  } else if (target == "bandlimited" || target == "maurey") {
    const int d = param_int(params, "d", 1);
    const double M = param_double(params, "M", 1.0);
    const SpectralDensity F =
        density_from_spec(param_string(params, "density", "gauss:sigma=1"), d, M);
    const KernelSpec K = kernel_from_spec(param_string(params, "kernel", "cexp"));
    t.domain = Box::cube(d, 0.0, 1.0);
    t.measure = measure_from_spec(param_string(params, "measure", "lebesgue"),
                                  t.domain);
    t.oracle = [F, K](std::span<const double> x) {
      return quadrature_reference(F, K, x);
    };
    if (target == "bandlimited") {
      t.eps = param_double(params, "eps", 0.1);
      set_net(build_bandlimited(F, K, *t.measure, t.eps, seed), 0);
    } else {
      const long n = static_cast<long>(param_double(params, "n_terms", 100));
      auto sample = std::make_shared<const MaureySample>(maurey_sample_n(F, n, seed));
      t.approx = [sample, K](std::span<const double> x) {
        return maurey_series_eval(*sample, K, x);
      };
    }
  } else {
    throw FormatError("unknown target '" + target + "'");
  }
  return t;
}

}  // namespace reluapprox
