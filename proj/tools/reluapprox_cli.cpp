// Command-line front end: build, eval, verify and sweep.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "reluapprox/catalog.hpp"
#include "reluapprox/error.hpp"
#include "reluapprox/harness.hpp"
#include "reluapprox/serialize.hpp"

namespace ra = reluapprox;

namespace {

struct BuildArgs {
  std::string target;
  std::optional<std::string> eps, n, d, M, N, kernel, density, measure, coeffs,
      series, C, s, Cf, n_terms;
  std::uint64_t seed = 0;
  std::string out;
};

struct VerifyArgs {
  std::string net;
  std::string oracle;
  std::optional<int> grid;
  std::optional<long long> mc;
  std::uint64_t seed = 0;
  std::optional<std::string> measure;
  std::optional<std::string> box;
  double M = 1.0;
  int output = 0;
  double eps = 0.0;
  long long l2_samples = ra::kDefaultL2Samples;
  std::optional<std::string> out_csv;
};

struct SweepArgs {
  std::string spec;
  std::string out_csv;
  std::optional<std::string> out_json;
  std::optional<int> threads;
};

void emit(const std::optional<std::string>& path, const std::string& text) {
  if (path) {
    ra::write_text_file(*path, text);
  } else {
    std::cout << text;
  }
}

int run_build(const BuildArgs& a) {
  ra::Params p;
  const std::pair<const char*, const std::optional<std::string>*> fields[] = {
      {"eps", &a.eps},         {"n", &a.n},           {"d", &a.d},
      {"M", &a.M},             {"N", &a.N},           {"kernel", &a.kernel},
      {"density", &a.density}, {"measure", &a.measure}, {"coeffs", &a.coeffs},
      {"file", &a.series},     {"C", &a.C},           {"s", &a.s},
      {"Cf", &a.Cf},           {"n_terms", &a.n_terms}};
  for (const auto& [key, value] : fields) {
    if (*value) p[key] = **value;
  }
  const ra::TargetBuild t = ra::build_target(a.target, p, a.seed);
  if (!t.net) {
    throw ra::ParameterError("target '" + a.target + "' has no network form");
  }
  ra::save_network(a.out, *t.net);
  std::cout << "depth " << t.net->depth() << " size " << t.net->size()
            << " inputs " << t.net->input_dim() << " outputs "
            << t.net->output_dim() << '\n';
  return 0;
}

int run_eval(const std::string& path, const std::string& point) {
  const ra::NetworkGraph net = ra::load_network(path);
  const std::vector<double> x = ra::parse_number_list(point);
  const std::vector<double> y = net.evaluate(x);
  for (std::size_t i = 0; i < y.size(); ++i) {
    std::cout << (i ? "," : "") << ra::format_real(y[i]);
  }
  std::cout << '\n';
  return 0;
}

int run_verify(const VerifyArgs& a) {
  const ra::NetworkGraph net = ra::load_network(a.net);
  const int d = net.input_dim();
  double lo = a.measure ? 0.0 : -a.M;
  double hi = a.measure ? 1.0 : a.M;
  if (a.box) {
    const auto v = ra::parse_number_list(*a.box);
    if (v.size() != 2) throw ra::FormatError("--box expects \"lo,hi\"");
    lo = v[0];
    hi = v[1];
  }
  const ra::Box box = ra::Box::cube(d, lo, hi);
  ra::VerifyOptions opt;
  if (a.grid) opt.grid = *a.grid;
  if (a.mc) opt.mc = *a.mc;
  opt.seed = a.seed;
  opt.l2_samples = a.l2_samples;
  if (a.measure) opt.measure = ra::measure_from_spec(*a.measure, box);
  if (a.output < 0 || a.output >= net.output_dim()) {
    throw ra::InputError("--output out of range");
  }
  const ra::PointFn approx = [&net, out = a.output](std::span<const double> x) {
    return net.evaluate_scalar(x, out);
  };
  ra::ErrorReport r =
      ra::verify(approx, ra::oracle_from_spec(a.oracle, d, a.M), box,
                 std::nullopt, a.eps, opt);
  r.target = "net";
  ra::Params params{{"oracle", a.oracle}, {"output", std::to_string(a.output)},
                    {"box", ra::format_real(lo) + ' ' + ra::format_real(hi)}};
  if (a.measure) params["measure"] = *a.measure;
  r.params = ra::format_params(params);
  r.depth = net.depth();
  r.size = net.size();
  r.max_abs_weight = net.max_abs_weight();
  emit(a.out_csv, ra::csv_header(false) + ra::csv_row(r, false));
  return r.status == "fail" ? 3 : 0;
}

int run_sweep_cmd(const SweepArgs& a) {
  ra::SweepSpec spec = ra::sweep_spec_from_json(ra::read_text_file(a.spec));
  if (a.threads) spec.threads = *a.threads;
  const ra::SweepResult res = ra::run_sweep(spec);
  ra::write_text_file(a.out_csv, ra::reports_to_csv(res.rows, spec.timing));
  if (a.out_json) ra::write_text_file(*a.out_json, ra::sweep_summary_json(spec, res));
  int errors = 0;
  for (const auto& r : res.rows) errors += r.status.rfind("error", 0) == 0;
  std::cout << res.rows.size() << " rows, " << errors << " errors\n";
  if (res.fit) {
    std::cout << "fit " << res.fit->model << " of " << res.fit->y << " on "
              << res.fit->x << ": R^2 = " << ra::format_real(res.fit->r2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit ReLU network constructions and their verification"};
  app.require_subcommand(1);

  BuildArgs b;
  auto* build = app.add_subcommand("build", "construct a network and save it");
  build->add_option("--target", b.target, "mul2|muld|poly|cheb|series|analytic|bandlimited")
      ->required();
  build->add_option("--eps", b.eps, "accuracy");
  build->add_option("--n", b.n, "Chebyshev degree");
  build->add_option("--d", b.d, "dimension / factor count");
  build->add_option("--M", b.M, "magnitude bound or band limit");
  build->add_option("--N", b.N, "second-factor bound (mul2)");
  build->add_option("--kernel", b.kernel, "analytic kernel or bandlimited K");
  build->add_option("--density", b.density, "spectral density spec");
  build->add_option("--measure", b.measure, "measure spec (bandlimited)");
  build->add_option("--coeffs", b.coeffs, "coefficient list (poly, series)");
  build->add_option("--series", b.series, "Chebyshev series JSON file");
  build->add_option("--C", b.C, "coefficient bound override");
  build->add_option("--s", b.s, "ellipse parameter override (analytic)");
  build->add_option("--Cf", b.Cf, "ellipse bound override (analytic)");
  build->add_option("--seed", b.seed, "random seed");
  build->add_option("--out", b.out, "output network JSON")->required();

  std::string eval_net, eval_point;
  auto* eval = app.add_subcommand("eval", "evaluate a saved network");
  eval->add_option("--net", eval_net)->required();
  eval->add_option("--point", eval_point, "x1,x2,...")->required();

  VerifyArgs v;
  auto* verify = app.add_subcommand("verify", "measure a saved network against an oracle");
  verify->add_option("--net", v.net)->required();
  verify->add_option("--oracle", v.oracle)->required();
  auto* grid = verify->add_option("--grid", v.grid, "grid points per axis");
  verify->add_option("--mc", v.mc, "Monte Carlo points")->excludes(grid);
  verify->add_option("--seed", v.seed);
  verify->add_option("--measure", v.measure, "judge in L2(mu) instead of sup norm");
  verify->add_option("--box", v.box, "\"lo,hi\" for every axis");
  verify->add_option("--M", v.M, "oracle scale and default box half-width");
  verify->add_option("--output", v.output, "network output index");
  verify->add_option("--eps", v.eps, "pass/fail threshold");
  verify->add_option("--samples", v.l2_samples, "L2 sample count");
  verify->add_option("--out-csv", v.out_csv);

  SweepArgs s;
  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  sweep->add_option("--spec", s.spec)->required();
  sweep->add_option("--out-csv", s.out_csv)->required();
  sweep->add_option("--out-json", s.out_json);
  sweep->add_option("--threads", s.threads);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) return run_build(b);
    if (*eval) return run_eval(eval_net, eval_point);
    if (*verify) return run_verify(v);
    if (*sweep) return run_sweep_cmd(s);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
