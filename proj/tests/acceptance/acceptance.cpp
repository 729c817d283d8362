// Acceptance suite: one numbered criterion per check, each printing a single
// PASS/FAIL line followed by indented measurements.
//
//   reluapprox_acceptance               run every criterion
//   reluapprox_acceptance --criterion N run criterion N only
//
// Exit status is nonzero when any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "reluapprox/analytic_nets.hpp"
#include "reluapprox/bandlimited_nets.hpp"
#include "reluapprox/catalog.hpp"
#include "reluapprox/cheb_nets.hpp"
#include "reluapprox/harness.hpp"
#include "reluapprox/product_nets.hpp"
#include "reluapprox/serialize.hpp"

using namespace reluapprox;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, std::string note) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + std::move(note));
  }
  void info(std::string note) { notes.push_back("     " + std::move(note)); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const PointFn kProduct = [](std::span<const double> x) {
  double p = 1.0;
  for (double v : x) p *= v;
  return p;
};

// 1. mul2 accuracy on the 401^2 grid, under 10 s per case.
Outcome criterion_mul2() {
  Outcome o;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const auto t0 = std::chrono::steady_clock::now();
    const NetworkGraph net = build_mul2({1.0, 1.0, eps});
    const LinfResult r = linf_error(net, kProduct, Box::cube(2, -1.0, 1.0), 401);
    const double dt = seconds_since(t0);
    o.check(r.error <= eps && dt < 10.0,
            fmt("eps=%g  linf=%.3e  size=%d  depth=%d  time=%.2fs", eps, r.error,
                net.size(), net.depth(), dt));
  }
  return o;
}

// 2. Exact zero whenever a factor is zero.
Outcome criterion_zero_factor() {
  Outcome o;
  constexpr int kGrid = 201;
  auto node = [](int i) { return -1.0 + 2.0 * i / (kGrid - 1); };
  {
    const NetworkGraph net = build_mul2({1.0, 1.0, 1e-3});
    long long nonzero = 0;
    for (int i = 0; i < kGrid; ++i) {
      const double a[] = {node(i), 0.0}, b[] = {0.0, node(i)};
      nonzero += net.evaluate_scalar(a) != 0.0;
      nonzero += net.evaluate_scalar(b) != 0.0;
    }
    o.check(nonzero == 0, fmt("mul2: %lld nonzero outputs over 2x%d points", nonzero, kGrid));
  }
  for (int d : {2, 3, 4}) {
    const NetworkGraph net = build_muld(d, 1.0, 1e-2);
    long long nonzero = 0, points = 0;
    std::vector<int> idx(static_cast<std::size_t>(d - 1), 0);
    std::vector<double> x(static_cast<std::size_t>(d));
    for (int zero = 0; zero < d; ++zero) {
      std::fill(idx.begin(), idx.end(), 0);
      while (true) {
        for (int i = 0, j = 0; i < d; ++i) {
          x[static_cast<std::size_t>(i)] =
              i == zero ? 0.0 : node(idx[static_cast<std::size_t>(j++)]);
        }
        nonzero += net.evaluate(x).back() != 0.0;
        ++points;
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == kGrid) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    }
    o.check(nonzero == 0,
            fmt("muld d=%d: %lld nonzero outputs over %lld points", d, nonzero, points));
  }
  return o;
}

// 3. Product chain: every intermediate within eps, per-stage chained bound.
Outcome criterion_chain() {
  Outcome o;
  const double eps = 1e-2, M = 1.0;
  for (int d : {2, 3, 4}) {
    const NetworkGraph net = build_muld(d, M, eps);
    const double eps0 = muld_stage_accuracy(d, M, eps);
    Rng rng(derive_seed(3, static_cast<std::uint64_t>(d)));
    std::vector<double> x(static_cast<std::size_t>(d));
    std::vector<double> worst(static_cast<std::size_t>(d - 1), 0.0);
    long long chain_violations = 0;
    for (int t = 0; t < 100000; ++t) {
      for (double& v : x) v = rng.uniform(-M, M);
      const auto y = net.evaluate(x);
      double prod = x[0];
      for (int k = 2; k <= d; ++k) {
        prod *= x[static_cast<std::size_t>(k - 1)];
        const double err = std::abs(y[static_cast<std::size_t>(k - 2)] - prod);
        auto& w = worst[static_cast<std::size_t>(k - 2)];
        w = std::max(w, err);
        chain_violations += err > k * std::pow(M, k) * std::pow(1.0 + eps0, k) * eps0;
      }
    }
    const double max_err = *std::max_element(worst.begin(), worst.end());
    o.check(max_err <= eps && chain_violations == 0,
            fmt("d=%d  max intermediate error=%.3e  chain violations=%lld", d, max_err,
                chain_violations));
  }
  return o;
}

// 4. Chebyshev networks: grid error of hatT_n and the magnitude ledger.
Outcome criterion_chebyshev() {
  Outcome o;
  const double eps = 1e-3;
  for (int n = 2; n <= 12; ++n) {
    const NetworkGraph net = build_chebyshev(n, eps);
    const double eps0 = chebyshev_stage_accuracy(n, eps);
    double err = 0.0;
    long long ledger = 0;
    for (int i = 0; i <= 2000; ++i) {
      const double x = -1.0 + 2.0 * i / 2000.0;
      const double p[] = {x};
      const auto t = net.evaluate(p);
      err = std::max(err, std::abs(t[static_cast<std::size_t>(n)] -
                                   std::cos(n * std::acos(x))));
      for (int k = 2; k <= n; ++k) {
        ledger += std::abs(t[static_cast<std::size_t>(k)]) >
                  std::pow(3.0, k - 2) * std::pow(1.0 + eps0, k);
      }
    }
    o.check(err <= eps && ledger == 0,
            fmt("n=%2d  linf=%.3e  magnitude violations=%lld  size=%d", n, err, ledger,
                net.size()));
  }
  return o;
}

// 5. Series networks agree with Clenshaw.
Outcome criterion_series() {
  Outcome o;
  const double eps = 1e-3;
  Rng rng(5);
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    ChebSeries s;
    const int n = 2 + static_cast<int>(rng.next_u64() % 15);
    for (int k = 0; k <= n; ++k) s.coeffs.push_back(rng.uniform(-1.0, 1.0));
    const NetworkGraph net = build_cheb_series(s, eps);
    const ChebSeries copy = s;
    const LinfResult r = linf_error(
        net, [copy](std::span<const double> x) { return clenshaw_eval(copy, x[0]); },
        Box::cube(1, -1.0, 1.0), 2001);
    worst_ratio = std::max(worst_ratio, r.error / eps);
    o.check(r.error <= eps, fmt("series %2d: n=%2d  gap=%.3e", trial, n, r.error));
  }
  o.info(fmt("largest gap / eps = %.3f", worst_ratio));
  return o;
}

// 6. Truncation bound for Runge with the stated certificate.
Outcome criterion_truncation() {
  Outcome o;
  const double beta = 2.0;
  const EllipseParams p{2.0 + std::sqrt(5.0), 0.5, 1.0};
  const auto f = [beta](double x) { return runge(beta, x); };
  // Chebyshev coefficients of f to machine precision, truncated per n.
  const ChebSeries full = cheb_coeffs(f, 256, 1.0);
  for (int n = 2; n <= 20; ++n) {
    ChebSeries trunc{{full.coeffs.begin(), full.coeffs.begin() + n + 1}, 1.0, {}};
    const ChebSeries interp = cheb_coeffs(f, n, 1.0);
    double err = 0.0, err_interp = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double x = -1.0 + 2.0 * i / 2000.0;
      err = std::max(err, std::abs(clenshaw_eval(trunc, x) - f(x)));
      err_interp = std::max(err_interp, std::abs(clenshaw_eval(interp, x) - f(x)));
    }
    const double bound = truncation_bound(p, n);
    o.check(err <= bound && err * 100.0 >= bound,
            fmt("n=%2d  truncation=%.3e  bound=%.3e  ratio=%.3f  (interpolant ratio %.3f)",
                n, err, bound, err / bound, err_interp / bound));
  }
  return o;
}

// 7. Analytic end-to-end accuracy and stability of the size constant.
Outcome criterion_analytic() {
  Outcome o;
  struct Case {
    std::string name;
    std::function<double(double)> f;
    EllipseParams p;
  };
  const std::vector<Case> cases{
      {"runge", [](double x) { return runge(2.0, x); }, runge_params(2.0, 1.0)},
      {"cos", [](double x) { return std::cos(x); }, {3.0, exp_kernel_bound(3.0, 1.0), 1.0}}};
  for (const auto& c : cases) {
    std::vector<double> kappa;
    for (double eps : {1e-3, 1e-5}) {
      const AnalyticBuild b = build_analytic_detailed(c.f, c.p, eps);
      const auto fn = c.f;
      const LinfResult r = linf_error(
          b.net, [fn](std::span<const double> x) { return fn(x[0]); },
          Box::cube(1, -1.0, 1.0), 2001);
      kappa.push_back(b.net.size() / analytic_size_order(c.p, eps));
      o.check(r.error <= eps, fmt("%s eps=%g  degree=%d  size=%d  linf=%.3e  kappa=%.3f",
                                  c.name.c_str(), eps, b.degree, b.net.size(), r.error,
                                  kappa.back()));
    }
    const double ratio = kappa[0] / kappa[1];
    o.check(std::abs(ratio - 1.0) <= 0.2,
            fmt("%s kappa(1e-3)/kappa(1e-5) = %.3f", c.name.c_str(), ratio));
  }
  return o;
}

// 8. Resource scaling regressions.
Outcome criterion_scaling() {
  Outcome o;
  std::vector<double> x, y;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    x.push_back(std::log2(1.0 / eps));
    y.push_back(build_mul2({1.0, 1.0, eps}).size());
  }
  const ScalingFit lin = fit_polynomial(x, y, 1);
  o.check(lin.r2 >= 0.99, fmt("mul2 size = %.3f + %.3f log2(1/eps)  R^2=%.5f", lin.coeffs[0],
                              lin.coeffs[1], lin.r2));
  x.clear();
  y.clear();
  for (int n : {4, 8, 16, 32, 64}) {
    x.push_back(n);
    y.push_back(build_chebyshev(n, 1e-3).size());
  }
  const ScalingFit quad = fit_polynomial(x, y, 2);
  o.check(quad.coeffs[2] > 0.0 && quad.r2 >= 0.99,
          fmt("chebyshev size = %.2f + %.3f n + %.4f n^2  R^2=%.6f", quad.coeffs[0],
              quad.coeffs[1], quad.coeffs[2], quad.r2));
  return o;
}

// 9. Maurey rate of the sampled series.
Outcome criterion_maurey() {
  Outcome o;
  const SpectralDensity F = gaussian_density(1, 1.0, 1.0);
  const KernelSpec K = cexp_kernel();
  const MeasureSpec mu = lebesgue_measure(1);
  const PointFn oracle = [&](std::span<const double> x) {
    return quadrature_reference(F, K, x);
  };
  std::vector<double> lx, ly;
  bool budget = true;
  for (long n : {25L, 100L, 400L, 1600L}) {
    double mean = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const MaureySample s = maurey_sample_n(F, n, derive_seed(9, seed));
      budget = budget && s.coefficient_l1() <= F.C_F;
      const L2Result r = l2_mu_error(
          [&](std::span<const double> x) { return maurey_series_eval(s, K, x); }, oracle,
          mu, 2000, derive_seed(90, seed));
      mean += r.estimate / 10.0;
    }
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(mean));
    o.info(fmt("n_terms=%4ld  mean L2 error=%.4e", n, mean));
  }
  const ScalingFit f = fit_polynomial(lx, ly, 1);
  o.check(f.coeffs[1] >= -0.65 && f.coeffs[1] <= -0.35,
          fmt("log-log slope=%.4f  R^2=%.4f", f.coeffs[1], f.r2));
  o.check(budget, "sum |b_j| <= C_F in all 40 draws");
  return o;
}

// 10. Bandlimited end-to-end.
Outcome criterion_bandlimited() {
  Outcome o;
  const KernelSpec K = cexp_kernel();
  for (int d : {1, 2}) {
    const SpectralDensity F = gaussian_density(d, 1.0, 1.0);
    const MeasureSpec mu = lebesgue_measure(d);
    const PointFn oracle = [&](std::span<const double> x) {
      return quadrature_reference(F, K, x);
    };
    for (double eps : {0.1, 0.05}) {
      int within = 0;
      bool gap_ok = true;
      double worst_l2 = 0.0, worst_gap_ratio = 0.0;
      int size = 0;
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const BandlimitedBuild b =
            build_bandlimited_detailed(F, K, mu, eps, derive_seed(10, seed));
        size = b.net.size();
        const L2Result r = l2_mu_error(b.net, oracle, mu, 1000, derive_seed(100, seed));
        within += r.estimate <= eps;
        worst_l2 = std::max(worst_l2, r.estimate);
        const MaureySample& s = b.sample;
        const LinfResult gap = linf_error(
            b.net, [&](std::span<const double> x) { return maurey_series_eval(s, K, x); },
            Box::cube(d, 0.0, 1.0), d == 1 ? 2001 : 101);
        const double limit = F.C_F * b.eps0;
        gap_ok = gap_ok && gap.error <= limit;
        worst_gap_ratio = std::max(worst_gap_ratio, gap.error / limit);
      }
      o.check(within >= 9 && gap_ok,
              fmt("d=%d eps=%.2f  L2<=eps in %d/10 seeds (worst %.3e)  "
                  "max net-series gap/(C_F eps0)=%.3f  size=%d",
                  d, eps, within, worst_l2, worst_gap_ratio, size));
    }
  }
  return o;
}

#ifndef RELUAPPROX_CLI_PATH
#define RELUAPPROX_CLI_PATH ""
#endif

std::string run_cli_twice(const std::string& cli, const std::string& args,
                          const std::filesystem::path& out_a,
                          const std::filesystem::path& out_b, const std::string& flag) {
  for (const auto& out : {out_a, out_b}) {
    const std::string cmd = "\"" + cli + "\" " + args + " " + flag + " \"" + out.string() +
                            "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) return "command failed: " + cmd;
  }
  return read_text_file(out_a.string()) == read_text_file(out_b.string()) ? ""
                                                                            : "outputs differ";
}

// 11. Byte-identical reports for identical seeds.
Outcome criterion_determinism() {
  Outcome o;
  // In process: verify and sweep, single- and multi-threaded.
  VerifyOptions opt;
  opt.seed = 77;
  opt.l2_samples = 500;
  auto verify_csv = [&] {
    const TargetBuild t = build_target("bandlimited", {{"eps", "0.2"}}, 77);
    return reports_to_csv({verify_target(t, opt)}, false);
  };
  o.check(verify_csv() == verify_csv(), "verify CSV identical across two runs");
  SweepSpec spec;
  spec.target = "maurey";
  spec.vary = "n_terms";
  spec.values = {"25", "100", "400"};
  spec.seeds = {1, 2, 3};
  spec.l2_samples = 500;
  const std::string first = reports_to_csv(run_sweep(spec).rows, false);
  spec.threads = 4;
  const std::string second = reports_to_csv(run_sweep(spec).rows, false);
  o.check(first == second, "sweep CSV identical for 1 and 4 threads");

  // Through the command-line tool.
  const std::string cli = RELUAPPROX_CLI_PATH;
  if (cli.empty()) {
    o.check(false, "command-line tool path not configured");
    return o;
  }
  const auto dir = std::filesystem::temp_directory_path() / "reluapprox_acceptance_11";
  std::filesystem::create_directories(dir);
  const auto net = (dir / "net.json").string();
  const std::string build = "\"" + cli + "\" build --target bandlimited --eps 0.2 --seed 5 --out \"" +
                            net + "\" > /dev/null";
  if (std::system(build.c_str()) != 0) {
    o.check(false, "command-line build failed");
    return o;
  }
  std::string err = run_cli_twice(
      cli, "verify --net \"" + net + "\" --oracle bandlimited:gauss:sigma=1 --measure lebesgue --mc 1000 --seed 3",
      dir / "v1.csv", dir / "v2.csv", "--out-csv");
  o.check(err.empty(), "CLI verify (L2, seeded) byte-identical" + (err.empty() ? "" : ": " + err));
  err = run_cli_twice(cli, "verify --net \"" + net + "\" --oracle bandlimited:gauss:sigma=1 --box 0,1 --grid 101",
                      dir / "g1.csv", dir / "g2.csv", "--out-csv");
  o.check(err.empty(), "CLI verify (grid) byte-identical" + (err.empty() ? "" : ": " + err));
  write_text_file((dir / "sweep.json").string(),
                  R"({"target": "maurey", "vary": "n_terms", "values": [25, 100, 400],
                      "fixed": {"density": "gauss:sigma=1"}, "seeds": [1, 2], "threads": 2,
                      "l2_samples": 500})");
  err = run_cli_twice(cli, "sweep --spec \"" + (dir / "sweep.json").string() + "\"",
                      dir / "s1.csv", dir / "s2.csv", "--out-csv");
  o.check(err.empty(), "CLI sweep byte-identical" + (err.empty() ? "" : ": " + err));
  std::filesystem::remove_all(dir);
  return o;
}

struct Criterion {
  int id;
  const char* title;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "two-factor product accuracy on a 401^2 grid", criterion_mul2},
    {2, "zero-factor exactness", criterion_zero_factor},
    {3, "d-factor chain bound", criterion_chain},
    {4, "Chebyshev networks", criterion_chebyshev},
    {5, "series network vs Clenshaw", criterion_series},
    {6, "Runge truncation bound", criterion_truncation},
    {7, "analytic end-to-end", criterion_analytic},
    {8, "resource scaling regressions", criterion_scaling},
    {9, "Maurey rate", criterion_maurey},
    {10, "bandlimited end-to-end", criterion_bandlimited},
    {11, "determinism", criterion_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  int failed = 0, ran = 0;
  for (const auto& c : kCriteria) {
    if (only && c.id != only) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::printf("[%s] criterion %d: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.title,
                seconds_since(t0));
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return failed ? 1 : 0;
}
