#include "reluapprox/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include <Eigen/Dense>
#include <json.hpp>

#include "reluapprox/error.hpp"
#include "reluapprox/serialize.hpp"

namespace reluapprox {

namespace {

PointFn net_fn(const NetworkGraph& net, int output) {
  if (output < 0 || output >= net.output_dim()) {
    throw InputError("output index out of range");
  }
  return [&net, output](std::span<const double> x) {
    return net.evaluate_scalar(x, output);
  };
}

void check_box(const Box& b) {
  if (b.dim() < 1 || b.lo.size() != b.hi.size()) {
    throw InputError("domain box is malformed");
  }
  for (int i = 0; i < b.dim(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (!(b.lo[k] <= b.hi[k])) throw InputError("domain box has lo > hi");
  }
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' || c == '\r' ? ' ' : c;
  }
  return out + '"';
}

template <class T>
std::string opt_field(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_floating_point_v<T>) {
    return format_real(*v);
  } else {
    return std::to_string(*v);
  }
}

std::string join_reals(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_real(v[i]);
  }
  return out;
}

}  // namespace

int default_grid(int d) {
  if (d == 1) return 2001;
  if (d == 2) return 401;
  return 0;
}

LinfResult linf_error(const PointFn& approx, const PointFn& oracle,
                      const Box& domain, int grid_per_dim) {
  check_box(domain);
  if (grid_per_dim < 2) throw InputError("grid_per_dim must be >= 2");
  const int d = domain.dim();
  const double total = std::pow(static_cast<double>(grid_per_dim), d);
  if (total > static_cast<double>(kMaxGridPoints)) {
    throw FeasibilityError("grid of " + format_real(total) +
                           " points exceeds the 1e7 limit");
  }
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> x(static_cast<std::size_t>(d));
  LinfResult out;
  out.error = -1.0;
  while (true) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      // Endpoints hit exactly.
      x[i] = idx[i] == grid_per_dim - 1
                 ? domain.hi[i]
                 : domain.lo[i] +
                       (domain.hi[i] - domain.lo[i]) * idx[i] / (grid_per_dim - 1);
    }
    const double e = std::abs(approx(x) - oracle(x));
    if (std::isnan(e)) throw DataError("non-finite value on the grid");
    if (e > out.error) {
      out.error = e;
      out.argmax = x;
    }
    ++out.points;
    int i = d - 1;
    while (i >= 0 && ++idx[static_cast<std::size_t>(i)] == grid_per_dim) {
      idx[static_cast<std::size_t>(i--)] = 0;
    }
    if (i < 0) break;
  }
  return out;
}

LinfResult linf_error(const NetworkGraph& net, const PointFn& oracle,
                      const Box& domain, int grid_per_dim, int output) {
  if (domain.dim() != net.input_dim()) {
    throw InputError("domain dimension differs from the network input");
  }
  return linf_error(net_fn(net, output), oracle, domain, grid_per_dim);
}

LinfResult linf_error_mc(const PointFn& approx, const PointFn& oracle,
                         const Box& domain, long long n_points,
                         std::uint64_t seed) {
  check_box(domain);
  if (n_points < 1) throw InputError("need at least one sample point");
  if (n_points > kMaxGridPoints) {
    throw FeasibilityError("more than 1e7 sample points requested");
  }
  Rng rng(seed);
  std::vector<double> x(domain.lo.size());
  LinfResult out;
  out.error = -1.0;
  for (long long p = 0; p < n_points; ++p) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = rng.uniform(domain.lo[i], domain.hi[i]);
    }
    const double e = std::abs(approx(x) - oracle(x));
    if (std::isnan(e)) throw DataError("non-finite value at a sample point");
    if (e > out.error) {
      out.error = e;
      out.argmax = x;
    }
  }
  out.points = n_points;
  return out;
}

L2Result l2_mu_error(const PointFn& approx, const PointFn& oracle,
                     const MeasureSpec& mu, long long n_samples,
                     std::uint64_t seed) {
  if (n_samples < 100) throw InputError("L2 estimate needs >= 100 samples");
  if (!mu.sample) throw ParameterError("measure has no sampler");
  Rng rng(seed);
  std::vector<double> x(static_cast<std::size_t>(mu.d));
  std::vector<double> sq(static_cast<std::size_t>(n_samples));
  double sum = 0.0;
  for (auto& z : sq) {
    mu.sample(rng, x);
    const double dev = approx(x) - oracle(x);
    z = dev * dev;
    sum += z;
  }
  const double n = static_cast<double>(n_samples);
  const double mean = sum / n;
  double ss = 0.0;
  for (double z : sq) ss += (z - mean) * (z - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  L2Result out;
  out.samples = n_samples;
  out.estimate = std::sqrt(mu.mass * mean);
  // d sqrt(m) = dm / (2 sqrt(m))
  out.std_error =
      mean > 0.0 ? std::sqrt(mu.mass) * sd / std::sqrt(n) / (2.0 * std::sqrt(mean))
                 : 0.0;
  return out;
}

L2Result l2_mu_error(const NetworkGraph& net, const PointFn& oracle,
                     const MeasureSpec& mu, long long n_samples,
                     std::uint64_t seed, int output) {
  if (mu.d != net.input_dim()) {
    throw InputError("measure dimension differs from the network input");
  }
  return l2_mu_error(net_fn(net, output), oracle, mu, n_samples, seed);
}

std::string csv_header(bool timing) {
  std::string h =
      "target,params,seed,rng,depth,size,max_abs_weight,linf_error,"
      "linf_argmax,l2_error,l2_stderr,l2_samples,status";
  if (timing) h += ",wall_time";
  return h + '\n';
}

std::string csv_row(const ErrorReport& r, bool timing) {
  std::string s;
  s += csv_field(r.target) + ',';
  s += csv_field(r.params) + ',';
  s += std::to_string(r.seed) + ',';
  s += csv_field(r.rng) + ',';
  s += opt_field(r.depth) + ',';
  s += opt_field(r.size) + ',';
  s += opt_field(r.max_abs_weight) + ',';
  s += opt_field(r.linf) + ',';
  s += join_reals(r.linf_argmax) + ',';
  if (r.l2) {
    s += format_real(r.l2->estimate) + ',' + format_real(r.l2->std_error) + ',' +
         std::to_string(r.l2->samples) + ',';
  } else {
    s += ",,,";
  }
  s += csv_field(r.status);
  if (timing) s += ',' + format_real(r.wall_time);
  return s + '\n';
}

std::string reports_to_csv(const std::vector<ErrorReport>& rows, bool timing) {
  std::string out = csv_header(timing);
  for (const auto& r : rows) out += csv_row(r, timing);
  return out;
}

ErrorReport verify(const PointFn& approx, const PointFn& oracle,
                   const Box& domain, const std::optional<MeasureSpec>& measure,
                   double eps, const VerifyOptions& opt) {
  ErrorReport r;
  r.seed = opt.seed;
  double judged = 0.0;
  const auto& mu = opt.measure ? opt.measure : measure;
  if (mu) {
    r.l2 = l2_mu_error(approx, oracle, *mu, opt.l2_samples, opt.seed);
    judged = r.l2->estimate;
  } else {
    const int grid = opt.grid >= 0 ? opt.grid : default_grid(domain.dim());
    const LinfResult res =
        opt.mc > 0 || grid == 0
            ? linf_error_mc(approx, oracle, domain,
                            opt.mc > 0 ? opt.mc : kDefaultMcPoints, opt.seed)
            : linf_error(approx, oracle, domain, grid);
    r.linf = res.error;
    r.linf_argmax = res.argmax;
    judged = res.error;
  }
  if (eps > 0.0) {
    r.status = judged <= eps ? "pass" : "fail";
  } else {
    r.status = "measured";
  }
  return r;
}

ErrorReport verify_target(const TargetBuild& t, const VerifyOptions& opt) {
  ErrorReport r = verify(t.approx, t.oracle, t.domain, t.measure, t.eps, opt);
  r.target = t.target;
  r.params = format_params(t.params);
  if (t.net) {
    r.depth = t.net->depth();
    r.size = t.net->size();
    r.max_abs_weight = t.net->max_abs_weight();
  }
  return r;
}

void SweepSpec::validate() const {
  if (target.empty()) throw FormatError("sweep: missing target");
  if (vary.empty()) throw FormatError("sweep: missing vary");
  if (values.empty()) throw FormatError("sweep: empty value list");
  if (seeds.empty()) throw FormatError("sweep: empty seed list");
  if (threads < 1) throw FormatError("sweep: threads must be >= 1");
  if (fixed.count(vary)) {
    throw FormatError("sweep: '" + vary + "' is both fixed and varied");
  }
}

SweepSpec sweep_spec_from_json(std::string_view text) {
  using nlohmann::json;
  auto scalar = [](const json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
  };
  try {
    const json j = json::parse(text);
    SweepSpec s;
    s.target = j.at("target").get<std::string>();
    s.vary = j.at("vary").get<std::string>();
    for (const auto& v : j.at("values")) s.values.push_back(scalar(v));
    if (j.contains("fixed")) {
      for (const auto& [k, v] : j.at("fixed").items()) s.fixed[k] = scalar(v);
    }
    if (j.contains("seeds")) s.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    s.threads = j.value("threads", 1);
    s.timing = j.value("timing", false);
    s.grid = j.value("grid", -1);
    s.mc = j.value("mc", 0LL);
    s.l2_samples = j.value("l2_samples", kDefaultL2Samples);
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("sweep spec: ") + e.what());
  }
}

ScalingFit fit_polynomial(const std::vector<double>& x,
                          const std::vector<double>& y, int degree) {
  if (x.size() != y.size() || static_cast<int>(x.size()) < degree + 1) {
    throw DataError("fit: not enough points");
  }
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd A(n, degree + 1);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double p = 1.0;
    for (int k = 0; k <= degree; ++k, p *= x[static_cast<std::size_t>(i)]) {
      A(i, k) = p;
    }
    b(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  const double mean = b.mean();
  const double ss_tot = (b.array() - mean).square().sum();
  const double ss_res = (A * c - b).squaredNorm();
  ScalingFit f;
  f.model = degree == 1 ? "linear" : degree == 2 ? "quadratic" : "polynomial";
  f.coeffs.assign(c.data(), c.data() + c.size());
  f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  f.points = static_cast<int>(n);
  return f;
}

namespace {

std::optional<ScalingFit> fit_sweep(const SweepSpec& spec,
                                    const std::vector<ErrorReport>& rows) {
  // Mean of the response over the successful seeds of each value.
  const bool loglog = spec.vary == "n_terms";
  std::vector<double> xs, ys;
  for (std::size_t v = 0; v < spec.values.size(); ++v) {
    double sum = 0.0;
    int count = 0;
    for (std::size_t s = 0; s < spec.seeds.size(); ++s) {
      const ErrorReport& r = rows[v * spec.seeds.size() + s];
      if (loglog && r.l2) {
        sum += r.l2->estimate;
        ++count;
      } else if (!loglog && r.size) {
        sum += *r.size;
        ++count;
      }
    }
    if (count == 0) continue;
    double x = 0.0;
    try {
      x = std::stod(spec.values[v]);
    } catch (const std::exception&) {
      return std::nullopt;
    }
    const double y = sum / count;
    if (spec.vary == "eps") {
      xs.push_back(std::log2(1.0 / x));
      ys.push_back(y);
    } else if (loglog) {
      if (!(y > 0.0)) continue;
      xs.push_back(std::log(x));
      ys.push_back(std::log(y));
    } else {
      xs.push_back(x);
      ys.push_back(y);
    }
  }
  if (xs.size() < 3) return std::nullopt;
  ScalingFit f;
  if (spec.vary == "eps") {
    f = fit_polynomial(xs, ys, 1);
    f.x = "log2(1/eps)";
    f.y = "size";
  } else if (loglog) {
    f = fit_polynomial(xs, ys, 1);
    f.model = "loglog";
    f.x = "ln(n_terms)";
    f.y = "ln(mean l2_error)";
  } else {
    f = fit_polynomial(xs, ys, 2);
    f.x = spec.vary;
    f.y = "size";
  }
  return f;
}

ErrorReport run_row(const SweepSpec& spec, std::size_t row) {
  const std::size_t v = row / spec.seeds.size();
  const std::uint64_t master = spec.seeds[row % spec.seeds.size()];
  const std::uint64_t seed = derive_seed(master, row);
  Params params = spec.fixed;
  params[spec.vary] = spec.values[v];
  const auto start = std::chrono::steady_clock::now();
  ErrorReport r;
  try {
    const TargetBuild t = build_target(spec.target, params, seed);
    VerifyOptions opt;
    opt.grid = spec.grid;
    opt.mc = spec.mc;
    opt.l2_samples = spec.l2_samples;
    opt.seed = seed;
    r = verify_target(t, opt);
  } catch (const std::exception& e) {
    r = ErrorReport{};
    r.target = spec.target;
    r.params = format_params(params);
    r.status = std::string("error: ") + e.what();
  }
  r.seed = master;
  r.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t n = spec.values.size() * spec.seeds.size();
  SweepResult out;
  out.rows.resize(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) out.rows[i] = run_row(spec, i);
  };
  const auto nthreads = std::min<std::size_t>(static_cast<std::size_t>(spec.threads), n);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  }
  out.fit = fit_sweep(spec, out.rows);
  return out;
}

std::string sweep_summary_json(const SweepSpec& spec, const SweepResult& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["target"] = spec.target;
  j["vary"] = spec.vary;
  j["values"] = spec.values;
  j["fixed"] = spec.fixed;
  j["seeds"] = spec.seeds;
  j["rng"] = std::string(Rng::kAlgorithm);
  int errors = 0, failures = 0;
  for (const auto& row : r.rows) {
    if (row.status.rfind("error", 0) == 0) ++errors;
    if (row.status == "fail") ++failures;
  }
  j["rows"] = r.rows.size();
  j["failed_rows"] = failures;
  j["error_rows"] = errors;
  if (r.fit) {
    j["fit"] = {{"model", r.fit->model}, {"x", r.fit->x},
                {"y", r.fit->y},         {"coeffs", r.fit->coeffs},
                {"r2", r.fit->r2},       {"points", r.fit->points}};
  } else {
    j["fit"] = nullptr;
  }
  return j.dump(2) + '\n';
}

}  // namespace reluapprox
