#include "reluapprox/bandlimited_nets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "reluapprox/error.hpp"
#include "reluapprox/quadrature.hpp"
#include "reluapprox/serialize.hpp"

namespace reluapprox {

namespace {

constexpr long kMaxRejectionAttempts = 1'000'000;
constexpr int kEnvelopeGrid = 33;
constexpr int kMaxOracleDim = 4;

PointFn constant_phase(double theta) {
  return [theta](std::span<const double>) { return theta; };
}

double one_dim_integral(const std::function<double(double)>& f, double lo,
                        double hi) {
  const double a[] = {lo};
  const double b[] = {hi};
  return integrate_box_converged(
             [&f](std::span<const double> w) { return f(w[0]); }, a, b, 16,
             1e-15)
      .value;
}

double estimate_envelope(const SpectralDensity& F) {
  if (F.envelope) return *F.envelope;
  if (F.d > kMaxOracleDim) {
    throw FeasibilityError("envelope grid needs d <= 4; pass an envelope");
  }
  const auto lo = F.lower();
  const auto hi = F.upper();
  std::vector<int> idx(static_cast<std::size_t>(F.d), 0);
  std::vector<double> w(static_cast<std::size_t>(F.d));
  double best = 0.0;
  while (true) {
    for (int i = 0; i < F.d; ++i) {
      const auto k = static_cast<std::size_t>(i);
      w[k] = lo[k] + (hi[k] - lo[k]) * idx[k] / (kEnvelopeGrid - 1);
    }
    best = std::max(best, F.magnitude(w));
    int i = 0;
    while (i < F.d && ++idx[static_cast<std::size_t>(i)] == kEnvelopeGrid) {
      idx[static_cast<std::size_t>(i++)] = 0;
    }
    if (i == F.d) break;
  }
  if (!(best > 0.0)) throw DataError("spectral density vanishes on its grid");
  return 1.01 * best;
}

double bump_profile(double r) {
  return std::abs(r) < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0;
}

}  // namespace

void SpectralDensity::validate() const {
  if (d < 1) throw ParameterError("spectral dimension must be >= 1");
  if (!(M >= 1.0)) throw ParameterError("band limit M must be >= 1");
  if (!magnitude) throw ParameterError("spectral magnitude is not set");
  if (!(C_F > 0.0) || !std::isfinite(C_F)) {
    throw DataError("C_F must be finite and positive");
  }
  const auto lo = lower();
  const auto hi = upper();
  for (int i = 0; i < d; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (!(lo[k] >= -M && hi[k] <= M && lo[k] < hi[k])) {
      throw ParameterError("support box must lie inside [-M, M]^d");
    }
  }
}

std::vector<double> SpectralDensity::lower() const {
  return support_lo.empty() ? std::vector<double>(static_cast<std::size_t>(d), -M)
                            : support_lo;
}

std::vector<double> SpectralDensity::upper() const {
  return support_hi.empty() ? std::vector<double>(static_cast<std::size_t>(d), M)
                            : support_hi;
}

SpectralDensity gaussian_density(int d, double M, double sigma, double phase) {
  if (!(sigma > 0.0)) throw ParameterError("Gaussian sigma must be positive");
  const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma);
  auto pdf = [sigma, norm](double w) {
    return norm * std::exp(-w * w / (2.0 * sigma * sigma));
  };
  SpectralDensity F;
  F.d = d;
  F.M = M;
  F.magnitude = [pdf](std::span<const double> w) {
    double v = 1.0;
    for (double wi : w) v *= pdf(wi);
    return v;
  };
  F.phase = constant_phase(phase);
  // Separable: C_F is the d-th power of the one-dimensional mass.
  F.C_F = std::pow(one_dim_integral(pdf, -M, M), d);
  F.name = "gauss";
  F.validate();
  return F;
}

SpectralDensity uniform_density(int d, double M, double phase) {
  SpectralDensity F;
  F.d = d;
  F.M = M;
  const double v = std::pow(2.0 * M, -d);
  F.magnitude = [v](std::span<const double>) { return v; };
  F.phase = constant_phase(phase);
  F.C_F = 1.0;
  F.envelope = v;
  F.name = "uniform";
  F.validate();
  return F;
}

SpectralDensity bump_density(int d, double M, double center, double width,
                             double phase) {
  if (!(width > 0.0)) throw ParameterError("bump width must be positive");
  if (center - width < -M || center + width > M) {
    throw ParameterError("bump must fit inside [-M, M]");
  }
  const double z1 = width * one_dim_integral(bump_profile, -1.0, 1.0);
  const double norm = std::pow(z1, -d);
  SpectralDensity F;
  F.d = d;
  F.M = M;
  F.magnitude = [center, width, norm](std::span<const double> w) {
    double v = norm;
    for (double wi : w) v *= bump_profile((wi - center) / width);
    return v;
  };
  F.phase = constant_phase(phase);
  F.C_F = 1.0;
  F.support_lo.assign(static_cast<std::size_t>(d), center - width);
  F.support_hi.assign(static_cast<std::size_t>(d), center + width);
  F.name = "bump";
  F.validate();
  return F;
}

KernelSpec cexp_kernel() {
  KernelSpec K;
  K.name = "cexp";
  K.eval = [](double t) { return std::complex<double>(std::cos(t), std::sin(t)); };
  K.ellipse_bound = [](double s, double T) { return exp_kernel_bound(s, T); };
  K.sup_bound = 1.0;
  return K;
}

MeasureSpec lebesgue_measure(int d, double lo, double hi) {
  if (d < 1 || !(hi > lo)) throw ParameterError("invalid measure box");
  MeasureSpec mu;
  mu.kind = MeasureSpec::Kind::kLebesgue;
  mu.d = d;
  mu.mass = std::pow(hi - lo, d);
  mu.lo.assign(static_cast<std::size_t>(d), lo);
  mu.hi.assign(static_cast<std::size_t>(d), hi);
  mu.sample = [lo, hi](Rng& rng, std::span<double> x) {
    for (double& xi : x) xi = rng.uniform(lo, hi);
  };
  mu.name = "lebesgue";
  return mu;
}

MeasureSpec scaled_uniform_measure(int d, double mass, double lo, double hi) {
  if (!(mass > 0.0)) throw ParameterError("measure mass must be positive");
  MeasureSpec mu = lebesgue_measure(d, lo, hi);
  mu.kind = MeasureSpec::Kind::kWeighted;
  mu.mass = mass;
  mu.name = "uniform";
  return mu;
}

MeasureSpec gaussian_measure(int d, double center, double sigma, double mass,
                             double lo, double hi) {
  if (!(sigma > 0.0)) throw ParameterError("measure sigma must be positive");
  MeasureSpec mu = scaled_uniform_measure(d, mass, lo, hi);
  mu.name = "gauss";
  mu.sample = [center, sigma, lo, hi](Rng& rng, std::span<double> x) {
    for (long attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
      double r2 = 0.0;
      for (double& xi : x) {
        xi = rng.uniform(lo, hi);
        r2 += (xi - center) * (xi - center);
      }
      if (rng.uniform() < std::exp(-r2 / (2.0 * sigma * sigma))) return;
    }
    throw EnvelopeError("Gaussian measure sampler: rejection failed");
  };
  return mu;
}

double MaureySample::coefficient_l1() const {
  double s = 0.0;
  for (const auto& t : terms) s += std::abs(t.b);
  return s;
}

long maurey_term_count(double eps0) {
  if (!(eps0 > 0.0 && eps0 < 1.0)) throw ParameterError("eps0 must lie in (0,1)");
  // Shave a few ulps so that exact squares such as 1/0.1^2 are not bumped up.
  return static_cast<long>(std::ceil((1.0 / (eps0 * eps0)) * (1.0 - 1e-12)));
}

MaureySample maurey_sample(const SpectralDensity& F, double eps0,
                           std::uint64_t seed) {
  return maurey_sample_n(F, maurey_term_count(eps0), seed);
}

MaureySample maurey_sample_n(const SpectralDensity& F, long n_terms,
                             std::uint64_t seed) {
  F.validate();
  if (n_terms < 1) throw ParameterError("Maurey sample needs >= 1 term");
  const double env = estimate_envelope(F);
  const auto lo = F.lower();
  const auto hi = F.upper();
  Rng rng(seed);
  MaureySample out;
  out.seed = seed;
  out.C_F = F.C_F;
  out.terms.reserve(static_cast<std::size_t>(n_terms));
  std::vector<double> w(static_cast<std::size_t>(F.d));
  std::vector<double> theta;
  theta.reserve(static_cast<std::size_t>(n_terms));
  for (long j = 0; j < n_terms; ++j) {
    bool accepted = false;
    for (long attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = rng.uniform(lo[i], hi[i]);
      const double f = F.magnitude(w);
      if (f > env) {
        throw EnvelopeError("density exceeds the rejection envelope");
      }
      if (rng.uniform() * env < f) {
        accepted = true;
        break;
      }
    }
    if (!accepted) throw EnvelopeError("rejection sampling did not accept");
    out.terms.push_back({w, {}});
    theta.push_back(F.phase ? F.phase(w) : 0.0);
  }
  double a = F.C_F / static_cast<double>(n_terms);
  while (true) {
    for (std::size_t j = 0; j < out.terms.size(); ++j) {
      out.terms[j].b = std::polar(a, theta[j]);
    }
    if (out.coefficient_l1() <= F.C_F) break;
    a = std::nextafter(a, 0.0);
  }
  return out;
}

double maurey_series_eval(const MaureySample& sample, const KernelSpec& K,
                          std::span<const double> x) {
  double s = 0.0;
  for (const auto& t : sample.terms) {
    if (t.w.size() != x.size()) throw InputError("point dimension mismatch");
    double wx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) wx += t.w[i] * x[i];
    s += (t.b * K.eval(wx)).real();
  }
  return s;
}

std::string maurey_sample_to_json(const MaureySample& s) {
  std::ostringstream os;
  os << "{\"seed\":" << s.seed << ",\"C_F\":" << format_real(s.C_F)
     << ",\"terms\":[";
  for (std::size_t j = 0; j < s.terms.size(); ++j) {
    if (j) os << ",\n";
    os << "{\"w\":[";
    for (std::size_t i = 0; i < s.terms[j].w.size(); ++i) {
      if (i) os << ',';
      os << format_real(s.terms[j].w[i]);
    }
    os << "],\"b_re\":" << format_real(s.terms[j].b.real())
       << ",\"b_im\":" << format_real(s.terms[j].b.imag()) << '}';
  }
  os << "]}\n";
  return os.str();
}

MaureySample maurey_sample_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    MaureySample s;
    s.seed = j.at("seed").get<std::uint64_t>();
    s.C_F = j.value("C_F", 0.0);
    for (const auto& t : j.at("terms")) {
      s.terms.push_back({t.at("w").get<std::vector<double>>(),
                         {t.at("b_re").get<double>(), t.at("b_im").get<double>()}});
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("Maurey sample JSON: ") + e.what());
  }
}

BandlimitedBuild build_bandlimited_detailed(const SpectralDensity& F,
                                            const KernelSpec& K,
                                            const MeasureSpec& mu, double eps,
                                            std::uint64_t seed) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0,1)");
  F.validate();
  if (mu.d != F.d) throw ParameterError("measure and density dimensions differ");
  if (!(mu.mass > 0.0)) throw ParameterError("measure mass must be positive");
  if (!(K.sup_bound > 0.0 && K.sup_bound <= 1.0)) {
    throw ParameterError("kernel bound D_K must lie in (0, 1]");
  }
  const double root_mass = std::sqrt(mu.mass);
  const double eps0 = eps / (2.0 * F.C_F * root_mass);
  if (!(eps0 < 1.0)) {
    throw ParameterError("eps / (2 C_F sqrt(mu(B))) must be below 1");
  }

  MaureySample sample = maurey_sample(F, eps0, seed);

  const double T = F.d * F.M;
  const EllipseParams cert = select_certificate(
      [&K, T](double s) { return K.ellipse_bound(s, T); }, T, eps0 / 2.0);

  std::vector<NetworkGraph> term_nets;
  std::vector<double> weights;
  term_nets.reserve(sample.terms.size());
  weights.reserve(sample.terms.size());
  int degree = 0;
  const std::vector<double> no_shift{0.0};
  for (const auto& term : sample.terms) {
    const double theta = std::arg(term.b);
    const std::complex<double> rot = std::polar(1.0, theta);
    auto kernel = [&K, rot](double t) { return (rot * K.eval(t)).real(); };
    AnalyticBuild built = build_analytic_detailed(kernel, cert, eps0);
    degree = built.degree;
    term_nets.push_back(
        precompose_affine(built.net, term.w, no_shift, F.d));
    weights.push_back(std::abs(term.b));
  }
  NetworkGraph net = linear_combine(term_nets, weights, 0.0);

  BandlimitedBuild out{std::move(net), std::move(sample), eps0, cert, degree,
                       0.0, 0.0};
  const double C_K = cert.C_f;
  const double lg = std::log2(F.C_F * C_K * root_mass / eps);
  const double ls = std::log2(cert.s);
  out.depth_order = lg * lg / (ls * ls);
  out.size_order = F.C_F * F.C_F * mu.mass / (eps * eps) * out.depth_order;
  return out;
}

NetworkGraph build_bandlimited(const SpectralDensity& F, const KernelSpec& K,
                               const MeasureSpec& mu, double eps,
                               std::uint64_t seed) {
  return build_bandlimited_detailed(F, K, mu, eps, seed).net;
}

double quadrature_reference(const SpectralDensity& F, const KernelSpec& K,
                            std::span<const double> x, int nodes_per_dim) {
  F.validate();
  if (F.d > kMaxOracleDim) {
    throw FeasibilityError("quadrature oracle supports d <= 4");
  }
  if (static_cast<int>(x.size()) != F.d) throw InputError("point dimension mismatch");
  const auto lo = F.lower();
  const auto hi = F.upper();
  auto integrand = [&](std::span<const double> w) {
    const double mag = F.magnitude(w);
    if (mag == 0.0) return 0.0;
    double wx = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) wx += w[i] * x[i];
    const double theta = F.phase ? F.phase(w) : 0.0;
    return mag * (std::polar(1.0, theta) * K.eval(wx)).real();
  };
  return integrate_box_converged(integrand, lo, hi, nodes_per_dim, 1e-10).value;
}

}  // namespace reluapprox
