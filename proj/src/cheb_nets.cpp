#include "reluapprox/cheb_nets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "reluapprox/error.hpp"
#include "reluapprox/product_nets.hpp"
#include "reluapprox/serialize.hpp"

namespace reluapprox {

namespace {

constexpr int kMaxChebDegree = 256;

void require_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0,1)");
}

double max_abs(const std::vector<double>& c) {
  double m = 0.0;
  for (double v : c) m = std::max(m, std::abs(v));
  return m;
}

int last_nonzero(const std::vector<double>& c) {
  for (int k = static_cast<int>(c.size()) - 1; k > 0; --k) {
    if (c[static_cast<std::size_t>(k)] != 0.0) return k;
  }
  return 0;
}

void check_coeffs(const std::vector<double>& c, double M,
                  const std::optional<double>& C) {
  if (c.empty()) throw ParameterError("coefficient list is empty");
  for (double v : c) {
    if (!std::isfinite(v)) throw ParameterError("non-finite coefficient");
  }
  if (!(M >= 1.0)) throw ParameterError("scale M must be >= 1");
  if (C && !(*C >= max_abs(c))) {
    throw ParameterError("bound C is below max |c_k|");
  }
}

double coeff_at(const std::vector<double>& c, int k) {
  return k < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(k)] : 0.0;
}

}  // namespace

double ChebSeries::bound() const { return C ? *C : max_abs(coeffs); }
int ChebSeries::degree() const { return last_nonzero(coeffs); }
void ChebSeries::validate() const { check_coeffs(coeffs, M, C); }

double MonomialPoly::bound() const { return C ? *C : max_abs(coeffs); }
int MonomialPoly::degree() const { return last_nonzero(coeffs); }
void MonomialPoly::validate() const { check_coeffs(coeffs, M, C); }

double MonomialPoly::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

NetworkGraph build_poly(const MonomialPoly& p, double eps) {
  require_eps(eps);
  p.validate();
  const int n = p.degree();
  NetworkBuilder b(1);
  const LinearForm x = b.input(0);
  LinearForm out = add(constant_form(coeff_at(p.coeffs, 0)), x,
                       coeff_at(p.coeffs, 1));
  if (n >= 2) {
    const double inner = eps / (p.bound() * n);
    const NetworkGraph chain = build_muld(n, p.M, inner);
    const std::vector<LinearForm> tied(static_cast<std::size_t>(n), x);
    const auto y = b.embed(chain, tied);
    for (int k = 2; k <= n; ++k) {
      out = add(out, y[static_cast<std::size_t>(k - 2)], p.coeffs[k]);
    }
  }
  return std::move(b).finish({out});
}

double chebyshev_stage_accuracy(int n, double eps) {
  return eps / (n * std::pow(4.0, n) * std::numbers::e);
}

double chebyshev_magnitude_bound(int k, double eps0) {
  if (k <= 1) return 1.0;
  return std::pow(3.0, k - 2) * std::pow(1.0 + eps0, k);
}

std::vector<LinearForm> append_chebyshev(NetworkBuilder& b, const LinearForm& x,
                                         int n, double eps0) {
  if (n < 2 || n > kMaxChebDegree) {
    throw ParameterError("Chebyshev degree must lie in [2, 256]");
  }
  std::vector<LinearForm> T;
  T.reserve(static_cast<std::size_t>(n) + 1);
  T.push_back(constant_form(1.0));
  T.push_back(x);
  for (int k = 2; k <= n; ++k) {
    // Range of hatT_{k-1}, with one extra (1+eps0) of headroom.
    const double B =
        k == 2 ? 1.0
               : std::max(1.0, chebyshev_magnitude_bound(k - 1, eps0) *
                                   (1.0 + eps0));
    const LinearForm prod =
        append_product(b, x, T[static_cast<std::size_t>(k - 1)], 1.0, B,
                       B * eps0);
    T.push_back(add(scaled(prod, 2.0), T[static_cast<std::size_t>(k - 2)], -1.0));
  }
  return T;
}

NetworkGraph build_chebyshev(int n, double eps) {
  if (n < 2) throw ParameterError("Chebyshev degree must be >= 2");
  require_eps(eps);
  NetworkBuilder b(1);
  auto T = append_chebyshev(b, b.input(0), n, chebyshev_stage_accuracy(n, eps));
  return std::move(b).finish(std::move(T));
}

NetworkGraph build_cheb_series(const ChebSeries& series, double eps) {
  require_eps(eps);
  series.validate();
  const int n = series.degree();
  NetworkBuilder b(1);
  const LinearForm t = scaled(b.input(0), 1.0 / series.M);
  LinearForm out = add(constant_form(series.coeffs[0]), t,
                       coeff_at(series.coeffs, 1));
  if (n >= 2) {
    const double inner = eps / (series.bound() * n);
    const auto T = append_chebyshev(b, t, n, chebyshev_stage_accuracy(n, inner));
    for (int k = 2; k <= n; ++k) {
      out = add(out, T[static_cast<std::size_t>(k)], series.coeffs[k]);
    }
  }
  return std::move(b).finish({out});
}

ChebSeries cheb_coeffs(const std::function<double(double)>& f, int n, double M) {
  if (n < 1) throw ParameterError("interpolation degree must be >= 1");
  if (!(M >= 1.0)) throw ParameterError("scale M must be >= 1");
  std::vector<double> fx(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    const double v = f(M * std::cos(std::numbers::pi * j / n));
    if (!std::isfinite(v)) {
      throw DataError("non-finite sample at Chebyshev point " +
                      std::to_string(j));
    }
    fx[static_cast<std::size_t>(j)] = v;
  }
  ChebSeries out;
  out.M = M;
  out.coeffs.assign(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    double s = 0.0;
    for (int j = 0; j <= n; ++j) {
      // cos(k j pi / n) with the angle reduced exactly modulo 2 pi
      const long r = (static_cast<long>(k) * j) % (2L * n);
      double term = fx[static_cast<std::size_t>(j)] *
                    std::cos(std::numbers::pi * static_cast<double>(r) / n);
      if (j == 0 || j == n) term *= 0.5;
      s += term;
    }
    s *= 2.0 / n;
    if (k == 0 || k == n) s *= 0.5;
    out.coeffs[static_cast<std::size_t>(k)] = s;
  }
  return out;
}

double clenshaw_eval(const ChebSeries& series, double x) {
  if (!(std::abs(x) <= series.M)) {
    throw DomainError("Clenshaw argument outside [-M, M]");
  }
  const double t = x / series.M;
  const auto& c = series.coeffs;
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) {
    const double b0 = c[k] + 2.0 * t * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return (c.empty() ? 0.0 : c[0]) + t * b1 - b2;
}

double chebyshev_t(int k, double x) {
  return std::cos(k * std::acos(std::clamp(x, -1.0, 1.0)));
}

std::string cheb_series_to_json(const ChebSeries& s) {
  std::ostringstream os;
  os << "{\"M\":" << format_real(s.M) << ",\"coeffs\":[";
  for (std::size_t k = 0; k < s.coeffs.size(); ++k) {
    if (k) os << ',';
    os << format_real(s.coeffs[k]);
  }
  os << ']';
  if (s.C) os << ",\"C\":" << format_real(*s.C);
  os << "}\n";
  return os.str();
}

ChebSeries cheb_series_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    ChebSeries s;
    s.M = j.value("M", 1.0);
    s.coeffs = j.at("coeffs").get<std::vector<double>>();
    if (j.contains("C")) s.C = j.at("C").get<double>();
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("Chebyshev series JSON: ") + e.what());
  }
}

}  // namespace reluapprox
