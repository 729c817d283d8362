#include "reluapprox/analytic_nets.hpp"

#include <cmath>

#include "reluapprox/error.hpp"

namespace reluapprox {

void EllipseParams::validate() const {
  if (!(s > 1.0)) throw ParameterError("ellipse parameter s must exceed 1");
  if (!(C_f > 0.0)) throw ParameterError("bound C_f must be positive");
  if (!(M >= 1.0)) throw ParameterError("half-width M must be >= 1");
}

EllipseAxes ellipse_axes(double s, double M) {
  if (!(s > 1.0)) throw ParameterError("ellipse parameter s must exceed 1");
  if (!(M >= 1.0)) throw ParameterError("half-width M must be >= 1");
  return {M * (s + 1.0 / s) / 2.0, M * (s - 1.0 / s) / 2.0};
}

double runge(double beta, double x) { return 1.0 / (1.0 + x * x / (beta * beta)); }

EllipseParams runge_params(double beta, double M) {
  if (!(beta > 1.0)) throw ParameterError("Runge parameter beta must exceed 1");
  if (!(M >= 1.0)) throw ParameterError("half-width M must be >= 1");
  const double r = beta + std::sqrt(beta * beta + 1.0);
  const double r2 = r * r;
  const double s =
      (std::sqrt((4.0 * M * M - 2.0) * r2 + r2 * r2 + 1.0) + r2 - 1.0) /
      (2.0 * M * r);
  const double C = runge(beta, M * (s - 1.0 / s) / 2.0);
  EllipseParams p{s, C, M};
  p.validate();
  return p;
}

double exp_kernel_bound(double s, double M) {
  if (!(s > 1.0)) throw ParameterError("ellipse parameter s must exceed 1");
  if (!(M > 0.0)) throw ParameterError("half-width M must be positive");
  return std::exp(M * (s - 1.0 / s) / 2.0);
}

double truncation_bound(const EllipseParams& p, int n) {
  return 2.0 * p.C_f * std::pow(p.s, -n) / (p.s - 1.0);
}

int truncation_degree(const EllipseParams& p, double eps_half) {
  p.validate();
  if (!(eps_half > 0.0 && eps_half < 1.0)) {
    throw ParameterError("truncation budget must lie in (0,1)");
  }
  const double guess =
      std::ceil(std::log(2.0 * p.C_f / (eps_half * (p.s - 1.0))) / std::log(p.s));
  int n = std::max(2, static_cast<int>(std::min(guess, 1e6)));
  // Settle rounding at the boundary against the bound itself.
  while (truncation_bound(p, n) > eps_half) ++n;
  while (n > 2 && truncation_bound(p, n - 1) <= eps_half) --n;
  return n;
}

EllipseParams select_exp_certificate(double M, double eps_half) {
  return select_certificate([M](double s) { return exp_kernel_bound(s, M); },
                            M, eps_half);
}

EllipseParams select_certificate(const std::function<double(double)>& bound_of_s,
                                 double M, double eps_half) {
  constexpr int kGrid = 64;
  constexpr double kMaxS = 8.0;
  EllipseParams best;
  int best_n = -1;
  for (int i = 1; i <= kGrid; ++i) {
    const double s = std::exp(std::log(kMaxS) * i / kGrid);
    const EllipseParams p{s, bound_of_s(s), M};
    const int n = truncation_degree(p, eps_half);
    if (best_n < 0 || n < best_n) {
      best = p;
      best_n = n;
    }
  }
  return best;
}

AnalyticBuild build_analytic_detailed(const std::function<double(double)>& f,
                                      const EllipseParams& p, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must lie in (0,1)");
  p.validate();
  const int n = truncation_degree(p, eps / 2.0);
  ChebSeries series = cheb_coeffs(f, n, p.M);
  NetworkGraph net = build_cheb_series(series, eps / 2.0);
  return {std::move(net), n, std::move(series)};
}

NetworkGraph build_analytic(const std::function<double(double)>& f,
                            const EllipseParams& p, double eps) {
  return build_analytic_detailed(f, p, eps).net;
}

double analytic_size_order(const EllipseParams& p, double eps) {
  const double num = std::log2(p.C_f / eps);
  const double den = std::log2(p.s);
  return num * num / (den * den);
}

}  // namespace reluapprox
