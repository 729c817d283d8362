#pragma once

#include <functional>

#include "reluapprox/cheb_nets.hpp"
#include "reluapprox/network.hpp"

namespace reluapprox {

// Analyticity certificate: f continues analytically to the open Bernstein
// s-ellipse scaled to [-M, M] and |f| <= C_f there.
struct EllipseParams {
  double s = 2.0;
  double C_f = 1.0;
  double M = 1.0;

  void validate() const;
};

struct EllipseAxes {
  double a = 0.0;  // semi-major, M (s + 1/s) / 2
  double b = 0.0;  // semi-minor, M (s - 1/s) / 2
};

EllipseAxes ellipse_axes(double s, double M);

// 1 / (1 + x^2 / beta^2)
double runge(double beta, double x);

// Certificate for the Runge-like function with poles at +-i beta:
// s(M) = (sqrt((4M^2-2) r^2 + r^4 + 1) + r^2 - 1) / (2 M r),
// r = beta + sqrt(beta^2 + 1), and C_f = runge(beta, M (s - 1/s) / 2).
EllipseParams runge_params(double beta, double M);

// exp(M (s - 1/s) / 2), the bound of e^{ix} on the scaled s-ellipse.
double exp_kernel_bound(double s, double M);

// Geometric tail bound 2 C_f s^-n / (s - 1) of the degree-n truncation.
double truncation_bound(const EllipseParams& p, int n);

// Smallest n >= 2 with truncation_bound(p, n) <= eps_half.
int truncation_degree(const EllipseParams& p, double eps_half);

// Certificate (s, exp_kernel_bound(s, M), M) for an entire kernel bounded
// like e^{|Im z|}, with s picked from a 64-point log grid on (1, 8] to
// minimize truncation_degree at eps_half (ties go to the smaller s).
EllipseParams select_exp_certificate(double M, double eps_half);

// Same grid search for an arbitrary bound C(s) of the function on the
// s-ellipse scaled to [-M, M].
EllipseParams select_certificate(const std::function<double(double)>& bound_of_s,
                                 double M, double eps_half);

struct AnalyticBuild {
  NetworkGraph net;
  int degree = 0;
  ChebSeries series;
};

// Degree n = truncation_degree(p, eps/2), interpolation coefficients of f at
// that degree, and a series network at accuracy eps/2.
AnalyticBuild build_analytic_detailed(const std::function<double(double)>& f,
                                      const EllipseParams& p, double eps);
NetworkGraph build_analytic(const std::function<double(double)>& f,
                            const EllipseParams& p, double eps);

// log2^2(C_f / eps) / log2^2(s): the depth/size order of build_analytic.
double analytic_size_order(const EllipseParams& p, double eps);

}  // namespace reluapprox
