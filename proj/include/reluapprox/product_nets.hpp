#pragma once

#include "reluapprox/builder.hpp"
#include "reluapprox/network.hpp"

namespace reluapprox {

// Product x1*x2 on [-M,M] x [-N,N] to L-infinity accuracy eps.
struct MulBudget {
  double M = 1.0;
  double N = 1.0;
  double eps = 1e-3;

  void validate() const;
  // Smallest sawtooth depth m whose a-priori error M*N*2^(-2m-1) is <= eps.
  int refinement() const;
};

// Smallest m >= 1 with A*B*2^(-2m-1) <= accuracy.  Accuracy may exceed 1 for
// the internal stages of longer product chains.
int product_refinement(double A, double B, double accuracy);

// g o ... o g (m times) for the hat g(x) = 2s(x) - 4s(x-1/2) + 2s(x-1).
// Depth m, size 3m.
NetworkGraph build_sawtooth(int m);

// x - sum_{s=1..m} g_s(x) / 4^s, the piecewise-linear interpolant of x^2 on
// the dyadic grid of step 2^-m; |error| <= 2^(-2m-2) on [0,1].
NetworkGraph build_square(int m);

// Polarization product: x1*x2 = M*N*(((u+v)/2)^2 - ((u-v)/2)^2) with
// u = x1/M, v = x2/N; |.| is taken with s(t)+s(-t) before squaring.
NetworkGraph build_mul2(const MulBudget& budget);

// Per-stage relative accuracy of the d-fold product chain: eps / (d M^d e).
double muld_stage_accuracy(int d, double M, double eps);

// Upper bound on |y_k| (k = 1..d-1) used to normalize stage k + 1:
// M^(k+1) (1 + eps0)^k.
double muld_intermediate_bound(int k, double M, double eps0);

// Chain y1 = x1*x2, y_k = y_{k-1}*x_{k+1}.  d inputs, d-1 outputs; output
// k-1 approximates x1...x_k.
NetworkGraph build_muld(int d, double M, double eps);

// Builder-level pieces shared with the polynomial constructions.
LinearForm append_square(NetworkBuilder& b, const LinearForm& z, int m);
LinearForm append_sawtooth(NetworkBuilder& b, const LinearForm& z, int m);
// a*b for |a| <= A, |b| <= B with absolute accuracy `accuracy`.
LinearForm append_product(NetworkBuilder& b, const LinearForm& a,
                          const LinearForm& c, double A, double B,
                          double accuracy);

}  // namespace reluapprox
