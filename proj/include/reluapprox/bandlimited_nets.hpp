#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reluapprox/analytic_nets.hpp"
#include "reluapprox/network.hpp"
#include "reluapprox/rng.hpp"

namespace reluapprox {

using PointFn = std::function<double(std::span<const double>)>;

// F(w) = |F(w)| exp(i theta(w)), supported in [-M, M]^d with integral C_F of
// |F|.  Mass lies inside [support_lo, support_hi] (defaults to the full box),
// which is where quadrature and rejection proposals are confined.
struct SpectralDensity {
  int d = 1;
  double M = 1.0;
  PointFn magnitude;
  PointFn phase;
  double C_F = 1.0;
  std::vector<double> support_lo;
  std::vector<double> support_hi;
  // Rejection envelope for |F|; estimated from a 33^d grid when absent.
  std::optional<double> envelope;
  std::string name;

  void validate() const;
  std::vector<double> lower() const;
  std::vector<double> upper() const;
};

// Truncated product of N(0, sigma^2) densities; C_F by Gauss-Legendre.
SpectralDensity gaussian_density(int d, double M, double sigma,
                                 double phase = 0.0);
// |F| = (2M)^-d on the box, C_F = 1.
SpectralDensity uniform_density(int d, double M, double phase = 0.0);
// Product of smooth bumps exp(-1/(1-r^2)), r = (w_i - center)/width,
// normalized to C_F = 1.  The bump must fit inside the box.
SpectralDensity bump_density(int d, double M, double center, double width,
                             double phase = 0.0);

// Kernel K(t) with a Bernstein-ellipse bound usable on t in [-T, T] and a
// bound D_K on the real axis.
struct KernelSpec {
  std::string name;
  std::function<std::complex<double>(double)> eval;
  // C_K(s, T): bound of |K| on the s-ellipse scaled to [-T, T].
  std::function<double(double, double)> ellipse_bound;
  double sup_bound = 1.0;
};

// K(t) = exp(i t), C_K(s, T) = exp(T (s - 1/s) / 2), D_K = 1.
KernelSpec cexp_kernel();

// Measure on the box B = [lo, hi]^d with total mass `mass`.
struct MeasureSpec {
  enum class Kind { kLebesgue, kWeighted };
  Kind kind = Kind::kLebesgue;
  int d = 1;
  double mass = 1.0;
  std::vector<double> lo;
  std::vector<double> hi;
  // Fills a point distributed as mu / mass.
  std::function<void(Rng&, std::span<double>)> sample;
  std::string name;
};

// Lebesgue measure on [lo, hi]^d (mass = volume).
MeasureSpec lebesgue_measure(int d, double lo = 0.0, double hi = 1.0);
// mass * (uniform probability on [lo, hi]^d).
MeasureSpec scaled_uniform_measure(int d, double mass, double lo = 0.0,
                                   double hi = 1.0);
// mass * (normal(center, sigma^2 I) conditioned on [lo, hi]^d).
MeasureSpec gaussian_measure(int d, double center, double sigma, double mass,
                             double lo = 0.0, double hi = 1.0);

struct MaureyTerm {
  std::vector<double> w;
  std::complex<double> b;
};

struct MaureySample {
  std::uint64_t seed = 0;
  double C_F = 0.0;
  std::vector<MaureyTerm> terms;

  // sum_j |b_j|, accumulated in term order.
  double coefficient_l1() const;
};

// ceil(1 / eps0^2)
long maurey_term_count(double eps0);

// n = ceil(1/eps0^2) i.i.d. frequencies from |F| / C_F (rejection against a
// uniform proposal on the support box), b_j = (C_F / n) exp(i theta(w_j)),
// with |b_j| nudged down by ulps if needed so that sum |b_j| <= C_F.
MaureySample maurey_sample(const SpectralDensity& F, double eps0,
                           std::uint64_t seed);
// Same with an explicit term count.
MaureySample maurey_sample_n(const SpectralDensity& F, long n_terms,
                             std::uint64_t seed);

// Re sum_j b_j K(w_j . x), evaluated directly (no network).
double maurey_series_eval(const MaureySample& sample, const KernelSpec& K,
                          std::span<const double> x);

std::string maurey_sample_to_json(const MaureySample& s);
MaureySample maurey_sample_from_json(std::string_view text);

struct BandlimitedBuild {
  NetworkGraph net;
  MaureySample sample;
  double eps0 = 0.0;
  EllipseParams kernel_certificate;
  int kernel_degree = 0;
  double depth_order = 0.0;  // log2^2(C_F C_K sqrt(mu(B)) / eps) / log2^2 s
  double size_order = 0.0;   // C_F^2 mu(B) / eps^2 times depth_order
};

// eps0 = eps / (2 C_F sqrt(mu(B))); Maurey sample; per term the analytic
// network of t -> Re(e^{i theta_j} K(t)) on [-dM, dM] at accuracy eps0,
// precomposed with x -> w_j . x; output sum_j |b_j| (term net)_j.
BandlimitedBuild build_bandlimited_detailed(const SpectralDensity& F,
                                            const KernelSpec& K,
                                            const MeasureSpec& mu, double eps,
                                            std::uint64_t seed);
NetworkGraph build_bandlimited(const SpectralDensity& F, const KernelSpec& K,
                               const MeasureSpec& mu, double eps,
                               std::uint64_t seed);

// Re of the tensor Gauss-Legendre approximation of int F(w) K(w . x) dw over
// the support, doubling nodes_per_dim until successive values agree to 1e-10.
// Feasible for d <= 4 only.
double quadrature_reference(const SpectralDensity& F, const KernelSpec& K,
                            std::span<const double> x, int nodes_per_dim = 16);

}  // namespace reluapprox
