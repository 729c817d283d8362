#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace reluapprox {

// n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Cached and thread-safe; the returned rule is shared and immutable.
std::shared_ptr<const GaussRule> gauss_legendre(int n);

// Tensor-product Gauss-Legendre integral of fn over the box [lo, hi] with
// `nodes_per_dim` nodes per axis.
double integrate_box(const std::function<double(std::span<const double>)>& fn,
                     std::span<const double> lo, std::span<const double> hi,
                     int nodes_per_dim);

struct AdaptiveIntegral {
  double value = 0.0;
  int nodes_per_dim = 0;
};

// Doubles nodes_per_dim from `start` until successive values differ by at
// most `tol`.  Throws FeasibilityError when the tensor grid would exceed
// `max_points` points first.
AdaptiveIntegral integrate_box_converged(
    const std::function<double(std::span<const double>)>& fn,
    std::span<const double> lo, std::span<const double> hi, int start,
    double tol, long long max_points = 1LL << 23);

}  // namespace reluapprox
