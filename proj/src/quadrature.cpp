#include "reluapprox/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "reluapprox/error.hpp"

namespace reluapprox {

namespace {

// P_n(x) and P_{n-1}(x) by the three-term recurrence.
std::pair<double, double> legendre_pair(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

GaussRule compute_rule(int n) {
  GaussRule r;
  if (n == 1) {
    r.nodes = {0.0};
    r.weights = {2.0};
    return r;
  }
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  // Newton on P_n from the Tricomi initial guesses, symmetric pairs.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      const auto [pn, pm] = legendre_pair(n, x);
      dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [pn, pm] = legendre_pair(n, x);
    dp = n * (x * pn - pm) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[static_cast<std::size_t>(i)] = -x;
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) r.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return r;
}

}  // namespace

std::shared_ptr<const GaussRule> gauss_legendre(int n) {
  if (n < 1) throw ParameterError("Gauss rule needs at least one node");
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const GaussRule>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const GaussRule>(compute_rule(n));
  return slot;
}

double integrate_box(const std::function<double(std::span<const double>)>& fn,
                     std::span<const double> lo, std::span<const double> hi,
                     int nodes_per_dim) {
  const std::size_t d = lo.size();
  if (hi.size() != d || d == 0) throw ParameterError("box bounds mismatch");
  const auto rule = gauss_legendre(nodes_per_dim);
  std::vector<double> half(d), mid(d);
  double jac = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    half[i] = 0.5 * (hi[i] - lo[i]);
    mid[i] = 0.5 * (hi[i] + lo[i]);
    jac *= half[i];
  }
  std::vector<int> idx(d, 0);
  std::vector<double> w(d);
  double total = 0.0;
  const int n = nodes_per_dim;
  while (true) {
    double weight = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      const auto k = static_cast<std::size_t>(idx[i]);
      w[i] = mid[i] + half[i] * rule->nodes[k];
      weight *= rule->weights[k];
    }
    total += weight * fn(w);
    std::size_t i = 0;
    while (i < d && ++idx[i] == n) idx[i++] = 0;
    if (i == d) break;
  }
  return jac * total;
}

AdaptiveIntegral integrate_box_converged(
    const std::function<double(std::span<const double>)>& fn,
    std::span<const double> lo, std::span<const double> hi, int start,
    double tol, long long max_points) {
  const auto d = static_cast<int>(lo.size());
  int n = std::max(1, start);
  double prev = integrate_box(fn, lo, hi, n);
  while (true) {
    const int next = 2 * n;
    if (std::pow(static_cast<double>(next), d) > static_cast<double>(max_points)) {
      throw FeasibilityError("quadrature did not converge within " +
                             std::to_string(max_points) + " nodes");
    }
    const double cur = integrate_box(fn, lo, hi, next);
    if (std::abs(cur - prev) <= tol) return {cur, next};
    prev = cur;
    n = next;
  }
}

}  // namespace reluapprox
