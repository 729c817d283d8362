#include "reluapprox/product_nets.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "reluapprox/error.hpp"

namespace reluapprox {

namespace {

void require_refinement(int m) {
  if (m < 1) throw ConstructionError("refinement m must be >= 1");
}

// One application of the hat function to `g`; returns the new form.
LinearForm hat_step(NetworkBuilder& b, const LinearForm& g) {
  const LinearForm h0 = b.relu(g);
  const LinearForm h1 = b.relu(add(g, constant_form(-0.5)));
  const LinearForm h2 = b.relu(add(g, constant_form(-1.0)));
  return add(add(scaled(h0, 2.0), h1, -4.0), h2, 2.0);
}

}  // namespace

void MulBudget::validate() const {
  if (!(M >= 1.0) || !(N >= 1.0)) {
    throw ConstructionError("multiplication ranges must satisfy M, N >= 1");
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ConstructionError("multiplication accuracy must lie in (0,1)");
  }
}

int MulBudget::refinement() const {
  validate();
  return product_refinement(M, N, eps);
}

int product_refinement(double A, double B, double accuracy) {
  if (!(accuracy > 0.0) || !(A > 0.0) || !(B > 0.0)) {
    throw ConstructionError("product ranges and accuracy must be positive");
  }
  int m = 1;
  while (std::ldexp(A * B, -2 * m - 1) > accuracy) {
    ++m;
    if (m > 4096) throw ConstructionError("product accuracy unreachable");
  }
  return m;
}

LinearForm append_sawtooth(NetworkBuilder& b, const LinearForm& z, int m) {
  require_refinement(m);
  LinearForm g = z;
  for (int s = 1; s <= m; ++s) g = hat_step(b, g);
  return g;
}

LinearForm append_square(NetworkBuilder& b, const LinearForm& z, int m) {
  require_refinement(m);
  LinearForm g = z;
  LinearForm sq = z;
  for (int s = 1; s <= m; ++s) {
    g = hat_step(b, g);
    sq = add(sq, g, -std::ldexp(1.0, -2 * s));
  }
  return sq;
}

LinearForm append_product(NetworkBuilder& b, const LinearForm& a,
                          const LinearForm& c, double A, double B,
                          double accuracy) {
  const int m = product_refinement(A, B, accuracy);
  const LinearForm u = scaled(a, 1.0 / A);
  const LinearForm v = scaled(c, 1.0 / B);
  const LinearForm sum = add(u, v);
  const LinearForm diff = add(u, v, -1.0);
  // |t|/2 = (s(t) + s(-t)) / 2
  const LinearForm half_abs_sum =
      add(scaled(b.relu(sum), 0.5), b.relu(scaled(sum, -1.0)), 0.5);
  const LinearForm half_abs_diff =
      add(scaled(b.relu(diff), 0.5), b.relu(scaled(diff, -1.0)), 0.5);
  const LinearForm sq_sum = append_square(b, half_abs_sum, m);
  const LinearForm sq_diff = append_square(b, half_abs_diff, m);
  return interleaved_difference(sq_sum, sq_diff, A * B);
}

NetworkGraph build_sawtooth(int m) {
  require_refinement(m);
  NetworkBuilder b(1);
  LinearForm g = append_sawtooth(b, b.input(0), m);
  return std::move(b).finish({g});
}

NetworkGraph build_square(int m) {
  require_refinement(m);
  NetworkBuilder b(1);
  LinearForm sq = append_square(b, b.input(0), m);
  return std::move(b).finish({sq});
}

NetworkGraph build_mul2(const MulBudget& budget) {
  budget.validate();
  NetworkBuilder b(2);
  LinearForm out = append_product(b, b.input(0), b.input(1), budget.M,
                                  budget.N, budget.eps);
  return std::move(b).finish({out});
}

double muld_stage_accuracy(int d, double M, double eps) {
  return eps / (d * std::pow(M, d) * std::numbers::e);
}

double muld_intermediate_bound(int k, double M, double eps0) {
  return std::pow(M, k + 1) * std::pow(1.0 + eps0, k);
}

NetworkGraph build_muld(int d, double M, double eps) {
  if (d < 2) throw ConstructionError("product chain needs d >= 2");
  if (!(M >= 1.0)) throw ConstructionError("product chain needs M >= 1");
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ConstructionError("product chain accuracy must lie in (0,1)");
  }
  const double eps0 = muld_stage_accuracy(d, M, eps);
  NetworkBuilder b(d);
  std::vector<LinearForm> outs;
  LinearForm y = b.input(0);
  double A = M;
  for (int k = 1; k <= d - 1; ++k) {
    // y_k = y_{k-1} * x_{k+1}, stage accuracy A*B*eps0 with B = M
    y = append_product(b, y, b.input(k), A, M, A * M * eps0);
    outs.push_back(y);
    A = muld_intermediate_bound(k, M, eps0);
  }
  return std::move(b).finish(std::move(outs));
}

}  // namespace reluapprox
