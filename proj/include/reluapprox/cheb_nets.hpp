#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reluapprox/builder.hpp"
#include "reluapprox/network.hpp"

namespace reluapprox {

// f_n(x) = sum_k coeffs[k] T_k(x / M) on [-M, M].
struct ChebSeries {
  std::vector<double> coeffs;
  double M = 1.0;
  // Bound C >= max |c_k|; max |c_k| when absent.
  std::optional<double> C;

  double bound() const;
  // Index of the last nonzero coefficient (0 for the zero series).
  int degree() const;
  void validate() const;
};

// p_n(x) = sum_k coeffs[k] x^k on [-M, M].
struct MonomialPoly {
  std::vector<double> coeffs;
  double M = 1.0;
  std::optional<double> C;

  double bound() const;
  int degree() const;
  void validate() const;
  double operator()(double x) const;  // Horner
};

// c0 + c1 x + sum_{k>=2} c_k y_{k-1}(x,...,x) with the product chain built at
// accuracy eps / (C n).  Coefficients beyond the last nonzero one are ignored.
NetworkGraph build_poly(const MonomialPoly& p, double eps);

// Pairwise-product accuracy of the recurrence chain: eps / (n 4^n e).
double chebyshev_stage_accuracy(int n, double eps);

// Magnitude ledger of the recurrence chain: |hatT_k| < 3^(k-2) (1+eps0)^k
// for k >= 2, and 1 for k = 0, 1.
double chebyshev_magnitude_bound(int k, double eps0);

// hatT_0 .. hatT_n of the form x (|x| <= 1) via
// hatT_k = 2 mul(x, hatT_{k-1}) - hatT_{k-2}, each product built with
// absolute accuracy B * eps0 on [-1,1] x [-B,B].
std::vector<LinearForm> append_chebyshev(NetworkBuilder& b, const LinearForm& x,
                                         int n, double eps0);

// One input on [-1,1], n + 1 outputs: output k is hatT_k.  Every output is
// within eps of T_k.
NetworkGraph build_chebyshev(int n, double eps);

// c0 + c1 (x/M) + sum_{k>=2} c_k hatT_k(x/M) with inner accuracy eps/(C n).
NetworkGraph build_cheb_series(const ChebSeries& series, double eps);

// Degree-n interpolant of f(M .) at the points cos(j pi / n), j = 0..n.
ChebSeries cheb_coeffs(const std::function<double(double)>& f, int n, double M);

// Backward (Clenshaw) recurrence; throws DomainError for |x| > M.
double clenshaw_eval(const ChebSeries& series, double x);

// T_k(x) = cos(k arccos x) on [-1, 1].
double chebyshev_t(int k, double x);

std::string cheb_series_to_json(const ChebSeries& s);
ChebSeries cheb_series_from_json(std::string_view text);

}  // namespace reluapprox
