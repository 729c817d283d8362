#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reluapprox/bandlimited_nets.hpp"
#include "reluapprox/catalog.hpp"
#include "reluapprox/network.hpp"

namespace reluapprox {

inline constexpr long long kMaxGridPoints = 10'000'000;

struct LinfResult {
  double error = 0.0;
  std::vector<double> argmax;
  long long points = 0;
};

// Max |approx - oracle| over the uniform tensor grid (endpoints included).
// Ties keep the first maximizer in lexicographic grid order.
LinfResult linf_error(const PointFn& approx, const PointFn& oracle,
                      const Box& domain, int grid_per_dim);
LinfResult linf_error(const NetworkGraph& net, const PointFn& oracle,
                      const Box& domain, int grid_per_dim, int output = 0);

// Same maximum over `n_points` uniform random points of the box.
LinfResult linf_error_mc(const PointFn& approx, const PointFn& oracle,
                         const Box& domain, long long n_points,
                         std::uint64_t seed);

struct L2Result {
  double estimate = 0.0;
  double std_error = 0.0;
  long long samples = 0;
};

// sqrt(mu(B) * mean (approx - oracle)^2) over mu-distributed samples, with a
// delta-method standard error.
L2Result l2_mu_error(const PointFn& approx, const PointFn& oracle,
                     const MeasureSpec& mu, long long n_samples,
                     std::uint64_t seed);
L2Result l2_mu_error(const NetworkGraph& net, const PointFn& oracle,
                     const MeasureSpec& mu, long long n_samples,
                     std::uint64_t seed, int output = 0);

// Grid used when none is requested: 2001 points in 1-D, 401 per axis in 2-D;
// 0 means Monte Carlo (d >= 3).
int default_grid(int d);
inline constexpr long long kDefaultMcPoints = 100'000;
inline constexpr long long kDefaultL2Samples = 2'000;

struct ErrorReport {
  std::string target;
  std::string params;
  std::uint64_t seed = 0;
  std::string rng{Rng::kAlgorithm};
  std::optional<int> depth;
  std::optional<int> size;
  std::optional<double> max_abs_weight;
  std::optional<double> linf;
  std::vector<double> linf_argmax;
  std::optional<L2Result> l2;
  std::string status;  // pass | fail | error: <message>
  double wall_time = 0.0;
};

// Column order is fixed; wall_time is appended only when `timing` is set.
std::string csv_header(bool timing);
std::string csv_row(const ErrorReport& r, bool timing);
std::string reports_to_csv(const std::vector<ErrorReport>& rows, bool timing);

struct VerifyOptions {
  int grid = -1;          // -1: default_grid(d)
  long long mc = 0;       // > 0: Monte Carlo points instead of a grid
  long long l2_samples = kDefaultL2Samples;
  std::uint64_t seed = 0;
  std::optional<MeasureSpec> measure;  // overrides the target's own
};

// Measures `approx` against `oracle` on `domain`.  With a measure the L2(mu)
// error is judged against eps, otherwise the sup error.
ErrorReport verify(const PointFn& approx, const PointFn& oracle,
                   const Box& domain, const std::optional<MeasureSpec>& measure,
                   double eps, const VerifyOptions& opt);
ErrorReport verify_target(const TargetBuild& t, const VerifyOptions& opt);

struct SweepSpec {
  std::string target;
  std::string vary;  // eps | n | d | n_terms (or any parameter)
  std::vector<std::string> values;
  Params fixed;
  std::vector<std::uint64_t> seeds{0};
  int threads = 1;
  bool timing = false;
  int grid = -1;
  long long mc = 0;
  long long l2_samples = kDefaultL2Samples;

  void validate() const;
};

SweepSpec sweep_spec_from_json(std::string_view text);

struct ScalingFit {
  std::string model;  // linear | quadratic | loglog
  std::string x;      // description of the regressor
  std::string y;
  std::vector<double> coeffs;  // ascending powers
  double r2 = 0.0;
  int points = 0;
};

// Least-squares polynomial fit of y on x with R^2.
ScalingFit fit_polynomial(const std::vector<double>& x,
                          const std::vector<double>& y, int degree);

struct SweepResult {
  std::vector<ErrorReport> rows;
  std::optional<ScalingFit> fit;
};

// Rows are values x seeds in that order; row i draws from
// derive_seed(seed, i).  A failing row is reported, not fatal.
SweepResult run_sweep(const SweepSpec& spec);
std::string sweep_summary_json(const SweepSpec& spec, const SweepResult& r);

}  // namespace reluapprox
