#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reluapprox/bandlimited_nets.hpp"
#include "reluapprox/network.hpp"

namespace reluapprox {

using Params = std::map<std::string, std::string>;

// "name:key=value,key=value" (the part after ':' is also kept verbatim in
// `rest`, for specs that nest another spec).
struct ParsedSpec {
  std::string name;
  Params params;
  std::string rest;
};

ParsedSpec parse_spec(std::string_view spec);

double param_double(const Params& p, const std::string& key, double fallback);
int param_int(const Params& p, const std::string& key, int fallback);
std::string param_string(const Params& p, const std::string& key,
                         const std::string& fallback);
// Numbers separated by ',', ';', '|' or whitespace.
std::vector<double> parse_number_list(std::string_view text);
// Stable "k=v;k=v" rendering (keys in lexicographic order).
std::string format_params(const Params& p);

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  static Box cube(int d, double lo, double hi);
};

// gauss:sigma=<v> | uniform | bump:center=<w0>,width=<h>; optional phase=<v>.
SpectralDensity density_from_spec(std::string_view spec, int d, double M);
// cexp
KernelSpec kernel_from_spec(std::string_view spec);
// lebesgue | uniform:mass=<v> | gauss:center=<c>,sigma=<s>,mass=<v>, on `box`.
MeasureSpec measure_from_spec(std::string_view spec, const Box& box);

// Reference functions for `verify`:
//   product | square | cos | sin | cheb:k=<k> | runge:beta=<v>
//   | poly:coeffs=<c0;c1;...> | series:file=<path>
//   | bandlimited:<density spec>   (kernel cexp, band limit M)
PointFn oracle_from_spec(std::string_view spec, int d, double M);

// A construction together with what it should be checked against.
struct TargetBuild {
  std::string target;
  Params params;                    // as resolved, defaults filled in
  std::optional<NetworkGraph> net;  // empty for series-only targets
  PointFn approx;                   // net output `output` or the series
  PointFn oracle;
  Box domain;
  int output = 0;
  std::optional<MeasureSpec> measure;  // set: judge by L2(mu), not L-inf
  double eps = 0.0;
};

// Targets: mul2, muld, poly, cheb, series, analytic, bandlimited, maurey.
TargetBuild build_target(const std::string& target, const Params& params,
                         std::uint64_t seed);

}  // namespace reluapprox
