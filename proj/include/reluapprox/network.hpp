#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace reluapprox {

// Reference to a value inside a network: either a raw input
// (layer == kInputLayer, unit = input index) or hidden unit `unit` of
// hidden layer `layer`.
struct NodeRef {
  static constexpr int kInputLayer = -1;

  int layer = kInputLayer;
  int unit = 0;

  static constexpr NodeRef input(int i) { return {kInputLayer, i}; }
  bool is_input() const { return layer == kInputLayer; }
  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

struct Term {
  NodeRef source;
  double coeff = 0.0;
};

// Affine functional  bias + sum(coeff * value(source)).  Used both for the
// pre-activation of a unit and for the (activation-free) output node.
struct LinearForm {
  std::vector<Term> terms;
  double bias = 0.0;
};

// sigma(pre) with sigma = max(0, .).
struct Unit {
  LinearForm pre;
};

struct Layer {
  std::vector<Unit> units;
};

// Deep ReLU network with connections allowed between any earlier layer and
// any later one.  depth() counts hidden layers, size() counts hidden units;
// the outputs are affine functionals without activation.
//
// Immutable after construction.  The constructor checks the DAG rule (a unit
// in layer l reads only raw inputs or units of layers < l) and precomputes a
// flat layout so evaluation is a single forward sweep in layer-major,
// unit-minor order.
class NetworkGraph {
 public:
  NetworkGraph(int input_dim, std::vector<Layer> layers,
               std::vector<LinearForm> outputs);

  // Network with no hidden units returning each raw input.
  static NetworkGraph passthrough(int input_dim);

  int input_dim() const { return input_dim_; }
  int output_dim() const { return static_cast<int>(outputs_.size()); }
  int depth() const { return static_cast<int>(layers_.size()); }
  int size() const { return num_units_; }

  const std::vector<Layer>& layers() const { return layers_; }
  const std::vector<LinearForm>& outputs() const { return outputs_; }

  // Largest |coefficient| or |bias| over units and outputs (diagnostic).
  double max_abs_weight() const;

  std::vector<double> evaluate(std::span<const double> x) const;
  double evaluate_scalar(std::span<const double> x, int output = 0) const;

  // Evaluates every point of a row-major batch (points.size() must be a
  // multiple of input_dim) and returns the requested output per point.
  std::vector<double> evaluate_batch(std::span<const double> points,
                                     int output = 0) const;

  // Full unit activations (inputs first, then units layer by layer).
  std::vector<double> activations(std::span<const double> x) const;

 private:
  void forward(std::span<const double> x, std::vector<double>& values) const;
  double apply_output(const std::vector<double>& values, int output) const;

  int input_dim_;
  std::vector<Layer> layers_;
  std::vector<LinearForm> outputs_;
  int num_units_ = 0;

  // Flat CSR copy of the unit pre-activations and outputs, indices into the
  // value array [inputs..., layer 0 units..., layer 1 units..., ...].
  std::vector<std::int32_t> layer_offset_;
  std::vector<std::int64_t> row_start_;
  std::vector<std::int32_t> col_;
  std::vector<double> coeff_;
  std::vector<double> bias_;
  std::vector<std::int64_t> out_start_;
  std::vector<std::int32_t> out_col_;
  std::vector<double> out_coeff_;
};

// evaluate(result, x) == evaluate(outer, evaluate(inner, x)).  Depth and
// size add.
NetworkGraph compose(const NetworkGraph& outer, const NetworkGraph& inner);

// Side-by-side networks on a shared input; outputs are concatenated.
NetworkGraph parallel(std::span<const NetworkGraph> nets);

// bias + sum_i coeffs[i] * net_i(x) for scalar-output nets on a shared input.
NetworkGraph linear_combine(std::span<const NetworkGraph> nets,
                            std::span<const double> coeffs, double bias);

// x -> net(A x + b), with A given row-major as net.input_dim() rows of
// `new_input_dim` columns.  Folded into first-use weights, so depth and size
// are unchanged.
NetworkGraph precompose_affine(const NetworkGraph& net,
                               std::span<const double> A,
                               std::span<const double> b, int new_input_dim);

}  // namespace reluapprox
