#include "reluapprox/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "reluapprox/error.hpp"

namespace reluapprox {

namespace {

std::string where(int layer, int unit) {
  return "unit " + std::to_string(unit) + " of layer " + std::to_string(layer);
}

}  // namespace

NetworkGraph::NetworkGraph(int input_dim, std::vector<Layer> layers,
                           std::vector<LinearForm> outputs)
    : input_dim_(input_dim),
      layers_(std::move(layers)),
      outputs_(std::move(outputs)) {
  if (input_dim_ < 1) {
    throw ConstructionError("network needs at least one input");
  }
  layer_offset_.reserve(layers_.size() + 1);
  std::int64_t offset = input_dim_;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (layers_[l].units.empty()) {
      throw ConstructionError("hidden layer " + std::to_string(l) +
                              " is empty");
    }
    layer_offset_.push_back(static_cast<std::int32_t>(offset));
    offset += static_cast<std::int64_t>(layers_[l].units.size());
  }
  if (offset > INT32_MAX) {
    throw ConstructionError("network too large");
  }
  layer_offset_.push_back(static_cast<std::int32_t>(offset));
  num_units_ = static_cast<int>(offset - input_dim_);

  // Resolves a reference read from a node in `reader_layer` (depth() for the
  // output node) to its flat index.
  auto flat = [&](const NodeRef& ref, int reader_layer, const std::string& who) {
    if (ref.is_input()) {
      if (ref.unit < 0 || ref.unit >= input_dim_) {
        throw ConstructionError(who + " reads missing input " +
                                std::to_string(ref.unit));
      }
      return static_cast<std::int32_t>(ref.unit);
    }
    if (ref.layer < 0 || ref.layer >= reader_layer) {
      throw ConstructionError(who + " reads layer " + std::to_string(ref.layer) +
                              ", which is not strictly earlier");
    }
    const auto& src = layers_[static_cast<std::size_t>(ref.layer)].units;
    if (ref.unit < 0 || ref.unit >= static_cast<int>(src.size())) {
      throw ConstructionError(who + " reads missing " +
                              where(ref.layer, ref.unit));
    }
    return layer_offset_[static_cast<std::size_t>(ref.layer)] + ref.unit;
  };

  row_start_.reserve(static_cast<std::size_t>(num_units_) + 1);
  bias_.reserve(static_cast<std::size_t>(num_units_));
  row_start_.push_back(0);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& units = layers_[l].units;
    for (std::size_t u = 0; u < units.size(); ++u) {
      const std::string who = where(static_cast<int>(l), static_cast<int>(u));
      for (const Term& t : units[u].pre.terms) {
        col_.push_back(flat(t.source, static_cast<int>(l), who));
        coeff_.push_back(t.coeff);
      }
      bias_.push_back(units[u].pre.bias);
      row_start_.push_back(static_cast<std::int64_t>(col_.size()));
    }
  }

  out_start_.push_back(0);
  for (std::size_t o = 0; o < outputs_.size(); ++o) {
    const std::string who = "output " + std::to_string(o);
    for (const Term& t : outputs_[o].terms) {
      out_col_.push_back(flat(t.source, depth(), who));
      out_coeff_.push_back(t.coeff);
    }
    out_start_.push_back(static_cast<std::int64_t>(out_col_.size()));
  }
}

NetworkGraph NetworkGraph::passthrough(int input_dim) {
  std::vector<LinearForm> outputs;
  for (int i = 0; i < input_dim; ++i) {
    outputs.push_back({{{NodeRef::input(i), 1.0}}, 0.0});
  }
  return NetworkGraph(input_dim, {}, std::move(outputs));
}

double NetworkGraph::max_abs_weight() const {
  double m = 0.0;
  for (double c : coeff_) m = std::max(m, std::abs(c));
  for (double b : bias_) m = std::max(m, std::abs(b));
  for (double c : out_coeff_) m = std::max(m, std::abs(c));
  for (const auto& o : outputs_) m = std::max(m, std::abs(o.bias));
  return m;
}

void NetworkGraph::forward(std::span<const double> x,
                           std::vector<double>& values) const {
  if (static_cast<int>(x.size()) != input_dim_) {
    throw InputError("expected " + std::to_string(input_dim_) +
                     " inputs, got " + std::to_string(x.size()));
  }
  values.resize(static_cast<std::size_t>(input_dim_ + num_units_));
  std::copy(x.begin(), x.end(), values.begin());
  const double* coeff = coeff_.data();
  const std::int32_t* col = col_.data();
  double* v = values.data();
  for (int u = 0; u < num_units_; ++u) {
    // Terms first, bias last: keeps pairwise-cancelling sums exact.
    double s = 0.0;
    for (std::int64_t k = row_start_[u]; k < row_start_[u + 1]; ++k) {
      s += coeff[k] * v[col[k]];
    }
    s += bias_[static_cast<std::size_t>(u)];
    v[input_dim_ + u] = s > 0.0 ? s : 0.0;
  }
}

double NetworkGraph::apply_output(const std::vector<double>& values,
                                  int output) const {
  double s = 0.0;
  for (std::int64_t k = out_start_[output]; k < out_start_[output + 1]; ++k) {
    s += out_coeff_[k] * values[static_cast<std::size_t>(out_col_[k])];
  }
  return s + outputs_[static_cast<std::size_t>(output)].bias;
}

std::vector<double> NetworkGraph::evaluate(std::span<const double> x) const {
  std::vector<double> values;
  forward(x, values);
  std::vector<double> out(outputs_.size());
  for (int o = 0; o < output_dim(); ++o) out[o] = apply_output(values, o);
  return out;
}

double NetworkGraph::evaluate_scalar(std::span<const double> x,
                                     int output) const {
  if (output < 0 || output >= output_dim()) {
    throw InputError("output index " + std::to_string(output) +
                     " out of range");
  }
  std::vector<double> values;
  forward(x, values);
  return apply_output(values, output);
}

std::vector<double> NetworkGraph::evaluate_batch(std::span<const double> points,
                                                 int output) const {
  if (points.size() % static_cast<std::size_t>(input_dim_) != 0) {
    throw InputError("batch length is not a multiple of the input dimension");
  }
  if (output < 0 || output >= output_dim()) {
    throw InputError("output index " + std::to_string(output) +
                     " out of range");
  }
  const std::size_t n = points.size() / static_cast<std::size_t>(input_dim_);
  std::vector<double> values;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    forward(points.subspan(i * input_dim_, input_dim_), values);
    out[i] = apply_output(values, output);
  }
  return out;
}

std::vector<double> NetworkGraph::activations(std::span<const double> x) const {
  std::vector<double> values;
  forward(x, values);
  return values;
}

}  // namespace reluapprox
