#include "reluapprox/builder.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>

#include "reluapprox/error.hpp"

namespace reluapprox {

namespace {

std::int64_t key_of(const NodeRef& ref) {
  return (static_cast<std::int64_t>(ref.layer) << 32) ^
         static_cast<std::uint32_t>(ref.unit);
}

void append_scaled(std::vector<Term>& dst, const LinearForm& src, double f) {
  for (const Term& t : src.terms) dst.push_back({t.source, f * t.coeff});
}

}  // namespace

LinearForm constant_form(double value) { return {{}, value}; }

LinearForm normalized(const LinearForm& form) {
  LinearForm out;
  out.bias = form.bias;
  out.terms.reserve(form.terms.size());
  std::unordered_map<std::int64_t, std::size_t> seen;
  seen.reserve(form.terms.size());
  for (const Term& t : form.terms) {
    auto [it, inserted] = seen.try_emplace(key_of(t.source), out.terms.size());
    if (inserted) {
      out.terms.push_back(t);
    } else {
      out.terms[it->second].coeff += t.coeff;
    }
  }
  std::erase_if(out.terms, [](const Term& t) { return t.coeff == 0.0; });
  return out;
}

LinearForm scaled(const LinearForm& form, double factor) {
  LinearForm out;
  out.bias = factor * form.bias;
  out.terms.reserve(form.terms.size());
  append_scaled(out.terms, form, factor);
  return normalized(out);
}

LinearForm add(const LinearForm& a, const LinearForm& b, double b_factor) {
  LinearForm out;
  out.bias = a.bias + b_factor * b.bias;
  out.terms.reserve(a.terms.size() + b.terms.size());
  append_scaled(out.terms, a, 1.0);
  append_scaled(out.terms, b, b_factor);
  return normalized(out);
}

LinearForm interleaved_difference(const LinearForm& p, const LinearForm& q,
                                  double factor) {
  if (p.terms.size() != q.terms.size()) {
    throw ConstructionError("interleaved difference needs matching forms");
  }
  LinearForm out;
  out.terms.reserve(2 * p.terms.size());
  for (std::size_t i = 0; i < p.terms.size(); ++i) {
    const double c = factor * p.terms[i].coeff;
    out.terms.push_back({p.terms[i].source, c});
    out.terms.push_back({q.terms[i].source, -(factor * q.terms[i].coeff)});
  }
  out.bias = factor * (p.bias - q.bias);
  return out;
}

NetworkBuilder::NetworkBuilder(int input_dim) : input_dim_(input_dim) {
  if (input_dim < 1) throw ConstructionError("network needs at least one input");
}

int NetworkBuilder::size() const {
  int n = 0;
  for (const auto& l : layers_) n += static_cast<int>(l.units.size());
  return n;
}

LinearForm NetworkBuilder::input(int i) const {
  if (i < 0 || i >= input_dim_) {
    throw ConstructionError("input index " + std::to_string(i) +
                            " out of range");
  }
  return {{{NodeRef::input(i), 1.0}}, 0.0};
}

int NetworkBuilder::first_free_layer(const LinearForm& form) const {
  int layer = 0;
  for (const Term& t : form.terms) layer = std::max(layer, t.source.layer + 1);
  return layer;
}

LinearForm NetworkBuilder::relu(const LinearForm& pre, int min_layer) {
  const int layer = std::max(min_layer, first_free_layer(pre));
  if (layer > depth()) {
    throw ConstructionError("unit placement would leave an empty layer");
  }
  if (layer == depth()) layers_.emplace_back();
  auto& units = layers_[static_cast<std::size_t>(layer)].units;
  units.push_back({normalized(pre)});
  return {{{NodeRef{layer, static_cast<int>(units.size()) - 1}, 1.0}}, 0.0};
}

std::vector<LinearForm> NetworkBuilder::embed(const NetworkGraph& sub,
                                              std::span<const LinearForm> inputs,
                                              int min_layer) {
  if (static_cast<int>(inputs.size()) != sub.input_dim()) {
    throw ConstructionError("embedding needs " +
                            std::to_string(sub.input_dim()) + " input forms");
  }
  int base = min_layer;
  for (const auto& f : inputs) base = std::max(base, first_free_layer(f));
  if (base > depth()) {
    throw ConstructionError("embedding would leave an empty layer");
  }

  std::vector<std::vector<NodeRef>> where(sub.layers().size());
  auto substitute = [&](const LinearForm& form) {
    LinearForm out;
    out.bias = form.bias;
    for (const Term& t : form.terms) {
      if (t.source.is_input()) {
        const LinearForm& in = inputs[static_cast<std::size_t>(t.source.unit)];
        append_scaled(out.terms, in, t.coeff);
        out.bias += t.coeff * in.bias;
      } else {
        out.terms.push_back(
            {where[static_cast<std::size_t>(t.source.layer)]
                  [static_cast<std::size_t>(t.source.unit)],
             t.coeff});
      }
    }
    return normalized(out);
  };

  for (std::size_t l = 0; l < sub.layers().size(); ++l) {
    const int target = base + static_cast<int>(l);
    if (target == depth()) layers_.emplace_back();
    for (const Unit& u : sub.layers()[l].units) {
      LinearForm pre = substitute(u.pre);
      auto& units = layers_[static_cast<std::size_t>(target)].units;
      units.push_back({std::move(pre)});
      where[l].push_back({target, static_cast<int>(units.size()) - 1});
    }
  }

  std::vector<LinearForm> outs;
  outs.reserve(sub.outputs().size());
  for (const auto& o : sub.outputs()) outs.push_back(substitute(o));
  return outs;
}

NetworkGraph NetworkBuilder::finish(std::vector<LinearForm> outputs) && {
  for (auto& o : outputs) o = normalized(o);
  return NetworkGraph(input_dim_, std::move(layers_), std::move(outputs));
}

}  // namespace reluapprox
