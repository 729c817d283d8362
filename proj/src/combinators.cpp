#include <string>

#include "reluapprox/builder.hpp"
#include "reluapprox/error.hpp"
#include "reluapprox/network.hpp"

namespace reluapprox {

NetworkGraph compose(const NetworkGraph& outer, const NetworkGraph& inner) {
  if (outer.input_dim() != inner.output_dim()) {
    throw ConstructionError("compose: outer expects " +
                            std::to_string(outer.input_dim()) +
                            " inputs, inner produces " +
                            std::to_string(inner.output_dim()));
  }
  NetworkBuilder b(inner.input_dim());
  std::vector<LinearForm> x;
  for (int i = 0; i < inner.input_dim(); ++i) x.push_back(b.input(i));
  auto mid = b.embed(inner, x);
  // Stack the outer network strictly above the inner one.
  auto out = b.embed(outer, mid, inner.depth());
  return std::move(b).finish(std::move(out));
}

NetworkGraph parallel(std::span<const NetworkGraph> nets) {
  if (nets.empty()) throw ConstructionError("parallel: empty list");
  const int dim = nets.front().input_dim();
  NetworkBuilder b(dim);
  std::vector<LinearForm> x;
  for (int i = 0; i < dim; ++i) x.push_back(b.input(i));
  std::vector<LinearForm> outs;
  for (const auto& net : nets) {
    if (net.input_dim() != dim) {
      throw ConstructionError("parallel: input dimensions differ");
    }
    for (auto& o : b.embed(net, x)) outs.push_back(std::move(o));
  }
  return std::move(b).finish(std::move(outs));
}

NetworkGraph linear_combine(std::span<const NetworkGraph> nets,
                            std::span<const double> coeffs, double bias) {
  if (nets.size() != coeffs.size()) {
    throw ConstructionError("linear_combine: coefficient count mismatch");
  }
  for (const auto& net : nets) {
    if (net.output_dim() != 1) {
      throw ConstructionError("linear_combine: nets must be scalar-valued");
    }
  }
  if (nets.empty()) {
    throw ConstructionError("linear_combine: empty list");
  }
  NetworkGraph all = parallel(nets);
  LinearForm combined = constant_form(bias);
  for (std::size_t i = 0; i < nets.size(); ++i) {
    const LinearForm& o = all.outputs()[i];
    for (const Term& t : o.terms) {
      combined.terms.push_back({t.source, coeffs[i] * t.coeff});
    }
    combined.bias += coeffs[i] * o.bias;
  }
  std::vector<Layer> layers = all.layers();
  return NetworkGraph(all.input_dim(), std::move(layers),
                      {normalized(combined)});
}

NetworkGraph precompose_affine(const NetworkGraph& net,
                               std::span<const double> A,
                               std::span<const double> b, int new_input_dim) {
  const int rows = net.input_dim();
  if (new_input_dim < 1 ||
      A.size() != static_cast<std::size_t>(rows) * new_input_dim ||
      b.size() != static_cast<std::size_t>(rows)) {
    throw ConstructionError("precompose_affine: shape mismatch");
  }
  NetworkBuilder builder(new_input_dim);
  std::vector<LinearForm> x;
  for (int r = 0; r < rows; ++r) {
    LinearForm f = constant_form(b[r]);
    for (int c = 0; c < new_input_dim; ++c) {
      const double a = A[static_cast<std::size_t>(r) * new_input_dim + c];
      if (a != 0.0) f.terms.push_back({NodeRef::input(c), a});
    }
    x.push_back(std::move(f));
  }
  auto outs = builder.embed(net, x);
  return std::move(builder).finish(std::move(outs));
}

}  // namespace reluapprox
