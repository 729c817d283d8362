#pragma once

#include <span>
#include <vector>

#include "reluapprox/network.hpp"

namespace reluapprox {

// Algebra on affine functionals.  Results keep the first-occurrence order of
// sources and merge repeated sources; exact-zero coefficients are dropped.
LinearForm constant_form(double value);
LinearForm scaled(const LinearForm& form, double factor);
LinearForm add(const LinearForm& a, const LinearForm& b, double b_factor = 1.0);
LinearForm normalized(const LinearForm& form);

// factor * (p - q) with the terms of p and q interleaved pairwise.  When p and
// q have identical structure and their sources hold equal values the forward
// sum cancels to exactly zero after every pair.
LinearForm interleaved_difference(const LinearForm& p, const LinearForm& q,
                                  double factor);

// Incremental construction of a NetworkGraph.  Units are placed in the
// earliest hidden layer allowed by their sources unless a minimum layer is
// given; embedded subnetworks keep their own layer structure.
class NetworkBuilder {
 public:
  explicit NetworkBuilder(int input_dim);

  int input_dim() const { return input_dim_; }
  int depth() const { return static_cast<int>(layers_.size()); }
  int size() const;

  LinearForm input(int i) const;

  // Adds sigma(pre) and returns the form reading that unit.
  LinearForm relu(const LinearForm& pre, int min_layer = 0);

  // Copies `sub` into this network, feeding its raw inputs with `inputs`.
  // Returns the forms of the subnetwork outputs.
  std::vector<LinearForm> embed(const NetworkGraph& sub,
                                std::span<const LinearForm> inputs,
                                int min_layer = 0);

  // Layer index that a unit reading `form` would at least be placed in.
  int first_free_layer(const LinearForm& form) const;

  NetworkGraph finish(std::vector<LinearForm> outputs) &&;

 private:
  int input_dim_;
  std::vector<Layer> layers_;
};

}  // namespace reluapprox
