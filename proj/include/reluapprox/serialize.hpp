#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "reluapprox/network.hpp"

namespace reluapprox {

// JSON document
//   {"input_dim": d,
//    "layers": [[{"weights": [{"layer": l, "unit": u, "coeff": c}, ...],
//                 "bias": b}, ...], ...],
//    "output": [{"weights": [...], "bias": b}, ...]}
// with layer -1 addressing raw inputs.  Reals are written with 17
// significant digits so that a round trip is bit-exact.  A single output
// object (instead of an array) is accepted on read.
void write_network_json(std::ostream& os, const NetworkGraph& net);
std::string network_to_json(const NetworkGraph& net);
NetworkGraph network_from_json(std::string_view text);

void save_network(const std::string& path, const NetworkGraph& net);
NetworkGraph load_network(const std::string& path);

// printf("%.17g") as a std::string.
std::string format_real(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace reluapprox
