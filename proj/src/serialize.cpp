#include "reluapprox/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "reluapprox/error.hpp"

namespace reluapprox {

namespace {

using json = nlohmann::json;

void write_form(std::ostream& os, const LinearForm& f) {
  os << "{\"weights\":[";
  for (std::size_t i = 0; i < f.terms.size(); ++i) {
    const Term& t = f.terms[i];
    if (i) os << ',';
    os << "{\"layer\":" << t.source.layer << ",\"unit\":" << t.source.unit
       << ",\"coeff\":" << format_real(t.coeff) << '}';
  }
  os << "],\"bias\":" << format_real(f.bias) << '}';
}

LinearForm read_form(const json& j) {
  LinearForm f;
  if (!j.is_object() || !j.contains("weights")) {
    throw FormatError("affine node must be an object with \"weights\"");
  }
  for (const auto& w : j.at("weights")) {
    f.terms.push_back({NodeRef{w.at("layer").get<int>(), w.at("unit").get<int>()},
                       w.at("coeff").get<double>()});
  }
  f.bias = j.value("bias", 0.0);
  return f;
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  // Signed zero does not survive a JSON reader; write it unsigned.
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

void write_network_json(std::ostream& os, const NetworkGraph& net) {
  os << "{\"input_dim\":" << net.input_dim() << ",\"layers\":[";
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    if (l) os << ",\n";
    os << '[';
    const auto& units = net.layers()[l].units;
    for (std::size_t u = 0; u < units.size(); ++u) {
      if (u) os << ',';
      write_form(os, units[u].pre);
    }
    os << ']';
  }
  os << "],\n\"output\":[";
  for (std::size_t o = 0; o < net.outputs().size(); ++o) {
    if (o) os << ',';
    write_form(os, net.outputs()[o]);
  }
  os << "]}\n";
}

std::string network_to_json(const NetworkGraph& net) {
  std::ostringstream os;
  write_network_json(os, net);
  return os.str();
}

NetworkGraph network_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
    const int input_dim = j.at("input_dim").get<int>();
    std::vector<Layer> layers;
    for (const auto& jl : j.at("layers")) {
      Layer layer;
      for (const auto& ju : jl) layer.units.push_back({read_form(ju)});
      layers.push_back(std::move(layer));
    }
    std::vector<LinearForm> outputs;
    const auto& jo = j.at("output");
    if (jo.is_array()) {
      for (const auto& o : jo) outputs.push_back(read_form(o));
    } else {
      outputs.push_back(read_form(jo));
    }
    return NetworkGraph(input_dim, std::move(layers), std::move(outputs));
  } catch (const json::exception& e) {
    throw FormatError(std::string("network JSON: ") + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << text;
}

void save_network(const std::string& path, const NetworkGraph& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  write_network_json(out, net);
}

NetworkGraph load_network(const std::string& path) {
  return network_from_json(read_text_file(path));
}

}  // namespace reluapprox
