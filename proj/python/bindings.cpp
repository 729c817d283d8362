#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "reluapprox/analytic_nets.hpp"
#include "reluapprox/bandlimited_nets.hpp"
#include "reluapprox/catalog.hpp"
#include "reluapprox/cheb_nets.hpp"
#include "reluapprox/error.hpp"
#include "reluapprox/harness.hpp"
#include "reluapprox/product_nets.hpp"
#include "reluapprox/serialize.hpp"

namespace py = pybind11;
namespace ra = reluapprox;

namespace {

std::vector<double> evaluate(const ra::NetworkGraph& net, const std::vector<double>& x) {
  return net.evaluate(x);
}

ra::ErrorReport verify_built(const ra::TargetBuild& t, int grid, long long samples,
                             std::uint64_t seed) {
  ra::VerifyOptions opt;
  opt.grid = grid;
  opt.l2_samples = samples;
  opt.seed = seed;
  return ra::verify_target(t, opt);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Explicit ReLU network constructions";

  py::register_exception<ra::FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<ra::FeasibilityError>(m, "FeasibilityError", PyExc_RuntimeError);
  py::register_exception<ra::EnvelopeError>(m, "EnvelopeError", PyExc_RuntimeError);
  py::register_exception<ra::DataError>(m, "DataError", PyExc_ValueError);

  py::class_<ra::NetworkGraph>(m, "Network")
      .def_property_readonly("input_dim", &ra::NetworkGraph::input_dim)
      .def_property_readonly("output_dim", &ra::NetworkGraph::output_dim)
      .def_property_readonly("depth", &ra::NetworkGraph::depth)
      .def_property_readonly("size", &ra::NetworkGraph::size)
      .def("max_abs_weight", &ra::NetworkGraph::max_abs_weight)
      .def("__call__", &evaluate, py::arg("x"))
      .def("evaluate", &evaluate, py::arg("x"))
      .def("evaluate_batch",
           [](const ra::NetworkGraph& net, const std::vector<double>& points, int output) {
             return net.evaluate_batch(points, output);
           },
           py::arg("points"), py::arg("output") = 0,
           "Row-major points, one output per point.")
      .def("to_json", &ra::network_to_json)
      .def_static("from_json", &ra::network_from_json, py::arg("text"))
      .def("save", [](const ra::NetworkGraph& net, const std::string& path) {
        ra::save_network(path, net);
      })
      .def_static("load", &ra::load_network, py::arg("path"))
      .def("__repr__", [](const ra::NetworkGraph& net) {
        return "<Network inputs=" + std::to_string(net.input_dim()) +
               " outputs=" + std::to_string(net.output_dim()) +
               " depth=" + std::to_string(net.depth()) +
               " size=" + std::to_string(net.size()) + ">";
      });

  m.def("compose", &ra::compose, py::arg("outer"), py::arg("inner"));
  m.def("parallel", [](const std::vector<ra::NetworkGraph>& nets) { return ra::parallel(nets); });
  m.def("linear_combine",
        [](const std::vector<ra::NetworkGraph>& nets, const std::vector<double>& coeffs,
           double bias) { return ra::linear_combine(nets, coeffs, bias); },
        py::arg("nets"), py::arg("coeffs"), py::arg("bias") = 0.0);

  m.def("build_sawtooth", &ra::build_sawtooth, py::arg("m"));
  m.def("build_square", &ra::build_square, py::arg("m"));
  m.def("build_mul2",
        [](double M, double N, double eps) { return ra::build_mul2({M, N, eps}); },
        py::arg("M") = 1.0, py::arg("N") = 1.0, py::arg("eps") = 1e-3);
  m.def("build_muld", &ra::build_muld, py::arg("d"), py::arg("M"), py::arg("eps"));

  m.def("build_poly",
        [](std::vector<double> coeffs, double M, double eps) {
          return ra::build_poly({std::move(coeffs), M, {}}, eps);
        },
        py::arg("coeffs"), py::arg("M") = 1.0, py::arg("eps") = 1e-3);
  m.def("build_chebyshev", &ra::build_chebyshev, py::arg("n"), py::arg("eps"));
  m.def("build_cheb_series",
        [](std::vector<double> coeffs, double M, double eps) {
          return ra::build_cheb_series({std::move(coeffs), M, {}}, eps);
        },
        py::arg("coeffs"), py::arg("M") = 1.0, py::arg("eps") = 1e-3);
  m.def("cheb_coeffs",
        [](const std::function<double(double)>& f, int n, double M) {
          return ra::cheb_coeffs(f, n, M).coeffs;
        },
        py::arg("f"), py::arg("n"), py::arg("M") = 1.0);
  m.def("clenshaw_eval",
        [](std::vector<double> coeffs, double x, double M) {
          return ra::clenshaw_eval({std::move(coeffs), M, {}}, x);
        },
        py::arg("coeffs"), py::arg("x"), py::arg("M") = 1.0);

  m.def("runge_params",
        [](double beta, double M) {
          const ra::EllipseParams p = ra::runge_params(beta, M);
          return std::make_tuple(p.s, p.C_f);
        },
        py::arg("beta"), py::arg("M") = 1.0, "Returns (s, C_f).");
  m.def("exp_kernel_bound", &ra::exp_kernel_bound, py::arg("s"), py::arg("M"));
  m.def("truncation_degree",
        [](double s, double C_f, double M, double eps_half) {
          return ra::truncation_degree({s, C_f, M}, eps_half);
        },
        py::arg("s"), py::arg("C_f"), py::arg("M"), py::arg("eps_half"));
  m.def("build_analytic",
        [](const std::function<double(double)>& f, double s, double C_f, double M,
           double eps) { return ra::build_analytic(f, {s, C_f, M}, eps); },
        py::arg("f"), py::arg("s"), py::arg("C_f"), py::arg("M"), py::arg("eps"));

  m.def("build_bandlimited",
        [](const std::string& density, int d, double M, double eps, std::uint64_t seed,
           const std::string& measure) {
          const ra::SpectralDensity F = ra::density_from_spec(density, d, M);
          const ra::MeasureSpec mu = ra::measure_from_spec(measure, ra::Box::cube(d, 0.0, 1.0));
          return ra::build_bandlimited(F, ra::cexp_kernel(), mu, eps, seed);
        },
        py::arg("density"), py::arg("d"), py::arg("M"), py::arg("eps"), py::arg("seed") = 0,
        py::arg("measure") = "lebesgue");
  m.def("quadrature_reference",
        [](const std::string& density, double M, const std::vector<double>& x) {
          const ra::SpectralDensity F =
              ra::density_from_spec(density, static_cast<int>(x.size()), M);
          return ra::quadrature_reference(F, ra::cexp_kernel(), x);
        },
        py::arg("density"), py::arg("M"), py::arg("x"));

  py::class_<ra::ErrorReport>(m, "ErrorReport")
      .def_readonly("target", &ra::ErrorReport::target)
      .def_readonly("params", &ra::ErrorReport::params)
      .def_readonly("seed", &ra::ErrorReport::seed)
      .def_readonly("depth", &ra::ErrorReport::depth)
      .def_readonly("size", &ra::ErrorReport::size)
      .def_readonly("linf_error", &ra::ErrorReport::linf)
      .def_readonly("linf_argmax", &ra::ErrorReport::linf_argmax)
      .def_property_readonly("l2_error",
                             [](const ra::ErrorReport& r) -> std::optional<double> {
                               if (!r.l2) return std::nullopt;
                               return r.l2->estimate;
                             })
      .def_readonly("status", &ra::ErrorReport::status)
      .def("csv_row", [](const ra::ErrorReport& r) { return ra::csv_row(r, false); });

  m.def("verify_target",
        [](const std::string& target, const ra::Params& params, std::uint64_t seed, int grid,
           long long samples) {
          return verify_built(ra::build_target(target, params, seed), grid, samples, seed);
        },
        py::arg("target"), py::arg("params") = ra::Params{}, py::arg("seed") = 0,
        py::arg("grid") = -1, py::arg("samples") = ra::kDefaultL2Samples);
  m.def("build_target",
        [](const std::string& target, const ra::Params& params, std::uint64_t seed) {
          ra::TargetBuild t = ra::build_target(target, params, seed);
          if (!t.net) throw ra::ParameterError("target has no network form");
          return *t.net;
        },
        py::arg("target"), py::arg("params") = ra::Params{}, py::arg("seed") = 0);
  m.def("run_sweep",
        [](const std::string& spec_json) {
          const ra::SweepSpec spec = ra::sweep_spec_from_json(spec_json);
          const ra::SweepResult r = ra::run_sweep(spec);
          return std::make_pair(ra::reports_to_csv(r.rows, spec.timing),
                                ra::sweep_summary_json(spec, r));
        },
        py::arg("spec_json"), "Returns (csv, summary_json).");
  m.def("csv_header", [] { return ra::csv_header(false); });
}
