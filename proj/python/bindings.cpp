#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cli.hpp"
#include "deformq/bvgraphs.hpp"
#include "deformq/fedosov.hpp"
#include "deformq/io.hpp"
#include "deformq/star.hpp"
#include "deformq/trace.hpp"

namespace py = pybind11;
using namespace dq;
using io::json;

namespace {

// Arguments and results cross the boundary as JSON text in the CLI formats.

FormalFunction formal(const std::string& text, std::optional<int> N) {
  return io::formal_from_json(io::parse(text), "", std::nullopt, N);
}

SymplecticStructure omega(const std::optional<std::string>& text, int dim) {
  if (!text) {
    if (dim % 2 != 0) throw DimensionMismatch("odd dimension has no standard symplectic structure");
    return SymplecticStructure::standard(dim / 2);
  }
  auto S = io::symplectic_from_json(io::parse(*text));
  if (S.dim() != dim) throw DimensionMismatch("omega dimension differs from the functions");
  return S;
}

Atlas atlas(const std::string& choice, int dim) {
  if (choice == "flat") return Atlas::default_flat(dim);
  if (choice == "torus") return Atlas::torus(dim);
  return io::atlas_from_json(io::parse(choice));
}

NormOptions options(const std::string& tol) {
  NormOptions o;
  o.tol = parse_rational(tol);
  return o;
}

std::string star(const std::string& lhs, const std::string& rhs, std::optional<int> N,
                 const std::optional<std::string>& S) {
  const auto f = formal(lhs, N), g = formal(rhs, N);
  return io::to_json(moyal(f, g, omega(S, f[0].dim()))).dump();
}

std::string commutator_json(const std::string& lhs, const std::string& rhs, std::optional<int> N,
                            const std::optional<std::string>& S) {
  const auto f = formal(lhs, N), g = formal(rhs, N);
  return io::to_json(commutator(f, g, omega(S, f[0].dim()))).dump();
}

std::string seminorm(const std::string& f_text, int k, const std::string& A, const std::string& tol,
                     std::optional<int> N) {
  const auto f = formal(f_text, N ? N : std::optional<int>(k));
  return io::to_json(formal_seminorm(f, k, atlas(A, f[0].dim()), options(tol))).dump();
}

std::string distance(const std::string& lhs, const std::string& rhs, int terms, const std::string& A,
                     const std::string& tol, std::optional<int> N) {
  const auto f = formal(lhs, N), g = formal(rhs, N);
  return io::to_json(frechet_distance(f, g, atlas(A, f[0].dim()), terms, options(tol))).dump();
}

std::string flat_section_json(const std::string& f_text, int W, std::optional<int> N,
                              const std::optional<std::string>& S) {
  const auto f = formal(f_text, N);
  return io::to_json(flat_section(f, FedosovData::flat(omega(S, f[0].dim())), W)).dump();
}

std::string trace(const std::string& f_text, int n, std::optional<int> N, const std::optional<std::string>& S) {
  const auto f = formal(f_text, N);
  return io::to_json(renormalized_trace(f, omega(S, f[0].dim()), n)).dump();
}

std::string graphs(int n, int l, int cap) {
  json out = json::array();
  for (const auto& G : enumerate_admissible(n, l, cap)) out.push_back(io::to_json(G));
  return out.dump();
}

py::tuple run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Formal deformation quantization: star products, semi-norms, traces and graph counts";

  auto& validation = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<io::SchemaError>(m, "SchemaError", validation.ptr());
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
  py::register_exception<UnrepresentableProduct>(m, "UnrepresentableProduct", PyExc_ArithmeticError);

  m.def("star", &star, py::arg("lhs"), py::arg("rhs"), py::arg("N") = py::none(), py::arg("omega") = py::none());
  m.def("commutator", &commutator_json, py::arg("lhs"), py::arg("rhs"), py::arg("N") = py::none(),
        py::arg("omega") = py::none());
  m.def("seminorm", &seminorm, py::arg("f"), py::arg("k"), py::arg("atlas") = "flat", py::arg("tol") = "1/1000000",
        py::arg("N") = py::none());
  m.def("distance", &distance, py::arg("lhs"), py::arg("rhs"), py::arg("terms") = 10, py::arg("atlas") = "flat",
        py::arg("tol") = "1/1000000", py::arg("N") = py::none());
  m.def("flat_section", &flat_section_json, py::arg("f"), py::arg("W") = 8, py::arg("N") = py::none(),
        py::arg("omega") = py::none());
  m.def("trace", &trace, py::arg("f"), py::arg("n"), py::arg("N") = py::none(), py::arg("omega") = py::none());
  m.def("graphs", &graphs, py::arg("n"), py::arg("l"), py::arg("cap"));
  m.def("run_cli", &run_cli, py::arg("args"));
}
