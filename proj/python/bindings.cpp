#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bneg/error.hpp"
#include "bneg/fermat.hpp"
#include "bneg/geometry.hpp"
#include "bneg/poly.hpp"
#include "bneg/report.hpp"
#include "bneg/surface.hpp"

namespace py = pybind11;
using namespace bneg;

namespace {

// (coefficient, (n0, n1, n2)) with prime-field coefficients
std::vector<std::pair<std::uint64_t, std::array<unsigned, 3>>> terms(const poly::FPoly& f) {
  std::vector<std::pair<std::uint64_t, std::array<unsigned, 3>>> out;
  for (const auto& [m, c] : f.terms()) out.emplace_back(c, m.exps);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Curves of negative self-intersection on blowups of P^2 in positive characteristic";

  py::register_exception<ParameterError>(mod, "ParameterError", PyExc_ValueError);
  py::register_exception<ResourceError>(mod, "ResourceError", PyExc_RuntimeError);

  mod.def("version", &report::version);

  mod.def(
      "equation",
      [](std::uint64_t p, unsigned m, unsigned e) {
        const auto t = geometry::make_triple(p, m, e);
        return terms(poly::norm_product(static_cast<unsigned>(t.d), t.field));
      },
      py::arg("p"), py::arg("m"), py::arg("e") = 1, "Terms of f_d with d = (p^e - 1)/m.");

  mod.def(
      "multiplicity_profile",
      [](std::uint64_t p, unsigned m, unsigned e, const std::string& source) {
        if (source == "taylor") return geometry::multiplicity_profile_taylor(p, m, e).mults;
        if (source == "preimage") return geometry::multiplicity_profile_preimage(p, m, e).mults;
        throw ParameterError("source must be 'taylor' or 'preimage'");
      },
      py::arg("p"), py::arg("m"), py::arg("e") = 1, py::arg("source") = "taylor",
      "Multiplicities of f_d at the points of Z_m, in (i, j) order.");

  mod.def(
      "self_intersection",
      [](std::uint64_t p, unsigned m, unsigned e) {
        return geometry::strict_transform_class(p, m, e).self_intersection();
      },
      py::arg("p"), py::arg("m"), py::arg("e") = 1);

  mod.def(
      "verify_json",
      [](std::uint64_t p, unsigned m, unsigned e, std::optional<std::string> fault) {
        return report::run_verify(p, m, e, {}, fault).to_json().dump(2);
      },
      py::arg("p"), py::arg("m"), py::arg("e") = 1, py::arg("fault") = py::none());

  mod.def(
      "fermat_count",
      [](unsigned m, std::uint64_t p, unsigned e, const std::string& method) {
        const auto F = ff::field_create(p, e);
        return fermat::count_points(m, F, fermat::parse_method(method), ff::kDefaultEnumerationBound).count;
      },
      py::arg("m"), py::arg("p"), py::arg("e") = 1, py::arg("method") = "tally");

  mod.def("check_h_identity", &poly::check_h_identity, py::arg("n_max") = 64);

  mod.def(
      "gamma_relation",
      [](unsigned m, std::uint64_t p, unsigned e) {
        const auto g = surface::gamma_relation(m, p, e);
        return py::make_tuple(g.lhs, g.rhs);
      },
      py::arg("m"), py::arg("p"), py::arg("e") = 1);

  mod.def(
      "log_invariants_json",
      [](unsigned m, std::uint64_t d) { return surface::log_invariants(m, d).to_json().dump(); }, py::arg("m"),
      py::arg("d"));
}
