#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mwi/anomaly_solver.hpp"
#include "mwi/parser.hpp"
#include "mwi/tproduct_rewriter.hpp"
#include "mwi/unitary_mwi.hpp"

namespace py = pybind11;
using namespace mwi;

namespace {

Direction direction_of(const std::string& d) {
    if (d == "mwi-to-wi") return Direction::MwiToWi;
    if (d == "wi-to-mwi") return Direction::WiToMwi;
    throw std::invalid_argument("direction must be mwi-to-wi or wi-to-mwi");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Field polynomials, order-two Ward identities and anomaly constraint solving";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<Poly>(m, "Poly")
        .def(py::init([](const std::string& text) { return parse_poly(text); }), py::arg("text"))
        .def("__str__", [](const Poly& p) { return print_poly(p); })
        .def("__repr__", [](const Poly& p) { return "Poly(\"" + print_poly(p) + "\")"; })
        .def("__eq__", [](const Poly& a, const Poly& b) { return a == b; })
        .def("__add__", [](const Poly& a, const Poly& b) { return a + b; })
        .def("__sub__", [](const Poly& a, const Poly& b) { return a - b; })
        .def("__mul__", [](const Poly& a, const Poly& b) { return a * b; })
        .def("__neg__", [](const Poly& a) { return -a; })
        .def("is_zero", &Poly::is_zero)
        .def("__len__", &Poly::size)
        .def("free_indices", &Poly::free_indices);

    m.def("parse", &parse_poly, py::arg("text"));
    m.def("theta", &theta);
    m.def("theta_mu", &theta_mu, py::arg("B"), py::arg("mu"));
    m.def("zeta", &zeta);
    m.def("charge_number", &charge_number);
    m.def("mass_dimension", &mass_dimension);

    m.def(
        "wick_check",
        [](const Poly& B, const std::string& c, int kg_sign) {
            WickConfig cfg;
            cfg.kg_sign = kg_sign;
            return check_order2_WI(B, parse_scalar(c), cfg).str();
        },
        py::arg("B"), py::arg("c") = "c", py::arg("kg_sign") = 1,
        "Residual of the order-two c-dependent Ward identity; '0' when it holds.");
    m.def("smatrix2", [](const std::string& c) { return smatrix_order2(parse_scalar(c)); }, py::arg("c") = "1");
    m.def(
        "verify_theorem",
        [](const std::string& entries, const std::string& c, const std::string& dir) {
            return verify_theorem(parse_list(entries), parse_scalar(c), direction_of(dir)).to_json();
        },
        py::arg("entries"), py::arg("c") = "c", py::arg("direction") = "mwi-to-wi");
    m.def("classify", [](const std::string& entries) {
        Classification cl = selection_rules(parse_list(entries));
        return py::dict(py::arg("kind") = selection_name(cl.kind), py::arg("omega") = cl.omega,
                        py::arg("rank") = cl.rank, py::arg("reason") = cl.reason);
    });
    m.def(
        "solve_case",
        [](const std::string& id, int mm) {
            if (id == "1") return solve_case1(mm).to_json();
            if (id == "2a") return solve_case2(Case2Variant::A).to_json();
            if (id == "2b") return solve_case2(Case2Variant::B).to_json();
            if (id == "2c") return solve_case2(Case2Variant::C).to_json();
            if (id == "3") return solve_case3().to_json();
            throw std::invalid_argument("unknown case " + id);
        },
        py::arg("case"), py::arg("m") = 2);
    m.def("check_fa", [](const Poly& F, int K) { return check_Fa(F, K); }, py::arg("F"), py::arg("K") = 3);
    m.def("unitary_assembly", [](const Poly& F, int K) { return unitary_assembly(F, K).to_json(); }, py::arg("F"),
          py::arg("K") = 3);
    m.def("current_conservation", []() {
        auto r = current_conservation_certificate();
        return py::make_tuple(r.cert.verified, r.J);
    });
    m.def("sp_check", [](const std::string& c, unsigned seed) {
        py::dict out;
        for (const auto& ch : verify_sp_membership(Z_c(parse_scalar(c)), seed).checks) out[py::str(ch.name)] = ch.passed;
        return out;
    }, py::arg("c") = "c", py::arg("seed") = 1);
}
