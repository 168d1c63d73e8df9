// Python bindings for the core operations: triangulations, quantum contexts,
// 6j-symbols, the relative state sum, hyperbolic geometry, the holomorphic
// potential, and the verification/asymptotics harnesses.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "reltv/harness.hpp"
#include "reltv/hypgeom.hpp"
#include "reltv/potential.hpp"
#include "reltv/quantum.hpp"
#include "reltv/sixj.hpp"
#include "reltv/statesum.hpp"
#include "reltv/triangulation.hpp"

namespace py = pybind11;

PYBIND11_MODULE(reltv, m) {
    m.doc() = "relative state-sum invariants and hyperbolic polyhedral metrics";

    py::register_exception<reltv::InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<reltv::DomainError>(m, "DomainError", PyExc_ArithmeticError);
    py::register_exception<reltv::ConvergenceError>(m, "ConvergenceError",
                                                    PyExc_RuntimeError);

    py::enum_<reltv::Root>(m, "Root")
        .value("E2PIR", reltv::Root::E2PIR)
        .value("EPIR", reltv::Root::EPIR);
    py::enum_<reltv::Precision>(m, "Precision")
        .value("Double", reltv::Precision::Double)
        .value("Extended", reltv::Precision::Extended);
    py::enum_<reltv::Parity>(m, "Parity")
        .value("All", reltv::Parity::All)
        .value("EvenOnly", reltv::Parity::EvenOnly);
    py::enum_<reltv::Summation>(m, "Summation")
        .value("Plain", reltv::Summation::Plain)
        .value("Compensated", reltv::Summation::Compensated);

    py::class_<reltv::Z2Ranks>(m, "Z2Ranks")
        .def_readonly("h0", &reltv::Z2Ranks::h0)
        .def_readonly("h1", &reltv::Z2Ranks::h1)
        .def_readonly("h2", &reltv::Z2Ranks::h2);

    py::class_<reltv::Triangulation>(m, "Triangulation")
        .def_static("from_json_text", &reltv::Triangulation::from_json_text,
                    py::arg("text"), py::arg("strict") = true)
        .def_static("from_file", &reltv::Triangulation::from_file, py::arg("path"),
                    py::arg("strict") = true)
        .def_property_readonly("name", &reltv::Triangulation::name)
        .def_property_readonly("num_edges", &reltv::Triangulation::num_edges)
        .def_property_readonly("num_tets", &reltv::Triangulation::num_tets)
        .def_property_readonly("tets", &reltv::Triangulation::tets)
        .def_property_readonly("edge_degrees", &reltv::Triangulation::edge_degrees)
        .def("face_constraints", &reltv::Triangulation::face_constraints)
        .def("z2_homology_ranks", &reltv::Triangulation::z2_homology_ranks)
        .def("to_json_text", &reltv::Triangulation::to_json_text);

    py::class_<reltv::QuantumContext>(m, "QuantumContext")
        .def(py::init<int, reltv::Root, reltv::Precision>(), py::arg("r"),
             py::arg("root") = reltv::Root::E2PIR,
             py::arg("precision") = reltv::Precision::Double)
        .def_property_readonly("r", &reltv::QuantumContext::r)
        .def_property_readonly("angle", &reltv::QuantumContext::angle)
        .def("quantum_integer", &reltv::QuantumContext::quantum_integer)
        .def("quantum_factorial", &reltv::QuantumContext::quantum_factorial)
        .def("bracket_factorial", &reltv::QuantumContext::bracket_factorial);

    m.def("phi_r", &reltv::phi_r, py::arg("z"), py::arg("r"));
    m.def("factorial_identity_residual",
          py::overload_cast<int, const reltv::QuantumContext&>(
              &reltv::factorial_identity_residual),
          py::arg("n"), py::arg("ctx"));

    m.def("is_admissible_triple", &reltv::is_admissible_triple);
    m.def("is_admissible_tuple", &reltv::is_admissible_tuple);
    m.def("is_hyperideal_type", &reltv::is_hyperideal_type);
    m.def("sixj_direct", &reltv::sixj_direct, py::arg("a"), py::arg("ctx"));
    m.def("sixj_via_potential", &reltv::sixj_via_potential, py::arg("a"),
          py::arg("ctx"));
    m.def("edge_weight", &reltv::edge_weight, py::arg("a"), py::arg("b"),
          py::arg("ctx"));

    m.def("lobachevsky", &reltv::lobachevsky);
    m.def("dilog", &reltv::dilog);
    m.def("octahedron_volume", &reltv::octahedron_volume);
    m.def("lengths_from_angles", &reltv::lengths_from_angles);
    m.def("angles_from_lengths", &reltv::angles_from_lengths);
    m.def("tet_volume", &reltv::tet_volume);
    m.def("covolume", &reltv::covolume);

    py::class_<reltv::PolyhedralMetric>(m, "PolyhedralMetric")
        .def_readonly("edge_lengths", &reltv::PolyhedralMetric::edge_lengths)
        .def_readonly("tet_angles", &reltv::PolyhedralMetric::tet_angles)
        .def_readonly("cone_angles", &reltv::PolyhedralMetric::cone_angles)
        .def_readonly("tet_volumes", &reltv::PolyhedralMetric::tet_volumes)
        .def_readonly("total_volume", &reltv::PolyhedralMetric::total_volume)
        .def_readonly("residual_inf", &reltv::PolyhedralMetric::residual_inf)
        .def_readonly("iterations", &reltv::PolyhedralMetric::iterations)
        .def_readonly("converged", &reltv::PolyhedralMetric::converged);

    m.def(
        "solve_polyhedral_metric",
        [](const reltv::Triangulation& tri, const std::vector<double>& target) {
            return reltv::solve_polyhedral_metric(tri, target);
        },
        py::arg("tri"), py::arg("target"));

    py::class_<reltv::StateSumOptions>(m, "StateSumOptions")
        .def(py::init<>())
        .def_readwrite("parity", &reltv::StateSumOptions::parity)
        .def_readwrite("summation", &reltv::StateSumOptions::summation)
        .def_readwrite("parallel_width", &reltv::StateSumOptions::parallel_width)
        .def_readwrite("threads", &reltv::StateSumOptions::threads)
        .def_readwrite("record_seconds", &reltv::StateSumOptions::record_seconds);

    py::class_<reltv::StateSumResult>(m, "StateSumResult")
        .def_readonly("value", &reltv::StateSumResult::value)
        .def_readonly("log_abs", &reltv::StateSumResult::log_abs)
        .def_readonly("num_colorings", &reltv::StateSumResult::num_colorings)
        .def_readonly("seconds", &reltv::StateSumResult::seconds)
        .def_readonly("zero", &reltv::StateSumResult::zero);

    m.def("count_admissible", &reltv::count_admissible, py::arg("tri"), py::arg("r"),
          py::arg("parity") = reltv::Parity::All);
    m.def("relative_tv", &reltv::relative_tv, py::arg("tri"), py::arg("b"),
          py::arg("ctx"), py::arg("options") = reltv::StateSumOptions{});

    m.def("U_potential", &reltv::U_potential);
    m.def("xi_star", &reltv::xi_star);
    m.def("W_tet", &reltv::W_tet);

    py::class_<reltv::CheckResult>(m, "CheckResult")
        .def_readonly("name", &reltv::CheckResult::name)
        .def_readonly("pass_", &reltv::CheckResult::pass)
        .def_readonly("value", &reltv::CheckResult::value)
        .def_readonly("threshold", &reltv::CheckResult::threshold)
        .def_readonly("detail", &reltv::CheckResult::detail);

    py::class_<reltv::VerificationReport>(m, "VerificationReport")
        .def_readonly("checks", &reltv::VerificationReport::checks)
        .def_readonly("all_pass", &reltv::VerificationReport::all_pass)
        .def_readonly("metric", &reltv::VerificationReport::metric);

    m.def("run_verification", &reltv::run_verification, py::arg("tri"),
          py::arg("theta"), py::arg("eps"), py::arg("mu") = std::vector<int>{});

    py::class_<reltv::AsymptoticsPlan>(m, "AsymptoticsPlan")
        .def(py::init<>())
        .def_readwrite("theta", &reltv::AsymptoticsPlan::theta)
        .def_readwrite("mu", &reltv::AsymptoticsPlan::mu)
        .def_readwrite("r_list", &reltv::AsymptoticsPlan::r_list)
        .def_readwrite("parity", &reltv::AsymptoticsPlan::parity)
        .def_readwrite("summation", &reltv::AsymptoticsPlan::summation)
        .def_readwrite("parallel_width", &reltv::AsymptoticsPlan::parallel_width)
        .def_readwrite("timings", &reltv::AsymptoticsPlan::timings)
        .def_readwrite("threads", &reltv::AsymptoticsPlan::threads)
        .def_readwrite("b_zero", &reltv::AsymptoticsPlan::b_zero)
        .def_readwrite("synthetic_v0", &reltv::AsymptoticsPlan::synthetic_v0);

    py::class_<reltv::AsymptoticsRow>(m, "AsymptoticsRow")
        .def_readonly("r", &reltv::AsymptoticsRow::r)
        .def_readonly("b", &reltv::AsymptoticsRow::b)
        .def_readonly("theta_real", &reltv::AsymptoticsRow::theta_real)
        .def_readonly("tv", &reltv::AsymptoticsRow::tv)
        .def_readonly("scaled_log", &reltv::AsymptoticsRow::scaled_log)
        .def_readonly("gap", &reltv::AsymptoticsRow::gap)
        .def_readonly("colorings", &reltv::AsymptoticsRow::colorings)
        .def_readonly("seconds", &reltv::AsymptoticsRow::seconds)
        .def_readonly("zero", &reltv::AsymptoticsRow::zero);

    py::class_<reltv::AsymptoticsReport>(m, "AsymptoticsReport")
        .def_readonly("rows", &reltv::AsymptoticsReport::rows)
        .def_readonly("geom_vol", &reltv::AsymptoticsReport::geom_vol)
        .def_readonly("extrapolated", &reltv::AsymptoticsReport::extrapolated)
        .def_readonly("metric", &reltv::AsymptoticsReport::metric);

    m.def("boundary_coloring_for", &reltv::boundary_coloring_for, py::arg("theta"),
          py::arg("mu"), py::arg("r"), py::arg("parity") = reltv::Parity::All);
    m.def("run_asymptotics", &reltv::run_asymptotics, py::arg("tri"), py::arg("plan"));
}
