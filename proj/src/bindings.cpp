#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ancient_heat/cli.hpp"
#include "ancient_heat/domain.hpp"
#include "ancient_heat/errors.hpp"
#include "ancient_heat/inequalities.hpp"
#include "ancient_heat/io.hpp"
#include "ancient_heat/ladder.hpp"
#include "ancient_heat/oracle.hpp"
#include "ancient_heat/rng.hpp"
#include "ancient_heat/series.hpp"
#include "ancient_heat/tychonov.hpp"

namespace py = pybind11;
using namespace ancient_heat;

PYBIND11_MODULE(_core, m) {
    m.doc() = "backward and ancient heat solutions on finite graphs";

    py::register_exception<input_error>(m, "InputError", PyExc_ValueError);
    py::register_exception<compute_error>(m, "ComputeError", PyExc_ArithmeticError);

    py::enum_<Boundary>(m, "Boundary")
        .value("dirichlet", Boundary::dirichlet)
        .value("neumann", Boundary::neumann)
        .value("periodic", Boundary::periodic);

    py::class_<Edge>(m, "Edge")
        .def(py::init<>())
        .def(py::init([](int u, int v, double w) { return Edge{u, v, w}; }), py::arg("u"),
             py::arg("v"), py::arg("w") = 1.0)
        .def_readwrite("u", &Edge::u)
        .def_readwrite("v", &Edge::v)
        .def_readwrite("w", &Edge::w);

    py::class_<DomainGraph>(m, "DomainGraph")
        .def(py::init<>())
        .def_readwrite("n", &DomainGraph::n)
        .def_readwrite("edges", &DomainGraph::edges)
        .def_readwrite("origin", &DomainGraph::origin)
        .def("validate", &DomainGraph::validate)
        .def("to_json", [](const DomainGraph& g) { return domain_to_json(g); });

    m.def("build_lattice", &build_lattice, py::arg("dims"), py::arg("h") = 1.0,
          py::arg("boundary") = Boundary::neumann);
    m.def("path_graph", &path_graph, py::arg("n"), py::arg("w") = 1.0);
    m.def("read_domain_json", &read_domain_json, py::arg("path"));
    m.def("write_domain_json", &write_domain_json, py::arg("graph"), py::arg("path"));
    m.def("hop_distances", &hop_distances, py::arg("graph"), py::arg("from_vertex"));
    m.def("ball_volume", &ball_volume, py::arg("graph"), py::arg("center"), py::arg("radius"));

    py::class_<LaplacianOperator>(m, "LaplacianOperator")
        .def(py::init<const DomainGraph&>(), py::arg("graph"))
        .def("size", &LaplacianOperator::size)
        .def("apply",
             [](const LaplacianOperator& d, const std::vector<double>& x) { return d.apply(x); },
             py::arg("field"))
        .def("dense", &LaplacianOperator::dense)
        .def_property_readonly("rho_bar", &LaplacianOperator::spectral_radius_bound);

    py::class_<CoefficientLadder>(m, "CoefficientLadder")
        .def_readonly("levels", &CoefficientLadder::levels)
        .def_readonly("log_scale", &CoefficientLadder::log_scale)
        .def_readonly("normalized", &CoefficientLadder::normalized)
        .def("max_index", &CoefficientLadder::max_index)
        .def("log_abs", &CoefficientLadder::log_abs, py::arg("j"), py::arg("x"))
        .def("log_sup", &CoefficientLadder::log_sup, py::arg("j"));

    m.def("build_ladder", &build_ladder, py::arg("delta"), py::arg("a"), py::arg("jmax"),
          py::arg("normalized") = false);

    py::class_<GrowthBound>(m, "GrowthBound")
        .def(py::init([](double A3, double A4) { return GrowthBound{A3, A4}; }), py::arg("A3") = 1.0,
             py::arg("A4") = 0.0)
        .def_readwrite("A3", &GrowthBound::A3)
        .def_readwrite("A4", &GrowthBound::A4);

    py::class_<GrowthEstimate>(m, "GrowthEstimate")
        .def_readonly("A3_hat", &GrowthEstimate::A3_hat)
        .def_readonly("A4_hat", &GrowthEstimate::A4_hat)
        .def_readonly("per_j_log_sup", &GrowthEstimate::per_j_log_sup)
        .def_readonly("fit_residual", &GrowthEstimate::fit_residual)
        .def_readonly("mu", &GrowthEstimate::mu);

    py::class_<SolvabilityVerdict>(m, "SolvabilityVerdict")
        .def_readonly("holds", &SolvabilityVerdict::holds)
        .def_readonly("first_violation_j", &SolvabilityVerdict::first_violation_j)
        .def_readonly("margin", &SolvabilityVerdict::margin);

    m.def("estimate_growth", &estimate_growth, py::arg("ladder"), py::arg("distances"),
          py::arg("mu") = 0.0, py::arg("j_min") = 0);
    m.def("check_solvability", &check_solvability, py::arg("ladder"), py::arg("distances"),
          py::arg("cap"));

    py::class_<TruncationReport>(m, "TruncationReport")
        .def_readonly("J_used", &TruncationReport::J_used)
        .def_readonly("tail_bound", &TruncationReport::tail_bound)
        .def_readonly("requested_tol", &TruncationReport::requested_tol)
        .def_readonly("rho_bar", &TruncationReport::rho_bar)
        .def_readonly("splits", &TruncationReport::splits);

    py::class_<SeriesResult>(m, "SeriesResult")
        .def_readonly("field", &SeriesResult::field)
        .def_readonly("report", &SeriesResult::report);

    m.def("evaluate_series", &evaluate_series, py::arg("delta"), py::arg("a"), py::arg("t"),
          py::arg("tol"), py::arg("j_cap") = kSeriesHardCap);
    m.def("reconstruct_ancient", &reconstruct_ancient, py::arg("delta"), py::arg("u0"),
          py::arg("t"), py::arg("tol"), py::arg("j_cap") = kSeriesHardCap);
    m.def("solve_backward", &solve_backward, py::arg("delta"), py::arg("a"), py::arg("t"),
          py::arg("tol"), py::arg("j_cap") = kSeriesHardCap);

    py::class_<RoundtripResult>(m, "RoundtripResult")
        .def_readonly("error", &RoundtripResult::error)
        .def_readonly("condition", &RoundtripResult::condition);
    m.def("roundtrip_error", &roundtrip_error, py::arg("delta"), py::arg("a"), py::arg("tau"),
          py::arg("tol"));

    py::class_<SpectralDecomposition>(m, "SpectralDecomposition")
        .def_readonly("eigenvalues", &SpectralDecomposition::eigenvalues)
        .def_readonly("residual", &SpectralDecomposition::residual)
        .def("size", &SpectralDecomposition::size)
        .def(
            "field",
            [](const SpectralDecomposition& d, int i) {
                const double* p = d.field(i);
                return std::vector<double>(p, p + d.size());
            },
            py::arg("i"))
        .def("to_json", [](const SpectralDecomposition& d) { return spectral_json(d); });

    m.def("eigendecompose", &eigendecompose, py::arg("delta"), py::arg("size_cap") = kEigenSizeCap);
    m.def("heat_evolve_exact", &heat_evolve_exact, py::arg("decomposition"), py::arg("a"),
          py::arg("t"));
    m.def("band_limit", &band_limit, py::arg("decomposition"), py::arg("a"), py::arg("lambda_cut"));

    py::class_<TychonovEval>(m, "TychonovEval")
        .def_readonly("value", &TychonovEval::value)
        .def_readonly("tail_estimate", &TychonovEval::tail_estimate)
        .def_readonly("terms_used", &TychonovEval::terms_used)
        .def_readonly("converged", &TychonovEval::converged);

    py::class_<AnalyticityCertificate>(m, "AnalyticityCertificate")
        .def_readonly("derivatives_at_zero", &AnalyticityCertificate::derivatives_at_zero)
        .def_readonly("taylor_prediction", &AnalyticityCertificate::taylor_prediction)
        .def_readonly("sample_value", &AnalyticityCertificate::sample_value)
        .def_readonly("gap", &AnalyticityCertificate::gap)
        .def("to_json", [](const AnalyticityCertificate& c) { return certificate_json(c); });

    m.def("tychonov_polynomial", &tychonov_polynomial, py::arg("k"));
    m.def("tychonov_f_derivative", &tychonov_f_derivative, py::arg("k"), py::arg("t"));
    m.def("tychonov_eval", &tychonov_eval, py::arg("x"), py::arg("t"),
          py::arg("k_cap") = kTychonovKCap);
    m.def("tychonov_residual", &tychonov_residual, py::arg("x"), py::arg("t"), py::arg("h"));
    m.def("analyticity_gap", &analyticity_gap, py::arg("x"), py::arg("t"),
          py::arg("k_cap") = kTychonovKCap);

    m.def("run_cli", &run_cli, py::arg("args"));
}
