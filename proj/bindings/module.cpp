#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "dysonclt/config.hpp"
#include "dysonclt/entry_process.hpp"
#include "dysonclt/index_set.hpp"
#include "dysonclt/kernel.hpp"
#include "dysonclt/montecarlo.hpp"
#include "dysonclt/observables.hpp"
#include "dysonclt/stats.hpp"
#include "dysonclt/theory.hpp"

namespace py = pybind11;
using namespace dysonclt;

namespace {

// Exact integers (binomials, Catalan convolutions, Chebyshev coefficients)
// cross the boundary as arbitrary-precision Python ints, via their decimal
// representation.
py::object to_py_int(const BigInt& v) {
    return py::module_::import("builtins").attr("int")(v.str());
}

CovarianceQuery make_query(int k_p, int k_q, double b_p, double b_q, double b_pq, double c,
                           int beta) {
    CovarianceQuery q{k_p, k_q, b_p, b_q, b_pq, c, beta};
    q.validate();
    return q;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Global spectral fluctuations of time-dependent Wigner matrices: "
              "limiting-covariance evaluators, the half-plane kernel, and the "
              "Monte Carlo comparison pipeline.";
    m.attr("__version__") = "0.1.0";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_RuntimeError);

    // ---- exact combinatorics and covariance evaluators ----

    m.def("binomial", [](int n, int k) { return to_py_int(binomial(n, k)); }, py::arg("n"),
          py::arg("k"), "Exact binomial coefficient; zero outside [0, n].");
    m.def("catalan", [](int n) { return to_py_int(catalan(n)); }, py::arg("n"),
          "n-th Catalan number, exact.");
    m.def("catalan_convolution",
          [](int r, int S) { return to_py_int(catalan_convolution(r, S)); }, py::arg("r"),
          py::arg("S"),
          "Sum of prod C_{s_i} over r-tuples with total S, via the closed form.");
    m.def("chebyshev_coefficients",
          [](int k) {
              py::list out;
              for (const auto& a : chebyshev_coefficients(k)) out.append(to_py_int(a));
              return out;
          },
          py::arg("k"), "Monomial coefficients of T_k (index = degree), exact.");

    m.def("covariance_series",
          [](int k_p, int k_q, double b_p, double b_q, double b_pq, double c, int beta) {
              return covariance_series(make_query(k_p, k_q, b_p, b_q, b_pq, c, beta));
          },
          py::arg("k_p"), py::arg("k_q"), py::arg("b_p") = 1.0, py::arg("b_q") = 1.0,
          py::arg("b_pq") = 1.0, py::arg("c") = 1.0, py::arg("beta") = 1,
          "Limiting covariance of centered trace powers: the finite "
          "Catalan/binomial series.");
    m.def("covariance_contour",
          [](int k_p, int k_q, double b_p, double b_q, double b_pq, double c, int beta,
             int n_nodes, double radius_shrink) {
              QuadratureParams quad{n_nodes, radius_shrink};
              quad.validate();
              return covariance_contour(make_query(k_p, k_q, b_p, b_q, b_pq, c, beta), quad);
          },
          py::arg("k_p"), py::arg("k_q"), py::arg("b_p") = 1.0, py::arg("b_q") = 1.0,
          py::arg("b_pq") = 1.0, py::arg("c") = 1.0, py::arg("beta") = 1,
          py::arg("n_nodes") = 512, py::arg("radius_shrink") = 0.25,
          "Same quantity by the double contour integral (trapezoid rule in the "
          "angle).");
    m.def("covariance_logkernel",
          [](int k_p, int k_q, double b_p, double b_q, double b_pq, double c, int beta,
             int n_nodes, double radius_shrink) {
              QuadratureParams quad{n_nodes, radius_shrink};
              quad.validate();
              return covariance_logkernel(make_query(k_p, k_q, b_p, b_q, b_pq, c, beta), quad);
          },
          py::arg("k_p"), py::arg("k_q"), py::arg("b_p") = 1.0, py::arg("b_q") = 1.0,
          py::arg("b_pq") = 1.0, py::arg("c") = 1.0, py::arg("beta") = 1,
          py::arg("n_nodes") = 512, py::arg("radius_shrink") = 0.25,
          "Same quantity by the log-kernel double integral over semicircles.");
    m.def("chebyshev_covariance_closed", &chebyshev_covariance_closed, py::arg("k_p"),
          py::arg("k_q"), py::arg("b_p") = 1.0, py::arg("b_q") = 1.0, py::arg("b_pq") = 1.0,
          py::arg("c") = 1.0, py::arg("beta") = 1,
          "delta_{k_p k_q} (k_p / 2 beta) (c b_pq / sqrt(b_p b_q))^{k_p}.");
    m.def("chebyshev_covariance_expanded", &chebyshev_covariance_expanded, py::arg("k_p"),
          py::arg("k_q"), py::arg("b_p") = 1.0, py::arg("b_q") = 1.0, py::arg("b_pq") = 1.0,
          py::arg("c") = 1.0, py::arg("beta") = 1,
          "Cross-check of the closed form through the monomial expansion of T_k.");

    // ---- entry-process covariance and admissibility ----

    py::enum_<CovarianceKind>(m, "CovarianceKind")
        .value("OrnsteinUhlenbeck", CovarianceKind::OrnsteinUhlenbeck)
        .value("Constant", CovarianceKind::Constant)
        .value("TableInterpolated", CovarianceKind::TableInterpolated);

    py::class_<CovarianceFn>(m, "CovarianceFn",
                             "Entry-process correlation c(s,t); c(t,t) = 1 for every kind.")
        .def_static("ornstein_uhlenbeck", &CovarianceFn::ornstein_uhlenbeck, py::arg("rate"))
        .def_static("constant", &CovarianceFn::constant, py::arg("value"))
        .def_static("table", &CovarianceFn::table, py::arg("s_grid"), py::arg("t_grid"),
                    py::arg("values"))
        .def("evaluate", &CovarianceFn::evaluate, py::arg("s"), py::arg("t"))
        .def("grid_matrix", &CovarianceFn::grid_matrix, py::arg("grid"))
        .def_property_readonly("kind", &CovarianceFn::kind);

    py::enum_<EntryFamily>(m, "EntryFamily")
        .value("GaussianStationary", EntryFamily::GaussianStationary)
        .value("FrozenThreePoint", EntryFamily::FrozenThreePoint)
        .value("StaticIID", EntryFamily::StaticIID);

    py::class_<EntryProcessSpec>(m, "EntryProcessSpec")
        .def(py::init<>())
        .def_readwrite("beta", &EntryProcessSpec::beta)
        .def_readwrite("family", &EntryProcessSpec::family)
        .def_readwrite("covariance", &EntryProcessSpec::covariance)
        .def_readwrite("static_distribution", &EntryProcessSpec::static_distribution)
        .def("validate", &EntryProcessSpec::validate)
        .def("time_frozen", &EntryProcessSpec::time_frozen);

    py::class_<MomentRow>(m, "MomentRow")
        .def_readonly("s", &MomentRow::s)
        .def_readonly("t", &MomentRow::t)
        .def_readonly("name", &MomentRow::name)
        .def_readonly("empirical", &MomentRow::empirical)
        .def_readonly("std_error", &MomentRow::std_error)
        .def_readonly("target", &MomentRow::target)
        .def_readonly("z", &MomentRow::z);

    py::class_<AdmissibilityReport>(m, "AdmissibilityReport")
        .def_readonly("rows", &AdmissibilityReport::rows)
        .def("max_abs_z", &AdmissibilityReport::max_abs_z);

    m.def("check_admissibility", &check_admissibility, py::arg("spec"), py::arg("grid"),
          py::arg("n_samples"), py::arg("seed"),
          py::call_guard<py::gil_scoped_release>(),
          "Monte Carlo check of the admissibility moment conditions on the "
          "off-diagonal entry law.");

    // ---- observables on a spectrum ----

    m.def("eigenvalues",
          [](const Eigen::MatrixXd& mat) { return eigenvalues(mat).eigenvalues; },
          py::arg("matrix"), "Sorted eigenvalues of a real symmetric matrix.");
    m.def("eigenvalues",
          [](const Eigen::MatrixXcd& mat) { return eigenvalues(mat).eigenvalues; },
          py::arg("matrix"), "Sorted eigenvalues of a Hermitian matrix.");
    m.def("trace_power",
          [](const std::vector<double>& eigs, int k) { return trace_power(Spectrum{eigs}, k); },
          py::arg("eigenvalues"), py::arg("k"), "sum_s lambda_s^k.");
    m.def("chebyshev_trace",
          [](const std::vector<double>& eigs, int k, double b, double L) {
              return chebyshev_trace(Spectrum{eigs}, k, b, L);
          },
          py::arg("eigenvalues"), py::arg("k"), py::arg("b"), py::arg("L"),
          "sum_s T_k(lambda_s / (2 sqrt(b L))).");
    m.def("chebyshev_T", &chebyshev_T, py::arg("k"), py::arg("x"),
          "T_k with hyperbolic continuation outside [-1, 1].");
    m.def("height_function",
          [](const std::vector<double>& eigs, double x, int beta) {
              return height_function(Spectrum{eigs}, x, beta);
          },
          py::arg("eigenvalues"), py::arg("x"), py::arg("beta"),
          "sqrt(beta pi / 2) * #{ lambda_s >= x }.");

    // ---- the limiting field on H x R ----

    m.def("kernel_c", &kernel_c, py::arg("z"), py::arg("s"), py::arg("w"), py::arg("t"),
          py::arg("covariance"),
          "Covariance kernel C(z,s;w,t) of the limiting field; +inf on the "
          "singular diagonal.");
    m.def("green_halfplane", &green_halfplane, py::arg("z"), py::arg("w"),
          "Dirichlet Green function of the half-plane Laplacian.");
    m.def("omega", &omega, py::arg("x"), py::arg("y"),
          "omega(x,y) = x/2 + i sqrt(y - (x/2)^2), mapping the parabolic "
          "wedge to H.");
    m.def("omega_inv", &omega_inv, py::arg("z"), "(2 Re z, |z|^2).");

    py::class_<SectionSpec>(m, "SectionSpec",
                            "Monotone section through the (size, time) plane: size profile "
                            "phi (nonincreasing), time profile psi (nondecreasing), base "
                            "time t0, and the entry covariance.")
        .def(py::init([](std::function<double(double)> phi, std::function<double(double)> psi,
                         double t0, const CovarianceFn& covariance) {
                 SectionSpec sec;
                 sec.phi = std::move(phi);
                 sec.psi = std::move(psi);
                 sec.t0 = t0;
                 sec.covariance = covariance;
                 return sec;
             }),
             py::arg("phi"), py::arg("psi"), py::arg("t0") = 0.0,
             py::arg("covariance") = CovarianceFn::constant(1.0));

    m.def("xi", &xi, py::arg("x"), py::arg("t"), py::arg("section"),
          "Section map into H (prefactor c(psi(t0), psi(t)) or its inverse by "
          "the sign of t - t0).");
    m.def("xi_inv", &xi_inv, py::arg("zeta"), py::arg("section"),
          "Inverse of the section map, by bisection on the radial profile.");

    py::class_<PullbackReport>(m, "PullbackReport")
        .def_readonly("applicable", &PullbackReport::applicable)
        .def_readonly("max_discrepancy", &PullbackReport::max_discrepancy);

    m.def("section_pullback_check", &section_pullback_check, py::arg("section"),
          py::arg("points"),
          "Checks kernel_c(omega(x1,phi(t1)),psi(t1); ...) = green(xi_1, xi_2) "
          "over all point pairs.");
    m.def("gram_pd_check", &gram_pd_check, py::arg("points"), py::arg("covariance"),
          py::arg("epsilon"),
          "Minimum eigenvalue of the mollified kernel Gram matrix (nonnegative "
          "up to quadrature noise).");

    // ---- statistics ----

    m.def("pairwise_sum",
          [](const std::vector<double>& x) { return pairwise_sum(x); }, py::arg("x"),
          "Deterministic tree summation.");

    py::class_<CovarianceEstimate>(m, "CovarianceEstimate")
        .def_readonly("value", &CovarianceEstimate::value)
        .def_readonly("std_error", &CovarianceEstimate::std_error);

    py::class_<CumulantEstimate>(m, "CumulantEstimate")
        .def_readonly("kappa3", &CumulantEstimate::kappa3)
        .def_readonly("kappa3_stderr", &CumulantEstimate::kappa3_stderr)
        .def_readonly("kappa4", &CumulantEstimate::kappa4)
        .def_readonly("kappa4_stderr", &CumulantEstimate::kappa4_stderr);

    m.def("covariance_with_jackknife", &covariance_with_jackknife, py::arg("a"), py::arg("b"),
          "Unbiased sample covariance with leave-one-out jackknife standard "
          "error.");
    m.def("estimate_cumulants", &estimate_cumulants, py::arg("x"),
          "k-statistics for the third and fourth cumulants, with jackknife "
          "standard errors.");

    // ---- experiment configuration and the Monte Carlo pipeline ----

    py::class_<IndexSet>(m, "IndexSet")
        .def_static("prefix", &IndexSet::prefix, py::arg("n"))
        .def_static("from_elements", &IndexSet::from, py::arg("elements"))
        .def_readonly("elements", &IndexSet::elements)
        .def("size", &IndexSet::size);

    py::enum_<StatisticKind>(m, "StatisticKind")
        .value("TracePower", StatisticKind::TracePower)
        .value("ChebyshevTrace", StatisticKind::ChebyshevTrace);

    py::class_<ObservableSpec>(m, "ObservableSpec")
        .def(py::init([](std::string set_id, double time, StatisticKind statistic, int k) {
                 return ObservableSpec{std::move(set_id), time, statistic, k};
             }),
             py::arg("set_id"), py::arg("time") = 0.0,
             py::arg("statistic") = StatisticKind::TracePower, py::arg("k") = 1)
        .def_readwrite("set_id", &ObservableSpec::set_id)
        .def_readwrite("time", &ObservableSpec::time)
        .def_readwrite("statistic", &ObservableSpec::statistic)
        .def_readwrite("k", &ObservableSpec::k)
        .def("__repr__",
             [](const ObservableSpec& o) { return "<ObservableSpec " + observable_label(o) + ">"; });

    m.def("observable_label", &observable_label, py::arg("observable"),
          "Comma-free tag such as 'full@t0:pow2'.");

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("L", &ExperimentConfig::L)
        .def_readwrite("ambient_dim", &ExperimentConfig::ambient_dim)
        .def_readwrite("entry", &ExperimentConfig::entry)
        .def_readwrite("times", &ExperimentConfig::times)
        .def_readwrite("sets", &ExperimentConfig::sets)
        .def_readwrite("observables", &ExperimentConfig::observables)
        .def_readwrite("n_samples", &ExperimentConfig::n_samples)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("z_max", &ExperimentConfig::z_max)
        .def_readwrite("threads", &ExperimentConfig::threads)
        .def_property_readonly("beta", &ExperimentConfig::beta)
        .def("resolved_ambient_dim", &ExperimentConfig::resolved_ambient_dim)
        .def("validate", &ExperimentConfig::validate);

    m.def("parse_experiment_config", &parse_experiment_config, py::arg("json_text"),
          "Parses the schema-1 experiment JSON and cross-validates it.");
    m.def("load_experiment_config", &load_experiment_config, py::arg("path"),
          "Same, reading from a file.");

    py::class_<EstimateTable>(m, "EstimateTable")
        .def_readonly("labels", &EstimateTable::labels)
        .def_readonly("means", &EstimateTable::means)
        .def_property_readonly("covariance",
                               [](const EstimateTable& t) { return t.covariance; })
        .def_property_readonly("covariance_stderr",
                               [](const EstimateTable& t) { return t.covariance_stderr; })
        .def_readonly("cumulants", &EstimateTable::cumulants)
        .def_readonly("samples", &EstimateTable::samples)
        .def_readonly("n_samples", &EstimateTable::n_samples)
        .def_readonly("n_quarantined", &EstimateTable::n_quarantined)
        .def_readonly("seed", &EstimateTable::seed);

    m.def("run_experiment", &run_experiment, py::arg("config"),
          py::call_guard<py::gil_scoped_release>(),
          "Samples the ensemble and reduces every observable; deterministic "
          "for a fixed seed, independent of the thread count.");

    m.def("theory_covariance", &theory_covariance, py::arg("p"), py::arg("q"),
          py::arg("config"),
          "Limiting covariance of a pair of observables, routed to the "
          "matching evaluator.");

    py::class_<ComparisonRow>(m, "ComparisonRow")
        .def_readonly("p", &ComparisonRow::p)
        .def_readonly("q", &ComparisonRow::q)
        .def_readonly("label_p", &ComparisonRow::label_p)
        .def_readonly("label_q", &ComparisonRow::label_q)
        .def_readonly("theory", &ComparisonRow::theory)
        .def_readonly("empirical", &ComparisonRow::empirical)
        .def_readonly("std_error", &ComparisonRow::std_error)
        .def_readonly("z", &ComparisonRow::z)
        .def_readonly("pass_", &ComparisonRow::pass)
        .def("__repr__", [](const ComparisonRow& r) {
            std::ostringstream out;
            out << "<ComparisonRow " << r.label_p << " x " << r.label_q << " z=" << r.z
                << (r.pass ? " pass>" : " FAIL>");
            return out.str();
        });

    py::class_<GaussianityRow>(m, "GaussianityRow")
        .def_readonly("p", &GaussianityRow::p)
        .def_readonly("label", &GaussianityRow::label)
        .def_readonly("kappa3", &GaussianityRow::kappa3)
        .def_readonly("kappa3_stderr", &GaussianityRow::kappa3_stderr)
        .def_readonly("z3", &GaussianityRow::z3)
        .def_readonly("kappa4", &GaussianityRow::kappa4)
        .def_readonly("kappa4_stderr", &GaussianityRow::kappa4_stderr)
        .def_readonly("z4", &GaussianityRow::z4)
        .def_readonly("pass_", &GaussianityRow::pass);

    py::class_<ComparisonReport>(m, "ComparisonReport")
        .def_readonly("rows", &ComparisonReport::rows)
        .def_readonly("gaussianity", &ComparisonReport::gaussianity)
        .def_readonly("z_max", &ComparisonReport::z_max)
        .def_readonly("seed", &ComparisonReport::seed)
        .def_readonly("L", &ComparisonReport::L)
        .def_readonly("n_samples", &ComparisonReport::n_samples)
        .def_readonly("n_quarantined", &ComparisonReport::n_quarantined)
        .def_readonly("runtime_seconds", &ComparisonReport::runtime_seconds)
        .def("all_pass", &ComparisonReport::all_pass);

    m.def("compare", &compare, py::arg("estimates"), py::arg("config"),
          "Theory-vs-empirical verdicts for every pair, plus Gaussianity "
          "diagnostics.");
}
