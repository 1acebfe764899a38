#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cvxbound/bounds.hpp"
#include "cvxbound/cli.hpp"
#include "cvxbound/common_info.hpp"
#include "cvxbound/discrete.hpp"
#include "cvxbound/error.hpp"
#include "cvxbound/oracle.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace cvxbound;

namespace {

Budget make_budget(std::optional<double> abs_tol, std::optional<std::string> method, long long samples,
                   std::uint64_t seed, int workers) {
  Budget b;
  b.abs_tol = abs_tol;
  b.samples = samples;
  b.seed = seed;
  b.workers = workers;
  if (method) {
    if (*method == "quadrature") {
      b.method = Method::Quadrature;
    } else if (*method == "monte-carlo") {
      b.method = Method::MonteCarlo;
    } else {
      throw InvalidArgument("method must be 'quadrature' or 'monte-carlo'");
    }
  }
  return b;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tight bounds on density functionals over psi-concave densities";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<NonIntegrable>(m, "NonIntegrable", base.ptr());
  py::register_exception<NoClosedForm>(m, "NoClosedForm", base.ptr());
  py::register_exception<NonConvergence>(m, "NonConvergence", base.ptr());
  py::register_exception<Unsupported>(m, "Unsupported", base.ptr());
  py::register_exception<ConditionFailed>(m, "ConditionFailed", base.ptr());

  py::class_<ConvexityFamily>(m, "ConvexityFamily")
      .def_static("log_concave", &ConvexityFamily::log_concave)
      .def_static("beta_concave", &ConvexityFamily::beta_concave, "beta"_a)
      .def_static("custom", &ConvexityFamily::custom, "name"_a, "psi"_a, "psi_inv"_a,
                  "domain_left"_a = -std::numeric_limits<double>::infinity(), "closed_form_g"_a = AntiderivativeFn{})
      .def("psi", &ConvexityFamily::psi, "x"_a)
      .def("psi_inv", &ConvexityFamily::psi_inv, "y"_a)
      .def("closed_form_g", &ConvexityFamily::closed_form_g, "k"_a, "x"_a)
      .def_property_readonly("name", &ConvexityFamily::name)
      .def("__repr__", &ConvexityFamily::describe);

  py::class_<Functional>(m, "Functional")
      .def_static("entropy", &Functional::entropy)
      .def_static("renyi", &Functional::renyi, "alpha"_a)
      .def_static("truncation", &Functional::truncation, "t"_a)
      .def_static("custom", &Functional::custom, "name"_a, "phi"_a, "phi_prime"_a, "kink"_a = py::none())
      .def("phi", &Functional::phi, "x"_a)
      .def_property_readonly("name", &Functional::name)
      .def("__repr__", &Functional::describe);

  py::enum_<Evidence>(m, "Evidence")
      .value("Proved", Evidence::Proved)
      .value("NumericallyVerified", Evidence::NumericallyVerified)
      .value("Unverified", Evidence::Unverified)
      .value("Violated", Evidence::Violated);

  py::class_<ConditionReport>(m, "ConditionReport")
      .def_readonly("A", &ConditionReport::A)
      .def_readonly("cond_i", &ConditionReport::cond_i)
      .def_readonly("cond_ii", &ConditionReport::cond_ii)
      .def_readonly("cond_iii", &ConditionReport::cond_iii)
      .def_readonly("note", &ConditionReport::note)
      .def("holds", &ConditionReport::holds)
      .def("overall", &ConditionReport::overall);

  py::class_<BoundResult>(m, "BoundResult")
      .def_readonly("lower", &BoundResult::lower)
      .def_readonly("upper", &BoundResult::upper)
      .def_readonly("a_n", &BoundResult::a_n)
      .def_readonly("a_0", &BoundResult::a_0)
      .def_readonly("b", &BoundResult::b)
      .def_readonly("n", &BoundResult::n)
      .def_readonly("f_max", &BoundResult::f_max)
      .def_readonly("provenance", &BoundResult::provenance)
      .def_readonly("formula", &BoundResult::formula)
      .def_readonly("cross_check_deviation", &BoundResult::cross_check_deviation)
      .def_readonly("upper_conditions", &BoundResult::upper_conditions)
      .def_readonly("lower_conditions", &BoundResult::lower_conditions)
      .def("evidence", &BoundResult::evidence)
      .def("__repr__", [](const BoundResult& r) {
        std::ostringstream s;
        s << "BoundResult(lower=" << r.lower + 0.0 << ", upper=" << r.upper + 0.0 << ", provenance='" << r.provenance << "')";
        return s.str();
      });

  m.def(
      "tight_bounds",
      [](const Functional& phi, const ConvexityFamily& psi, int n, double f_max, double tol, bool force_quadrature) {
        BoundOptions opt;
        opt.tol = tol;
        opt.force_quadrature = force_quadrature;
        return tight_bounds(phi, psi, n, f_max, opt);
      },
      "functional"_a, "family"_a, "n"_a, "f_max"_a, "tol"_a = 1e-11, "force_quadrature"_a = false,
      "Validated bracket [lower, upper] on I_phi(f) over psi-concave f with sup f = f_max");
  m.def("closed_form_bounds", &closed_form_bounds, "functional"_a, "family"_a, "n"_a, "f_max"_a);
  m.def(
      "renyi_entropy_bracket",
      [](const BoundResult& r, double alpha) { return renyi_entropy_bracket(r, alpha); }, "result"_a, "alpha"_a);
  m.def("binomial_variational", &binomial_variational, "n"_a, "k"_a, "c"_a);

  py::class_<DensitySpec>(m, "DensitySpec")
      .def_property_readonly("dimension", &DensitySpec::dimension)
      .def_property_readonly("f_max", &DensitySpec::f_max)
      .def_property_readonly("form", &DensitySpec::form_name)
      .def_property_readonly("mode", &DensitySpec::mode)
      .def("__call__", [](const DensitySpec& s, const std::vector<double>& x) {
        if (static_cast<int>(x.size()) != s.dimension()) throw InvalidArgument("point has the wrong dimension");
        return s.eval(x);
      });

  m.def("extremal_linear", &make_extremal_linear, "family"_a, "n"_a, "f_max"_a);
  m.def("uniform_box", &make_uniform_box, "family"_a, "n"_a, "f_max"_a);
  m.def("quadratic_density", &make_quadratic, "family"_a, "Q"_a, "center"_a, "offset"_a = 1.0);
  m.def("gaussian", &make_gaussian, "cov"_a);
  m.def("multivariate_t", &make_multivariate_t, "nu"_a, "scale"_a);
  m.def(
      "counterexample_density",
      [](const Functional& phi, const ConvexityFamily& psi, int n, double f_max, double A, const std::string& which) {
        if (which != "i" && which != "ii") throw InvalidArgument("violated must be 'i' or 'ii'");
        return counterexample_density(phi, psi, n, f_max, A, which == "i" ? ViolatedCondition::I : ViolatedCondition::II);
      },
      "functional"_a, "family"_a, "n"_a, "f_max"_a, "A"_a, "violated"_a = "i");

  py::class_<OracleEstimate>(m, "OracleEstimate")
      .def_readonly("value", &OracleEstimate::value)
      .def_readonly("error", &OracleEstimate::error)
      .def_readonly("std_error", &OracleEstimate::std_error)
      .def_readonly("sample_count", &OracleEstimate::sample_count)
      .def_readonly("converged", &OracleEstimate::converged)
      .def_property_readonly("method", [](const OracleEstimate& e) { return std::string(to_string(e.method)); })
      .def("margin", &OracleEstimate::margin);

  m.def(
      "integrate_functional",
      [](const DensitySpec& s, const Functional& phi, std::optional<double> abs_tol, std::optional<std::string> method,
         long long samples, std::uint64_t seed, int workers) {
        const Budget b = make_budget(abs_tol, method, samples, seed, workers);
        py::gil_scoped_release release;
        return integrate_functional(s, phi, b);
      },
      "density"_a, "functional"_a, "abs_tol"_a = py::none(), "method"_a = py::none(), "samples"_a = 1'000'000,
      "seed"_a = 20240611, "workers"_a = 1);
  m.def(
      "differential_entropy",
      [](const DensitySpec& s, std::optional<double> abs_tol, std::optional<std::string> method, long long samples,
         std::uint64_t seed, int workers) {
        const Budget b = make_budget(abs_tol, method, samples, seed, workers);
        py::gil_scoped_release release;
        return differential_entropy(s, b);
      },
      "density"_a, "abs_tol"_a = py::none(), "method"_a = py::none(), "samples"_a = 1'000'000, "seed"_a = 20240611,
      "workers"_a = 1);

  py::module_ d = m.def_submodule("dist", "Discrete CDFs");
  d.def(
      "poisson_cdf", [](double lambda, std::int64_t k) { return dist::cdf(dist::Poisson{lambda}, k); }, "lam"_a, "k"_a);
  d.def(
      "binomial_cdf", [](std::int64_t trials, double p, std::int64_t k) { return dist::cdf(dist::Binomial{trials, p}, k); },
      "trials"_a, "p"_a, "k"_a);
  d.def(
      "negbinomial_cdf",
      [](std::int64_t failures, double p, std::int64_t k) { return dist::cdf(dist::NegBinomial{failures, p}, k); },
      "failures"_a, "p"_a, "k"_a);
  d.def("truncation_gamma_sum", &dist::truncation_gamma_sum, "ratio"_a, "beta"_a, "n"_a);

  py::class_<CommonInfoBracket>(m, "CommonInfoBracket")
      .def_property_readonly("i_d", [](const CommonInfoBracket& b) { return b.i_d.value; })
      .def_readonly("g_lower", &CommonInfoBracket::g_lower)
      .def_readonly("g_upper", &CommonInfoBracket::g_upper)
      .def_readonly("n", &CommonInfoBracket::n)
      .def_readonly("beta", &CommonInfoBracket::beta)
      .def_readonly("mode", &CommonInfoBracket::mode)
      .def_property_readonly("t_star", [](const CommonInfoBracket& b) { return b.threshold.t_star; })
      .def_property_readonly("log_ratio", [](const CommonInfoBracket& b) { return b.threshold.log_ratio; })
      .def_property_readonly("threshold_holds", [](const CommonInfoBracket& b) { return b.threshold.holds; });

  m.def(
      "common_info_bracket",
      [](const DensitySpec& s, bool allow_heuristic) {
        const JointDensityModel model = make_joint_model(s, allow_heuristic);
        py::gil_scoped_release release;
        return g_bracket(model);
      },
      "density"_a, "allow_heuristic"_a = false, "Bracket [I_D, I_D + gap] on the exact common information");
  m.def("common_info_gap", &common_info_gap, "n"_a);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"cvxbound"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      "args"_a, "Run the command-line tool in-process; returns (exit_code, stdout, stderr)");
}
