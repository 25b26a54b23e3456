#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "uamo/determinants.hpp"
#include "uamo/harness.hpp"
#include "uamo/spectral.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace uamo;

PYBIND11_MODULE(_uamo, m) {
  m.doc() = "Quasi-periodic split-step walk: CMV windows, cocycles, determinants and localization diagnostics";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init(&ModelParams::make), "lambda1"_a, "lambda2"_a, "omega"_a, "theta"_a)
      .def_readonly("lambda1", &ModelParams::lambda1)
      .def_readonly("lambda2", &ModelParams::lambda2)
      .def_readonly("lambda1p", &ModelParams::lambda1p)
      .def_readonly("lambda2p", &ModelParams::lambda2p)
      .def_readonly("omega", &ModelParams::omega)
      .def_readonly("theta", &ModelParams::theta)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(lambda1=" + format_double(p.lambda1) + ", lambda2=" + format_double(p.lambda2) +
               ", omega=" + format_double(p.omega) + ", theta=" + format_double(p.theta) + ")";
      });

  m.def("golden", [] { return kGolden; });
  m.def("parse_frequency", &parse_frequency, "spec"_a);

  m.def(
      "verblunsky",
      [](const ModelParams& p, long n) {
        const VerblunskyPair v = verblunsky_pair(p, n);
        return py::make_tuple(v.alpha, v.rho);
      },
      "params"_a, "n"_a, "Returns (alpha_n, rho_n).");

  m.def(
      "spectrum",
      [](const ModelParams& p, long N, const std::string& method) {
        return truncated_spectrum(p, N, Boundary::fixed(1.0, 1.0),
                                  method == "roots" ? SpectrumMethod::RootIsolation : SpectrumMethod::Dense)
            .phases;
      },
      "params"_a, "N"_a, "method"_a = "dense", "Sorted eigenphases of the unitary truncation on [1, N].");

  m.def("lyapunov_closed_form", &lyapunov_closed_form, "params"_a);
  m.def(
      "lyapunov_estimate",
      [](const ModelParams& p, const std::string& kind, Complex z, long N, int samples) {
        const LyapunovEstimate e = lyapunov_estimate(p, cocycle_kind_from_string(kind), z, N, samples);
        return py::make_tuple(e.mean, e.stderr_);
      },
      "params"_a, "kind"_a, "z"_a, "N"_a, "samples"_a = 1, "Returns (mean, stderr) per application.");

  m.def(
      "conjugacy_residuals",
      [](const ModelParams& p, double theta, Complex z) {
        const ConjugacyResiduals r = conjugacy_residuals(p, theta, z);
        return py::make_tuple(r.r1, r.r2);
      },
      "params"_a, "theta"_a, "z"_a);

  m.def(
      "box_determinant",
      [](const ModelParams& p, long a, long b, Complex z, const std::string& route) {
        const BoxDeterminant d = box_determinant(p, a, b, z, det_route_from_string(route));
        return py::make_tuple(d.value.log_abs, d.value.phase, d.value.zero, to_string(d.route));
      },
      "params"_a, "a"_a, "b"_a, "z"_a, "route"_a = "lu",
      "Returns (log|P|, phase in turns, is_zero, route used) for P = det(z - W|[a, b]).");

  m.def(
      "sine_polynomial_check",
      [](const ModelParams& p, long n, Complex z) {
        const SinePolynomialReport r = sine_polynomial_check(p, n, z);
        return py::make_tuple(r.tail_mass, r.evenness_residual);
      },
      "params"_a, "n"_a, "z"_a);

  m.def(
      "continued_fraction",
      [](double omega, int K) {
        const ContinuedFraction cf = continued_fraction(omega, K);
        return py::make_tuple(cf.a, cf.q);
      },
      "omega"_a, "K"_a, "Returns (partial quotients, denominators).");

  py::class_<EigenPair>(m, "EigenPair")
      .def_readonly("z", &EigenPair::z)
      .def_readonly("phase", &EigenPair::phase)
      .def_readonly("a", &EigenPair::a)
      .def_readonly("b", &EigenPair::b)
      .def_readonly("residual", &EigenPair::residual)
      .def_readonly("center", &EigenPair::center)
      .def_readonly("log_abs", &EigenPair::log_abs);

  m.def(
      "eigenpair",
      [](const ModelParams& p, long N, double target_phase) { return eigenpair_extract(p, N, target_phase); },
      "params"_a, "N"_a, "target_phase"_a);
  m.def("central_eigenphase", &central_eigenphase, "params"_a, "center"_a, "half"_a = 128);
  m.def(
      "decay_rate_fit",
      [](const EigenPair& e) {
        const DecayFit f = decay_rate_fit(e);
        return py::make_tuple(f.slope, f.r2);
      },
      "pair"_a);

  m.def(
      "localization_scheme",
      [](long y, double omega, double eps) {
        const LocalizationScheme s = localization_scheme(y, omega, eps);
        return py::dict("q_n"_a = s.q_n, "q_m"_a = s.q_m, "s"_a = s.s, "h"_a = s.h,
                        "I1"_a = py::make_tuple(s.I1.lo, s.I1.hi), "I2"_a = py::make_tuple(s.I2.lo, s.I2.hi));
      },
      "y"_a, "omega"_a, "epsilon"_a);

  m.def(
      "certificate",
      [](const ModelParams& p, const EigenPair& e, long y, double eps) {
        const LocalizationCertificate c = certificate_replay(p, e, y, eps);
        return py::dict("x1"_a = c.x1, "x2"_a = c.x2, "margin_P"_a = c.margin_P, "margin_nu1"_a = c.margin_nu1,
                        "margin_nu2"_a = c.margin_nu2, "margin_nu3"_a = c.margin_nu3,
                        "contraction"_a = c.contraction, "passed"_a = c.passed);
      },
      "params"_a, "pair"_a, "y"_a, "epsilon"_a);

  m.def(
      "evolve_moments",
      [](const ModelParams& p, long N, long T, long every) {
        const SpreadSeries s = evolve_moments(p, N, T, every);
        return py::make_tuple(s.times, s.x2, s.truncated);
      },
      "params"_a, "N"_a, "T"_a, "record_every"_a = 1);

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        const ExperimentConfig cfg = parse_config(args);
        return emit_csv(run_experiment(cfg));
      },
      "args"_a, "Runs a CLI command and returns the CSV text.");

  m.attr("__version__") = kVersion;
}
