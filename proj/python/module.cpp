#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>

#include "gabor/cauchy.hpp"
#include "gabor/framebounds.hpp"
#include "gabor/lattice.hpp"
#include "gabor/paley_wiener.hpp"
#include "gabor/pipeline.hpp"
#include "gabor/spectrum.hpp"

namespace py = pybind11;
using namespace gabor;

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Gabor systems of Cauchy kernels: coefficient analysis, band-limited "
      "recovery, sampling constants, and frame bound estimation";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<SpectralSignal>(m, "SpectralSignal",
                             "Compactly supported piecewise-polynomial spectrum")
      .def(py::init<>())
      .def_static("indicator", &SpectralSignal::indicator, py::arg("lo"),
                  py::arg("hi"), py::arg("value") = Complex(1.0))
      .def("is_zero", &SpectralSignal::is_zero)
      .def("support_lo", &SpectralSignal::support_lo)
      .def("support_hi", &SpectralSignal::support_hi)
      .def("__call__", &SpectralSignal::eval, py::arg("xi"),
           "Pointwise spectral value")
      .def("__repr__", [](const SpectralSignal& f) {
        if (f.is_zero()) return std::string("SpectralSignal(zero)");
        return "SpectralSignal(support=[" + std::to_string(f.support_lo()) +
               ", " + std::to_string(f.support_hi()) + "], pieces=" +
               std::to_string(f.pieces().size()) + ")";
      });

  m.def("gaussian_spectrum", &gaussian_spectrum, py::arg("center"),
        py::arg("halfwidth"), py::arg("tail_tol") = 1e-8,
        "Piecewise-polynomial Gaussian bump with controlled tail error");
  m.def("norm_sq", &norm_sq, py::arg("f"));
  m.def("add", &add, py::arg("f"), py::arg("g"));
  m.def("subtract", &subtract, py::arg("f"), py::arg("g"));
  m.def("translate", &translate, py::arg("f"), py::arg("shift"));
  m.def("relative_l2_error", &relative_l2_error, py::arg("approx"),
        py::arg("truth"));
  m.def("evaluate_time", &evaluate_time, py::arg("f"), py::arg("z"),
        "Time-side value f(z) of the spectrum at a complex point");

  py::class_<FrequencySet>(m, "FrequencySet")
      .def_readonly("points", &FrequencySet::points)
      .def_readonly("gaps", &FrequencySet::gaps)
      .def_readonly("beta", &FrequencySet::beta)
      .def("__len__", [](const FrequencySet& s) { return s.points.size(); })
      .def("__repr__", [](const FrequencySet& s) {
        return "FrequencySet(" + std::to_string(s.points.size()) +
               " points, beta=" + std::to_string(s.beta) + ")";
      });
  m.def("make_frequency_set", &make_frequency_set, py::arg("points"),
        "Validated strictly increasing frequency lattice");

  py::class_<CoefficientTable>(m, "CoefficientTable")
      .def_readonly("lambdas", &CoefficientTable::lambdas)
      .def_readonly("m", &CoefficientTable::m)
      .def_readonly("w", &CoefficientTable::w)
      .def_readonly("twisted", &CoefficientTable::twisted)
      .def_readonly("values", &CoefficientTable::values)
      .def("__repr__", [](const CoefficientTable& t) {
        return "CoefficientTable(" + std::to_string(t.values.rows()) + " x " +
               std::to_string(t.values.cols()) + ")";
      });

  m.def(
      "coefficient",
      [](const SpectralSignal& f, double lambda, double mu, Complex w) {
        return coefficient(f, lambda, mu, WindowParam(w));
      },
      py::arg("f"), py::arg("lam"), py::arg("mu"), py::arg("w") = Complex(1.0),
      "Frame coefficient of f against the atom at (lam, mu)");

  m.def(
      "analyze",
      [](const SpectralSignal& f, const std::vector<double>& lambdas,
         const FrequencySet& freqs, Complex w, int threads) {
        return analyze(f, lambdas, freqs, WindowParam(w), threads);
      },
      py::arg("f"), py::arg("lambdas"), py::arg("freqs"),
      py::arg("w") = Complex(1.0), py::arg("threads") = 0,
      "Dense coefficient table over lambdas x freqs");

  py::class_<BandResidual>(m, "BandResidual")
      .def_readonly("index", &BandResidual::index)
      .def_readonly("mu", &BandResidual::mu)
      .def_readonly("beta", &BandResidual::beta)
      .def_readonly("residual", &BandResidual::residual)
      .def_readonly("norm_sq", &BandResidual::norm_sq);

  py::class_<ReconstructionResult>(m, "ReconstructionResult")
      .def_readonly("recovered", &ReconstructionResult::recovered)
      .def_readonly("has_truth", &ReconstructionResult::has_truth)
      .def_readonly("relative_l2_error", &ReconstructionResult::relative_l2_error)
      .def_readonly("band_residuals", &ReconstructionResult::band_residuals)
      .def_readonly("top_band_boundary", &ReconstructionResult::top_band_boundary)
      .def_readonly("lambda_leakage", &ReconstructionResult::lambda_leakage);

  m.def(
      "reconstruct",
      [](const CoefficientTable& table, int grid_per_band, double epsilon,
         std::optional<SpectralSignal> ground_truth, int threads) {
        ReconstructionOptions opts;
        opts.grid_per_band = grid_per_band;
        opts.epsilon = epsilon;
        opts.ground_truth = std::move(ground_truth);
        return reconstruct(table, opts, threads);
      },
      py::arg("table"), py::arg("grid_per_band") = 64,
      py::arg("epsilon") = kAutoEpsilon, py::arg("ground_truth") = py::none(),
      py::arg("threads") = 0,
      "Invert a coefficient table band by band and reassemble the spectrum");

  py::class_<SamplingReport>(m, "SamplingReport")
      .def_readonly("a_est", &SamplingReport::a_est)
      .def_readonly("b_est", &SamplingReport::b_est)
      .def_readonly("a_raw", &SamplingReport::a_raw)
      .def_readonly("window_lo", &SamplingReport::window_lo)
      .def_readonly("window_hi", &SamplingReport::window_hi)
      .def_readonly("nyquist_ok", &SamplingReport::nyquist_ok)
      .def_readonly("kept_dim", &SamplingReport::kept_dim);

  m.def(
      "sampling_constants",
      [](const std::vector<double>& points, double beta, int grid_dim,
         double epsilon, std::optional<Complex> shift, double taper_roll,
         double leak_cutoff, int threads) {
        SamplingProblem p;
        p.lambda.points = points;
        p.beta = beta;
        p.grid_dim = grid_dim;
        p.epsilon = epsilon;
        p.shift = shift;
        p.taper_roll = taper_roll;
        p.leak_cutoff = leak_cutoff;
        return sampling_constants(p, threads);
      },
      py::arg("points"), py::arg("beta"), py::arg("grid_dim") = 64,
      py::arg("epsilon") = kAutoEpsilon, py::arg("shift") = py::none(),
      py::arg("taper_roll") = -1.0, py::arg("leak_cutoff") = 0.01,
      py::arg("threads") = 0,
      "Empirical sampling constants of the point set on spectra over [0, beta]");

  py::class_<FrameReport>(m, "FrameReport")
      .def_readonly("a_est", &FrameReport::a_est)
      .def_readonly("b_est", &FrameReport::b_est)
      .def_readonly("rows", &FrameReport::rows)
      .def_readonly("cols", &FrameReport::cols)
      .def_readonly("trial_lo", &FrameReport::trial_lo)
      .def_readonly("trial_hi", &FrameReport::trial_hi)
      .def_readonly("stable_a", &FrameReport::stable_a)
      .def_readonly("stable_b", &FrameReport::stable_b);

  m.def(
      "frame_bounds",
      [](const std::vector<double>& lambdas, const std::vector<double>& freqs,
         Complex w, int grid_dim,
         std::optional<std::pair<double, double>> trial, double taper_width,
         int threads) {
        FrameProblem p;
        p.lambda.points = lambdas;
        p.freqs = freqs;
        p.w = WindowParam(w);
        p.grid_dim = grid_dim;
        if (trial) {
          p.trial_override = true;
          p.trial_lo = trial->first;
          p.trial_hi = trial->second;
        }
        p.taper_width = taper_width;
        return frame_bounds(p, threads);
      },
      py::arg("lambdas"), py::arg("freqs"), py::arg("w") = Complex(1.0),
      py::arg("grid_dim") = 64, py::arg("trial") = py::none(),
      py::arg("taper_width") = -1.0, py::arg("threads") = 0,
      "Extreme squared singular values of the analysis map on a trial space");

  py::class_<BandIdentityResult>(m, "BandIdentityResult")
      .def_readonly("max_abs_residual", &BandIdentityResult::max_abs_residual)
      .def_readonly("scale", &BandIdentityResult::scale)
      .def_readonly("relative", &BandIdentityResult::relative);

  m.def(
      "band_identity_residual",
      [](const SpectralSignal& f, const std::vector<double>& lambdas,
         const FrequencySet& freqs, Complex w, int threads) {
        return band_identity_residual(f, lambdas, freqs, WindowParam(w), threads);
      },
      py::arg("f"), py::arg("lambdas"), py::arg("freqs"),
      py::arg("w") = Complex(1.0), py::arg("threads") = 0,
      "Analysis route against the band-sum route; relative residual is the check");

  py::class_<CounterexampleCurve>(m, "CounterexampleCurve")
      .def_readonly("scenario", &CounterexampleCurve::scenario)
      .def_readonly("parameters", &CounterexampleCurve::parameters)
      .def_readonly("responses", &CounterexampleCurve::responses);

  m.def(
      "gap_counterexample",
      [](const std::vector<double>& widths, double base_step, Complex w,
         int threads) {
        return gap_counterexample(widths, base_step, WindowParam(w), threads);
      },
      py::arg("gap_widths"), py::arg("base_step") = 1.0,
      py::arg("w") = Complex(1.0), py::arg("threads") = 0,
      "Frame-sum response to widening spectral gaps");

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
