#pragma once

#include <optional>
#include <string>

#include "gabor/cauchy.hpp"
#include "gabor/framebounds.hpp"
#include "gabor/paley_wiener.hpp"
#include "gabor/triangular.hpp"

namespace gabor {

/// Stripped per-band samples recovered from a coefficient table: column k
/// holds h_k(λ+iw), the time trace of the k-th demodulated band, obtained by
/// twisting, inverting the bidiagonal band coupling, and dividing out the
/// 2πi normalization together with the e^{2πiμ_kλ} phase. The top frequency
/// row of the inversion carries no band below it; its magnitude is the
/// truncation boundary term and is reported against the table scale.
struct BandSamples {
  std::vector<double> lambdas;
  FrequencySet m;
  Complex w{1.0, 0.0};
  Eigen::MatrixXcd values;     // rows follow lambdas, cols the m gaps
  double boundary_max = 0.0;   // max magnitude on the top frequency row
  double scale = 0.0;          // max magnitude over the inverted table
};

BandSamples band_samples(const CoefficientTable& c, int threads = 0);

struct ReconstructionOptions {
  int grid_per_band = 64;
  double epsilon = kAutoEpsilon;
  /// When set, relative_l2_error compares the reassembled spectrum to it.
  std::optional<SpectralSignal> ground_truth;
};

struct BandResidual {
  int index = 0;
  double mu = 0.0;
  double beta = 0.0;
  double residual = 0.0;  // relative sample misfit of the band fit
  double norm_sq = 0.0;   // energy of the recovered band spectrum
};

struct ReconstructionResult {
  SpectralSignal recovered;
  bool has_truth = false;
  double relative_l2_error = 0.0;
  std::vector<BandResidual> band_residuals;  // one entry per band
  double top_band_boundary = 0.0;  // truncation proxy, relative to scale
  double lambda_leakage = 0.0;     // worst edge/peak sample ratio over bands
};

/// Full inversion chain: band samples from the table, one regularized
/// band-limited least squares per band evaluated at λ+iw, then reassembly
/// of the band spectra at their frequencies. Bands run in parallel; a band
/// failure is rethrown with its index.
ReconstructionResult reconstruct(const CoefficientTable& c,
                                 const ReconstructionOptions& opts = {},
                                 int threads = 0);

/// One experiment curve: responses against a strictly increasing parameter,
/// with every fixed choice (windows, kernels, seeds) recorded in `scenario`
/// as JSON so a rerun is byte-identical.
struct CounterexampleCurve {
  std::string scenario;
  std::vector<double> parameters;
  std::vector<double> responses;
};

/// Frame-sum response to a spectral gap: for each width G the frequency set
/// is the base_step lattice over [-16, 16] with the open interval (0, G)
/// removed, the probe is a unit-scale Gaussian spectrum (halfwidth 1, tail
/// tolerance 1e-6) centred at the gap midpoint, and the response is the
/// frame sum over 0.5ℤ∩[-40,40] divided by the probe energy. Width equal to
/// base_step removes nothing and reproduces the gapless baseline.
CounterexampleCurve gap_counterexample(const std::vector<double>& gap_widths,
                                       double base_step, const WindowParam& w,
                                       int threads = 0);

/// Upper-bound response to clustering: for each multiplicity m the base
/// problem's point nearest the λ-hull centre is replaced by m points spread
/// evenly over [x-spread/2, x+spread/2] and the response is the b_est of the
/// resulting frame problem at the fixed trial space.
CounterexampleCurve cluster_counterexample(const std::vector<int>& multiplicities,
                                           double spread, const FrameProblem& base,
                                           int threads = 0);

/// Empirical verdict thresholds. Good systems can have genuinely tiny lower
/// constants (directions just below a frequency are weighted e^{-2πw·gap}),
/// so positivity only asks that the constant be nonvanishing at working
/// precision relative to the upper one; the discriminating signal is
/// stability, keeping at least this fraction of the lower constant under
/// window+grid doubling. Illustration constants, not a decision procedure.
inline constexpr double kVerdictPositiveFraction = 1e-9;
inline constexpr double kVerdictStableFraction = 0.4;

struct TheoremScenario {
  std::string name;
  GeneratorDescriptor lambda_gen;
  GeneratorDescriptor freq_gen;
  WindowParam w{Complex(1.0, 0.0)};
  int sampling_grid = 64;  // trial dimension of the sampling stage
  int frame_grid = 64;     // trial dimension of the frame stage
};

struct StageOutcome {
  double a = 0.0;
  double b = 0.0;
  double a_doubled = 0.0;  // lower constant after window+grid doubling
  bool positive = false;
  bool stable = false;
};

struct TheoremReport {
  TheoremScenario scenario;
  FinitenessReport finiteness;
  bool finite_ok = false;
  StageOutcome sampling;  // band-limited sampling constants at beta(M)
  StageOutcome frame;     // frame bounds of the full system
  bool frame_half_stable_a = false;  // half-window probe diagnostics
  bool frame_half_stable_b = false;
  std::string verdict;  // concordant, concordant-negative, or discordant
};

/// Runs the three stages in order (lattice finiteness, sampling constants
/// for the largest gap, frame bounds) and juxtaposes the first two against
/// the third: concordant when both sides agree that the system works (or
/// that it fails), discordant otherwise.
TheoremReport theorem_check(const TheoremScenario& s, int threads = 0);

/// Scenario-level parallelism; stages inside each scenario stay sequential.
std::vector<TheoremReport> theorem_check_all(const std::vector<TheoremScenario>& ss,
                                             int threads = 0);

/// CSV schema: leading "# scenario" comment, then parameter,response rows.
void write_curve_csv(const std::string& path, const CounterexampleCurve& curve);
std::string curve_json(const CounterexampleCurve& curve);

/// CSV schema: one row per report with stage numbers, flags, and verdict.
/// A nonempty `tag` is echoed in a leading comment line.
void write_theorem_reports_csv(const std::string& path,
                               const std::vector<TheoremReport>& reports,
                               const std::string& tag = "");
std::string theorem_report_json(const TheoremReport& r);

}  // namespace gabor
