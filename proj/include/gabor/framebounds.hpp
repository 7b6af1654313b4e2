#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gabor/cauchy.hpp"
#include "gabor/lattice.hpp"

namespace gabor {

/// Windowed Gabor family with atoms at every (λ, μ) in Λ × M. Bounds are
/// probed over a spectral trial space: piecewise-linear on grid_dim nodes
/// across [trial_lo, trial_hi] (defaulting to the hull of M), multiplied by
/// a smooth edge taper so truncation artifacts do not masquerade as frame
/// failure, then orthonormalized.
struct FrameProblem {
  PointSet lambda;            // evaluation points; repeats model clusters
  std::vector<double> freqs;  // strictly increasing; a single μ is allowed
  WindowParam w = WindowParam(Complex(1.0, 0.0));
  int grid_dim = 2;
  bool trial_override = false;  // take the trial range below, not the M hull
  double trial_lo = 0.0;
  double trial_hi = 0.0;
  double taper_width = -1.0;  // <0: one mean M gap (tenth of range if |M|=1)
                              // 0: taper off
};

void validate(const FrameProblem& p);

/// Resolved trial-space geometry. The space is piecewise-linear per segment
/// with free jumps across interior frequencies of M (the analysis kernels
/// are discontinuous exactly there, so a continuous space would lose an
/// order of accuracy); `cuts` bounds the segments and `seg_nodes` gives the
/// per-segment node counts, summing to `dim` (≈ grid_dim).
struct TrialGeometry {
  double lo = 0.0;
  double hi = 0.0;
  double taper = 0.0;
  std::vector<double> cuts;   // lo, interior μ's, hi
  std::vector<int> seg_nodes; // per segment, each ≥ 2
  int dim = 0;
};
TrialGeometry trial_geometry(const FrameProblem& p);

/// Orthonormal tapered trial basis as explicit spectra (column order of the
/// assembled matrix). Piece counts grow quadratically with grid_dim; meant
/// for diagnostics and tests at small G, not for assembly.
std::vector<SpectralSignal> trial_basis(const FrameProblem& p);

/// Analysis matrix of the family against the orthonormal trial basis:
/// |Λ|·|M| rows in λ-major order, one column per trial element.
Eigen::MatrixXcd assemble_analysis_matrix(const FrameProblem& p, int threads = 0);

struct FrameReport {
  double a_est = 0.0;  // extreme squared singular values of the analysis map
  double b_est = 0.0;
  int rows = 0;
  int cols = 0;
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  int lambda_count = 0;
  int freq_count = 0;
  double trial_lo = 0.0;
  double trial_hi = 0.0;
  double taper_width = 0.0;
  int grid_dim = 0;
  // Stability probe: the same problem on the half-width Λ window. The
  // reported problem is the "doubled" version of that probe, so a small
  // change means the estimate has stopped moving under window growth.
  bool stability_checked = false;
  double a_half = 0.0;
  double b_half = 0.0;
  double a_change = 0.0;  // relative to the full-window value
  double b_change = 0.0;
  bool stable_a = false;  // change within 10%
  bool stable_b = false;
  double assemble_ms = 0.0;
  double solve_ms = 0.0;
};

FrameReport frame_bounds(const FrameProblem& p, int threads = 0);

/// One sweep point; `error` holds the failure message when the point failed
/// (the sweep itself continues).
struct SweepEntry {
  double value = 0.0;
  FrameReport report;
  std::string error;
};

/// Re-runs frame_bounds with one parameter replaced per value, order
/// preserved. Axes: "lambda_step" (arithmetic Λ over the base hull),
/// "re_w", "cluster_mult" (each λ repeated), "taper_width", "grid_dim".
std::vector<SweepEntry> sweep(const FrameProblem& base, const std::string& axis,
                              const std::vector<double>& values, int threads = 0);

/// One CSV row per entry: axis value, bounds, geometry, stability, error.
/// A nonempty `tag` is echoed in a leading comment line.
void write_frame_reports_csv(const std::string& path, const std::string& axis,
                             const std::vector<SweepEntry>& entries,
                             const std::string& tag = "");

/// Full diagnostics of one report as a JSON object string.
std::string frame_report_json(const FrameReport& r);

}  // namespace gabor
