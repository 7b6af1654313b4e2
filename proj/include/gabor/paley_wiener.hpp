#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>

#include "gabor/cauchy.hpp"

namespace gabor {

/// Sentinel: pick a scale-aware default regularization (1e-10 times the
/// largest design-matrix squared singular value).
inline constexpr double kAutoEpsilon = -1.0;

/// Band-limited sampling problem over the spectrum interval [0, beta]. The
/// trial space is piecewise-linear on a uniform grid of grid_dim nodes.
/// `shift` moves the evaluation points to λ+iw (used when samples come from
/// the upper half-plane); `taper_roll` controls the concentration taper of
/// sampling_constants (negative → one tenth of the window half-length), and
/// `leak_cutoff` the largest fraction of a trial direction's energy allowed
/// to sit outside the tapered window before sampling_constants excludes it.
struct SamplingProblem {
  PointSet lambda;
  double beta = 1.0;
  int grid_dim = 2;
  double epsilon = kAutoEpsilon;
  std::optional<Complex> shift;
  double taper_roll = -1.0;
  double leak_cutoff = 0.01;
};

void validate(const SamplingProblem& p);

/// j-th piecewise-linear hat over the uniform grid of [0, beta].
SpectralSignal hat_basis_element(double beta, int grid_dim, int j);

/// Exact L² Gram of the hat basis (real tridiagonal, returned dense complex).
Eigen::MatrixXcd hat_gram(double beta, int grid_dim);

/// Rows follow `points`, columns the hat basis; entry (i, j) is the time-side
/// evaluation of hat j at points[i] (+ iw if the problem has a shift).
Eigen::MatrixXcd design_matrix(const SamplingProblem& p,
                               const std::vector<double>& points, int threads = 0);

/// Regularized least squares over the trial space: minimizes
/// Σ |g(λ) − value_λ|² + ε‖ĝ‖²; the sample abscissae come from `samples`.
/// With ε = 0 a rank-deficient design raises NumericError advising ε > 0.
SpectralSignal ls_reconstruct(const std::vector<std::pair<double, Complex>>& samples,
                              const SamplingProblem& p, int threads = 0);

/// Empirical sampling constants of the problem's window: extremes of the form
/// Σ_λ |f(λ)|² over unit-norm trial members, restricted to the concentrated
/// trial subspace. A trial direction whose time energy leaks outside the
/// tapered window (leak fraction > leak_cutoff) says nothing about the
/// infinite sampling constants — its samples live beyond the window — so it
/// is excluded before taking extremes. The taper is flat inside the window
/// and rolls smoothly to zero at its ends over `taper_roll`. a_raw keeps the
/// unrestricted minimum for diagnostics (it sags whenever leaky directions
/// exist); kept_dim reports the concentrated subspace dimension.
struct SamplingReport {
  double a_est = 0.0;
  double b_est = 0.0;
  double a_raw = 0.0;       // unrestricted minimum of the sampling form
  double window_lo = 0.0;   // taper support
  double window_hi = 0.0;
  double flat_lo = 0.0;     // taper ≡ 1 inside [flat_lo, flat_hi]
  double flat_hi = 0.0;
  double nyquist = 0.0;     // (grid_dim-1)/(2 beta)
  bool nyquist_ok = true;   // trial space cannot oscillate past the window
  int taper_panels = 0;
  int kept_dim = 0;         // concentrated trial directions retained
};

SamplingReport sampling_constants(const SamplingProblem& p, int threads = 0);

enum class WeightDirection { kApply, kRemove };

/// Multiplies the spectrum by e^{-2πξw} (apply) or e^{+2πξw} (remove),
/// re-approximated piecewise-polynomially with relative L² error below 1e-8.
/// Requires piece degree ≤ 3 so the product respects the degree cap.
SpectralSignal shift_weight(const SpectralSignal& f, const WindowParam& w,
                            WeightDirection direction);

}  // namespace gabor
