#pragma once

#include <Eigen/Dense>
#include <string>

#include "gabor/spectrum.hpp"

namespace gabor {

/// Cauchy window parameter. Analysis assumes Re w > 0; for Re w < 0 use the
/// reflection t -> -t, which maps the system to the conjugate parameter -w̄.
struct WindowParam {
  Complex w;
  explicit WindowParam(Complex w_) : w(w_) {
    if (!(w.real() > 0.0) || !std::isfinite(w.real()) || !std::isfinite(w.imag())) {
      throw ValidationError("cauchy.window_param: requires finite Re w > 0");
    }
  }
};

/// Frame coefficient against the atom at (λ, μ):
///   c = 2πi ∫_μ^∞ f̂(ξ) e^{2πi(ξ-μ)(λ+iw)} dξ,
/// the boundary-value form of the time-side pairing with the shifted kernel.
Complex coefficient(const SpectralSignal& f, double lambda, double mu,
                    const WindowParam& w);

/// Dense table of coefficients; rows follow `lambdas`, columns the lattice.
/// `twisted` records whether entries carry the e^{2πi μ_n λ} phase.
struct CoefficientTable {
  std::vector<double> lambdas;
  FrequencySet m;
  Complex w{1.0, 0.0};
  bool twisted = false;
  Eigen::MatrixXcd values;
};

CoefficientTable analyze(const SpectralSignal& f, const std::vector<double>& lambdas,
                         const FrequencySet& m, const WindowParam& w, int threads = 0);

enum class TwistDirection { kForward, kInverse };

/// Multiplies entries by e^{±2πi μ_n λ} and flips the `twisted` flag.
CoefficientTable phase_twist(const CoefficientTable& table, TwistDirection direction);

/// Comparison of the analysis route against the band-sum route
///   c_{λ,n} = 2πi Σ_{k≥n} h_k(λ+iw) e^{2πi(μ_k-μ_n)(λ+iw)}.
struct BandIdentityResult {
  double max_abs_residual = 0.0;
  double scale = 0.0;  // largest |c| over the table
  double relative = 0.0;
};

BandIdentityResult band_identity_residual(const SpectralSignal& f,
                                          const std::vector<double>& lambdas,
                                          const FrequencySet& m, const WindowParam& w,
                                          int threads = 0);

/// Sum of |c|^2 over the whole table divided by ||f||^2.
double frame_sum_ratio(const CoefficientTable& table, double f_norm_sq);

/// CSV schema: lambda, mu, re, im (row-major over the table).
void write_coefficients_csv(const std::string& path, const CoefficientTable& table,
                            const std::string& tag);

}  // namespace gabor
