#pragma once

#include <string>

#include "gabor/cauchy.hpp"

namespace gabor {

/// Gap phases γ_n = 2πw(μ_{n+1} - μ_n); Re γ_n > 0 whenever Re w > 0.
struct GammaSequence {
  std::vector<Complex> gammas;
  Complex w{1.0, 0.0};
};

GammaSequence make_gamma_sequence(const FrequencySet& m, const WindowParam& w);

/// Finite truncation of the band-coupling system. A is upper-triangular with
/// unit diagonal and a_{n,k} = e^{-2πw(μ_k-μ_n)} for k ≥ n; B holds only the
/// superdiagonal b_{p,p+1} = e^{-γ_p}; A = (I-B)^{-1} exactly.
struct TriangularSystem {
  FrequencySet m;
  Complex w{1.0, 0.0};
  GammaSequence gammas;
  Eigen::MatrixXcd a;
  Eigen::MatrixXcd b;
};

TriangularSystem build_system(const FrequencySet& m, const WindowParam& w);

/// Operator norm of B^N. The power lives on the N-th superdiagonal only, so
/// the norm is the largest entry magnitude e^{-2π Re w (μ_{p+N}-μ_p)}.
/// The coarse reference bound e^{-Re w} is checked only when every N-step
/// window is at least 1 long; the exact value is then stronger by the 2π in
/// the exponent.
struct NeumannReport {
  double norm = 0.0;
  double min_window = 0.0;
  bool bound_applicable = false;
  bool bound_ok = false;
};

NeumannReport neumann_norm(const FrequencySet& m, const WindowParam& w, int n);

/// Solves d = Aω row-wise by applying the exact bidiagonal inverse:
/// ω_n = d_n - e^{-γ_n} d_{n+1}, with the top band passing through unchanged.
CoefficientTable recover_omega(const TriangularSystem& sys, const CoefficientTable& d,
                               int threads = 0);

/// Row-wise multiplication by the A truncation (the forward map ω -> d).
CoefficientTable apply_system(const TriangularSystem& sys, const CoefficientTable& omega,
                              int threads = 0);

/// CSV schema: row, col, re, im; exact zeros are omitted.
void write_triangular_csv(const std::string& path, const Eigen::MatrixXcd& mat,
                          const std::string& tag);

}  // namespace gabor
