#pragma once

#include <string>
#include <vector>

#include "gabor/expquad.hpp"
#include "gabor/lattice.hpp"

namespace gabor {

/// One polynomial piece of a spectrum; `poly` is in the local coordinate
/// u = ξ - lo, which keeps coefficients well scaled and makes translation
/// of the piece exact.
struct Piece {
  double lo = 0.0;
  double hi = 0.0;
  Polynomial poly;
};

/// Compactly supported piecewise-polynomial spectral density.
class SpectralSignal {
public:
  SpectralSignal() = default;  // zero signal
  explicit SpectralSignal(std::vector<Piece> pieces);

  /// Constant `value` on [lo, hi).
  static SpectralSignal indicator(double lo, double hi, Complex value = Complex(1.0));

  const std::vector<Piece>& pieces() const { return pieces_; }
  bool is_zero() const { return pieces_.empty(); }
  double support_lo() const;
  double support_hi() const;

  /// Pointwise value; pieces are half-open except the final right endpoint.
  Complex eval(double xi) const;

private:
  std::vector<Piece> pieces_;
};

double norm_sq(const SpectralSignal& f);
/// ∫ f(ξ) conj(g(ξ)) dξ over the common support.
Complex inner_product(const SpectralSignal& f, const SpectralSignal& g);

SpectralSignal add(const SpectralSignal& f, const SpectralSignal& g);
SpectralSignal subtract(const SpectralSignal& f, const SpectralSignal& g);
SpectralSignal scale(const SpectralSignal& f, Complex c);
SpectralSignal translate(const SpectralSignal& f, double shift);
SpectralSignal restrict_support(const SpectralSignal& f, double lo, double hi);

double l2_error(const SpectralSignal& approx, const SpectralSignal& truth);
double relative_l2_error(const SpectralSignal& approx, const SpectralSignal& truth);

/// Time-side evaluation f(z) = ∫ f̂(ξ) e^{2πiξz} dξ at a complex point.
Complex evaluate_time(const SpectralSignal& f, Complex z);

/// One frequency band, demodulated to baseband: spectrum lives on [0, beta]
/// and equals f̂(mu + ·) there.
struct Band {
  int index = 0;
  double mu = 0.0;
  double beta = 0.0;
  SpectralSignal spectrum;
};

struct BandSet {
  std::vector<Band> bands;
  FrequencySet m;
};

/// Splits f̂ along consecutive lattice intervals [μ_n, μ_{n+1}); requires the
/// support of f̂ to lie inside the lattice hull.
BandSet band_decompose(const SpectralSignal& f, const FrequencySet& m);
SpectralSignal reassemble(const BandSet& set);

/// Piecewise-cubic approximation of exp(-π((ξ-center)/halfwidth)²) with
/// relative L² error at most tail_tol (truncation plus interpolation).
SpectralSignal gaussian_spectrum(double center, double halfwidth, double tail_tol);

/// CSV schema: xi_lo, xi_hi, c0_re, c0_im, ..., c3_re, c3_im with local
/// coefficients; degree above 3 is rejected. Values round-trip exactly.
void write_spectrum_csv(const std::string& path, const SpectralSignal& f,
                        const std::string& tag);
SpectralSignal read_spectrum_csv(const std::string& path);

}  // namespace gabor
