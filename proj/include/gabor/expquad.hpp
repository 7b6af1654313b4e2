#pragma once

#include <vector>

#include "gabor/common.hpp"

namespace gabor {

/// Hard cap on stored polynomial degree; products beyond it are rejected.
inline constexpr int kMaxPolyDegree = 8;

/// Dense complex polynomial, coefficients ascending in the argument.
class Polynomial {
public:
  Polynomial() = default;  // zero polynomial
  explicit Polynomial(std::vector<Complex> coeffs);

  static Polynomial constant(Complex c);
  static Polynomial monomial(int degree, Complex scale = Complex(1.0));

  /// Degree after trailing-zero trim; the zero polynomial reports 0.
  int degree() const { return coeffs_.empty() ? 0 : int(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  Complex eval(Complex x) const;
  Polynomial derivative() const;
  /// Composition with a shift of the argument: result(x) = (*this)(x + a).
  Polynomial shifted(Complex a) const;
  /// Coefficient-wise conjugate: result(x) = conj((*this)(conj(x))).
  Polynomial conjugated() const;
  Polynomial scaled(Complex s) const;

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q);
  friend Polynomial operator-(const Polynomial& p, const Polynomial& q);
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q);

private:
  void trim();
  std::vector<Complex> coeffs_;
};

/// Exact ∫_a^b p(ξ) exp(sξ) dξ. Uses a convergent series for |s|(b−a) ≤ 1/2,
/// a panelled series while |s| is small, and integration by parts once |s| is
/// large enough for its terms to decay; throws NumericError when an endpoint
/// exponent exceeds the overflow guard.
Complex exp_poly_integral(const Polynomial& p, Complex s, double a, double b);

/// Raw convolution without the degree cap, for transient integrands.
std::vector<Complex> convolve(const std::vector<Complex>& p,
                              const std::vector<Complex>& q);

/// ∫_a^b over a raw coefficient list (no cap), exact monomial integration.
Complex integrate_raw(const std::vector<Complex>& coeffs, double a, double b);

}  // namespace gabor
