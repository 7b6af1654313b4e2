#include "gabor/expquad.hpp"

#include <algorithm>
#include <cmath>

namespace gabor {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (!finite(coeffs_[i])) {
      throw ValidationError("expquad.polynomial: non-finite coefficient at index " +
                            std::to_string(i));
    }
  }
  trim();
  if (degree() > kMaxPolyDegree) {
    throw ValidationError("expquad.polynomial: degree " + std::to_string(degree()) +
                          " exceeds cap " + std::to_string(kMaxPolyDegree));
  }
}

Polynomial Polynomial::constant(Complex c) { return Polynomial({c}); }

Polynomial Polynomial::monomial(int degree, Complex scale) {
  if (degree < 0 || degree > kMaxPolyDegree) {
    throw ValidationError("expquad.polynomial: monomial degree out of range");
  }
  std::vector<Complex> c(std::size_t(degree) + 1, Complex(0.0));
  c.back() = scale;
  return Polynomial(std::move(c));
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == Complex(0.0)) coeffs_.pop_back();
}

Complex Polynomial::eval(Complex x) const {
  Complex acc(0.0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial();
  std::vector<Complex> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = double(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::shifted(Complex a) const {
  if (coeffs_.empty()) return Polynomial();
  // Binomial recomposition: q_j = sum_{k>=j} C(k,j) p_k a^(k-j).
  const int n = int(coeffs_.size());
  std::vector<Complex> q(coeffs_.size(), Complex(0.0));
  for (int k = 0; k < n; ++k) {
    Complex binom(1.0);
    Complex apow(1.0);
    for (int j = k; j >= 0; --j) {
      q[j] += binom * coeffs_[k] * apow;
      if (j > 0) {
        binom *= double(j);
        binom /= double(k - j + 1);
        apow *= a;
      }
    }
  }
  return Polynomial(std::move(q));
}

Polynomial Polynomial::conjugated() const {
  std::vector<Complex> c(coeffs_.size());
  for (std::size_t k = 0; k < coeffs_.size(); ++k) c[k] = std::conj(coeffs_[k]);
  return Polynomial(std::move(c));
}

Polynomial Polynomial::scaled(Complex s) const {
  std::vector<Complex> c(coeffs_.size());
  for (std::size_t k = 0; k < coeffs_.size(); ++k) c[k] = s * coeffs_[k];
  return Polynomial(std::move(c));
}

Polynomial operator+(const Polynomial& p, const Polynomial& q) {
  std::vector<Complex> c(std::max(p.coeffs_.size(), q.coeffs_.size()), Complex(0.0));
  for (std::size_t k = 0; k < p.coeffs_.size(); ++k) c[k] += p.coeffs_[k];
  for (std::size_t k = 0; k < q.coeffs_.size(); ++k) c[k] += q.coeffs_[k];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& p, const Polynomial& q) {
  return p + q.scaled(Complex(-1.0));
}

Polynomial operator*(const Polynomial& p, const Polynomial& q) {
  if (p.is_zero() || q.is_zero()) return Polynomial();
  return Polynomial(convolve(p.coeffs_, q.coeffs_));
}

std::vector<Complex> convolve(const std::vector<Complex>& p,
                              const std::vector<Complex>& q) {
  if (p.empty() || q.empty()) return {};
  std::vector<Complex> r(p.size() + q.size() - 1, Complex(0.0));
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return r;
}

Complex integrate_raw(const std::vector<Complex>& coeffs, double a, double b) {
  Complex acc(0.0);
  double pa = a, pb = b;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    acc += coeffs[k] * (pb - pa) / double(k + 1);
    pa *= a;
    pb *= b;
  }
  return acc;
}

namespace {

// Series route, valid for |s|(b-a) <= 1/2:
//   I = e^{sm} * sum_j s^j/j! * ∫_{-h}^{h} q(u) u^j du,  q(u) = p(m+u).
// Odd total powers integrate to zero; terms decay at least like (|s|h)^j/j!.
Complex series_route(const Polynomial& p, Complex s, double a, double b) {
  const double m = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const Polynomial q = p.shifted(Complex(m));
  const auto& c = q.coeffs();
  if (c.empty()) return Complex(0.0);

  // moment(n) = ∫_{-h}^{h} u^n du
  auto moment = [h](int n) {
    if (n % 2 != 0) return 0.0;
    return 2.0 * std::pow(h, n + 1) / double(n + 1);
  };

  Complex acc(0.0);
  Complex spow(1.0);  // s^j / j!
  constexpr int kMaxTerms = 60;
  // Terms of one parity can vanish identically (symmetric q), so stop only
  // after two consecutive negligible terms.
  int small_streak = 0;
  for (int j = 0; j < kMaxTerms && small_streak < 2; ++j) {
    Complex mj(0.0);
    for (int k = 0; k < int(c.size()); ++k) mj += c[std::size_t(k)] * moment(k + j);
    const Complex term = spow * mj;
    acc += term;
    small_streak =
        std::abs(term) <= 1e-18 * (1.0 + std::abs(acc)) ? small_streak + 1 : 0;
    spow *= s / double(j + 1);
  }
  return guarded_exp(s * m, "expquad.exp_poly_integral") * acc;
}

// Integration-by-parts route:
//   I = sum_j (-1)^j [p^(j)(b) e^{sb} - p^(j)(a) e^{sa}] / s^{j+1}.
Complex parts_route(const Polynomial& p, Complex s, double a, double b) {
  const Complex ea = guarded_exp(s * a, "expquad.exp_poly_integral");
  const Complex eb = guarded_exp(s * b, "expquad.exp_poly_integral");
  Complex acc(0.0);
  Complex sign(1.0);
  Complex spow = s;
  Polynomial d = p;
  while (true) {
    acc += sign * (d.eval(Complex(b)) * eb - d.eval(Complex(a)) * ea) / spow;
    if (d.degree() == 0) break;
    d = d.derivative();
    sign = -sign;
    spow *= s;
  }
  return acc;
}

}  // namespace

Complex exp_poly_integral(const Polynomial& p, Complex s, double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !finite(s)) {
    throw ValidationError("expquad.exp_poly_integral: non-finite argument");
  }
  if (a > b) return -exp_poly_integral(p, s, b, a);
  if (a == b || p.is_zero()) return Complex(0.0);
  if (std::max(s.real() * a, s.real() * b) > kExpGuard) {
    throw NumericError(
        "expquad.exp_poly_integral: endpoint exponent exceeds overflow guard " +
        std::to_string(kExpGuard));
  }
  const double width = b - a;
  const double smag = std::abs(s);
  if (smag * width <= 0.5) return series_route(p, s, a, b);
  // For small |s| the parts sum cancels catastrophically: its terms grow like
  // |p^(j)|/|s|^{j+1} while the result stays O(1). Panelled series is stable
  // there; parts is reserved for |s| large enough that its terms decay.
  if (smag < 2.0 * double(kMaxPolyDegree + 1)) {
    const int panels = int(std::ceil(smag * width / 0.5));
    Complex acc(0.0);
    for (int k = 0; k < panels; ++k) {
      const double pa = a + width * double(k) / panels;
      const double pb = k + 1 == panels ? b : a + width * double(k + 1) / panels;
      acc += series_route(p, s, pa, pb);
    }
    return acc;
  }
  return parts_route(p, s, a, b);
}

}  // namespace gabor
