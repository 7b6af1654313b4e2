#include "gabor/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gabor {

namespace {

constexpr const char* kCsvHeader =
    "xi_lo,xi_hi,c0_re,c0_im,c1_re,c1_im,c2_re,c2_im,c3_re,c3_im";

std::vector<Complex> abs_sq_coeffs(const Polynomial& p) {
  return convolve(p.coeffs(), p.conjugated().coeffs());
}

}  // namespace

SpectralSignal::SpectralSignal(std::vector<Piece> pieces) {
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Piece& p = pieces[i];
    if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || p.hi <= p.lo) {
      throw ValidationError("spectrum.signal: degenerate piece at index " +
                            std::to_string(i));
    }
    if (i > 0 && p.lo < pieces[i - 1].hi - 1e-12 * std::abs(p.lo)) {
      throw ValidationError("spectrum.signal: overlapping pieces at index " +
                            std::to_string(i));
    }
  }
  pieces_.reserve(pieces.size());
  for (auto& p : pieces) {
    if (!p.poly.is_zero()) pieces_.push_back(std::move(p));
  }
}

SpectralSignal SpectralSignal::indicator(double lo, double hi, Complex value) {
  return SpectralSignal({Piece{lo, hi, Polynomial::constant(value)}});
}

double SpectralSignal::support_lo() const {
  return pieces_.empty() ? 0.0 : pieces_.front().lo;
}

double SpectralSignal::support_hi() const {
  return pieces_.empty() ? 0.0 : pieces_.back().hi;
}

Complex SpectralSignal::eval(double xi) const {
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    const bool last = (i + 1 == pieces_.size());
    if (xi >= p.lo && (xi < p.hi || (last && xi == p.hi))) {
      return p.poly.eval(Complex(xi - p.lo));
    }
  }
  return Complex(0.0);
}

double norm_sq(const SpectralSignal& f) {
  double acc = 0.0;
  for (const Piece& p : f.pieces()) {
    acc += integrate_raw(abs_sq_coeffs(p.poly), 0.0, p.hi - p.lo).real();
  }
  return acc;
}

namespace {

// Merged breakpoint walk over two piece lists; fn(lo, hi, qa, qb) receives
// local polynomials re-based at `lo` (null when a signal vanishes there).
template <typename Fn>
void union_mesh(const SpectralSignal& a, const SpectralSignal& b, Fn&& fn) {
  std::vector<double> cuts;
  for (const Piece& p : a.pieces()) {
    cuts.push_back(p.lo);
    cuts.push_back(p.hi);
  }
  for (const Piece& p : b.pieces()) {
    cuts.push_back(p.lo);
    cuts.push_back(p.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto find_piece = [](const SpectralSignal& s, double lo, double hi) -> const Piece* {
    const double mid = 0.5 * (lo + hi);
    for (const Piece& p : s.pieces()) {
      if (p.lo <= mid && mid < p.hi) return &p;
    }
    return nullptr;
  };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    if (hi <= lo) continue;
    const Piece* pa = find_piece(a, lo, hi);
    const Piece* pb = find_piece(b, lo, hi);
    if (!pa && !pb) continue;
    Polynomial qa = pa ? pa->poly.shifted(Complex(lo - pa->lo)) : Polynomial();
    Polynomial qb = pb ? pb->poly.shifted(Complex(lo - pb->lo)) : Polynomial();
    fn(lo, hi, qa, qb);
  }
}

}  // namespace

Complex inner_product(const SpectralSignal& f, const SpectralSignal& g) {
  Complex acc(0.0);
  union_mesh(f, g, [&](double lo, double hi, const Polynomial& qf, const Polynomial& qg) {
    if (qf.is_zero() || qg.is_zero()) return;
    acc += integrate_raw(convolve(qf.coeffs(), qg.conjugated().coeffs()), 0.0, hi - lo);
  });
  return acc;
}

SpectralSignal add(const SpectralSignal& f, const SpectralSignal& g) {
  std::vector<Piece> pieces;
  union_mesh(f, g, [&](double lo, double hi, const Polynomial& qf, const Polynomial& qg) {
    pieces.push_back(Piece{lo, hi, qf + qg});
  });
  return SpectralSignal(std::move(pieces));
}

SpectralSignal subtract(const SpectralSignal& f, const SpectralSignal& g) {
  return add(f, scale(g, Complex(-1.0)));
}

SpectralSignal scale(const SpectralSignal& f, Complex c) {
  std::vector<Piece> pieces;
  pieces.reserve(f.pieces().size());
  for (const Piece& p : f.pieces()) {
    pieces.push_back(Piece{p.lo, p.hi, p.poly.scaled(c)});
  }
  return SpectralSignal(std::move(pieces));
}

SpectralSignal translate(const SpectralSignal& f, double shift) {
  std::vector<Piece> pieces;
  pieces.reserve(f.pieces().size());
  for (const Piece& p : f.pieces()) {
    pieces.push_back(Piece{p.lo + shift, p.hi + shift, p.poly});
  }
  return SpectralSignal(std::move(pieces));
}

SpectralSignal restrict_support(const SpectralSignal& f, double lo, double hi) {
  std::vector<Piece> pieces;
  for (const Piece& p : f.pieces()) {
    const double a = std::max(lo, p.lo);
    const double b = std::min(hi, p.hi);
    if (b <= a) continue;
    pieces.push_back(Piece{a, b, p.poly.shifted(Complex(a - p.lo))});
  }
  return SpectralSignal(std::move(pieces));
}

double l2_error(const SpectralSignal& approx, const SpectralSignal& truth) {
  return std::sqrt(std::max(0.0, norm_sq(subtract(approx, truth))));
}

double relative_l2_error(const SpectralSignal& approx, const SpectralSignal& truth) {
  const double denom = std::sqrt(norm_sq(truth));
  if (denom == 0.0) {
    throw ValidationError("spectrum.relative_l2_error: zero reference signal");
  }
  return l2_error(approx, truth) / denom;
}

Complex evaluate_time(const SpectralSignal& f, Complex z) {
  const Complex s = Complex(0.0, kTwoPi) * z;
  Complex acc(0.0);
  for (const Piece& p : f.pieces()) {
    const Complex base = guarded_exp(s * p.lo, "spectrum.evaluate_time");
    acc += base * exp_poly_integral(p.poly, s, 0.0, p.hi - p.lo);
  }
  return acc;
}

BandSet band_decompose(const SpectralSignal& f, const FrequencySet& m) {
  const double hull_lo = m.points.front();
  const double hull_hi = m.points.back();
  if (!f.is_zero() &&
      (f.support_lo() < hull_lo - 1e-12 || f.support_hi() > hull_hi + 1e-12)) {
    const double inside = norm_sq(restrict_support(f, hull_lo, hull_hi));
    const double escaped = std::max(0.0, norm_sq(f) - inside);
    throw ValidationError(
        "spectrum.band_decompose: signal support escapes the lattice hull; "
        "escaped mass " +
        std::to_string(escaped));
  }
  BandSet set;
  set.m = m;
  set.bands.reserve(m.gaps.size());
  for (std::size_t n = 0; n + 1 < m.points.size(); ++n) {
    Band band;
    band.index = int(n);
    band.mu = m.points[n];
    band.beta = m.gaps[n];
    band.spectrum =
        translate(restrict_support(f, m.points[n], m.points[n + 1]), -m.points[n]);
    set.bands.push_back(std::move(band));
  }
  return set;
}

SpectralSignal reassemble(const BandSet& set) {
  SpectralSignal acc;
  for (const Band& band : set.bands) {
    acc = add(acc, translate(band.spectrum, band.mu));
  }
  return acc;
}

SpectralSignal gaussian_spectrum(double center, double halfwidth, double tail_tol) {
  if (!(halfwidth > 0.0) || !std::isfinite(center)) {
    throw ValidationError("spectrum.gaussian_spectrum: invalid center/halfwidth");
  }
  if (!(tail_tol > 0.0) || tail_tol > 1e-3) {
    throw ValidationError("spectrum.gaussian_spectrum: tail_tol must lie in (0, 1e-3]");
  }
  // Truncation radius: two-sided tail energy fraction erfc(sqrt(2π) R) kept
  // below (tail_tol/2)^2.
  const double target = 0.25 * tail_tol * tail_tol;
  double lo = 0.5, hi = 12.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::erfc(std::sqrt(kTwoPi) * mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double radius = hi;
  // Panel width from the quartic Hermite error term, with a safety factor.
  const double width = std::pow(0.25 * tail_tol, 0.25);
  const int half_panels = std::max(2, int(std::ceil(radius / width)));
  const double h_u = radius / double(half_panels);

  auto value = [&](double u) { return std::exp(-kPi * u * u); };
  auto deriv_u = [&](double u) { return -kTwoPi * u * std::exp(-kPi * u * u); };

  std::vector<Piece> pieces;
  pieces.reserve(std::size_t(2 * half_panels));
  for (int j = -half_panels; j < half_panels; ++j) {
    const double u0 = double(j) * h_u;
    const double u1 = double(j + 1) * h_u;
    const double x0 = center + u0 * halfwidth;
    const double x1 = center + u1 * halfwidth;
    const double h = x1 - x0;
    const double f0 = value(u0), f1 = value(u1);
    const double d0 = deriv_u(u0) / halfwidth, d1 = deriv_u(u1) / halfwidth;
    const double c2 = (3.0 * (f1 - f0) / (h * h)) - (2.0 * d0 + d1) / h;
    const double c3 = (2.0 * (f0 - f1) / (h * h * h)) + (d0 + d1) / (h * h);
    pieces.push_back(Piece{
        x0, x1,
        Polynomial({Complex(f0), Complex(d0), Complex(c2), Complex(c3)})});
  }
  return SpectralSignal(std::move(pieces));
}

void write_spectrum_csv(const std::string& path, const SpectralSignal& f,
                        const std::string& tag) {
  std::ofstream out(path);
  if (!out) {
    throw ValidationError("spectrum.write_spectrum_csv: cannot open " + path);
  }
  out << "# " << tag << "\n" << kCsvHeader << "\n";
  char buf[64];
  for (const Piece& p : f.pieces()) {
    if (p.poly.degree() > 3) {
      throw ValidationError(
          "spectrum.write_spectrum_csv: piece degree above 3 does not fit the "
          "c0..c3 schema");
    }
    Complex c[4] = {};
    for (std::size_t k = 0; k < p.poly.coeffs().size(); ++k) c[k] = p.poly.coeffs()[k];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", p.lo, p.hi);
    out << buf;
    for (int k = 0; k < 4; ++k) {
      std::snprintf(buf, sizeof buf, ",%.17g,%.17g", c[k].real(), c[k].imag());
      out << buf;
    }
    out << "\n";
  }
}

SpectralSignal read_spectrum_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("spectrum.read_spectrum_csv: cannot open " + path);
  }
  std::vector<Piece> pieces;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.compare(0, 5, "xi_lo") == 0) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    if (vals.size() != 10) {
      throw ValidationError("spectrum.read_spectrum_csv: malformed row in " + path);
    }
    std::vector<Complex> coeffs;
    for (int k = 0; k < 4; ++k) coeffs.emplace_back(vals[2 + 2 * k], vals[3 + 2 * k]);
    pieces.push_back(Piece{vals[0], vals[1], Polynomial(std::move(coeffs))});
  }
  return SpectralSignal(std::move(pieces));
}

}  // namespace gabor
