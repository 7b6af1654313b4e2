#include "gabor/cauchy.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gabor/parallel.hpp"

namespace gabor {

namespace {

const Complex kTwoPiI(0.0, kTwoPi);

}  // namespace

Complex coefficient(const SpectralSignal& f, double lambda, double mu,
                    const WindowParam& w) {
  if (!std::isfinite(lambda) || !std::isfinite(mu)) {
    throw ValidationError("cauchy.coefficient: non-finite lambda or mu");
  }
  // s has negative real part, so every factor below is bounded by 1 in
  // magnitude and the half-line truncation at the support end is exact.
  const Complex z(lambda - w.w.imag(), w.w.real());  // λ + iw
  const Complex s = kTwoPiI * z;
  Complex acc(0.0);
  for (const Piece& p : f.pieces()) {
    const double a = std::max(p.lo, mu);
    if (p.hi <= a) continue;
    const Polynomial local =
        a == p.lo ? p.poly : p.poly.shifted(Complex(a - p.lo));
    const Complex prefactor = std::exp(s * (a - mu));
    acc += prefactor * exp_poly_integral(local, s, 0.0, p.hi - a);
  }
  return kTwoPiI * acc;
}

CoefficientTable analyze(const SpectralSignal& f, const std::vector<double>& lambdas,
                         const FrequencySet& m, const WindowParam& w, int threads) {
  if (lambdas.empty()) {
    throw ValidationError("cauchy.analyze: empty lambda list");
  }
  CoefficientTable table;
  table.lambdas = lambdas;
  table.m = m;
  table.w = w.w;
  table.twisted = false;
  table.values.resize(Eigen::Index(lambdas.size()), Eigen::Index(m.points.size()));
  parallel_for(lambdas.size(), threads, [&](std::size_t row) {
    for (std::size_t n = 0; n < m.points.size(); ++n) {
      table.values(Eigen::Index(row), Eigen::Index(n)) =
          coefficient(f, lambdas[row], m.points[n], w);
    }
  });
  return table;
}

CoefficientTable phase_twist(const CoefficientTable& table, TwistDirection direction) {
  CoefficientTable out = table;
  const double sign = direction == TwistDirection::kForward ? 1.0 : -1.0;
  for (Eigen::Index row = 0; row < out.values.rows(); ++row) {
    for (Eigen::Index n = 0; n < out.values.cols(); ++n) {
      const double phase =
          sign * kTwoPi * table.m.points[std::size_t(n)] * table.lambdas[std::size_t(row)];
      out.values(row, n) *= Complex(std::cos(phase), std::sin(phase));
    }
  }
  out.twisted = direction == TwistDirection::kForward;
  return out;
}

BandIdentityResult band_identity_residual(const SpectralSignal& f,
                                          const std::vector<double>& lambdas,
                                          const FrequencySet& m, const WindowParam& w,
                                          int threads) {
  const CoefficientTable lhs = analyze(f, lambdas, m, w, threads);
  const BandSet bands = band_decompose(f, m);
  const std::size_t n_freq = m.points.size();

  std::vector<double> row_residual(lambdas.size(), 0.0);
  parallel_for(lambdas.size(), threads, [&](std::size_t row) {
    const double lambda = lambdas[row];
    const Complex z(lambda - w.w.imag(), w.w.real());  // λ + iw
    std::vector<Complex> band_value(bands.bands.size());
    for (std::size_t k = 0; k < bands.bands.size(); ++k) {
      band_value[k] = evaluate_time(bands.bands[k].spectrum, z);
    }
    double worst = 0.0;
    for (std::size_t n = 0; n < n_freq; ++n) {
      Complex rhs(0.0);
      for (std::size_t k = n; k < bands.bands.size(); ++k) {
        const Complex transport =
            std::exp(kTwoPiI * (m.points[k] - m.points[n]) * z);
        rhs += band_value[k] * transport;
      }
      rhs *= kTwoPiI;
      worst = std::max(worst,
                       std::abs(lhs.values(Eigen::Index(row), Eigen::Index(n)) - rhs));
    }
    row_residual[row] = worst;
  });

  BandIdentityResult result;
  for (double r : row_residual) {
    result.max_abs_residual = std::max(result.max_abs_residual, r);
  }
  result.scale = lhs.values.cwiseAbs().maxCoeff();
  result.relative =
      result.scale > 0.0 ? result.max_abs_residual / result.scale : 0.0;
  return result;
}

double frame_sum_ratio(const CoefficientTable& table, double f_norm_sq) {
  if (!(f_norm_sq > 0.0)) {
    throw ValidationError("cauchy.frame_sum_ratio: non-positive signal norm");
  }
  return table.values.squaredNorm() / f_norm_sq;
}

void write_coefficients_csv(const std::string& path, const CoefficientTable& table,
                            const std::string& tag) {
  std::ofstream out(path);
  if (!out) {
    throw ValidationError("cauchy.write_coefficients_csv: cannot open " + path);
  }
  out << "# " << tag << "\nlambda,mu,re,im\n";
  char buf[120];
  for (Eigen::Index row = 0; row < table.values.rows(); ++row) {
    for (Eigen::Index n = 0; n < table.values.cols(); ++n) {
      const Complex v = table.values(row, n);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n",
                    table.lambdas[std::size_t(row)], table.m.points[std::size_t(n)],
                    v.real(), v.imag());
      out << buf;
    }
  }
}

}  // namespace gabor
