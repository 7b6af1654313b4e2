#include "gabor/paley_wiener.hpp"

#include <algorithm>
#include <cmath>

#include "gabor/linalg.hpp"
#include "gabor/parallel.hpp"

namespace gabor {

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; the rule
// is symmetric).
constexpr double kGlNodes[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr double kGlWeights[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

double grid_step(double beta, int grid_dim) { return beta / double(grid_dim - 1); }

// Quintic smoothstep: 0 at 0, 1 at 1, with two vanishing derivatives at both
// ends (C² taper, so panel quadrature keeps high order).
double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

}  // namespace

void validate(const SamplingProblem& p) {
  if (!(p.beta > 0.0) || !std::isfinite(p.beta)) {
    throw ValidationError("paley_wiener.problem: beta must be positive");
  }
  if (p.grid_dim < 2) {
    throw ValidationError("paley_wiener.problem: grid_dim must be at least 2");
  }
  if (p.epsilon < 0.0 && p.epsilon != kAutoEpsilon) {
    throw ValidationError(
        "paley_wiener.problem: epsilon must be nonnegative (or the auto sentinel)");
  }
  if (p.shift && !(p.shift->real() > 0.0)) {
    throw ValidationError("paley_wiener.problem: shift requires Re w > 0");
  }
  if (!(p.leak_cutoff > 0.0) || !(p.leak_cutoff <= 1.0)) {
    throw ValidationError("paley_wiener.problem: leak_cutoff must lie in (0, 1]");
  }
}

SpectralSignal hat_basis_element(double beta, int grid_dim, int j) {
  if (grid_dim < 2) {
    throw ValidationError("paley_wiener.hat_basis_element: grid_dim must be >= 2");
  }
  if (j < 0 || j >= grid_dim) {
    throw ValidationError("paley_wiener.hat_basis_element: node index out of range");
  }
  const double h = grid_step(beta, grid_dim);
  std::vector<Piece> pieces;
  if (j > 0) {
    Piece rise;
    rise.lo = double(j - 1) * h;
    rise.hi = double(j) * h;
    rise.poly = Polynomial({Complex(0.0), Complex(1.0 / h)});
    pieces.push_back(std::move(rise));
  }
  if (j + 1 < grid_dim) {
    Piece fall;
    fall.lo = double(j) * h;
    fall.hi = double(j + 1) * h;
    fall.poly = Polynomial({Complex(1.0), Complex(-1.0 / h)});
    pieces.push_back(std::move(fall));
  }
  return SpectralSignal(std::move(pieces));
}

Eigen::MatrixXcd hat_gram(double beta, int grid_dim) {
  if (grid_dim < 2) {
    throw ValidationError("paley_wiener.hat_gram: grid_dim must be >= 2");
  }
  const double h = grid_step(beta, grid_dim);
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(grid_dim, grid_dim);
  for (int j = 0; j < grid_dim; ++j) {
    const bool edge = j == 0 || j == grid_dim - 1;
    gram(j, j) = edge ? h / 3.0 : 2.0 * h / 3.0;
    if (j + 1 < grid_dim) {
      gram(j, j + 1) = h / 6.0;
      gram(j + 1, j) = h / 6.0;
    }
  }
  return gram;
}

Eigen::MatrixXcd design_matrix(const SamplingProblem& p,
                               const std::vector<double>& points, int threads) {
  validate(p);
  std::vector<SpectralSignal> hats;
  hats.reserve(std::size_t(p.grid_dim));
  for (int j = 0; j < p.grid_dim; ++j) {
    hats.push_back(hat_basis_element(p.beta, p.grid_dim, j));
  }
  Eigen::MatrixXcd d(Eigen::Index(points.size()), Eigen::Index(p.grid_dim));
  parallel_for(points.size(), threads, [&](std::size_t row) {
    const Complex z = p.shift ? Complex(points[row]) + Complex(0.0, 1.0) * *p.shift
                              : Complex(points[row]);
    for (int j = 0; j < p.grid_dim; ++j) {
      d(Eigen::Index(row), j) = evaluate_time(hats[std::size_t(j)], z);
    }
  });
  return d;
}

namespace {

SpectralSignal signal_from_nodes(double beta, int grid_dim,
                                 const Eigen::VectorXcd& values) {
  const double h = grid_step(beta, grid_dim);
  std::vector<Piece> pieces;
  pieces.reserve(std::size_t(grid_dim) - 1);
  for (int j = 0; j + 1 < grid_dim; ++j) {
    Piece p;
    p.lo = double(j) * h;
    p.hi = double(j + 1) * h;
    p.poly = Polynomial({values(j), (values(j + 1) - values(j)) / h});
    pieces.push_back(std::move(p));
  }
  return SpectralSignal(std::move(pieces));
}

}  // namespace

SpectralSignal ls_reconstruct(const std::vector<std::pair<double, Complex>>& samples,
                              const SamplingProblem& p, int threads) {
  validate(p);
  if (int(samples.size()) < p.grid_dim) {
    throw ValidationError(
        "paley_wiener.ls_reconstruct: needs at least grid_dim samples");
  }
  std::vector<double> points;
  Eigen::VectorXcd y(Eigen::Index(samples.size()));
  points.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    points.push_back(samples[i].first);
    y(Eigen::Index(i)) = samples[i].second;
  }
  const Eigen::MatrixXcd d = design_matrix(p, points, threads);

  if (p.epsilon == 0.0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(d);
    qr.setThreshold(1e-12);
    if (qr.rank() < p.grid_dim) {
      throw NumericError(
          "paley_wiener.ls_reconstruct: design matrix is rank deficient over "
          "these samples; set epsilon > 0");
    }
    return signal_from_nodes(p.beta, p.grid_dim, qr.solve(y));
  }

  const Eigen::MatrixXcd normal = d.adjoint() * d;
  double epsilon = p.epsilon;
  if (epsilon == kAutoEpsilon) {
    epsilon = 1e-10 * hermitian_extremes(normal).max_eig;
  }
  const Eigen::MatrixXcd lhs = normal + epsilon * hat_gram(p.beta, p.grid_dim);
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(lhs);
  if (ldlt.info() != Eigen::Success) {
    throw NumericError("paley_wiener.ls_reconstruct: normal equations not solvable");
  }
  return signal_from_nodes(p.beta, p.grid_dim, ldlt.solve(d.adjoint() * y));
}

SamplingReport sampling_constants(const SamplingProblem& p, int threads) {
  validate(p);
  const std::vector<double>& points = p.lambda.points;
  if (points.size() < 2) {
    throw ValidationError(
        "paley_wiener.sampling_constants: needs at least two sample points");
  }
  SamplingReport report;
  report.window_lo = *std::min_element(points.begin(), points.end());
  report.window_hi = *std::max_element(points.begin(), points.end());
  const double half = 0.5 * (report.window_hi - report.window_lo);
  if (!(half > 0.0)) {
    throw ValidationError("paley_wiener.sampling_constants: degenerate window");
  }
  const double roll = p.taper_roll > 0.0 ? std::min(p.taper_roll, half) : 0.1 * half;
  report.flat_lo = report.window_lo + roll;
  report.flat_hi = report.window_hi - roll;
  report.nyquist = double(p.grid_dim - 1) / (2.0 * p.beta);
  report.nyquist_ok =
      -report.nyquist >= report.window_lo - 1e-9 && report.nyquist <= report.window_hi + 1e-9;

  // Sampling quadratic form over the trial space; evaluation on the real axis
  // (the constants describe real sampling; any shift is handled upstream by
  // the spectral weight).
  SamplingProblem real_problem = p;
  real_problem.shift.reset();
  const Eigen::MatrixXcd d = design_matrix(real_problem, points, threads);
  const Eigen::MatrixXcd s = d.adjoint() * d;
  const Eigen::MatrixXcd gram = hat_gram(p.beta, p.grid_dim);

  // Tapered in-window time energy; its complement against the full norm
  // measures how much of a trial direction the window cannot see.
  auto taper = [&](double t) {
    if (t <= report.window_lo || t >= report.window_hi) return 0.0;
    if (t < report.flat_lo) return smoothstep((t - report.window_lo) / roll);
    if (t > report.flat_hi) return smoothstep((report.window_hi - t) / roll);
    return 1.0;
  };
  const double panel_target = std::min(0.5 / p.beta, 0.5 * roll);
  const int panels =
      int(std::ceil((report.window_hi - report.window_lo) / panel_target));
  report.taper_panels = panels;
  const double panel_width = (report.window_hi - report.window_lo) / double(panels);

  std::vector<SpectralSignal> hats;
  for (int j = 0; j < p.grid_dim; ++j) {
    hats.push_back(hat_basis_element(p.beta, p.grid_dim, j));
  }
  const int nodes_per_panel = 16;
  const int total_nodes = panels * nodes_per_panel;
  Eigen::MatrixXcd rows(total_nodes, p.grid_dim);
  Eigen::VectorXd weights(total_nodes);
  parallel_for(std::size_t(total_nodes), threads, [&](std::size_t idx) {
    const int panel = int(idx) / nodes_per_panel;
    const int node = int(idx) % nodes_per_panel;
    const double mid =
        report.window_lo + (double(panel) + 0.5) * panel_width;
    const double scale = 0.5 * panel_width;
    const int half_idx = node / 2;
    const double sign = node % 2 == 0 ? 1.0 : -1.0;
    const double t = mid + sign * scale * kGlNodes[half_idx];
    const double wq = scale * kGlWeights[half_idx];
    const double tv = taper(t);
    weights(Eigen::Index(idx)) = wq * tv;
    for (int j = 0; j < p.grid_dim; ++j) {
      rows(Eigen::Index(idx), j) =
          tv > 0.0 ? evaluate_time(hats[std::size_t(j)], Complex(t)) : Complex(0.0);
    }
  });
  Eigen::MatrixXcd t_gram = rows.adjoint() * weights.asDiagonal() * rows;
  t_gram = Eigen::MatrixXcd(0.5 * (t_gram + t_gram.adjoint()));

  // Leak operator: norm² minus tapered in-window energy, whitened by the
  // Gram so its eigenvalues are out-of-window energy fractions per direction.
  Eigen::LLT<Eigen::MatrixXcd> gram_llt(gram);
  if (gram_llt.info() != Eigen::Success) {
    throw NumericError("paley_wiener.sampling_constants: Gram factorization failed");
  }
  const Eigen::MatrixXcd lower = gram_llt.matrixL();
  Eigen::MatrixXcd leak = gram - t_gram;
  leak = lower.triangularView<Eigen::Lower>().solve(leak);
  leak = lower.triangularView<Eigen::Lower>()
             .solve(leak.adjoint())
             .adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> leak_eig(
      Eigen::MatrixXcd(0.5 * (leak + leak.adjoint())));
  if (leak_eig.info() != Eigen::Success) {
    throw NumericError("paley_wiener.sampling_constants: leak eigensolve failed");
  }
  int kept = 0;
  while (kept < p.grid_dim && leak_eig.eigenvalues()(kept) <= p.leak_cutoff) ++kept;
  report.kept_dim = kept;
  if (kept == 0) {
    throw NumericError(
        "paley_wiener.sampling_constants: every trial direction leaks outside "
        "the window; widen the window or lower grid_dim");
  }

  // Whitened sampling form restricted to the concentrated directions. Columns
  // of `basis` are Gram-orthonormal, so extremes come from a plain eigensolve.
  Eigen::MatrixXcd basis =
      lower.adjoint().triangularView<Eigen::Upper>().solve(
          leak_eig.eigenvectors().leftCols(kept));
  Eigen::MatrixXcd restricted = basis.adjoint() * s * basis;
  const EigenExtremes ext =
      hermitian_extremes(Eigen::MatrixXcd(0.5 * (restricted + restricted.adjoint())));
  report.a_est = std::max(0.0, ext.min_eig);
  report.b_est = ext.max_eig;
  report.a_raw = pencil_extremes(s, gram).min_eig;
  return report;
}

SpectralSignal shift_weight(const SpectralSignal& f, const WindowParam& w,
                            WeightDirection direction) {
  if (f.is_zero()) return f;
  if (f.support_lo() < -1e-12) {
    throw ValidationError(
        "paley_wiener.shift_weight: spectrum must live on the nonnegative axis");
  }
  const Complex sigma =
      (direction == WeightDirection::kApply ? -kTwoPi : kTwoPi) * w.w;
  if (sigma.real() * f.support_hi() > kExpGuard) {
    throw NumericError(
        "paley_wiener.shift_weight: weight reciprocal exceeds overflow guard");
  }
  // Panel length keeping the cubic Hermite fit of p·e^{σx} below 1e-8
  // relative: remainder ~ (|σ|d)^4 / 384, with a 0.5 safety factor soaking
  // the polynomial-derivative cross terms. Cubic output keeps the operation
  // closed under repeated application (apply then remove round-trips).
  const double d_target = 0.5 * std::pow(384.0 * 1e-8, 1.0 / 4.0) /
                          std::max(1e-12, std::abs(sigma));

  std::vector<Piece> pieces;
  for (const Piece& piece : f.pieces()) {
    if (piece.poly.degree() > 3) {
      throw ValidationError(
          "paley_wiener.shift_weight: piece degree above 3 cannot take the "
          "weight factor");
    }
    const Polynomial deriv = piece.poly.derivative();
    const double width = piece.hi - piece.lo;
    const int panels = std::max(1, int(std::ceil(width / d_target)));
    const double dw = width / double(panels);
    for (int k = 0; k < panels; ++k) {
      const double a = piece.lo + double(k) * dw;
      const double b = k + 1 == panels ? piece.hi : piece.lo + double(k + 1) * dw;
      const double dlen = b - a;
      // Two-point Hermite data of G(u) = p(u)e^{σu} in the panel coordinate.
      const double u0 = a - piece.lo;
      const Complex ed = std::exp(sigma * dlen);
      const Complex q0 = piece.poly.eval(Complex(u0));
      const Complex q1 = piece.poly.eval(Complex(u0 + dlen));
      const Complex g0 = q0;
      const Complex g1 = q1 * ed;
      const Complex dg0 = deriv.eval(Complex(u0)) + sigma * q0;
      const Complex dg1 = (deriv.eval(Complex(u0 + dlen)) + sigma * q1) * ed;
      const Complex c2 =
          (3.0 * (g1 - g0) - dlen * (2.0 * dg0 + dg1)) / (dlen * dlen);
      const Complex c3 =
          (2.0 * (g0 - g1) + dlen * (dg0 + dg1)) / (dlen * dlen * dlen);
      const Complex prefactor =
          guarded_exp(sigma * a, "paley_wiener.shift_weight");
      Piece out;
      out.lo = a;
      out.hi = b;
      out.poly = Polynomial({g0, dg0, c2, c3}).scaled(prefactor);
      pieces.push_back(std::move(out));
    }
  }
  return SpectralSignal(std::move(pieces));
}

}  // namespace gabor
