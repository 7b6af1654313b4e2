#include "gabor/paley_wiener.hpp"

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "doctest.h"
#include "support/signals.hpp"

using gabor::Complex;
using gabor::NumericError;
using gabor::SamplingProblem;
using gabor::SamplingReport;
using gabor::SpectralSignal;
using gabor::ValidationError;
using gabor::WeightDirection;
using gabor::WindowParam;

namespace {

SpectralSignal unit_indicator() { return SpectralSignal::indicator(0.0, 1.0); }

SamplingProblem arithmetic_problem(double step, double window, int grid_dim,
                                   double beta) {
  SamplingProblem p;
  for (long k = long(std::ceil(-window / step)); k * step <= window + 1e-9; ++k) {
    p.lambda.points.push_back(double(k) * step);
  }
  p.beta = beta;
  p.grid_dim = grid_dim;
  return p;
}

}  // namespace

TEST_CASE("hat basis forms a partition of unity with exact Gram") {
  const double beta = 1.5;
  const int g = 7;
  SpectralSignal sum = gabor::hat_basis_element(beta, g, 0);
  for (int j = 1; j < g; ++j) {
    sum = gabor::add(sum, gabor::hat_basis_element(beta, g, j));
  }
  std::mt19937_64 rng(401);
  for (int trial = 0; trial < 20; ++trial) {
    const double xi = testsupport::uniform(rng, 0.0, beta);
    CHECK(std::abs(sum.eval(xi) - 1.0) <= 1e-13);
  }

  const Eigen::MatrixXcd gram = gabor::hat_gram(beta, g);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      const Complex direct = gabor::inner_product(gabor::hat_basis_element(beta, g, i),
                                                  gabor::hat_basis_element(beta, g, j));
      CHECK(std::abs(gram(i, j) - direct) <= 1e-14);
    }
  }

  CHECK_THROWS_AS(gabor::hat_basis_element(beta, 1, 0), ValidationError);
  CHECK_THROWS_AS(gabor::hat_basis_element(beta, g, g), ValidationError);
}

TEST_CASE("spectral weight round-trips and has the closed-form norm") {
  const WindowParam w(Complex(0.8, 0.3));
  std::mt19937_64 rng(402);
  const SpectralSignal f = testsupport::random_signal(rng, 0.0, 1.5, 4, 3);
  const SpectralSignal back =
      gabor::shift_weight(gabor::shift_weight(f, w, WeightDirection::kApply), w,
                          WeightDirection::kRemove);
  CHECK(gabor::relative_l2_error(back, f) <= 1e-7);

  // ∫_0^1 e^{-4πξ} dξ = (1 - e^{-4π}) / (4π) for the flat input at w = 1.
  const SpectralSignal weighted = gabor::shift_weight(
      unit_indicator(), WindowParam(Complex(1.0, 0.0)), WeightDirection::kApply);
  const double expected = (1.0 - std::exp(-4.0 * gabor::kPi)) / (4.0 * gabor::kPi);
  CHECK(std::abs(gabor::norm_sq(weighted) - expected) <= 1e-6 * expected);
}

TEST_CASE("weighted spectrum evaluated on the real axis matches the shifted point") {
  const WindowParam w(Complex(0.9, -0.4));
  std::mt19937_64 rng(403);
  const SpectralSignal f = testsupport::random_signal(rng, 0.0, 1.0, 3, 2);
  const SpectralSignal weighted = gabor::shift_weight(f, w, WeightDirection::kApply);
  for (int trial = 0; trial < 10; ++trial) {
    const double lambda = testsupport::uniform(rng, -3.0, 3.0);
    const Complex z(lambda - w.w.imag(), w.w.real());
    const Complex direct = gabor::evaluate_time(f, z);
    const Complex routed = gabor::evaluate_time(weighted, Complex(lambda));
    CHECK(std::abs(routed - direct) <= 1e-8 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("spectral weight rejects unsupported inputs") {
  const WindowParam w(Complex(1.0, 0.0));
  gabor::Piece quartic;
  quartic.lo = 0.0;
  quartic.hi = 1.0;
  quartic.poly = gabor::Polynomial({Complex(1.0), Complex(0.0), Complex(0.0),
                                    Complex(0.0), Complex(1.0)});
  CHECK_THROWS_AS(
      gabor::shift_weight(SpectralSignal({quartic}), w, WeightDirection::kApply),
      ValidationError);

  gabor::Piece negative;
  negative.lo = -0.5;
  negative.hi = 0.5;
  negative.poly = gabor::Polynomial::constant(Complex(1.0));
  CHECK_THROWS_AS(
      gabor::shift_weight(SpectralSignal({negative}), w, WeightDirection::kApply),
      ValidationError);

  // Removing a huge weight would need e^{2π·200} > overflow guard.
  CHECK_THROWS_AS(gabor::shift_weight(unit_indicator(),
                                      WindowParam(Complex(200.0, 0.0)),
                                      WeightDirection::kRemove),
                  NumericError);
}

TEST_CASE("least squares recovers the flat spectrum from its unit-lattice samples") {
  // The flat band [0,1] samples to the Kronecker delta on the integers.
  std::vector<std::pair<double, Complex>> samples;
  for (int k = -40; k <= 40; ++k) {
    samples.emplace_back(double(k), k == 0 ? Complex(1.0) : Complex(0.0));
  }
  SamplingProblem p;
  p.beta = 1.0;
  p.grid_dim = 64;
  p.epsilon = 1e-10;
  const SpectralSignal rec = gabor::ls_reconstruct(samples, p);
  CHECK(gabor::relative_l2_error(rec, unit_indicator()) <= 1e-3);
}

TEST_CASE("least squares sends zero samples to the zero spectrum") {
  std::vector<std::pair<double, Complex>> samples;
  for (int k = -20; k <= 20; ++k) samples.emplace_back(double(k), Complex(0.0));
  SamplingProblem p;
  p.beta = 1.0;
  p.grid_dim = 16;
  p.epsilon = 1e-8;
  const SpectralSignal rec = gabor::ls_reconstruct(samples, p);
  CHECK(gabor::norm_sq(rec) <= 1e-20);
}

TEST_CASE("least squares reproduces trial-space members exactly") {
  SamplingProblem p;
  p.beta = 1.0;
  p.grid_dim = 32;
  p.epsilon = 0.0;
  std::mt19937_64 rng(404);
  // A trial member is determined by its nodal values; synthesize one.
  SpectralSignal truth = gabor::scale(gabor::hat_basis_element(1.0, 32, 0), Complex(0.0));
  for (int j = 0; j < 32; ++j) {
    const Complex c(testsupport::uniform(rng, -1.0, 1.0),
                    testsupport::uniform(rng, -1.0, 1.0));
    truth = gabor::add(truth, gabor::scale(gabor::hat_basis_element(1.0, 32, j), c));
  }
  std::vector<std::pair<double, Complex>> samples;
  double scale = 0.0;
  for (int k = -40; k <= 40; ++k) {
    const double lambda = 0.5 * double(k);
    const Complex v = gabor::evaluate_time(truth, Complex(lambda));
    scale = std::max(scale, std::abs(v));
    samples.emplace_back(lambda, v);
  }
  const SpectralSignal rec = gabor::ls_reconstruct(samples, p);
  for (const auto& [lambda, value] : samples) {
    CHECK(std::abs(gabor::evaluate_time(rec, Complex(lambda)) - value) <=
          1e-9 * scale);
  }
}

TEST_CASE("least squares flags rank deficiency and asks for regularization") {
  // All samples at one abscissa give a rank-one design.
  std::vector<std::pair<double, Complex>> samples(8, {0.25, Complex(1.0)});
  SamplingProblem p;
  p.beta = 1.0;
  p.grid_dim = 8;
  p.epsilon = 0.0;
  try {
    gabor::ls_reconstruct(samples, p);
    CHECK(false);
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("epsilon") != std::string::npos);
  }

  std::vector<std::pair<double, Complex>> few(4, {0.25, Complex(1.0)});
  CHECK_THROWS_AS(gabor::ls_reconstruct(few, p), ValidationError);
}

TEST_CASE("least squares error shrinks as the sample window grows") {
  const SpectralSignal truth =
      gabor::restrict_support(gabor::gaussian_spectrum(0.5, 0.12, 1e-10), 0.0, 1.0);
  auto error_at_window = [&](double window) {
    std::vector<std::pair<double, Complex>> samples;
    for (int k = int(-window); k <= int(window); ++k) {
      samples.emplace_back(double(k), gabor::evaluate_time(truth, Complex(double(k))));
    }
    SamplingProblem p;
    p.beta = 1.0;
    p.grid_dim = 40;
    const SpectralSignal rec = gabor::ls_reconstruct(samples, p);
    return gabor::relative_l2_error(rec, truth);
  };
  const double coarse = error_at_window(20.0);
  const double fine = error_at_window(40.0);
  CHECK(fine <= 1.1 * coarse);
}

TEST_CASE("critically sampled band reports unit constants") {
  const SamplingProblem p = arithmetic_problem(1.0, 40.0, 64, 1.0);
  const SamplingReport r = gabor::sampling_constants(p);
  CHECK(std::abs(r.a_est - 1.0) <= 0.02);
  CHECK(std::abs(r.b_est - 1.0) <= 0.02);
  // Regression band around the measured values guards silent estimator drift.
  CHECK(r.a_est >= 0.985);
  CHECK(r.a_est <= 0.9999);
  CHECK(std::abs(r.b_est - 1.0) <= 1e-5);
  CHECK(r.a_est <= r.b_est + 1e-12);
  // The unrestricted minimum sags: leaky directions depress it.
  CHECK(r.a_raw <= r.a_est + 1e-9);
  CHECK(r.a_raw <= 0.6);
  CHECK(r.kept_dim >= 20);
  CHECK(r.kept_dim <= 40);
  CHECK(r.nyquist == doctest::Approx(31.5));
  CHECK(r.nyquist_ok);
}

TEST_CASE("double-spaced sampling of the unit band collapses the lower constant") {
  const SamplingReport narrow =
      gabor::sampling_constants(arithmetic_problem(2.0, 40.0, 34, 1.0));
  CHECK(narrow.a_est <= 0.05 * narrow.b_est);
  const SamplingReport wide =
      gabor::sampling_constants(arithmetic_problem(2.0, 80.0, 68, 1.0));
  // Doubling the window deepens the collapse; the upper constant stays put.
  CHECK(wide.a_est * 5.0 <= narrow.a_est);
  CHECK(std::abs(wide.b_est - narrow.b_est) <= 0.2 * narrow.b_est);
}

TEST_CASE("oversampled band doubles the constants and is window-stable") {
  const SamplingReport r40 =
      gabor::sampling_constants(arithmetic_problem(0.5, 40.0, 64, 1.0));
  const SamplingReport r80 =
      gabor::sampling_constants(arithmetic_problem(0.5, 80.0, 64, 1.0));
  CHECK(std::abs(r40.a_est - 2.0) <= 0.04);
  CHECK(std::abs(r40.b_est - 2.0) <= 0.04);
  CHECK(std::abs(r80.a_est - r40.a_est) <= 0.1 * r40.a_est);
  CHECK(std::abs(r80.b_est - r40.b_est) <= 0.1 * r40.b_est);
}

TEST_CASE("adding interior samples never lowers either constant") {
  SamplingProblem sparse;
  for (int k = -12; k <= 12; ++k) {
    if (k % 3 == 1) continue;
    sparse.lambda.points.push_back(double(k));
  }
  sparse.beta = 1.0;
  sparse.grid_dim = 24;
  SamplingProblem dense = sparse;
  for (int k = -12; k <= 12; ++k) {
    if (k % 3 == 1) dense.lambda.points.push_back(double(k));
  }
  const SamplingReport rs = gabor::sampling_constants(sparse);
  const SamplingReport rd = gabor::sampling_constants(dense);
  CHECK(rd.a_est >= rs.a_est - 1e-10);
  CHECK(rd.b_est >= rs.b_est - 1e-10);
  CHECK(rs.a_est <= rs.b_est + 1e-12);
}

TEST_CASE("constants scale with a joint dilation of samples and band") {
  // Dilating samples by s and the band by 1/s keeps the sample sum and
  // multiplies the norm by s, so the constants pick up a 1/s.
  const SamplingProblem base = arithmetic_problem(1.0, 15.0, 24, 1.0);
  const SamplingProblem dilated = arithmetic_problem(2.0, 30.0, 24, 0.5);
  const SamplingReport rb = gabor::sampling_constants(base);
  const SamplingReport rd = gabor::sampling_constants(dilated);
  CHECK(std::abs(2.0 * rd.a_est - rb.a_est) <= 0.01 * rb.a_est);
  CHECK(std::abs(2.0 * rd.b_est - rb.b_est) <= 0.01 * rb.b_est);
}

TEST_CASE("sampling constants reject degenerate or fully leaky problems") {
  SamplingProblem single;
  single.lambda.points = {0.0};
  single.beta = 1.0;
  single.grid_dim = 4;
  CHECK_THROWS_AS(gabor::sampling_constants(single), ValidationError);

  // A half-unit window cannot concentrate any band-limited trial direction.
  SamplingProblem tiny;
  tiny.lambda.points = {-0.5, 0.0, 0.5};
  tiny.beta = 1.0;
  tiny.grid_dim = 16;
  CHECK_THROWS_AS(gabor::sampling_constants(tiny), NumericError);

  SamplingProblem bad = arithmetic_problem(1.0, 5.0, 8, 1.0);
  bad.leak_cutoff = 0.0;
  CHECK_THROWS_AS(gabor::sampling_constants(bad), ValidationError);
  bad.leak_cutoff = 1.5;
  CHECK_THROWS_AS(gabor::sampling_constants(bad), ValidationError);
}

TEST_CASE("design matrix honors the complex evaluation shift") {
  SamplingProblem p;
  p.lambda.points = {-1.0, -0.25, 0.5, 1.75};
  p.beta = 1.0;
  p.grid_dim = 8;
  p.shift = Complex(0.7, 0.2);
  const Eigen::MatrixXcd d = gabor::design_matrix(p, p.lambda.points);
  for (int i = 0; i < 4; ++i) {
    const Complex z(p.lambda.points[std::size_t(i)] - 0.2, 0.7);
    for (int j = 0; j < 8; ++j) {
      const Complex direct =
          gabor::evaluate_time(gabor::hat_basis_element(1.0, 8, j), z);
      CHECK(std::abs(d(i, j) - direct) <= 1e-14 * std::max(1.0, std::abs(direct)));
    }
  }
}
