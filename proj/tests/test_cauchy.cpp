#include "gabor/cauchy.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "support/quadrature.hpp"
#include "support/signals.hpp"

using gabor::Complex;
using gabor::FrequencySet;
using gabor::SpectralSignal;
using gabor::WindowParam;

namespace {

/// Independent route: 2πi ∫_μ^∞ f̂(ξ) e^{2πi(ξ-μ)(λ+iw)} dξ by adaptive
/// quadrature over the support.
Complex oracle_coefficient(const SpectralSignal& f, double lambda, double mu,
                           Complex w) {
  if (f.is_zero() || f.support_hi() <= mu) return Complex(0.0);
  const Complex z = Complex(lambda) + Complex(0.0, 1.0) * w;
  const double lo = std::max(f.support_lo(), mu);
  std::vector<double> cuts = testsupport::breakpoints({&f});
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(),
                            [&](double c) { return c < lo; }),
             cuts.end());
  cuts.insert(cuts.begin(), lo);
  const Complex integral = testsupport::integrate_segmented(
      [&](double xi) {
        return f.eval(xi) * std::exp(Complex(0.0, gabor::kTwoPi) * (xi - mu) * z);
      },
      cuts);
  return Complex(0.0, gabor::kTwoPi) * integral;
}

}  // namespace

TEST_CASE("window parameter requires positive real part") {
  CHECK_THROWS_AS(WindowParam(Complex(0.0, 1.0)), gabor::ValidationError);
  CHECK_THROWS_AS(WindowParam(Complex(-1.0, 0.0)), gabor::ValidationError);
  CHECK_NOTHROW(WindowParam(Complex(1.0, -0.5)));
}

TEST_CASE("unit indicator coefficient matches the closed form") {
  const SpectralSignal f = SpectralSignal::indicator(0.0, 1.0);
  const Complex c = gabor::coefficient(f, 0.0, 0.0, WindowParam(Complex(1.0)));
  const Complex expected(0.0, 1.0 - std::exp(-gabor::kTwoPi));
  CHECK(std::abs(c - expected) < 1e-12);
}

TEST_CASE("coefficient vanishes exactly at and above the support top") {
  const SpectralSignal f = SpectralSignal::indicator(0.0, 1.0);
  const WindowParam w(Complex(1.0));
  CHECK(gabor::coefficient(f, 0.7, 1.0, w) == Complex(0.0));
  CHECK(gabor::coefficient(f, 0.7, 2.5, w) == Complex(0.0));
  CHECK(gabor::coefficient(SpectralSignal(), 0.7, 0.0, w) == Complex(0.0));
}

TEST_CASE("coefficient agrees with adaptive quadrature on random signals") {
  std::mt19937_64 rng(401);
  for (int trial = 0; trial < 30; ++trial) {
    const SpectralSignal f = testsupport::random_signal(rng, -1.0, 2.0, 3, 3);
    const double lambda = testsupport::uniform(rng, -4.0, 4.0);
    const double mu = testsupport::uniform(rng, -1.5, 1.5);
    const Complex w(testsupport::uniform(rng, 0.2, 2.0),
                    testsupport::uniform(rng, -0.5, 0.5));
    const Complex got = gabor::coefficient(f, lambda, mu, WindowParam(w));
    CHECK(std::abs(got - oracle_coefficient(f, lambda, mu, w)) < 1e-11);
  }
}

TEST_CASE("coefficient is linear in the signal") {
  std::mt19937_64 rng(402);
  const SpectralSignal f = testsupport::random_signal(rng, 0.0, 2.0, 3, 3);
  const SpectralSignal g = testsupport::random_signal(rng, -0.5, 1.5, 3, 3);
  const WindowParam w(Complex(0.8, 0.1));
  const Complex a(1.5, -2.0);
  const SpectralSignal combo = gabor::add(gabor::scale(f, a), g);
  for (int k = 0; k < 10; ++k) {
    const double lambda = testsupport::uniform(rng, -3.0, 3.0);
    const double mu = testsupport::uniform(rng, -1.0, 1.0);
    const Complex lhs = gabor::coefficient(combo, lambda, mu, w);
    const Complex rhs = a * gabor::coefficient(f, lambda, mu, w) +
                        gabor::coefficient(g, lambda, mu, w);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("frequency translation shifts the mu argument exactly") {
  std::mt19937_64 rng(403);
  const SpectralSignal f = testsupport::random_signal(rng, 0.0, 1.5, 2, 3);
  const SpectralSignal g = gabor::translate(f, 0.75);
  const WindowParam w(Complex(1.2));
  for (int k = 0; k < 10; ++k) {
    const double lambda = testsupport::uniform(rng, -2.0, 2.0);
    const double mu = testsupport::uniform(rng, 0.0, 1.0);
    const Complex lhs = gabor::coefficient(g, lambda, mu, w);
    const Complex rhs = gabor::coefficient(f, lambda, mu - 0.75, w);
    CHECK(std::abs(lhs - rhs) < 1e-13);
  }
}

TEST_CASE("time translation twists the coefficient by a lattice phase") {
  // For g(t) = f(t-a) one has c_g(λ, μ) = e^{-2πiμa} c_f(λ-a, μ); the left
  // side is evaluated by quadrature since ĝ leaves the polynomial class.
  std::mt19937_64 rng(404);
  const SpectralSignal f = testsupport::random_signal(rng, 0.0, 2.0, 2, 2);
  const Complex w(1.0, 0.3);
  const double a = 0.6;
  for (int k = 0; k < 6; ++k) {
    const double lambda = testsupport::uniform(rng, -2.0, 2.0);
    const double mu = testsupport::uniform(rng, 0.0, 1.5);
    const Complex z = Complex(lambda) + Complex(0.0, 1.0) * w;
    std::vector<double> cuts = testsupport::breakpoints({&f});
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(),
                              [&](double c) { return c < mu; }),
               cuts.end());
    cuts.insert(cuts.begin(), mu);
    const Complex integral = testsupport::integrate_segmented(
        [&](double xi) {
          return f.eval(xi) * std::exp(Complex(0.0, -gabor::kTwoPi * xi * a)) *
                 std::exp(Complex(0.0, gabor::kTwoPi) * (xi - mu) * z);
        },
        cuts);
    const Complex lhs = Complex(0.0, gabor::kTwoPi) * integral;
    const Complex rhs = std::exp(Complex(0.0, -gabor::kTwoPi * mu * a)) *
                        gabor::coefficient(f, lambda - a, mu, WindowParam(w));
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("coefficients decay like 1/|λ| for an indicator signal") {
  const SpectralSignal f = SpectralSignal::indicator(0.0, 1.0);
  const WindowParam w(Complex(1.0));
  for (double lambda : {10.0, 100.0, 1000.0, 1e5}) {
    const Complex c = gabor::coefficient(f, lambda, 0.0, w);
    CHECK(std::abs(c) * lambda < 1.01);
  }
}

TEST_CASE("analyze fills the table consistently with scalar calls") {
  std::mt19937_64 rng(405);
  const SpectralSignal f = testsupport::random_signal(rng, 0.0, 2.0, 3, 3);
  const FrequencySet m = gabor::make_frequency_set({0.0, 0.7, 1.3, 2.0});
  const std::vector<double> lambdas{-1.5, -0.25, 0.0, 0.8, 2.0};
  const WindowParam w(Complex(0.9, -0.2));
  const gabor::CoefficientTable table = gabor::analyze(f, lambdas, m, w);
  REQUIRE(table.values.rows() == 5);
  REQUIRE(table.values.cols() == 4);
  CHECK_FALSE(table.twisted);
  for (std::size_t r = 0; r < lambdas.size(); ++r) {
    for (std::size_t n = 0; n < m.points.size(); ++n) {
      CHECK(table.values(Eigen::Index(r), Eigen::Index(n)) ==
            gabor::coefficient(f, lambdas[r], m.points[n], w));
    }
  }
  const gabor::CoefficientTable threaded = gabor::analyze(f, lambdas, m, w, 3);
  CHECK(threaded.values == table.values);
  CHECK_THROWS_AS(gabor::analyze(f, {}, m, w), gabor::ValidationError);
}

TEST_CASE("phase twist preserves magnitudes and inverts cleanly") {
  std::mt19937_64 rng(406);
  const SpectralSignal f = testsupport::random_signal(rng, 0.0, 2.0, 3, 3);
  const FrequencySet m = gabor::make_frequency_set({0.0, 0.9, 2.0});
  const std::vector<double> lambdas{-1.0, 0.3, 1.7};
  const gabor::CoefficientTable table =
      gabor::analyze(f, lambdas, m, WindowParam(Complex(1.0)));
  const gabor::CoefficientTable twisted =
      gabor::phase_twist(table, gabor::TwistDirection::kForward);
  CHECK(twisted.twisted);
  for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
    for (Eigen::Index n = 0; n < table.values.cols(); ++n) {
      CHECK(std::abs(twisted.values(r, n)) ==
            doctest::Approx(std::abs(table.values(r, n))).epsilon(1e-14));
    }
  }
  const gabor::CoefficientTable back =
      gabor::phase_twist(twisted, gabor::TwistDirection::kInverse);
  CHECK_FALSE(back.twisted);
  CHECK((back.values - table.values).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("band-sum route reproduces analysis on an irregular lattice") {
  std::mt19937_64 rng(407);
  const FrequencySet m = gabor::make_frequency_set({-1.0, -0.3, 0.5, 1.25, 2.0});
  const SpectralSignal f = testsupport::random_signal(rng, -1.0, 2.0, 4, 3);
  const std::vector<double> lambdas{-2.0, -0.5, 0.0, 0.4, 1.1, 3.0};
  const gabor::BandIdentityResult res = gabor::band_identity_residual(
      f, lambdas, m, WindowParam(Complex(0.7, 0.15)));
  CHECK(res.scale > 0.0);
  CHECK(res.relative < 1e-12);
}

TEST_CASE("frame sum ratio is scale invariant and grows with the lambda set") {
  std::mt19937_64 rng(408);
  const SpectralSignal f = testsupport::random_signal(rng, 0.0, 2.0, 3, 3);
  const FrequencySet m = gabor::make_frequency_set({0.0, 1.0, 2.0});
  const WindowParam w(Complex(1.0));
  std::vector<double> narrow, wide;
  for (int k = -5; k <= 5; ++k) narrow.push_back(double(k));
  for (int k = -10; k <= 10; ++k) wide.push_back(double(k));
  const double nf = gabor::norm_sq(f);
  const double r_narrow = gabor::frame_sum_ratio(gabor::analyze(f, narrow, m, w), nf);
  const double r_wide = gabor::frame_sum_ratio(gabor::analyze(f, wide, m, w), nf);
  CHECK(r_narrow > 0.0);
  CHECK(r_wide >= r_narrow);

  const SpectralSignal g = gabor::scale(f, Complex(0.0, 2.0));
  const double r_scaled =
      gabor::frame_sum_ratio(gabor::analyze(g, narrow, m, w), gabor::norm_sq(g));
  CHECK(r_scaled == doctest::Approx(r_narrow).epsilon(1e-12));
  CHECK_THROWS_AS(gabor::frame_sum_ratio(gabor::analyze(f, narrow, m, w), 0.0),
                  gabor::ValidationError);
}

TEST_CASE("coefficient table CSV has the documented schema") {
  const SpectralSignal f = SpectralSignal::indicator(0.0, 1.0);
  const FrequencySet m = gabor::make_frequency_set({0.0, 1.0});
  const gabor::CoefficientTable table =
      gabor::analyze(f, {0.0, 0.5}, m, WindowParam(Complex(1.0)));
  const std::string path = "coeff_schema_test.csv";
  gabor::write_coefficients_csv(path, table, "schema");
  std::ifstream in(path);
  REQUIRE(bool(in));
  std::string line;
  std::getline(in, line);
  CHECK(line == "# schema");
  std::getline(in, line);
  CHECK(line == "lambda,mu,re,im");
  int rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 4);
  std::remove(path.c_str());
}
