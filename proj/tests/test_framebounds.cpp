#include "gabor/framebounds.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support/signals.hpp"

using gabor::Complex;
using gabor::FrameProblem;
using gabor::FrameReport;
using gabor::SpectralSignal;
using gabor::SweepEntry;
using gabor::ValidationError;
using gabor::WindowParam;

namespace {

FrameProblem integer_problem(double lambda_step, double lambda_window,
                             int m_top, int grid_dim) {
  FrameProblem p;
  for (long k = long(std::ceil(-lambda_window / lambda_step));
       double(k) * lambda_step <= lambda_window + 1e-9; ++k) {
    p.lambda.points.push_back(double(k) * lambda_step);
  }
  for (int n = 0; n <= m_top; ++n) p.freqs.push_back(double(n));
  p.w = WindowParam(Complex(1.0, 0.0));
  p.grid_dim = grid_dim;
  return p;
}

}  // namespace

TEST_CASE("trial basis is orthonormal and vanishes at the window edges") {
  FrameProblem p = integer_problem(1.0, 4.0, 4, 12);
  const gabor::TrialGeometry geom = gabor::trial_geometry(p);
  const std::vector<SpectralSignal> basis = gabor::trial_basis(p);
  REQUIRE(geom.dim >= 12);
  REQUIRE(basis.size() == std::size_t(geom.dim));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i; j < basis.size(); ++j) {
      const Complex v = gabor::inner_product(basis[i], basis[j]);
      const double want = i == j ? 1.0 : 0.0;
      CHECK(std::abs(v - Complex(want)) <= 1e-10);
    }
  }
  // The taper pins every trial member to zero at the spectral window edges.
  for (const SpectralSignal& e : basis) {
    CHECK(std::abs(e.eval(1e-9)) <= 1e-6);
    CHECK(std::abs(e.eval(4.0 - 1e-9)) <= 1e-6);
  }
}

TEST_CASE("analysis matrix agrees with the direct frame sum on trial members") {
  FrameProblem p = integer_problem(0.5, 3.0, 3, 10);
  const Eigen::MatrixXcd a = gabor::assemble_analysis_matrix(p);
  REQUIRE(a.rows() == Eigen::Index(p.lambda.points.size() * p.freqs.size()));
  const int dim = int(a.cols());
  REQUIRE(dim >= 10);

  const std::vector<SpectralSignal> basis = gabor::trial_basis(p);
  std::mt19937_64 rng(505);
  Eigen::VectorXcd coords(dim);
  SpectralSignal f;
  for (int j = 0; j < dim; ++j) {
    coords(j) = Complex(testsupport::uniform(rng, -1.0, 1.0),
                        testsupport::uniform(rng, -1.0, 1.0));
    f = gabor::add(f, gabor::scale(basis[std::size_t(j)], coords(j)));
  }
  const gabor::CoefficientTable table =
      gabor::analyze(f, p.lambda.points, gabor::make_frequency_set(p.freqs), p.w);
  const double direct = table.values.squaredNorm();
  const double through_matrix = (a * coords).squaredNorm();
  CHECK(std::abs(direct - through_matrix) <= 1e-10 * std::max(1.0, direct));
}

TEST_CASE("duplicating an atom duplicates its row exactly") {
  FrameProblem p;
  p.lambda.points = {0.0, 1.5};
  p.freqs = {0.0, 1.0};
  p.w = WindowParam(Complex(1.0, 0.0));
  p.grid_dim = 8;
  const Eigen::MatrixXcd base = gabor::assemble_analysis_matrix(p);

  FrameProblem doubled = p;
  doubled.lambda.points = {0.0, 1.5, 1.5};
  const Eigen::MatrixXcd with_dup = gabor::assemble_analysis_matrix(doubled);
  REQUIRE(with_dup.rows() == base.rows() + 2);
  // λ-major ordering: rows of the repeated λ are bitwise equal.
  for (int c = 0; c < 8; ++c) {
    CHECK(with_dup(2, c) == with_dup(4, c));
    CHECK(with_dup(3, c) == with_dup(5, c));
    CHECK(base(2, c) == with_dup(2, c));
  }
}

TEST_CASE("single atom acts with squared norm pi on a rich trial space") {
  FrameProblem p;
  p.lambda.points = {0.0};
  p.freqs = {0.0};
  p.w = WindowParam(Complex(1.0, 0.0));
  p.grid_dim = 128;
  p.trial_override = true;
  p.trial_lo = -4.0;
  p.trial_hi = 4.0;
  const FrameReport r = gabor::frame_bounds(p);
  // Rank-one analysis map: the top Rayleigh quotient approaches the squared
  // time-side norm of the atom, ∫ dt/(t²+1) = π; the bottom one is zero.
  CHECK(std::abs(r.b_est - gabor::kPi) <= 0.02 * gabor::kPi);
  CHECK(r.a_est <= 1e-10);
  CHECK(r.rows == 1);
  CHECK_FALSE(r.stability_checked);
}

TEST_CASE("duplicating every atom doubles both bounds exactly") {
  FrameProblem p = integer_problem(1.0, 6.0, 3, 16);
  const FrameReport base = gabor::frame_bounds(p);
  FrameProblem doubled = p;
  doubled.lambda.points.insert(doubled.lambda.points.end(),
                               p.lambda.points.begin(), p.lambda.points.end());
  const FrameReport twice = gabor::frame_bounds(doubled);
  CHECK(twice.a_est == doctest::Approx(2.0 * base.a_est).epsilon(1e-10));
  CHECK(twice.b_est == doctest::Approx(2.0 * base.b_est).epsilon(1e-10));
}

TEST_CASE("denser evaluation points separate the lower bound") {
  // Same frequency window, trial space, and weight; only the λ density
  // changes across the critical spacing.
  FrameProblem dense = integer_problem(0.8, 20.0, 4, 48);
  FrameProblem sparse = integer_problem(1.25, 20.0, 4, 48);
  const FrameReport rd = gabor::frame_bounds(dense);
  const FrameReport rs = gabor::frame_bounds(sparse);
  CHECK(rd.a_est >= 10.0 * std::max(rs.a_est, 1e-300));
  CHECK(rd.b_est > 0.0);
  CHECK(rs.b_est > 0.0);
  CHECK(rs.a_est <= rs.b_est);
}

TEST_CASE("enlarging the atom windows never lowers either bound") {
  FrameProblem small;
  small.lambda.points = {-2.0, -1.0, 0.0, 1.0, 2.0};
  small.freqs = {0.0, 1.0, 2.0, 3.0};
  small.w = WindowParam(Complex(1.0, 0.0));
  small.grid_dim = 12;
  small.trial_override = true;
  small.trial_lo = 0.0;
  small.trial_hi = 3.0;
  FrameProblem big = small;
  big.lambda.points.push_back(3.0);
  big.lambda.points.push_back(-3.0);
  big.freqs.push_back(4.0);
  const FrameReport rs = gabor::frame_bounds(small);
  const FrameReport rb = gabor::frame_bounds(big);
  CHECK(rb.a_est >= rs.a_est - 1e-10);
  CHECK(rb.b_est >= rs.b_est - 1e-10);
}

TEST_CASE("refining the trial grid tightens the bounds one-sidedly") {
  FrameProblem coarse = integer_problem(1.0, 8.0, 4, 17);
  FrameProblem fine = coarse;
  fine.grid_dim = 33;  // nodes nest, so the coarse space embeds in the fine
  const FrameReport rc = gabor::frame_bounds(coarse);
  const FrameReport rf = gabor::frame_bounds(fine);
  CHECK(rf.a_est <= rc.a_est + 1e-8);
  CHECK(rf.b_est >= rc.b_est - 1e-8);
}

TEST_CASE("sweep preserves order, records bad points, and matches direct calls") {
  FrameProblem base = integer_problem(1.0, 10.0, 3, 16);
  const std::vector<double> steps = {0.6, 0.8, 1.0, 1.25};
  const std::vector<SweepEntry> entries = gabor::sweep(base, "lambda_step", steps);
  REQUIRE(entries.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(entries[i].value == steps[i]);
    CHECK(entries[i].error.empty());
  }
  // Lower bound never improves as the evaluation set thins (10% slack).
  for (std::size_t i = 0; i + 1 < 4; ++i) {
    CHECK(entries[i + 1].report.a_est <= 1.1 * entries[i].report.a_est);
  }

  const std::vector<SweepEntry> single = gabor::sweep(base, "re_w", {1.0});
  const FrameReport direct = gabor::frame_bounds(base);
  CHECK(single[0].report.a_est == doctest::Approx(direct.a_est).epsilon(1e-12));
  CHECK(single[0].report.b_est == doctest::Approx(direct.b_est).epsilon(1e-12));

  // A nonpositive Re w is invalid; the sweep records it and continues.
  const std::vector<SweepEntry> mixed = gabor::sweep(base, "re_w", {0.5, -1.0, 2.0});
  CHECK(mixed[0].error.empty());
  CHECK_FALSE(mixed[1].error.empty());
  CHECK(mixed[2].error.empty());
  CHECK(mixed[0].report.b_est > 0.0);
  CHECK(mixed[2].report.b_est > 0.0);

  CHECK_THROWS_AS(gabor::sweep(base, "no_such_axis", {1.0}), ValidationError);
}

TEST_CASE("frame reports serialize to CSV rows and JSON diagnostics") {
  FrameProblem base = integer_problem(1.0, 6.0, 2, 10);
  const std::vector<SweepEntry> entries = gabor::sweep(base, "re_w", {1.0, -2.0});
  const char* path = "framebounds_test_sweep.csv";
  gabor::write_frame_reports_csv(path, "re_w", entries);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("#", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("axis,value,", 0) == 0);
  int rows = 0;
  std::vector<std::string> data_lines;
  while (std::getline(in, line)) {
    if (!line.empty()) {
      ++rows;
      data_lines.push_back(line);
    }
  }
  CHECK(rows == 2);
  CHECK(data_lines[1].find("re_w,-2") == 0);
  CHECK(data_lines[1].find("Re") != std::string::npos);  // error text present
  std::remove(path);

  const std::string j = gabor::frame_report_json(entries[0].report);
  CHECK(j.find("\"a_est\"") != std::string::npos);
  CHECK(j.find("\"stability\"") != std::string::npos);
  CHECK(j.find("\"runtime_ms\"") != std::string::npos);
}

TEST_CASE("frame problems reject malformed inputs") {
  FrameProblem p;
  p.w = WindowParam(Complex(1.0, 0.0));
  p.grid_dim = 8;
  CHECK_THROWS_AS(gabor::frame_bounds(p), ValidationError);  // empty λ
  p.lambda.points = {0.0};
  CHECK_THROWS_AS(gabor::frame_bounds(p), ValidationError);  // empty M
  p.freqs = {1.0, 1.0};
  CHECK_THROWS_AS(gabor::frame_bounds(p), ValidationError);  // non-increasing
  p.freqs = {0.0};
  CHECK_THROWS_AS(gabor::frame_bounds(p), ValidationError);  // no trial range
  p.freqs = {0.0, 1.0};
  p.grid_dim = 1;
  CHECK_THROWS_AS(gabor::frame_bounds(p), ValidationError);  // trial too small
}
