#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <random>

#include "gabor/lattice.hpp"

using gabor::FrequencySet;
using gabor::GeneratorDescriptor;
using gabor::PointSet;
using Kind = gabor::GeneratorDescriptor::Kind;

namespace {

GeneratorDescriptor arith(double lo, double hi, double step) {
  GeneratorDescriptor g;
  g.kind = Kind::kArithmetic;
  g.window_lo = lo;
  g.window_hi = hi;
  g.step = step;
  return g;
}

}  // namespace

TEST_CASE("arithmetic lattice on a symmetric window") {
  const PointSet p = gabor::generate_point_set(arith(-2.0, 2.0, 1.0));
  CHECK(p.points == std::vector<double>{-2.0, -1.0, 0.0, 1.0, 2.0});
}

TEST_CASE("gapped lattice removes the open interval") {
  GeneratorDescriptor g = arith(-5.0, 5.0, 1.0);
  g.kind = Kind::kGapped;
  g.gap_center = 0.0;
  g.gap_width = 4.0;
  const PointSet p = gabor::generate_point_set(g);
  CHECK(p.points == std::vector<double>{-5.0, -4.0, -3.0, -2.0, 2.0, 3.0, 4.0, 5.0});
}

TEST_CASE("jittered lattice is seed-deterministic") {
  GeneratorDescriptor g = arith(0.0, 10.0, 1.0);
  g.kind = Kind::kJittered;
  g.amplitude = 0.3;
  g.seed = 42;
  g.has_seed = true;
  const PointSet a = gabor::generate_point_set(g);
  const PointSet b = gabor::generate_point_set(g);
  CHECK(a.points == b.points);
  g.seed = 43;
  const PointSet c = gabor::generate_point_set(g);
  CHECK(a.points != c.points);
  CHECK(std::is_sorted(a.points.begin(), a.points.end()));
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(std::abs(a.points[i] - double(i)) <= 0.3);
  }
}

TEST_CASE("jittered lattice requires a seed and a safe amplitude") {
  GeneratorDescriptor g = arith(0.0, 5.0, 1.0);
  g.kind = Kind::kJittered;
  g.amplitude = 0.3;
  CHECK_THROWS_AS(gabor::generate_point_set(g), gabor::ValidationError);
  g.has_seed = true;
  g.amplitude = 0.5;
  CHECK_THROWS_AS(gabor::generate_point_set(g), gabor::ValidationError);
}

TEST_CASE("clustered lattice replaces the nearest point") {
  GeneratorDescriptor g = arith(0.0, 4.0, 1.0);
  g.kind = Kind::kClustered;
  g.cluster_center = 2.1;
  g.multiplicity = 3;
  g.spread = 0.01;
  const PointSet p = gabor::generate_point_set(g);
  REQUIRE(p.points.size() == 7);
  CHECK(p.points[2] == doctest::Approx(1.995));
  CHECK(p.points[3] == doctest::Approx(2.0));
  CHECK(p.points[4] == doctest::Approx(2.005));
  CHECK(std::is_sorted(p.points.begin(), p.points.end()));

  g.spread = 1.0;
  CHECK_THROWS_AS(gabor::generate_point_set(g), gabor::ValidationError);
}

TEST_CASE("frequency set records gaps and the largest gap") {
  const FrequencySet m = gabor::make_frequency_set({0.0, 0.5, 1.7, 2.0});
  const std::vector<double> expected{0.5, 1.2, 0.3};
  REQUIRE(m.gaps.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(m.gaps[i] == doctest::Approx(expected[i]).epsilon(1e-15));
  }
  CHECK(m.beta == doctest::Approx(1.2));
}

TEST_CASE("frequency set validation names the offending index") {
  try {
    gabor::make_frequency_set({0.0, 1.0, 1.0, 2.0});
    FAIL("expected ValidationError");
  } catch (const gabor::ValidationError& e) {
    CHECK(std::string(e.what()).find("index 2") != std::string::npos);
  }
  CHECK_THROWS_AS(gabor::make_frequency_set({0.0}), gabor::ValidationError);
  CHECK_THROWS_AS(gabor::make_frequency_set({1.0, 0.0}), gabor::ValidationError);
}

TEST_CASE("finiteness report on the integer lattice") {
  const auto r = gabor::finiteness_report(gabor::make_frequency_set({0, 1, 2, 3, 4}));
  CHECK(r.beta == doctest::Approx(1.0));
  CHECK(r.max_unit_count == 1);
  CHECK(r.locally_finite);
}

TEST_CASE("finiteness report sees clusters and wide gaps") {
  const auto r =
      gabor::finiteness_report(gabor::make_frequency_set({0.0, 0.1, 0.2, 5.0}));
  CHECK(r.beta == doctest::Approx(4.8));
  CHECK(r.max_unit_count == 3);
}

TEST_CASE("gap structure is translation invariant and reflection reverses it") {
  std::mt19937_64 rng(88001);
  std::uniform_real_distribution<double> gap(0.05, 2.0);
  std::vector<double> pts{0.0};
  for (int i = 0; i < 12; ++i) pts.push_back(pts.back() + gap(rng));

  const FrequencySet base = gabor::make_frequency_set(pts);
  std::vector<double> shifted = pts;
  for (auto& x : shifted) x += 17.25;
  const FrequencySet moved = gabor::make_frequency_set(shifted);
  REQUIRE(moved.gaps.size() == base.gaps.size());
  for (std::size_t i = 0; i < base.gaps.size(); ++i) {
    CHECK(moved.gaps[i] == doctest::Approx(base.gaps[i]).epsilon(1e-12));
  }
  CHECK(moved.beta == doctest::Approx(base.beta).epsilon(1e-12));
  CHECK(gabor::finiteness_report(moved).max_unit_count ==
        gabor::finiteness_report(base).max_unit_count);

  std::vector<double> reflected;
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) reflected.push_back(-*it);
  const FrequencySet mirror = gabor::make_frequency_set(reflected);
  for (std::size_t i = 0; i < base.gaps.size(); ++i) {
    CHECK(mirror.gaps[i] ==
          doctest::Approx(base.gaps[base.gaps.size() - 1 - i]).epsilon(1e-12));
  }
}

TEST_CASE("descriptor regenerates the identical point set") {
  GeneratorDescriptor g = arith(-8.0, 8.0, 0.7);
  g.kind = Kind::kJittered;
  g.amplitude = 0.2;
  g.seed = 20240817;
  g.has_seed = true;
  const PointSet a = gabor::generate_point_set(g);
  const PointSet b = gabor::generate_point_set(a.descriptor);
  CHECK(a.points == b.points);
}

TEST_CASE("points CSV round-trips exactly") {
  const PointSet p = gabor::generate_point_set(arith(-1.0, 1.0, 0.3));
  const std::string path = "/tmp/gabor_test_points.csv";
  gabor::write_points_csv(path, p.points, "lambda");
  CHECK(gabor::read_points_csv(path) == p.points);
  std::remove(path.c_str());
}
