#include "gabor/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

namespace gabor {

namespace {

void check_finite(const std::vector<double>& points, const char* where) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i])) {
      throw ValidationError(std::string(where) + ": non-finite entry at index " +
                            std::to_string(i));
    }
  }
}

void check_strictly_increasing(const std::vector<double>& points, const char* where) {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i] == points[i - 1]) {
      throw ValidationError(std::string(where) + ": duplicate entry at index " +
                            std::to_string(i));
    }
    if (points[i] < points[i - 1]) {
      throw ValidationError(std::string(where) +
                            ": not strictly increasing at index " + std::to_string(i));
    }
  }
}

// Deterministic uniform in [0, 1) from raw engine output, independent of
// libstdc++ distribution internals.
double uniform01(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> arithmetic_points(const GeneratorDescriptor& g) {
  const long count = long(std::floor((g.window_hi - g.window_lo) / g.step + 1e-9)) + 1;
  std::vector<double> pts;
  pts.reserve(std::size_t(count));
  for (long k = 0; k < count; ++k) pts.push_back(g.window_lo + double(k) * g.step);
  return pts;
}

void validate_common(const GeneratorDescriptor& g) {
  if (!std::isfinite(g.window_lo) || !std::isfinite(g.window_hi) ||
      g.window_lo >= g.window_hi) {
    throw ValidationError("lattice.generate_point_set: invalid window");
  }
  if (!std::isfinite(g.step) || g.step <= 0.0) {
    throw ValidationError("lattice.generate_point_set: step must be positive");
  }
}

}  // namespace

FrequencySet make_frequency_set(std::vector<double> points) {
  if (points.size() < 2) {
    throw ValidationError("lattice.make_frequency_set: need at least 2 points");
  }
  check_finite(points, "lattice.make_frequency_set");
  check_strictly_increasing(points, "lattice.make_frequency_set");
  FrequencySet m;
  m.points = std::move(points);
  m.gaps.resize(m.points.size() - 1);
  for (std::size_t n = 0; n + 1 < m.points.size(); ++n) {
    m.gaps[n] = m.points[n + 1] - m.points[n];
  }
  m.beta = *std::max_element(m.gaps.begin(), m.gaps.end());
  return m;
}

PointSet generate_point_set(const GeneratorDescriptor& g) {
  validate_common(g);
  std::vector<double> pts;
  switch (g.kind) {
    case GeneratorDescriptor::Kind::kArithmetic:
      pts = arithmetic_points(g);
      break;
    case GeneratorDescriptor::Kind::kJittered: {
      if (!g.has_seed) {
        throw ValidationError(
            "lattice.generate_point_set: jittered generator requires a seed");
      }
      if (!(g.amplitude >= 0.0) || g.amplitude >= 0.5 * g.step) {
        throw ValidationError(
            "lattice.generate_point_set: jitter amplitude must lie in [0, step/2)");
      }
      pts = arithmetic_points(g);
      std::mt19937_64 rng(g.seed);
      for (auto& x : pts) x += g.amplitude * (2.0 * uniform01(rng) - 1.0);
      break;
    }
    case GeneratorDescriptor::Kind::kGapped: {
      if (!(g.gap_width >= 0.0) || !std::isfinite(g.gap_center)) {
        throw ValidationError("lattice.generate_point_set: invalid gap parameters");
      }
      const double lo = g.gap_center - 0.5 * g.gap_width;
      const double hi = g.gap_center + 0.5 * g.gap_width;
      for (double x : arithmetic_points(g)) {
        if (x > lo && x < hi) continue;
        pts.push_back(x);
      }
      break;
    }
    case GeneratorDescriptor::Kind::kClustered: {
      if (g.multiplicity < 1) {
        throw ValidationError("lattice.generate_point_set: multiplicity must be >= 1");
      }
      if (!(g.spread >= 0.0) || g.spread >= g.step) {
        throw ValidationError(
            "lattice.generate_point_set: cluster spread must lie in [0, step)");
      }
      if (g.multiplicity > 1 && g.spread == 0.0) {
        throw ValidationError(
            "lattice.generate_point_set: positive spread required for multiplicity > 1");
      }
      std::vector<double> base = arithmetic_points(g);
      std::size_t nearest = 0;
      for (std::size_t i = 1; i < base.size(); ++i) {
        if (std::abs(base[i] - g.cluster_center) <
            std::abs(base[nearest] - g.cluster_center)) {
          nearest = i;
        }
      }
      for (std::size_t i = 0; i < base.size(); ++i) {
        if (i != nearest) {
          pts.push_back(base[i]);
          continue;
        }
        if (g.multiplicity == 1) {
          pts.push_back(base[i]);
        } else {
          for (int j = 0; j < g.multiplicity; ++j) {
            pts.push_back(base[i] +
                          g.spread * (double(j) / double(g.multiplicity - 1) - 0.5));
          }
        }
      }
      break;
    }
  }
  check_strictly_increasing(pts, "lattice.generate_point_set");
  if (pts.empty()) {
    throw ValidationError("lattice.generate_point_set: window contains no points");
  }
  return PointSet{std::move(pts), g};
}

FinitenessReport finiteness_report(const FrequencySet& m) {
  FinitenessReport r;
  r.beta = m.beta;
  r.min_gap = *std::min_element(m.gaps.begin(), m.gaps.end());
  int max_count = 0;
  for (std::size_t i = 0; i < m.points.size(); ++i) {
    const double hi = m.points[i] + 1.0;
    int count = 0;
    for (std::size_t j = i; j < m.points.size() && m.points[j] < hi; ++j) ++count;
    max_count = std::max(max_count, count);
  }
  r.max_unit_count = max_count;
  r.locally_finite = std::isfinite(r.beta) && max_count > 0;
  return r;
}

void write_points_csv(const std::string& path, const std::vector<double>& points,
                      const std::string& tag) {
  std::ofstream out(path);
  if (!out) {
    throw ValidationError("lattice.write_points_csv: cannot open " + path);
  }
  out << "# " << tag << "\n";
  char buf[40];
  for (double x : points) {
    std::snprintf(buf, sizeof buf, "%.17g\n", x);
    out << buf;
  }
}

std::vector<double> read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("lattice.read_points_csv: cannot open " + path);
  }
  std::vector<double> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    pts.push_back(std::stod(line));
  }
  return pts;
}

const char* kind_name(GeneratorDescriptor::Kind kind) {
  switch (kind) {
    case GeneratorDescriptor::Kind::kArithmetic: return "arithmetic";
    case GeneratorDescriptor::Kind::kJittered: return "jittered";
    case GeneratorDescriptor::Kind::kGapped: return "gapped";
    case GeneratorDescriptor::Kind::kClustered: return "clustered";
  }
  return "unknown";
}

}  // namespace gabor
