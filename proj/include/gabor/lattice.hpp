#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gabor/common.hpp"

namespace gabor {

/// Strictly increasing frequency lattice with its gap structure.
struct FrequencySet {
  std::vector<double> points;
  std::vector<double> gaps;  // gaps[n] = points[n+1] - points[n]
  double beta = 0.0;         // largest gap
};

/// Validates ordering and finiteness; requires at least two points.
FrequencySet make_frequency_set(std::vector<double> points);

/// Reproducible description of a generated point set.
struct GeneratorDescriptor {
  enum class Kind { kArithmetic, kJittered, kGapped, kClustered };
  Kind kind = Kind::kArithmetic;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double step = 1.0;
  double amplitude = 0.0;  // jittered: uniform in [-amplitude, amplitude]
  std::uint64_t seed = 0;  // jittered
  bool has_seed = false;
  double gap_center = 0.0;  // gapped: open interval removed
  double gap_width = 0.0;
  double cluster_center = 0.0;  // clustered: nearest lattice point replaced
  double spread = 0.0;
  int multiplicity = 1;
};

struct PointSet {
  std::vector<double> points;
  GeneratorDescriptor descriptor;
};

/// Deterministic generation; identical descriptor yields identical points.
PointSet generate_point_set(const GeneratorDescriptor& g);

struct FinitenessReport {
  double beta = 0.0;
  double min_gap = 0.0;
  int max_unit_count = 0;  // max points in [x, x+1) over left edges at points
  bool locally_finite = false;
};

FinitenessReport finiteness_report(const FrequencySet& m);

/// Single-column CSV with a leading comment line carrying `tag`.
void write_points_csv(const std::string& path, const std::vector<double>& points,
                      const std::string& tag);
std::vector<double> read_points_csv(const std::string& path);

const char* kind_name(GeneratorDescriptor::Kind kind);

}  // namespace gabor
