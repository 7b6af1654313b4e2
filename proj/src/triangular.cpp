#include "gabor/triangular.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "gabor/parallel.hpp"

namespace gabor {

GammaSequence make_gamma_sequence(const FrequencySet& m, const WindowParam& w) {
  GammaSequence seq;
  seq.w = w.w;
  seq.gammas.reserve(m.gaps.size());
  for (double gap : m.gaps) {
    seq.gammas.push_back(Complex(kTwoPi) * w.w * gap);
  }
  return seq;
}

TriangularSystem build_system(const FrequencySet& m, const WindowParam& w) {
  TriangularSystem sys;
  sys.m = m;
  sys.w = w.w;
  sys.gammas = make_gamma_sequence(m, w);
  const Eigen::Index n = Eigen::Index(m.points.size());
  sys.a = Eigen::MatrixXcd::Zero(n, n);
  sys.b = Eigen::MatrixXcd::Zero(n, n);
  // Entries have non-positive real exponent, so they underflow toward zero
  // harmlessly and never overflow.
  for (Eigen::Index row = 0; row < n; ++row) {
    for (Eigen::Index col = row; col < n; ++col) {
      const double gap_sum =
          m.points[std::size_t(col)] - m.points[std::size_t(row)];
      sys.a(row, col) = std::exp(-kTwoPi * w.w * gap_sum);
    }
  }
  for (Eigen::Index p = 0; p + 1 < n; ++p) {
    sys.b(p, p + 1) = std::exp(-sys.gammas.gammas[std::size_t(p)]);
  }
  return sys;
}

NeumannReport neumann_norm(const FrequencySet& m, const WindowParam& w, int n) {
  const int size = int(m.points.size());
  if (n < 1 || n >= size) {
    throw ValidationError("triangular.neumann_norm: N must satisfy 1 <= N < size");
  }
  NeumannReport report;
  report.min_window = std::numeric_limits<double>::infinity();
  for (int p = 0; p + n < size; ++p) {
    report.min_window = std::min(
        report.min_window, m.points[std::size_t(p + n)] - m.points[std::size_t(p)]);
  }
  report.norm = std::exp(-kTwoPi * w.w.real() * report.min_window);
  report.bound_applicable = report.min_window >= 1.0;
  report.bound_ok =
      report.bound_applicable && report.norm <= std::exp(-w.w.real());
  return report;
}

namespace {

void require_matching_window(const TriangularSystem& sys, const CoefficientTable& t,
                             const char* where) {
  if (t.m.points != sys.m.points) {
    throw ValidationError(std::string(where) +
                          ": table frequency window differs from the system");
  }
  if (std::size_t(t.values.cols()) != sys.m.points.size()) {
    throw ValidationError(std::string(where) + ": table column count mismatch");
  }
}

}  // namespace

CoefficientTable recover_omega(const TriangularSystem& sys, const CoefficientTable& d,
                               int threads) {
  require_matching_window(sys, d, "triangular.recover_omega");
  if (!d.twisted) {
    throw ValidationError(
        "triangular.recover_omega: expects the phase-twisted table");
  }
  CoefficientTable out = d;
  const Eigen::Index cols = d.values.cols();
  parallel_for(std::size_t(d.values.rows()), threads, [&](std::size_t row) {
    const Eigen::Index r = Eigen::Index(row);
    for (Eigen::Index nn = 0; nn + 1 < cols; ++nn) {
      out.values(r, nn) =
          d.values(r, nn) - sys.b(nn, nn + 1) * d.values(r, nn + 1);
    }
    // Top band: the term above the truncation is absent by construction.
  });
  return out;
}

CoefficientTable apply_system(const TriangularSystem& sys, const CoefficientTable& omega,
                              int threads) {
  require_matching_window(sys, omega, "triangular.apply_system");
  CoefficientTable out = omega;
  const Eigen::Index cols = omega.values.cols();
  parallel_for(std::size_t(omega.values.rows()), threads, [&](std::size_t row) {
    const Eigen::Index r = Eigen::Index(row);
    for (Eigen::Index nn = 0; nn < cols; ++nn) {
      Complex acc(0.0);
      for (Eigen::Index k = nn; k < cols; ++k) {
        acc += sys.a(nn, k) * omega.values(r, k);
      }
      out.values(r, nn) = acc;
    }
  });
  return out;
}

void write_triangular_csv(const std::string& path, const Eigen::MatrixXcd& mat,
                          const std::string& tag) {
  std::ofstream out(path);
  if (!out) {
    throw ValidationError("triangular.write_triangular_csv: cannot open " + path);
  }
  out << "# " << tag << "\nrow,col,re,im\n";
  char buf[100];
  for (Eigen::Index row = 0; row < mat.rows(); ++row) {
    for (Eigen::Index col = 0; col < mat.cols(); ++col) {
      const Complex v = mat(row, col);
      if (v == Complex(0.0)) continue;
      std::snprintf(buf, sizeof buf, "%lld,%lld,%.17g,%.17g\n",
                    (long long)row, (long long)col, v.real(), v.imag());
      out << buf;
    }
  }
}

}  // namespace gabor
