#include "gabor/framebounds.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "gabor/linalg.hpp"
#include "gabor/paley_wiener.hpp"
#include "gabor/parallel.hpp"
#include "json.hpp"

namespace gabor {

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// Pointwise product of piecewise polynomials on the union of breakpoints.
SpectralSignal pointwise_product(const SpectralSignal& a, const SpectralSignal& b) {
  if (a.is_zero() || b.is_zero()) return SpectralSignal();
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
  const double sliver = 1e-12 * (cuts.back() - cuts.front());
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    if (hi - lo <= sliver) continue;
    const double mid = 0.5 * (lo + hi);
    const Piece* pa = nullptr;
    const Piece* pb = nullptr;
    for (const Piece& p : a.pieces()) {
      if (p.lo <= mid && mid < p.hi) pa = &p;
    }
    for (const Piece& p : b.pieces()) {
      if (p.lo <= mid && mid < p.hi) pb = &p;
    }
    if (pa == nullptr || pb == nullptr) continue;
    Piece out;
    out.lo = lo;
    out.hi = hi;
    out.poly = pa->poly.shifted(Complex(lo - pa->lo)) *
               pb->poly.shifted(Complex(lo - pb->lo));
    pieces.push_back(std::move(out));
  }
  return SpectralSignal(std::move(pieces));
}

// Quintic smoothstep edge taper over [lo, hi]: rises across `width`, flat in
// the middle, falls across `width`. Width 0 yields the flat indicator.
SpectralSignal edge_taper(double lo, double hi, double width) {
  std::vector<Piece> pieces;
  if (width <= 0.0) {
    Piece flat;
    flat.lo = lo;
    flat.hi = hi;
    flat.poly = Polynomial::constant(Complex(1.0));
    pieces.push_back(std::move(flat));
    return SpectralSignal(std::move(pieces));
  }
  const double w3 = width * width * width;
  const double w4 = w3 * width;
  const double w5 = w4 * width;
  Piece rise;
  rise.lo = lo;
  rise.hi = lo + width;
  rise.poly = Polynomial({Complex(0.0), Complex(0.0), Complex(0.0),
                          Complex(10.0 / w3), Complex(-15.0 / w4),
                          Complex(6.0 / w5)});
  pieces.push_back(std::move(rise));
  if (hi - width > lo + width) {
    Piece flat;
    flat.lo = lo + width;
    flat.hi = hi - width;
    flat.poly = Polynomial::constant(Complex(1.0));
    pieces.push_back(std::move(flat));
  }
  // s(1-x) = 1 - s(x) for the quintic smoothstep.
  Piece fall;
  fall.lo = hi - width;
  fall.hi = hi;
  fall.poly = Polynomial({Complex(1.0), Complex(0.0), Complex(0.0),
                          Complex(-10.0 / w3), Complex(15.0 / w4),
                          Complex(-6.0 / w5)});
  pieces.push_back(std::move(fall));
  return SpectralSignal(std::move(pieces));
}

std::vector<SpectralSignal> tapered_raw_basis(const TrialGeometry& geom) {
  const SpectralSignal taper = edge_taper(geom.lo, geom.hi, geom.taper);
  std::vector<SpectralSignal> basis;
  basis.reserve(std::size_t(geom.dim));
  for (std::size_t s = 0; s + 1 < geom.cuts.size(); ++s) {
    const double lo = geom.cuts[s];
    const double len = geom.cuts[s + 1] - lo;
    const int n = geom.seg_nodes[s];
    for (int j = 0; j < n; ++j) {
      const SpectralSignal hat = translate(hat_basis_element(len, n, j), lo);
      basis.push_back(geom.taper > 0.0 ? pointwise_product(hat, taper) : hat);
    }
  }
  return basis;
}

// Exact Gram of the tapered hats (neighbors only overlap) and its Cholesky
// factor; the orthonormal basis is raw · U^{-1} with U the upper factor.
Eigen::MatrixXcd basis_cholesky(const std::vector<SpectralSignal>& basis) {
  const int g = int(basis.size());
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(g, g);
  for (int i = 0; i < g; ++i) {
    for (int j = i; j < g && j <= i + 1; ++j) {
      const Complex v = inner_product(basis[std::size_t(i)], basis[std::size_t(j)]);
      gram(i, j) = v;
      gram(j, i) = std::conj(v);
    }
  }
  Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw NumericError(
        "framebounds.trial_basis: trial Gram is not positive definite; the "
        "taper may have annihilated an edge element");
  }
  return llt.matrixU();
}

FrameProblem half_lambda_problem(const FrameProblem& p, bool& shrunk) {
  const auto [lo_it, hi_it] =
      std::minmax_element(p.lambda.points.begin(), p.lambda.points.end());
  const double center = 0.5 * (*lo_it + *hi_it);
  const double quarter = 0.25 * (*hi_it - *lo_it);
  FrameProblem half = p;
  half.lambda.points.clear();
  for (double x : p.lambda.points) {
    if (std::abs(x - center) <= quarter + 1e-12) half.lambda.points.push_back(x);
  }
  shrunk = !half.lambda.points.empty() &&
           half.lambda.points.size() < p.lambda.points.size();
  return half;
}

struct CoreResult {
  double a = 0.0;
  double b = 0.0;
  int rows = 0;
  double assemble_ms = 0.0;
  double solve_ms = 0.0;
};

CoreResult core_bounds(const FrameProblem& p, int threads) {
  CoreResult r;
  const double t0 = now_ms();
  const Eigen::MatrixXcd a = assemble_analysis_matrix(p, threads);
  const double t1 = now_ms();
  Eigen::MatrixXcd gram = a.adjoint() * a;
  gram = Eigen::MatrixXcd(0.5 * (gram + gram.adjoint()));
  const EigenExtremes ext = hermitian_extremes(gram);
  r.solve_ms = now_ms() - t1;
  r.assemble_ms = t1 - t0;
  r.rows = int(a.rows());
  r.a = std::max(0.0, ext.min_eig);
  r.b = std::max(r.a, ext.max_eig);
  return r;
}

}  // namespace

void validate(const FrameProblem& p) {
  if (p.lambda.points.empty()) {
    throw ValidationError("framebounds.problem: lambda window is empty");
  }
  for (double x : p.lambda.points) {
    if (!std::isfinite(x)) {
      throw ValidationError("framebounds.problem: lambda points must be finite");
    }
  }
  if (p.freqs.empty()) {
    throw ValidationError("framebounds.problem: frequency window is empty");
  }
  for (std::size_t i = 0; i < p.freqs.size(); ++i) {
    if (!std::isfinite(p.freqs[i])) {
      throw ValidationError("framebounds.problem: frequencies must be finite");
    }
    if (i > 0 && !(p.freqs[i] > p.freqs[i - 1])) {
      throw ValidationError(
          "framebounds.problem: frequencies must increase strictly");
    }
  }
  if (p.grid_dim < 2) {
    throw ValidationError("framebounds.problem: grid_dim must be at least 2");
  }
  if (p.trial_override && !(p.trial_hi > p.trial_lo)) {
    throw ValidationError("framebounds.problem: trial range must be nonempty");
  }
  if (!p.trial_override && p.freqs.size() < 2) {
    throw ValidationError(
        "framebounds.problem: a single frequency needs an explicit trial range");
  }
}

TrialGeometry trial_geometry(const FrameProblem& p) {
  validate(p);
  TrialGeometry geom;
  if (p.trial_override) {
    geom.lo = p.trial_lo;
    geom.hi = p.trial_hi;
  } else {
    geom.lo = p.freqs.front();
    geom.hi = p.freqs.back();
  }
  const double range = geom.hi - geom.lo;
  double width = p.taper_width;
  if (width < 0.0) {
    width = p.freqs.size() >= 2
                ? (p.freqs.back() - p.freqs.front()) / double(p.freqs.size() - 1)
                : 0.1 * range;
  }
  geom.taper = std::min(width, 0.45 * range);
  // Segment the trial range at interior frequencies: each analysis kernel is
  // discontinuous at its own frequency, so the trial space allows a jump
  // there. Node counts target the uniform spacing range/(grid_dim-1).
  geom.cuts.push_back(geom.lo);
  const double slack = 1e-9 * range;
  for (double mu : p.freqs) {
    if (mu > geom.lo + slack && mu < geom.hi - slack) geom.cuts.push_back(mu);
  }
  geom.cuts.push_back(geom.hi);
  const double h = range / double(p.grid_dim - 1);
  for (std::size_t s = 0; s + 1 < geom.cuts.size(); ++s) {
    const double len = geom.cuts[s + 1] - geom.cuts[s];
    const int n = std::max(2, 1 + int(std::ceil(len / h - 1e-9)));
    geom.seg_nodes.push_back(n);
    geom.dim += n;
  }
  return geom;
}

std::vector<SpectralSignal> trial_basis(const FrameProblem& p) {
  const TrialGeometry geom = trial_geometry(p);
  const std::vector<SpectralSignal> raw = tapered_raw_basis(geom);
  const Eigen::MatrixXcd upper = basis_cholesky(raw);
  const Eigen::MatrixXcd combo = upper.triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXcd::Identity(geom.dim, geom.dim));
  std::vector<SpectralSignal> basis;
  basis.reserve(std::size_t(geom.dim));
  for (int j = 0; j < geom.dim; ++j) {
    SpectralSignal e;
    for (int k = 0; k <= j; ++k) {
      e = add(e, scale(raw[std::size_t(k)], combo(k, j)));
    }
    basis.push_back(std::move(e));
  }
  return basis;
}

Eigen::MatrixXcd assemble_analysis_matrix(const FrameProblem& p, int threads) {
  const TrialGeometry geom = trial_geometry(p);
  const std::vector<SpectralSignal> raw = tapered_raw_basis(geom);
  const Eigen::MatrixXcd upper = basis_cholesky(raw);
  const std::size_t n_freq = p.freqs.size();
  const std::size_t n_rows = p.lambda.points.size() * n_freq;
  Eigen::MatrixXcd d(Eigen::Index(n_rows), Eigen::Index(geom.dim));
  parallel_for(n_rows, threads, [&](std::size_t row) {
    const double lambda = p.lambda.points[row / n_freq];
    const double mu = p.freqs[row % n_freq];
    for (int j = 0; j < geom.dim; ++j) {
      d(Eigen::Index(row), j) = coefficient(raw[std::size_t(j)], lambda, mu, p.w);
    }
  });
  // Column Gram of the trial basis becomes the identity: right-multiply by
  // the inverse upper Cholesky factor of the raw Gram.
  return upper.triangularView<Eigen::Upper>()
      .transpose()
      .conjugate()
      .solve(d.adjoint())
      .adjoint();
}

FrameReport frame_bounds(const FrameProblem& p, int threads) {
  const TrialGeometry geom = trial_geometry(p);
  FrameReport report;
  const CoreResult full = core_bounds(p, threads);
  report.a_est = full.a;
  report.b_est = full.b;
  report.rows = full.rows;
  report.cols = geom.dim;
  report.assemble_ms = full.assemble_ms;
  report.solve_ms = full.solve_ms;
  const auto [lo_it, hi_it] =
      std::minmax_element(p.lambda.points.begin(), p.lambda.points.end());
  report.lambda_lo = *lo_it;
  report.lambda_hi = *hi_it;
  report.lambda_count = int(p.lambda.points.size());
  report.freq_count = int(p.freqs.size());
  report.trial_lo = geom.lo;
  report.trial_hi = geom.hi;
  report.taper_width = geom.taper;
  report.grid_dim = p.grid_dim;

  bool shrunk = false;
  const FrameProblem half = half_lambda_problem(p, shrunk);
  if (shrunk) {
    const CoreResult probe = core_bounds(half, threads);
    report.stability_checked = true;
    report.a_half = probe.a;
    report.b_half = probe.b;
    report.a_change = std::abs(report.a_est - probe.a) /
                      std::max(report.a_est, 1e-300);
    report.b_change = std::abs(report.b_est - probe.b) /
                      std::max(report.b_est, 1e-300);
    report.stable_a = report.a_change <= 0.1;
    report.stable_b = report.b_change <= 0.1;
    report.assemble_ms += probe.assemble_ms;
    report.solve_ms += probe.solve_ms;
  }
  return report;
}

namespace {

FrameProblem apply_axis(const FrameProblem& base, const std::string& axis,
                        double value) {
  FrameProblem p = base;
  if (axis == "lambda_step") {
    const auto [lo_it, hi_it] =
        std::minmax_element(base.lambda.points.begin(), base.lambda.points.end());
    GeneratorDescriptor g;
    g.kind = GeneratorDescriptor::Kind::kArithmetic;
    g.window_lo = *lo_it;
    g.window_hi = *hi_it;
    g.step = value;
    p.lambda = generate_point_set(g);
  } else if (axis == "re_w") {
    p.w = WindowParam(Complex(value, base.w.w.imag()));
  } else if (axis == "cluster_mult") {
    const int mult = int(std::lround(value));
    if (mult < 1 || std::abs(value - double(mult)) > 1e-9) {
      throw ValidationError(
          "framebounds.sweep: cluster_mult needs a positive integer value");
    }
    p.lambda.points.clear();
    for (double x : base.lambda.points) {
      for (int k = 0; k < mult; ++k) p.lambda.points.push_back(x);
    }
  } else if (axis == "taper_width") {
    p.taper_width = value;
  } else if (axis == "grid_dim") {
    p.grid_dim = int(std::lround(value));
  } else {
    throw ValidationError("framebounds.sweep: unknown axis '" + axis + "'");
  }
  return p;
}

}  // namespace

std::vector<SweepEntry> sweep(const FrameProblem& base, const std::string& axis,
                              const std::vector<double>& values, int threads) {
  validate(base);
  static const char* kAxes[] = {"lambda_step", "re_w", "cluster_mult",
                                "taper_width", "grid_dim"};
  if (std::find_if(std::begin(kAxes), std::end(kAxes), [&](const char* a) {
        return axis == a;
      }) == std::end(kAxes)) {
    throw ValidationError("framebounds.sweep: unknown axis '" + axis + "'");
  }
  std::vector<SweepEntry> entries;
  entries.reserve(values.size());
  for (double value : values) {
    SweepEntry entry;
    entry.value = value;
    try {
      entry.report = frame_bounds(apply_axis(base, axis, value), threads);
    } catch (const ValidationError& e) {
      entry.error = e.what();
    } catch (const NumericError& e) {
      entry.error = e.what();
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

void write_frame_reports_csv(const std::string& path, const std::string& axis,
                             const std::vector<SweepEntry>& entries,
                             const std::string& tag) {
  std::ofstream out(path);
  if (!out) {
    throw ValidationError("framebounds.csv: cannot open " + path);
  }
  out << "# frame bound reports\n";
  if (!tag.empty()) {
    out << "# " << tag << "\n";
  }
  out << "axis,value,a_est,b_est,rows,cols,lambda_count,freq_count,trial_lo,"
         "trial_hi,taper_width,stable_a,stable_b,a_change,b_change,error\n";
  char buf[512];
  for (const SweepEntry& e : entries) {
    std::string error = e.error;
    std::replace(error.begin(), error.end(), ',', ';');
    std::replace(error.begin(), error.end(), '\n', ';');
    const FrameReport& r = e.report;
    std::snprintf(buf, sizeof(buf),
                  "%s,%.17g,%.17g,%.17g,%d,%d,%d,%d,%.17g,%.17g,%.17g,%d,%d,"
                  "%.17g,%.17g,%s\n",
                  axis.c_str(), e.value, r.a_est, r.b_est, r.rows, r.cols,
                  r.lambda_count, r.freq_count, r.trial_lo, r.trial_hi,
                  r.taper_width, int(r.stable_a), int(r.stable_b), r.a_change,
                  r.b_change, error.c_str());
    out << buf;
  }
}

std::string frame_report_json(const FrameReport& r) {
  nlohmann::json j;
  j["a_est"] = r.a_est;
  j["b_est"] = r.b_est;
  j["rows"] = r.rows;
  j["cols"] = r.cols;
  j["lambda"] = {{"lo", r.lambda_lo}, {"hi", r.lambda_hi}, {"count", r.lambda_count}};
  j["freq_count"] = r.freq_count;
  j["trial"] = {{"lo", r.trial_lo}, {"hi", r.trial_hi}, {"grid_dim", r.grid_dim},
                {"taper_width", r.taper_width}};
  j["stability"] = {{"checked", r.stability_checked},
                    {"a_half", r.a_half},
                    {"b_half", r.b_half},
                    {"a_change", r.a_change},
                    {"b_change", r.b_change},
                    {"stable_a", r.stable_a},
                    {"stable_b", r.stable_b}};
  j["runtime_ms"] = {{"assemble", r.assemble_ms}, {"solve", r.solve_ms}};
  return j.dump(2);
}

}  // namespace gabor
