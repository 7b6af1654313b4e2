#include "gabor/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "gabor/parallel.hpp"
#include "json.hpp"

namespace gabor {

namespace {

nlohmann::json descriptor_json(const GeneratorDescriptor& g) {
  nlohmann::json j;
  j["kind"] = kind_name(g.kind);
  j["window"] = {g.window_lo, g.window_hi};
  j["step"] = g.step;
  if (g.kind == GeneratorDescriptor::Kind::kJittered) {
    j["amplitude"] = g.amplitude;
    if (g.has_seed) j["seed"] = g.seed;
  } else if (g.kind == GeneratorDescriptor::Kind::kGapped) {
    j["gap_center"] = g.gap_center;
    j["gap_width"] = g.gap_width;
  } else if (g.kind == GeneratorDescriptor::Kind::kClustered) {
    j["cluster_center"] = g.cluster_center;
    j["spread"] = g.spread;
    j["multiplicity"] = g.multiplicity;
  }
  return j;
}

GeneratorDescriptor doubled_window(GeneratorDescriptor g) {
  const double center = 0.5 * (g.window_lo + g.window_hi);
  const double half = 0.5 * (g.window_hi - g.window_lo);
  g.window_lo = center - 2.0 * half;
  g.window_hi = center + 2.0 * half;
  return g;
}

}  // namespace

BandSamples band_samples(const CoefficientTable& c, int threads) {
  if (c.twisted) {
    throw ValidationError("pipeline.band_samples: expects the raw analysis table");
  }
  if (c.lambdas.empty()) {
    throw ValidationError("pipeline.band_samples: table has no sample rows");
  }
  const CoefficientTable d = phase_twist(c, TwistDirection::kForward);
  const TriangularSystem sys = build_system(c.m, WindowParam(c.w));
  const CoefficientTable omega = recover_omega(sys, d, threads);

  BandSamples out;
  out.lambdas = c.lambdas;
  out.m = c.m;
  out.w = c.w;
  const Eigen::Index rows = omega.values.rows();
  const Eigen::Index n = omega.values.cols();
  out.scale = omega.values.cwiseAbs().maxCoeff();
  out.boundary_max = omega.values.col(n - 1).cwiseAbs().maxCoeff();
  out.values.resize(rows, n - 1);
  const Complex two_pi_i(0.0, kTwoPi);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double lambda = c.lambdas[std::size_t(r)];
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      const Complex phase =
          std::exp(Complex(0.0, kTwoPi * c.m.points[std::size_t(k)] * lambda));
      out.values(r, k) = omega.values(r, k) * std::conj(phase) / two_pi_i;
    }
  }
  return out;
}

ReconstructionResult reconstruct(const CoefficientTable& c,
                                 const ReconstructionOptions& opts, int threads) {
  if (opts.grid_per_band < 2) {
    throw ValidationError("pipeline.reconstruct: grid_per_band must be at least 2");
  }
  const BandSamples bs = band_samples(c, threads);
  const std::size_t n_samples = bs.lambdas.size();
  const std::size_t bands = std::size_t(bs.values.cols());

  std::vector<SpectralSignal> specs(bands);
  ReconstructionResult result;
  result.band_residuals.resize(bands);
  parallel_for(bands, threads, [&](std::size_t k) {
    try {
      SamplingProblem sp;
      sp.lambda.points = bs.lambdas;
      sp.beta = bs.m.gaps[k];
      sp.grid_dim = opts.grid_per_band;
      sp.epsilon = opts.epsilon;
      sp.shift = bs.w;
      std::vector<std::pair<double, Complex>> samples(n_samples);
      for (std::size_t i = 0; i < n_samples; ++i) {
        samples[i] = {bs.lambdas[i], bs.values(Eigen::Index(i), Eigen::Index(k))};
      }
      const SpectralSignal hhat = ls_reconstruct(samples, sp, 1);
      double misfit = 0.0;
      double total = 0.0;
      const Complex z0(-bs.w.imag(), bs.w.real());
      for (std::size_t i = 0; i < n_samples; ++i) {
        const Complex pred = evaluate_time(hhat, Complex(bs.lambdas[i], 0.0) + z0);
        misfit += std::norm(pred - samples[i].second);
        total += std::norm(samples[i].second);
      }
      BandResidual& br = result.band_residuals[k];
      br.index = int(k);
      br.mu = bs.m.points[k];
      br.beta = bs.m.gaps[k];
      br.residual = total > 0.0 ? std::sqrt(misfit / total) : std::sqrt(misfit);
      br.norm_sq = norm_sq(hhat);
      specs[k] = translate(hhat, bs.m.points[k]);
    } catch (const ValidationError& e) {
      throw ValidationError("pipeline.reconstruct: band " + std::to_string(k) +
                            ": " + e.what());
    } catch (const NumericError& e) {
      throw NumericError("pipeline.reconstruct: band " + std::to_string(k) + ": " +
                         e.what());
    }
  });

  for (const SpectralSignal& s : specs) result.recovered = add(result.recovered, s);
  result.top_band_boundary = bs.scale > 0.0 ? bs.boundary_max / bs.scale : 0.0;

  const auto [lo_it, hi_it] =
      std::minmax_element(bs.lambdas.begin(), bs.lambdas.end());
  const Eigen::Index i_lo = Eigen::Index(lo_it - bs.lambdas.begin());
  const Eigen::Index i_hi = Eigen::Index(hi_it - bs.lambdas.begin());
  double leak = 0.0;
  for (std::size_t k = 0; k < bands; ++k) {
    const double peak = bs.values.col(Eigen::Index(k)).cwiseAbs().maxCoeff();
    if (peak <= 0.0) continue;
    const double edge = std::max(std::abs(bs.values(i_lo, Eigen::Index(k))),
                                 std::abs(bs.values(i_hi, Eigen::Index(k))));
    leak = std::max(leak, edge / peak);
  }
  result.lambda_leakage = leak;

  if (opts.ground_truth) {
    result.has_truth = true;
    result.relative_l2_error =
        opts.ground_truth->is_zero()
            ? std::sqrt(norm_sq(result.recovered))
            : relative_l2_error(result.recovered, *opts.ground_truth);
  }
  return result;
}

CounterexampleCurve gap_counterexample(const std::vector<double>& gap_widths,
                                       double base_step, const WindowParam& w,
                                       int threads) {
  if (gap_widths.empty()) {
    throw ValidationError("pipeline.gap_counterexample: needs at least one width");
  }
  if (!(base_step > 0.0) || !std::isfinite(base_step)) {
    throw ValidationError("pipeline.gap_counterexample: base_step must be positive");
  }
  for (std::size_t i = 0; i < gap_widths.size(); ++i) {
    if (!std::isfinite(gap_widths[i])) {
      throw ValidationError("pipeline.gap_counterexample: widths must be finite");
    }
    if (gap_widths[i] < base_step - 1e-12) {
      throw ValidationError(
          "pipeline.gap_counterexample: widths must be at least base_step");
    }
    if (gap_widths[i] > 12.0) {
      throw ValidationError(
          "pipeline.gap_counterexample: width exceeds the frequency window");
    }
    if (i > 0 && !(gap_widths[i] > gap_widths[i - 1])) {
      throw ValidationError(
          "pipeline.gap_counterexample: widths must increase strictly");
    }
  }

  GeneratorDescriptor lg;
  lg.kind = GeneratorDescriptor::Kind::kArithmetic;
  lg.window_lo = -40.0;
  lg.window_hi = 40.0;
  lg.step = 0.5;
  const PointSet lambda = generate_point_set(lg);
  const double halfwidth = 1.0;
  const double tail_tol = 1e-6;

  CounterexampleCurve curve;
  curve.parameters = gap_widths;
  curve.responses.resize(gap_widths.size());
  GeneratorDescriptor mg;
  mg.kind = GeneratorDescriptor::Kind::kGapped;
  mg.window_lo = -16.0;
  mg.window_hi = 16.0;
  mg.step = base_step;
  for (std::size_t i = 0; i < gap_widths.size(); ++i) {
    const double width = gap_widths[i];
    mg.gap_center = 0.5 * width;
    mg.gap_width = width;
    const FrequencySet m = make_frequency_set(generate_point_set(mg).points);
    const SpectralSignal f = gaussian_spectrum(0.5 * width, halfwidth, tail_tol);
    const CoefficientTable table = analyze(f, lambda.points, m, w, threads);
    curve.responses[i] = frame_sum_ratio(table, norm_sq(f));
  }

  nlohmann::json sc;
  sc["experiment"] = "gap";
  sc["base_step"] = base_step;
  sc["lambda"] = descriptor_json(lg);
  sc["freq_window"] = {mg.window_lo, mg.window_hi};
  sc["gaussian"] = {{"halfwidth", halfwidth},
                    {"tail_tol", tail_tol},
                    {"center", "gap midpoint"}};
  sc["w"] = {w.w.real(), w.w.imag()};
  curve.scenario = sc.dump();
  return curve;
}

CounterexampleCurve cluster_counterexample(const std::vector<int>& multiplicities,
                                           double spread, const FrameProblem& base,
                                           int threads) {
  validate(base);
  if (multiplicities.empty()) {
    throw ValidationError(
        "pipeline.cluster_counterexample: needs at least one multiplicity");
  }
  for (std::size_t i = 0; i < multiplicities.size(); ++i) {
    if (multiplicities[i] < 1) {
      throw ValidationError(
          "pipeline.cluster_counterexample: multiplicities must be at least 1");
    }
    if (i > 0 && multiplicities[i] <= multiplicities[i - 1]) {
      throw ValidationError(
          "pipeline.cluster_counterexample: multiplicities must increase strictly");
    }
  }
  if (!(spread > 0.0) || !std::isfinite(spread)) {
    throw ValidationError("pipeline.cluster_counterexample: spread must be positive");
  }

  const auto [lo_it, hi_it] =
      std::minmax_element(base.lambda.points.begin(), base.lambda.points.end());
  const double center = 0.5 * (*lo_it + *hi_it);
  std::size_t pick = 0;
  for (std::size_t i = 1; i < base.lambda.points.size(); ++i) {
    if (std::abs(base.lambda.points[i] - center) <
        std::abs(base.lambda.points[pick] - center)) {
      pick = i;
    }
  }
  const double x = base.lambda.points[pick];

  CounterexampleCurve curve;
  curve.parameters.reserve(multiplicities.size());
  curve.responses.resize(multiplicities.size());
  for (std::size_t i = 0; i < multiplicities.size(); ++i) {
    const int m = multiplicities[i];
    curve.parameters.push_back(double(m));
    FrameProblem p = base;
    if (m > 1) {
      p.lambda.points.erase(p.lambda.points.begin() + std::ptrdiff_t(pick));
      for (int j = 0; j < m; ++j) {
        p.lambda.points.push_back(x + spread * (double(j) / double(m - 1) - 0.5));
      }
    }
    curve.responses[i] = frame_bounds(p, threads).b_est;
  }

  nlohmann::json sc;
  sc["experiment"] = "cluster";
  sc["spread"] = spread;
  sc["replaced_point"] = x;
  sc["lambda"] = {{"count", base.lambda.points.size()},
                  {"lo", *lo_it},
                  {"hi", *hi_it}};
  sc["freqs"] = {{"count", base.freqs.size()},
                 {"lo", base.freqs.front()},
                 {"hi", base.freqs.back()}};
  sc["w"] = {base.w.w.real(), base.w.w.imag()};
  sc["grid_dim"] = base.grid_dim;
  curve.scenario = sc.dump();
  return curve;
}

TheoremReport theorem_check(const TheoremScenario& s, int threads) {
  TheoremReport r;
  r.scenario = s;
  const std::string tag = "pipeline.theorem_check[" + s.name + "]";

  FrequencySet m;
  PointSet lambda;
  try {
    m = make_frequency_set(generate_point_set(s.freq_gen).points);
    lambda = generate_point_set(s.lambda_gen);
    r.finiteness = finiteness_report(m);
    r.finite_ok = r.finiteness.locally_finite;
  } catch (const ValidationError& e) {
    throw ValidationError(tag + " lattice stage: " + e.what());
  }

  try {
    SamplingProblem sp;
    sp.lambda = lambda;
    sp.beta = m.beta;
    sp.grid_dim = s.sampling_grid;
    const SamplingReport base = sampling_constants(sp, threads);
    SamplingProblem sp2 = sp;
    sp2.lambda = generate_point_set(doubled_window(s.lambda_gen));
    sp2.grid_dim = 2 * s.sampling_grid;
    const SamplingReport wide = sampling_constants(sp2, threads);
    r.sampling.a = base.a_est;
    r.sampling.b = base.b_est;
    r.sampling.a_doubled = wide.a_est;
  } catch (const ValidationError& e) {
    throw ValidationError(tag + " sampling stage: " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(tag + " sampling stage: " + e.what());
  }

  try {
    FrameProblem fp;
    fp.lambda = lambda;
    fp.freqs = m.points;
    fp.w = s.w;
    fp.grid_dim = s.frame_grid;
    const FrameReport base = frame_bounds(fp, threads);
    FrameProblem fp2 = fp;
    fp2.lambda = generate_point_set(doubled_window(s.lambda_gen));
    fp2.grid_dim = 2 * s.frame_grid;
    const FrameReport wide = frame_bounds(fp2, threads);
    r.frame.a = base.a_est;
    r.frame.b = base.b_est;
    r.frame.a_doubled = wide.a_est;
    r.frame_half_stable_a = base.stable_a;
    r.frame_half_stable_b = base.stable_b;
  } catch (const ValidationError& e) {
    throw ValidationError(tag + " frame stage: " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(tag + " frame stage: " + e.what());
  }

  r.sampling.positive = r.sampling.a >= kVerdictPositiveFraction * r.sampling.b;
  r.sampling.stable = r.sampling.a_doubled >= kVerdictStableFraction * r.sampling.a;
  r.frame.positive = r.frame.a >= kVerdictPositiveFraction * r.frame.b;
  r.frame.stable = r.frame.a_doubled >= kVerdictStableFraction * r.frame.a;
  const bool left = r.finite_ok && r.sampling.positive && r.sampling.stable;
  const bool right = r.frame.positive && r.frame.stable;
  r.verdict = left == right ? (left ? "concordant" : "concordant-negative")
                            : "discordant";
  return r;
}

std::vector<TheoremReport> theorem_check_all(const std::vector<TheoremScenario>& ss,
                                             int threads) {
  std::vector<TheoremReport> reports(ss.size());
  parallel_for(ss.size(), threads,
               [&](std::size_t i) { reports[i] = theorem_check(ss[i], 1); });
  return reports;
}

void write_curve_csv(const std::string& path, const CounterexampleCurve& curve) {
  std::ofstream out(path);
  if (!out) {
    throw ValidationError("pipeline.curve_csv: cannot open " + path);
  }
  out << "# " << curve.scenario << "\n";
  out << "parameter,response\n";
  char buf[128];
  for (std::size_t i = 0; i < curve.parameters.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", curve.parameters[i],
                  curve.responses[i]);
    out << buf;
  }
}

std::string curve_json(const CounterexampleCurve& curve) {
  nlohmann::json j;
  j["scenario"] = nlohmann::json::parse(curve.scenario, nullptr, false);
  if (j["scenario"].is_discarded()) j["scenario"] = curve.scenario;
  j["parameters"] = curve.parameters;
  j["responses"] = curve.responses;
  return j.dump(2);
}

namespace {

nlohmann::json stage_json(const StageOutcome& s) {
  return {{"a", s.a},
          {"b", s.b},
          {"a_doubled", s.a_doubled},
          {"positive", s.positive},
          {"stable", s.stable}};
}

}  // namespace

void write_theorem_reports_csv(const std::string& path,
                               const std::vector<TheoremReport>& reports,
                               const std::string& tag) {
  std::ofstream out(path);
  if (!out) {
    throw ValidationError("pipeline.theorem_csv: cannot open " + path);
  }
  if (!tag.empty()) {
    out << "# " << tag << "\n";
  }
  out << "name,finite_ok,beta,sampling_a,sampling_b,sampling_a_doubled,"
         "sampling_positive,sampling_stable,frame_a,frame_b,frame_a_doubled,"
         "frame_positive,frame_stable,verdict\n";
  char buf[512];
  for (const TheoremReport& r : reports) {
    std::snprintf(buf, sizeof(buf),
                  "%s,%d,%.17g,%.17g,%.17g,%.17g,%d,%d,%.17g,%.17g,%.17g,%d,%d,"
                  "%s\n",
                  r.scenario.name.c_str(), int(r.finite_ok), r.finiteness.beta,
                  r.sampling.a, r.sampling.b, r.sampling.a_doubled,
                  int(r.sampling.positive), int(r.sampling.stable), r.frame.a,
                  r.frame.b, r.frame.a_doubled, int(r.frame.positive),
                  int(r.frame.stable), r.verdict.c_str());
    out << buf;
  }
}

std::string theorem_report_json(const TheoremReport& r) {
  nlohmann::json j;
  j["name"] = r.scenario.name;
  j["scenario"] = {{"lambda", descriptor_json(r.scenario.lambda_gen)},
                   {"freqs", descriptor_json(r.scenario.freq_gen)},
                   {"w", {r.scenario.w.w.real(), r.scenario.w.w.imag()}},
                   {"sampling_grid", r.scenario.sampling_grid},
                   {"frame_grid", r.scenario.frame_grid}};
  j["finiteness"] = {{"beta", r.finiteness.beta},
                     {"min_gap", r.finiteness.min_gap},
                     {"max_unit_count", r.finiteness.max_unit_count},
                     {"locally_finite", r.finiteness.locally_finite}};
  j["sampling"] = stage_json(r.sampling);
  j["frame"] = stage_json(r.frame);
  j["frame"]["half_stable_a"] = r.frame_half_stable_a;
  j["frame"]["half_stable_b"] = r.frame_half_stable_b;
  j["thresholds"] = {{"positive_fraction", kVerdictPositiveFraction},
                     {"stable_fraction", kVerdictStableFraction}};
  j["verdict"] = r.verdict;
  return j.dump(2);
}

}  // namespace gabor
