#include "gabor/runner.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <utility>

#include "gabor/config.hpp"
#include "gabor/framebounds.hpp"
#include "gabor/paley_wiener.hpp"
#include "gabor/pipeline.hpp"

namespace gabor {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct RunContext {
  ScenarioConfig cfg;
  std::string command;
  std::string out_dir;
  std::string prefix;
  std::string tag;  // "config=<hash>", embedded in every artifact
  int threads = 0;
  json outputs = json::array();
  json failures = json::array();

  std::string path(const std::string& name) const { return out_dir + "/" + name; }

  std::string artifact(const std::string& suffix) {
    const std::string name = prefix + "_" + suffix;
    outputs.push_back(name);
    return path(name);
  }
};

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cli.output: cannot open " + path);
  out << j.dump(2) << "\n";
}

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string(buf);
}

const json& need_section(const RunContext& ctx, const char* name) {
  auto it = ctx.cfg.tree.find(name);
  if (it == ctx.cfg.tree.end()) {
    throw ValidationError("cli." + ctx.command + ": config needs a \"" +
                          std::string(name) + "\" section");
  }
  return *it;
}

PointSet lambda_points(const RunContext& ctx) {
  return point_set_from_config(need_section(ctx, "lambda"), ctx.cfg.seed, "lambda");
}

FrequencySet freq_set(const RunContext& ctx) {
  PointSet p = point_set_from_config(need_section(ctx, "freqs"), ctx.cfg.seed, "freqs");
  return make_frequency_set(std::move(p.points));
}

/// bounds.grid_dim etc. live in an optional "bounds" section; clustering
/// counterexamples reuse the same base problem.
FrameProblem frame_problem_from_config(const RunContext& ctx) {
  FrameProblem p;
  p.lambda = lambda_points(ctx);
  p.freqs = freq_set(ctx).points;
  p.w = window_from_config(ctx.cfg.tree);
  p.grid_dim = 64;
  if (ctx.cfg.tree.contains("bounds")) {
    const json& b = ctx.cfg.tree["bounds"];
    p.grid_dim = b.value("grid_dim", 64);
    p.taper_width = b.value("taper_width", -1.0);
    if (b.contains("trial")) {
      p.trial_override = true;
      p.trial_lo = b["trial"][0].get<double>();
      p.trial_hi = b["trial"][1].get<double>();
    }
  }
  return p;
}

json frame_report_tagged(const RunContext& ctx, const FrameReport& r) {
  json j = json::parse(frame_report_json(r));
  // wall-clock timings are observability, not results; artifacts must stay
  // byte-identical across reruns, so they live only in run_meta territory
  j.erase("runtime_ms");
  j["config"] = ctx.cfg.hash;
  return j;
}

void run_lattice(RunContext& ctx) {
  const bool has_lambda = ctx.cfg.tree.contains("lambda");
  const bool has_freqs = ctx.cfg.tree.contains("freqs");
  if (!has_lambda && !has_freqs) {
    throw ValidationError("cli.lattice: config needs a \"lambda\" or \"freqs\" section");
  }
  if (has_lambda) {
    const PointSet set = lambda_points(ctx);
    write_points_csv(ctx.artifact("lambda.csv"), set.points, ctx.tag);
    std::printf("lattice: %zu lambda points\n", set.points.size());
  }
  if (has_freqs) {
    const FrequencySet m = freq_set(ctx);
    write_points_csv(ctx.artifact("freqs.csv"), m.points, ctx.tag);
    const FinitenessReport fin = finiteness_report(m);
    json j;
    j["config"] = ctx.cfg.hash;
    j["points"] = m.points.size();
    j["beta"] = fin.beta;
    j["min_gap"] = fin.min_gap;
    j["max_unit_count"] = fin.max_unit_count;
    j["locally_finite"] = fin.locally_finite;
    write_json_file(ctx.artifact("finiteness.json"), j);
    std::printf("lattice: %zu frequencies, beta=%g, locally finite: %s\n",
                m.points.size(), fin.beta, fin.locally_finite ? "yes" : "no");
  }
}

void run_analyze(RunContext& ctx) {
  const PointSet lambda = lambda_points(ctx);
  const FrequencySet m = freq_set(ctx);
  const WindowParam w = window_from_config(ctx.cfg.tree);
  const SpectralSignal f = signal_from_config(need_section(ctx, "signal"));
  const CoefficientTable table = analyze(f, lambda.points, m, w, ctx.threads);
  write_coefficients_csv(ctx.artifact("coefficients.csv"), table, ctx.tag);
  const double scale = table.values.size() ? table.values.cwiseAbs().maxCoeff() : 0.0;
  const double energy = norm_sq(f);
  json j;
  j["config"] = ctx.cfg.hash;
  j["rows"] = table.values.rows();
  j["cols"] = table.values.cols();
  j["max_abs"] = scale;
  j["signal_norm_sq"] = energy;
  if (energy > 0.0) j["frame_sum_ratio"] = frame_sum_ratio(table, energy);
  write_json_file(ctx.artifact("analysis.json"), j);
  std::printf("analyze: %zu x %zu coefficients, max |c| = %.6g\n",
              lambda.points.size(), m.points.size(), scale);
}

void run_reconstruct(RunContext& ctx) {
  const PointSet lambda = lambda_points(ctx);
  const FrequencySet m = freq_set(ctx);
  const WindowParam w = window_from_config(ctx.cfg.tree);
  const SpectralSignal f = signal_from_config(need_section(ctx, "signal"));
  const CoefficientTable table = analyze(f, lambda.points, m, w, ctx.threads);
  ReconstructionOptions opts;
  if (ctx.cfg.tree.contains("reconstruct")) {
    const json& r = ctx.cfg.tree["reconstruct"];
    opts.grid_per_band = r.value("grid_per_band", 64);
    opts.epsilon = r.value("epsilon", kAutoEpsilon);
  }
  opts.ground_truth = f;
  const ReconstructionResult result = reconstruct(table, opts, ctx.threads);
  write_spectrum_csv(ctx.artifact("recovered.csv"), result.recovered, ctx.tag);
  json j;
  j["config"] = ctx.cfg.hash;
  j["relative_l2_error"] = result.relative_l2_error;
  j["top_band_boundary"] = result.top_band_boundary;
  j["lambda_leakage"] = result.lambda_leakage;
  json bands = json::array();
  for (const BandResidual& b : result.band_residuals) {
    bands.push_back({{"index", b.index},
                     {"mu", b.mu},
                     {"beta", b.beta},
                     {"residual", b.residual},
                     {"norm_sq", b.norm_sq}});
  }
  j["band_residuals"] = std::move(bands);
  write_json_file(ctx.artifact("reconstruction.json"), j);
  std::printf("reconstruct: %zu bands, relative error %.6g\n",
              result.band_residuals.size(), result.relative_l2_error);
}

void run_bounds(RunContext& ctx) {
  const FrameProblem base = frame_problem_from_config(ctx);
  const FrameReport report = frame_bounds(base, ctx.threads);
  write_json_file(ctx.artifact("bounds.json"), frame_report_tagged(ctx, report));
  std::printf("bounds: a_est=%.6g b_est=%.6g (%d x %d)\n", report.a_est,
              report.b_est, report.rows, report.cols);
  const json* sweep_cfg = nullptr;
  if (ctx.cfg.tree.contains("bounds") && ctx.cfg.tree["bounds"].contains("sweep")) {
    sweep_cfg = &ctx.cfg.tree["bounds"]["sweep"];
  }
  if (sweep_cfg) {
    const std::string axis = (*sweep_cfg)["axis"].get<std::string>();
    const std::vector<double> values =
        (*sweep_cfg)["values"].get<std::vector<double>>();
    const std::vector<SweepEntry> entries = sweep(base, axis, values, ctx.threads);
    write_frame_reports_csv(ctx.artifact("sweep.csv"), axis, entries, ctx.tag);
    std::size_t failed = 0;
    for (const SweepEntry& e : entries) {
      if (!e.error.empty()) {
        ++failed;
        ctx.failures.push_back({{"axis", axis}, {"value", e.value}, {"error", e.error}});
      }
    }
    std::printf("bounds: sweep over %s, %zu points, %zu failed\n", axis.c_str(),
                entries.size(), failed);
  }
}

void run_sampling(RunContext& ctx) {
  const json& s = need_section(ctx, "sampling");
  if (!s.contains("beta")) {
    throw ValidationError("cli.sampling: config needs sampling.beta");
  }
  SamplingProblem p;
  p.lambda = lambda_points(ctx);
  p.beta = s["beta"].get<double>();
  p.grid_dim = s.value("grid_dim", 64);
  p.epsilon = s.value("epsilon", kAutoEpsilon);
  p.taper_roll = s.value("taper_roll", -1.0);
  p.leak_cutoff = s.value("leak_cutoff", 0.01);
  if (s.contains("shift")) {
    p.shift = Complex(s["shift"].value("re", 0.0), s["shift"].value("im", 0.0));
  }
  const SamplingReport r = sampling_constants(p, ctx.threads);
  json j;
  j["config"] = ctx.cfg.hash;
  j["a_est"] = r.a_est;
  j["b_est"] = r.b_est;
  j["a_raw"] = r.a_raw;
  j["window_lo"] = r.window_lo;
  j["window_hi"] = r.window_hi;
  j["flat_lo"] = r.flat_lo;
  j["flat_hi"] = r.flat_hi;
  j["nyquist"] = r.nyquist;
  j["nyquist_ok"] = r.nyquist_ok;
  j["taper_panels"] = r.taper_panels;
  j["kept_dim"] = r.kept_dim;
  write_json_file(ctx.artifact("sampling.json"), j);
  std::printf("sampling: a_est=%.6g b_est=%.6g kept_dim=%d\n", r.a_est, r.b_est,
              r.kept_dim);
}

void run_counterexample(RunContext& ctx) {
  const json& c = need_section(ctx, "counterexample");
  const std::string experiment = c["experiment"].get<std::string>();
  CounterexampleCurve curve;
  if (experiment == "gap") {
    const std::vector<double> widths = c["gap_widths"].get<std::vector<double>>();
    const double base_step = c.value("base_step", 1.0);
    curve = gap_counterexample(widths, base_step, window_from_config(ctx.cfg.tree),
                               ctx.threads);
  } else {
    const std::vector<int> mults = c["multiplicities"].get<std::vector<int>>();
    const double spread = c.value("spread", 1e-3);
    curve = cluster_counterexample(mults, spread, frame_problem_from_config(ctx),
                                   ctx.threads);
  }
  json scenario = json::parse(curve.scenario);
  scenario["config"] = ctx.cfg.hash;
  curve.scenario = scenario.dump();
  write_curve_csv(ctx.artifact("curve.csv"), curve);
  write_json_file(ctx.artifact("curve.json"), json::parse(curve_json(curve)));
  const double first = curve.responses.front();
  const double last = curve.responses.back();
  std::printf("counterexample %s: %zu points, response %.6g -> %.6g\n",
              experiment.c_str(), curve.responses.size(), first, last);
}

void run_theorem_check(RunContext& ctx) {
  const json& section = need_section(ctx, "theorem");
  std::vector<TheoremScenario> scenarios;
  for (const json& s : section["scenarios"]) {
    TheoremScenario t;
    t.name = s["name"].get<std::string>();
    const std::string where = "theorem.scenarios." + t.name;
    t.lambda_gen =
        descriptor_from_config(s["lambda"], ctx.cfg.seed, where + ".lambda");
    t.freq_gen = descriptor_from_config(s["freqs"], ctx.cfg.seed, where + ".freqs");
    if (s.contains("w")) {
      t.w = WindowParam(Complex(s["w"].value("re", 1.0), s["w"].value("im", 0.0)));
    }
    t.sampling_grid = s.value("sampling_grid", 64);
    t.frame_grid = s.value("frame_grid", 64);
    scenarios.push_back(std::move(t));
  }
  const std::vector<TheoremReport> reports = theorem_check_all(scenarios, ctx.threads);
  write_theorem_reports_csv(ctx.artifact("theorem.csv"), reports, ctx.tag);
  json j;
  j["config"] = ctx.cfg.hash;
  json parsed = json::array();
  for (const TheoremReport& r : reports) {
    parsed.push_back(json::parse(theorem_report_json(r)));
    std::printf("theorem-check %s: %s\n", r.scenario.name.c_str(),
                r.verdict.c_str());
  }
  j["reports"] = std::move(parsed);
  write_json_file(ctx.artifact("theorem.json"), j);
}

void dispatch(RunContext& ctx) {
  if (ctx.command == "lattice") return run_lattice(ctx);
  if (ctx.command == "analyze") return run_analyze(ctx);
  if (ctx.command == "reconstruct") return run_reconstruct(ctx);
  if (ctx.command == "bounds") return run_bounds(ctx);
  if (ctx.command == "sampling") return run_sampling(ctx);
  if (ctx.command == "counterexample") return run_counterexample(ctx);
  if (ctx.command == "theorem-check") return run_theorem_check(ctx);
  throw ValidationError("cli.run: unknown command \"" + ctx.command + "\"");
}

}  // namespace

int run_command(const RunOptions& opts) {
  try {
    RunContext ctx;
    ctx.cfg = load_config(opts.config_path, opts.overrides, opts.seed);
    ctx.command = opts.command;
    ctx.out_dir = opts.out_dir.empty() ? std::string(".") : opts.out_dir;
    ctx.threads = opts.threads;
    ctx.prefix = "run";
    if (ctx.cfg.tree.contains("output")) {
      ctx.prefix = ctx.cfg.tree["output"].value("prefix", "run");
    }
    ctx.tag = "config=" + ctx.cfg.hash;
    std::filesystem::create_directories(ctx.out_dir);

    dispatch(ctx);

    json manifest;
    manifest["command"] = ctx.command;
    manifest["config"] = ctx.cfg.tree;
    manifest["config_hash"] = ctx.cfg.hash;
    manifest["outputs"] = ctx.outputs;
    manifest["failures"] = ctx.failures;
    manifest["versions"] = {{"gabor", kVersion}};
    if (ctx.cfg.seed) manifest["seed"] = *ctx.cfg.seed;
    write_json_file(ctx.path("manifest.json"), manifest);

    json meta;
    meta["out_dir"] = ctx.out_dir;
    meta["threads"] = ctx.threads;
    meta["timestamp_utc"] = timestamp_utc();
    write_json_file(ctx.path("run_meta.json"), meta);

    std::printf("%s: wrote %zu artifacts to %s\n", ctx.command.c_str(),
                ctx.outputs.size(), ctx.out_dir.c_str());
    return 0;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: config: %s\n", e.what());
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace gabor
