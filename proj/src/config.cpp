#include "gabor/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <utility>

namespace gabor {

namespace {

using nlohmann::json;

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

[[noreturn]] void fail(const std::string& message) {
  throw ValidationError("cli.config: " + message);
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where + " must be an object");
}

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) fail("unknown key \"" + it.key() + "\" in " + where);
  }
}

void require_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where + " must be a number");
}

void require_integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where + " must be an integer");
}

void require_seed(const json& j, const std::string& where) {
  if (!j.is_number_unsigned()) fail(where + " must be a nonnegative integer");
}

void require_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where + " must be a string");
}

void require_number_array(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where + " must be a nonempty array of numbers");
  for (const json& v : j) {
    if (!v.is_number()) fail(where + " must hold numbers only");
  }
}

void require_pair(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(where + " must be [lo, hi]");
  }
}

void validate_complex(const json& j, const std::string& where) {
  require_object(j, where);
  check_keys(j, where, {"re", "im"});
  if (const json* re = find(j, "re")) require_number(*re, where + ".re");
  if (const json* im = find(j, "im")) require_number(*im, where + ".im");
}

void validate_generator(const json& j, const std::string& where, bool global_seed) {
  require_object(j, where);
  check_keys(j, where,
             {"kind", "window", "step", "amplitude", "seed", "gap_center",
              "gap_width", "cluster_center", "spread", "multiplicity"});
  const json* kind = find(j, "kind");
  if (!kind) fail(where + " needs a kind");
  require_string(*kind, where + ".kind");
  const std::string name = kind->get<std::string>();
  if (name != "arithmetic" && name != "jittered" && name != "gapped" &&
      name != "clustered") {
    fail(where + ".kind must be arithmetic, jittered, gapped or clustered");
  }
  const json* window = find(j, "window");
  if (!window) fail(where + " needs a window [lo, hi]");
  require_pair(*window, where + ".window");
  if (const json* v = find(j, "step")) require_number(*v, where + ".step");
  if (const json* v = find(j, "amplitude")) require_number(*v, where + ".amplitude");
  if (const json* v = find(j, "seed")) require_seed(*v, where + ".seed");
  if (const json* v = find(j, "gap_center")) require_number(*v, where + ".gap_center");
  if (const json* v = find(j, "gap_width")) require_number(*v, where + ".gap_width");
  if (const json* v = find(j, "cluster_center")) {
    require_number(*v, where + ".cluster_center");
  }
  if (const json* v = find(j, "spread")) require_number(*v, where + ".spread");
  if (const json* v = find(j, "multiplicity")) {
    require_integer(*v, where + ".multiplicity");
  }
  if (name == "jittered" && !find(j, "seed") && !global_seed) {
    fail(where + " is jittered and has no seed; set " + where +
         ".seed or the global seed");
  }
}

void validate_point_source(const json& j, const std::string& where,
                           bool global_seed) {
  require_object(j, where);
  if (const json* points = find(j, "points")) {
    check_keys(j, where, {"points"});
    require_number_array(*points, where + ".points");
    return;
  }
  validate_generator(j, where, global_seed);
}

void validate_signal(const json& j, const std::string& where) {
  require_object(j, where);
  check_keys(j, where,
             {"kind", "center", "halfwidth", "tail_tol", "lo", "hi", "value_re",
              "value_im", "path"});
  const json* kind = find(j, "kind");
  if (!kind) fail(where + " needs a kind");
  require_string(*kind, where + ".kind");
  const std::string name = kind->get<std::string>();
  if (name == "gaussian") {
    const json* center = find(j, "center");
    const json* halfwidth = find(j, "halfwidth");
    if (!center || !halfwidth) fail(where + " gaussian needs center and halfwidth");
    require_number(*center, where + ".center");
    require_number(*halfwidth, where + ".halfwidth");
    if (const json* v = find(j, "tail_tol")) require_number(*v, where + ".tail_tol");
  } else if (name == "indicator") {
    const json* lo = find(j, "lo");
    const json* hi = find(j, "hi");
    if (!lo || !hi) fail(where + " indicator needs lo and hi");
    require_number(*lo, where + ".lo");
    require_number(*hi, where + ".hi");
    if (const json* v = find(j, "value_re")) require_number(*v, where + ".value_re");
    if (const json* v = find(j, "value_im")) require_number(*v, where + ".value_im");
  } else if (name == "csv") {
    const json* path = find(j, "path");
    if (!path) fail(where + " csv needs a path");
    require_string(*path, where + ".path");
  } else {
    fail(where + ".kind must be gaussian, indicator or csv");
  }
}

void validate_sampling(const json& j, bool) {
  require_object(j, "sampling");
  check_keys(j, "sampling",
             {"beta", "grid_dim", "epsilon", "taper_roll", "leak_cutoff", "shift"});
  if (const json* v = find(j, "beta")) require_number(*v, "sampling.beta");
  if (const json* v = find(j, "grid_dim")) require_integer(*v, "sampling.grid_dim");
  if (const json* v = find(j, "epsilon")) require_number(*v, "sampling.epsilon");
  if (const json* v = find(j, "taper_roll")) require_number(*v, "sampling.taper_roll");
  if (const json* v = find(j, "leak_cutoff")) {
    require_number(*v, "sampling.leak_cutoff");
  }
  if (const json* v = find(j, "shift")) validate_complex(*v, "sampling.shift");
}

void validate_bounds(const json& j) {
  require_object(j, "bounds");
  check_keys(j, "bounds", {"grid_dim", "trial", "taper_width", "sweep"});
  if (const json* v = find(j, "grid_dim")) require_integer(*v, "bounds.grid_dim");
  if (const json* v = find(j, "trial")) require_pair(*v, "bounds.trial");
  if (const json* v = find(j, "taper_width")) {
    require_number(*v, "bounds.taper_width");
  }
  if (const json* sweep = find(j, "sweep")) {
    require_object(*sweep, "bounds.sweep");
    check_keys(*sweep, "bounds.sweep", {"axis", "values"});
    const json* axis = find(*sweep, "axis");
    const json* values = find(*sweep, "values");
    if (!axis || !values) fail("bounds.sweep needs axis and values");
    require_string(*axis, "bounds.sweep.axis");
    require_number_array(*values, "bounds.sweep.values");
  }
}

void validate_reconstruct(const json& j) {
  require_object(j, "reconstruct");
  check_keys(j, "reconstruct", {"grid_per_band", "epsilon"});
  if (const json* v = find(j, "grid_per_band")) {
    require_integer(*v, "reconstruct.grid_per_band");
  }
  if (const json* v = find(j, "epsilon")) require_number(*v, "reconstruct.epsilon");
}

void validate_counterexample(const json& j) {
  require_object(j, "counterexample");
  check_keys(j, "counterexample",
             {"experiment", "gap_widths", "base_step", "multiplicities", "spread"});
  const json* experiment = find(j, "experiment");
  if (!experiment) fail("counterexample needs an experiment");
  require_string(*experiment, "counterexample.experiment");
  const std::string name = experiment->get<std::string>();
  if (name == "gap") {
    const json* widths = find(j, "gap_widths");
    if (!widths) fail("counterexample gap needs gap_widths");
    require_number_array(*widths, "counterexample.gap_widths");
    if (const json* v = find(j, "base_step")) {
      require_number(*v, "counterexample.base_step");
    }
  } else if (name == "cluster") {
    const json* mults = find(j, "multiplicities");
    if (!mults) fail("counterexample cluster needs multiplicities");
    if (!mults->is_array() || mults->empty()) {
      fail("counterexample.multiplicities must be a nonempty array of integers");
    }
    for (const json& v : *mults) {
      require_integer(v, "counterexample.multiplicities");
    }
    if (const json* v = find(j, "spread")) {
      require_number(*v, "counterexample.spread");
    }
  } else {
    fail("counterexample.experiment must be gap or cluster");
  }
}

void validate_theorem(const json& j, bool global_seed) {
  require_object(j, "theorem");
  check_keys(j, "theorem", {"scenarios"});
  const json* scenarios = find(j, "scenarios");
  if (!scenarios) fail("theorem needs scenarios");
  if (!scenarios->is_array() || scenarios->empty()) {
    fail("theorem.scenarios must be a nonempty array");
  }
  int index = 0;
  for (const json& s : *scenarios) {
    const std::string where = "theorem.scenarios[" + std::to_string(index) + "]";
    require_object(s, where);
    check_keys(s, where,
               {"name", "lambda", "freqs", "w", "sampling_grid", "frame_grid"});
    const json* name = find(s, "name");
    if (!name) fail(where + " needs a name");
    require_string(*name, where + ".name");
    const json* lambda = find(s, "lambda");
    const json* freqs = find(s, "freqs");
    if (!lambda || !freqs) fail(where + " needs lambda and freqs generators");
    validate_generator(*lambda, where + ".lambda", global_seed);
    validate_generator(*freqs, where + ".freqs", global_seed);
    if (const json* v = find(s, "w")) validate_complex(*v, where + ".w");
    if (const json* v = find(s, "sampling_grid")) {
      require_integer(*v, where + ".sampling_grid");
    }
    if (const json* v = find(s, "frame_grid")) {
      require_integer(*v, where + ".frame_grid");
    }
    ++index;
  }
}

void validate_output(const json& j) {
  require_object(j, "output");
  check_keys(j, "output", {"prefix"});
  if (const json* prefix = find(j, "prefix")) {
    require_string(*prefix, "output.prefix");
    const std::string p = prefix->get<std::string>();
    if (p.empty()) fail("output.prefix must not be empty");
    for (char c : p) {
      const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '_' || c == '-';
      if (!ok) fail("output.prefix may use letters, digits, _ and - only");
    }
  }
}

GeneratorDescriptor::Kind kind_from_name(const std::string& name,
                                         const std::string& where) {
  if (name == "arithmetic") return GeneratorDescriptor::Kind::kArithmetic;
  if (name == "jittered") return GeneratorDescriptor::Kind::kJittered;
  if (name == "gapped") return GeneratorDescriptor::Kind::kGapped;
  if (name == "clustered") return GeneratorDescriptor::Kind::kClustered;
  fail(where + ".kind must be arithmetic, jittered, gapped or clustered");
}

}  // namespace

void apply_override(json& tree, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ValidationError("cli.override: expected path=value, got \"" +
                          assignment + "\"");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  json* node = &tree;
  std::size_t start = 0;
  for (;;) {
    const std::size_t dot = path.find('.', start);
    const std::string key =
        dot == std::string::npos ? path.substr(start) : path.substr(start, dot - start);
    if (key.empty()) {
      throw ValidationError("cli.override: empty key in \"" + path + "\"");
    }
    if (dot == std::string::npos) {
      (*node)[key] = std::move(value);
      return;
    }
    json& next = (*node)[key];
    if (!next.is_object() && !next.is_null()) {
      throw ValidationError("cli.override: \"" + path.substr(0, dot) +
                            "\" is not an object");
    }
    node = &next;
    start = dot + 1;
  }
}

void validate_config(const json& tree) {
  require_object(tree, "top level");
  check_keys(tree, "top level",
             {"seed", "w", "lambda", "freqs", "signal", "sampling", "bounds",
              "reconstruct", "counterexample", "theorem", "output"});
  const bool global_seed = find(tree, "seed") != nullptr;
  if (const json* v = find(tree, "seed")) require_seed(*v, "seed");
  if (const json* v = find(tree, "w")) validate_complex(*v, "w");
  if (const json* v = find(tree, "lambda")) {
    validate_point_source(*v, "lambda", global_seed);
  }
  if (const json* v = find(tree, "freqs")) {
    validate_point_source(*v, "freqs", global_seed);
  }
  if (const json* v = find(tree, "signal")) validate_signal(*v, "signal");
  if (const json* v = find(tree, "sampling")) validate_sampling(*v, global_seed);
  if (const json* v = find(tree, "bounds")) validate_bounds(*v);
  if (const json* v = find(tree, "reconstruct")) validate_reconstruct(*v);
  if (const json* v = find(tree, "counterexample")) validate_counterexample(*v);
  if (const json* v = find(tree, "theorem")) validate_theorem(*v, global_seed);
  if (const json* v = find(tree, "output")) validate_output(*v);
}

std::string config_hash_hex(const json& tree) {
  const std::string text = tree.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

ScenarioConfig finalize_config(json tree, const std::vector<std::string>& overrides,
                               std::optional<std::uint64_t> seed_flag) {
  if (!tree.is_object()) {
    throw ValidationError("cli.config: top level must be an object");
  }
  for (const std::string& assignment : overrides) {
    apply_override(tree, assignment);
  }
  if (seed_flag) tree["seed"] = *seed_flag;
  validate_config(tree);
  ScenarioConfig cfg;
  if (const json* v = find(tree, "seed")) cfg.seed = v->get<std::uint64_t>();
  cfg.hash = config_hash_hex(tree);
  cfg.tree = std::move(tree);
  return cfg;
}

ScenarioConfig load_config(const std::string& path,
                           const std::vector<std::string>& overrides,
                           std::optional<std::uint64_t> seed_flag) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cli.config: cannot open " + path);
  json tree = json::parse(in, nullptr, false);
  if (tree.is_discarded()) {
    throw ValidationError("cli.config: " + path + " is not valid JSON");
  }
  return finalize_config(std::move(tree), overrides, seed_flag);
}

GeneratorDescriptor descriptor_from_config(const json& gen,
                                           std::optional<std::uint64_t> seed,
                                           const std::string& where) {
  GeneratorDescriptor d;
  d.kind = kind_from_name(gen.at("kind").get<std::string>(), where);
  const json& window = gen.at("window");
  d.window_lo = window.at(0).get<double>();
  d.window_hi = window.at(1).get<double>();
  d.step = gen.value("step", 1.0);
  d.amplitude = gen.value("amplitude", 0.0);
  if (gen.contains("seed")) {
    d.seed = gen["seed"].get<std::uint64_t>();
    d.has_seed = true;
  } else if (seed) {
    d.seed = *seed;
    d.has_seed = true;
  }
  d.gap_center = gen.value("gap_center", 0.0);
  d.gap_width = gen.value("gap_width", 0.0);
  d.cluster_center = gen.value("cluster_center", 0.0);
  d.spread = gen.value("spread", 0.0);
  d.multiplicity = gen.value("multiplicity", 1);
  return d;
}

PointSet point_set_from_config(const json& sec, std::optional<std::uint64_t> seed,
                               const std::string& where) {
  if (sec.contains("points")) {
    PointSet p;
    p.points = sec["points"].get<std::vector<double>>();
    const auto [lo, hi] = std::minmax_element(p.points.begin(), p.points.end());
    p.descriptor.window_lo = *lo;
    p.descriptor.window_hi = *hi;
    return p;
  }
  return generate_point_set(descriptor_from_config(sec, seed, where));
}

WindowParam window_from_config(const json& tree) {
  double re = 1.0;
  double im = 0.0;
  if (tree.contains("w")) {
    const json& w = tree["w"];
    re = w.value("re", 1.0);
    im = w.value("im", 0.0);
  }
  return WindowParam(Complex(re, im));
}

SpectralSignal signal_from_config(const json& sig) {
  const std::string kind = sig.at("kind").get<std::string>();
  if (kind == "gaussian") {
    return gaussian_spectrum(sig.at("center").get<double>(),
                             sig.at("halfwidth").get<double>(),
                             sig.value("tail_tol", 1e-8));
  }
  if (kind == "indicator") {
    return SpectralSignal::indicator(
        sig.at("lo").get<double>(), sig.at("hi").get<double>(),
        Complex(sig.value("value_re", 1.0), sig.value("value_im", 0.0)));
  }
  return read_spectrum_csv(sig.at("path").get<std::string>());
}

}  // namespace gabor
