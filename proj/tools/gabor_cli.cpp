#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "gabor/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Gabor systems of Cauchy kernels: lattice generation, coefficient "
      "analysis, spectrum recovery, and frame diagnostics"};
  app.require_subcommand(1);

  gabor::RunOptions opts;
  std::uint64_t seed_value = 0;

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"lattice", "Generate point sets and report lattice finiteness"},
      {"analyze", "Compute the coefficient table of a signal"},
      {"reconstruct", "Invert a coefficient table back to a spectrum"},
      {"bounds", "Estimate frame bounds, optionally sweeping a parameter"},
      {"sampling", "Estimate band-limited sampling constants"},
      {"counterexample", "Run a gap or cluster degradation experiment"},
      {"theorem-check", "Compare sampling-side and frame-side verdicts"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opts.config_path, "JSON configuration file")
        ->required();
    sub->add_option("--set", opts.overrides,
                    "Override one config entry as path.to.key=value (repeatable)");
    sub->add_option("--out", opts.out_dir, "Output directory (default .)");
    sub->add_option("--threads", opts.threads, "Worker threads (0 = hardware)");
    CLI::Option* seed_opt =
        sub->add_option("--seed", seed_value, "Global RNG seed");
    sub->callback([&opts, &seed_value, name = std::string(name), seed_opt] {
      opts.command = name;
      if (seed_opt->count() > 0) opts.seed = seed_value;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  return gabor::run_command(opts);
}
