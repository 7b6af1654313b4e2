#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gabor/cauchy.hpp"
#include "gabor/lattice.hpp"
#include "gabor/spectrum.hpp"

namespace gabor {

/// Run configuration for the command line driver, held as a JSON tree with a
/// fixed set of sections:
///   seed            global RNG seed (unsigned integer); required whenever a
///                   jittered generator carries no seed of its own
///   w               {re, im} window parameter, defaults {1, 0}, Re > 0
///   lambda, freqs   point generators (see below)
///   signal          {kind: "gaussian"|"indicator"|"csv", ...}
///   sampling        {beta, grid_dim, epsilon, taper_roll, leak_cutoff,
///                    shift{re, im}}
///   bounds          {grid_dim, trial [lo, hi], taper_width,
///                    sweep{axis, values}}
///   reconstruct     {grid_per_band, epsilon}
///   counterexample  {experiment: "gap"|"cluster", gap_widths, base_step,
///                    multiplicities, spread}
///   theorem         {scenarios: [{name, lambda, freqs, w, sampling_grid,
///                    frame_grid}]}
///   output          {prefix}
/// lambda and freqs each hold either an explicit list {points: [...]} or a
/// generator object {kind: "arithmetic"|"jittered"|"gapped"|"clustered",
/// window: [lo, hi], step, amplitude, seed, gap_center, gap_width,
/// cluster_center, spread, multiplicity}. Unknown keys are rejected at every
/// level so a typo cannot silently fall back to a default.
struct ScenarioConfig {
  nlohmann::json tree;
  std::optional<std::uint64_t> seed;  // effective global seed, if any
  std::string hash;                   // 16 hex digits over the canonical dump
};

/// Applies "path.to.key=value" to the tree, creating intermediate objects.
/// The value text is parsed as JSON; unparsable text stays a string.
void apply_override(nlohmann::json& tree, const std::string& assignment);

/// Structural checks only: section and key names, value types, and the rule
/// that every jittered generator can reach a seed. Value-level constraints
/// stay with the operations themselves so a failure names the responsible
/// module.
void validate_config(const nlohmann::json& tree);

/// FNV-1a (64 bit) over the canonical serialization (sorted keys).
std::string config_hash_hex(const nlohmann::json& tree);

/// Applies overrides then the --seed flag, validates, fills seed and hash.
ScenarioConfig finalize_config(nlohmann::json tree,
                               const std::vector<std::string>& overrides,
                               std::optional<std::uint64_t> seed_flag);

/// Parses the file at `path` and finalizes it.
ScenarioConfig load_config(const std::string& path,
                           const std::vector<std::string>& overrides,
                           std::optional<std::uint64_t> seed_flag);

/// Section readers used by the command handlers; each expects a tree that
/// already passed validate_config. `seed` is the global fallback for
/// jittered generators; `where` names the section in error messages.
GeneratorDescriptor descriptor_from_config(const nlohmann::json& gen,
                                           std::optional<std::uint64_t> seed,
                                           const std::string& where);
/// Explicit {points} list or generated set, per the section's form.
PointSet point_set_from_config(const nlohmann::json& sec,
                               std::optional<std::uint64_t> seed,
                               const std::string& where);
WindowParam window_from_config(const nlohmann::json& tree);
SpectralSignal signal_from_config(const nlohmann::json& sig);

}  // namespace gabor
