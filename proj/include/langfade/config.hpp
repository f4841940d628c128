#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "langfade/fit.hpp"

namespace langfade {

/// Every constant of a run. Loaded from a `key = value` file (see
/// configs/default.conf for the schema); command-line overrides are applied on top.
struct RunConfig {
  std::filesystem::path lexicon_path;
  std::vector<std::filesystem::path> ngram_paths;  // key `ngram`, repeatable
  std::vector<std::string> exclusions;             // key `exclude`, one lemma per line
  std::optional<std::filesystem::path> cdh_path;
  std::filesystem::path output_dir = ".";
  std::optional<std::filesystem::path> counts_path;  // default output_dir/counts.csv
  std::optional<std::filesystem::path> fit_path;     // default output_dir/fit.csv

  int ingest_start_year = 1500;  // earliest year tallied (archaic check needs pre-1700 data)
  int t0_year = 1750;
  int end_year = 2000;
  int window_years = 5;
  int archaic_cutoff_year = 1700;
  double corpus_size = kDefaultCorpusSize;

  std::vector<double> a_grid = default_a_grid();
  int bootstrap_repetitions = 100;
  std::size_t bootstrap_subset_size = 2;
  std::uint64_t seed = 0;

  double tau_min = 1.0;
  double tau_max = 500.0;
  Weighting weighting = Weighting::kNone;

  double deming_delta = 1.0;
  int permutations = 10000;

  std::filesystem::path counts_file() const { return counts_path.value_or(output_dir / "counts.csv"); }
  std::filesystem::path fit_file() const { return fit_path.value_or(output_dir / "fit.csv"); }
  FitOptions fit_options() const;

  /// Applies one `key = value` setting. Relative paths resolve against `base_dir`.
  /// Throws UsageError for unknown keys or malformed values.
  void set(std::string_view key, std::string_view value, const std::filesystem::path& base_dir = {});
  /// Checks cross-field invariants (ordered years, positive sizes, ...).
  void validate() const;
};

RunConfig load_config(const std::filesystem::path& path);

/// Parses `min:step:max`, a comma list, or a single value.
std::vector<double> parse_a_grid(std::string_view spec);

}  // namespace langfade
