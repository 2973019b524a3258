#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vlmc/context_tree.hpp"
#include "vlmc/noise_law.hpp"

namespace vlmc {

inline constexpr std::size_t kMaxReplicates = 100'000;

/// Parsed `key=value` experiment file. `delta` empty means "auto": the
/// midpoint of the exact-law window at each grid point.
struct ExperimentConfig {
  std::string tree_path;
  std::vector<double> epsilons;
  std::vector<std::uint64_t> ns;
  std::optional<double> delta;
  std::size_t d = 0;
  std::size_t k = 0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;

  /// Throws ValidationError on out-of-range values.
  void validate() const;
};

/// Keys: tree, eps, n, delta, d, K, replicates, seed. Blank lines and '#'
/// comments are skipped. Throws FormatError on syntax problems.
ExperimentConfig parse_experiment_config(std::string_view text);

struct RecoveryRow {
  double epsilon = 0.0;
  std::uint64_t n = 0;
  double delta = 0.0;
  std::size_t d = 0;
  std::size_t k = 0;
  std::size_t replicates = 0;
  std::size_t errors = 0;
  double frequency = 0.0;
  std::optional<double> bound;  // raw theorem bound, when admissible
  bool admissible = false;
  bool skipped = false;
  std::string note;  // admissibility or skip reason
  DeltaWindow exact_window;
  DeltaWindow theoretical_window;
};

struct RecoveryReport {
  std::vector<RecoveryRow> rows;
  std::uint64_t base_seed = 0;
  std::string tree_fingerprint;
};

struct RunOptions {
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Chain path for (n index i, replicate r) uses seed
/// derive_seed(base, {i, r, Stream::Chain}); the flips use Stream::Noise.
/// Neither depends on epsilon, so all epsilon rows share the same X paths.
std::uint64_t chain_seed(std::uint64_t base, std::size_t n_index, std::size_t replicate);
std::uint64_t noise_seed(std::uint64_t base, std::size_t n_index, std::size_t replicate);

/// Monte Carlo recovery frequency of τ|_K over the (epsilon, n) grid.
RecoveryReport run_recovery(const ExperimentConfig& config, const ContextTree& tree,
                            const RunOptions& options = {});

/// TSV with '#' comment header; columns
/// eps n delta d K replicates errors freq bound admissible.
std::string format_report(const RecoveryReport& report, std::string_view tree_label);

}  // namespace vlmc
