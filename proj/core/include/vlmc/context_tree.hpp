#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vlmc/sequence.hpp"

namespace vlmc {

/// (p(0|w), p(1|w)).
using TransitionRow = std::array<double, kAlphabetSize>;

/// Tolerance for row sums of trees read from text.
inline constexpr double kParseTolerance = 1e-9;
/// Tolerance for in-memory probability identities.
inline constexpr double kProbTolerance = 1e-12;
/// Longest context accepted anywhere (contexts are packed into 64-bit keys).
inline constexpr std::size_t kMaxTreeHeight = 62;

enum class Completeness { Required, Optional };

struct ContextEntry {
  Sequence context;
  TransitionRow row;
};

/// A finite probabilistic context tree (τ, p) over {0, 1}.
///
/// Validation enforces the suffix property, row normalization and
/// non-nullness. Completeness (every length-h past has a context) is checked
/// always and enforced only on request; irreducibility is reported.
///
/// The memoryless model is the tree {λ}; in text it is written with the
/// context token "-".
class ContextTree {
 public:
  static ContextTree parse(std::string_view text,
                           Completeness completeness = Completeness::Required);
  static ContextTree from_entries(std::vector<ContextEntry> entries,
                                  Completeness completeness = Completeness::Required,
                                  double tolerance = kProbTolerance);

  /// One `<context> <p0> <p1>` line per context in shortlex order, with
  /// shortest round-trip decimal formatting.
  std::string serialize() const;

  const std::vector<ContextEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t height() const noexcept { return height_; }
  bool complete() const noexcept { return complete_; }
  bool irreducible() const noexcept { return irreducible_; }
  std::set<Sequence> context_set() const;

  /// Index of the unique context that is a suffix of `w`, if any. `w` may be
  /// shorter than the height.
  std::optional<std::size_t> find_suffix_context(std::span<const Symbol> w) const;

  /// The context matching a past of length >= height. Throws ValidationError
  /// when the past is too short or (incomplete trees only) nothing matches.
  const ContextEntry& longest_context(std::span<const Symbol> past) const;
  const ContextEntry& longest_context(const Sequence& past) const {
    return longest_context(past.symbols());
  }

  /// 64-bit FNV-1a of serialize(), as 16 hex digits.
  std::string fingerprint() const;

  friend bool operator==(const ContextTree& a, const ContextTree& b);

 private:
  ContextTree() = default;

  std::vector<ContextEntry> entries_;
  // by_length_[l] maps packed bits of a length-l context to its entry index.
  std::vector<std::unordered_map<std::uint64_t, std::size_t>> by_length_;
  std::size_t height_ = 0;
  bool complete_ = false;
  bool irreducible_ = false;
};

/// α, β_k, β, β*, and the perturbation constant C = 1 + 4ββ*/α.
struct TreeConstants {
  double alpha = 0.0;
  std::vector<double> beta_seq;  // β_0 .. β_{h-1}; β_k = 0 for k >= h
  double beta_sum = 0.0;
  double beta_star = 1.0;
  double c_const = 1.0;

  double beta_k(std::size_t k) const noexcept {
    return k < beta_seq.size() ? beta_seq[k] : 0.0;
  }
};

/// β_k is the sup of |1 - p(a|w)/p(a|v)| over ordered context pairs (v, w)
/// sharing a common suffix of length k, by exhaustive pair enumeration.
TreeConstants compute_constants(const ContextTree& tree);

/// τ|_K: contexts of length <= K plus the length-K suffixes of longer ones.
std::set<Sequence> truncate(const std::set<Sequence>& contexts, std::size_t k);
std::set<Sequence> truncate(const ContextTree& tree, std::size_t k);

/// max over w in τ|_K of the shortest context v with w ⪯ v. Any depth d
/// strictly greater satisfies the recovery theorem's depth condition.
std::size_t min_valid_depth(const ContextTree& tree, std::size_t k);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace vlmc
