#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "vlmc/context_tree.hpp"
#include "vlmc/sequence.hpp"

namespace vlmc {

/// Window counts N_n(w) for every w with ℓ(w) <= depth, plus successor counts
/// N_n(wa) for ℓ(w) <= depth - 1. Nodes are keyed by extending into the past:
/// the children of w are 0w and 1w. Absent nodes have count 0.
///
/// Immutable after build. Tries of separate segments cannot be merged (the
/// windows straddling the cut would be lost).
class CountTrie {
 public:
  /// depth = d + 1. Throws ValidationError unless 1 <= depth <= sample size.
  static CountTrie build(std::span<const Symbol> sample, std::size_t depth);

  std::size_t depth() const noexcept { return depth_; }
  std::size_t sample_length() const noexcept { return n_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  /// N_n(w); ℓ(w) <= depth.
  std::uint64_t count(const Sequence& w) const;
  /// N_n(wa); ℓ(w) <= depth - 1. N_n(λa) = N_n(a).
  std::uint64_t successor_count(const Sequence& w, Symbol a) const;
  /// N_n(w·) = sum_b N_n(wb).
  std::uint64_t successor_total(const Sequence& w) const;

  static constexpr std::int32_t kNone = -1;
  static constexpr std::int32_t kRoot = 0;

  struct Node {
    std::array<std::int32_t, kAlphabetSize> child{kNone, kNone};
    std::uint64_t count = 0;
    std::array<std::uint64_t, kAlphabetSize> next{0, 0};
  };
  /// Node reached from the root by prepending the symbols of w right to
  /// left, or kNone.
  std::int32_t find(std::span<const Symbol> w) const;
  const Node& node(std::int32_t id) const { return nodes_[static_cast<std::size_t>(id)]; }

 private:
  std::int32_t child_or_create(std::int32_t id, Symbol s);

  std::size_t depth_ = 0;
  std::size_t n_ = 0;
  std::vector<Node> nodes_;
};

/// Direct O(n ℓ(w)) window scan; reference implementation for CountTrie.
std::uint64_t count_naive(std::span<const Symbol> sample, const Sequence& w);

/// Smoothed empirical transition (N_n(wa) + 1) / (N_n(w·) + |A|).
double empirical_conditional(const CountTrie& trie, Symbol a, const Sequence& w);

/// Δ_n(w) = max_a |q̂(a|w) - q̂(a|suf w)|; 1 <= ℓ(w) <= depth - 1.
double delta(const CountTrie& trie, const Sequence& w);

struct EstimatedTree {
  /// Selected contexts; empty means the memoryless model (root only).
  std::set<Sequence, ShortlexLess> contexts;
  /// q̂(·|w) per context, or the single q̂(·|λ) row when memoryless.
  std::map<Sequence, TransitionRow, ShortlexLess> probs;
  double delta = 0.0;
  std::size_t d = 0;
  std::size_t n = 0;
  double max_delta = 0.0;  // largest Δ_n over all evaluated nodes

  bool memoryless() const noexcept { return contexts.empty(); }
  /// contexts, or {λ} for the memoryless model.
  std::set<Sequence> context_set() const;
  /// As a context tree (not necessarily complete).
  ContextTree to_tree() const;
};

/// Δ-threshold Context estimator: nodes w with 1 <= ℓ(w) <= d and Δ_n(w) > δ
/// having no extension uw (ℓ(uw) <= d) with Δ_n(uw) > δ.
///
/// Only nodes whose suffix occurs in the sample are evaluated; every other
/// node compares two uniform rows and has Δ_n = 0. Requires d < n, δ >= 0.
EstimatedTree estimate_tree(std::span<const Symbol> sample, double delta_threshold, std::size_t d);

struct TruncatedComparison {
  bool equal = false;
  std::set<Sequence> missing;  // in truth|_K only
  std::set<Sequence> extra;    // in estimate|_K only
};

TruncatedComparison compare_truncated(const std::set<Sequence>& estimated,
                                      const ContextTree& truth, std::size_t k);
inline TruncatedComparison compare_truncated(const EstimatedTree& est, const ContextTree& truth,
                                             std::size_t k) {
  return compare_truncated(est.context_set(), truth, k);
}

}  // namespace vlmc
