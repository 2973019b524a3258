#include "vlmc/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "vlmc/errors.hpp"

namespace vlmc {
namespace {

TransitionRow smoothed_row(const CountTrie::Node* node) {
  if (node == nullptr) return {0.5, 0.5};
  const double total = static_cast<double>(node->next[0] + node->next[1]) + kAlphabetSize;
  return {(static_cast<double>(node->next[0]) + 1.0) / total,
          (static_cast<double>(node->next[1]) + 1.0) / total};
}

}  // namespace

CountTrie CountTrie::build(std::span<const Symbol> sample, std::size_t depth) {
  if (depth < 1 || depth > sample.size()) {
    throw ValidationError("count depth " + std::to_string(depth) +
                          " must lie in [1, sample length = " + std::to_string(sample.size()) +
                          "]");
  }
  CountTrie trie;
  trie.depth_ = depth;
  trie.n_ = sample.size();
  trie.nodes_.reserve(std::min<std::size_t>(sample.size() * depth, std::size_t{1} << 20) + 1);
  trie.nodes_.emplace_back();
  trie.nodes_[kRoot].count = sample.size() + 1;

  const std::size_t n = sample.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto next_sym = static_cast<std::size_t>(index(sample[i]));
    // Windows ending at i-1 (lengths 0..depth-1) are followed by sample[i].
    std::int32_t id = kRoot;
    ++trie.nodes_[kRoot].next[next_sym];
    const std::size_t back = std::min(depth - 1, i);
    for (std::size_t len = 1; len <= back; ++len) {
      id = trie.nodes_[static_cast<std::size_t>(id)].child[static_cast<std::size_t>(index(sample[i - len]))];
      ++trie.nodes_[static_cast<std::size_t>(id)].next[next_sym];
    }
    // Windows ending at i, lengths 1..depth.
    id = kRoot;
    const std::size_t span = std::min(depth, i + 1);
    for (std::size_t len = 1; len <= span; ++len) {
      id = trie.child_or_create(id, sample[i + 1 - len]);
      ++trie.nodes_[static_cast<std::size_t>(id)].count;
    }
  }
  return trie;
}

std::int32_t CountTrie::child_or_create(std::int32_t id, Symbol s) {
  const auto slot = static_cast<std::size_t>(index(s));
  std::int32_t c = nodes_[static_cast<std::size_t>(id)].child[slot];
  if (c != kNone) return c;
  c = static_cast<std::int32_t>(nodes_.size());
  nodes_.emplace_back();
  nodes_[static_cast<std::size_t>(id)].child[slot] = c;
  return c;
}

std::int32_t CountTrie::find(std::span<const Symbol> w) const {
  std::int32_t id = kRoot;
  for (auto it = w.rbegin(); it != w.rend() && id != kNone; ++it) {
    id = nodes_[static_cast<std::size_t>(id)].child[static_cast<std::size_t>(index(*it))];
  }
  return id;
}

std::uint64_t CountTrie::count(const Sequence& w) const {
  if (w.length() > depth_) {
    throw ValidationError("count query of length " + std::to_string(w.length()) +
                          " exceeds trie depth " + std::to_string(depth_));
  }
  const auto id = find(w.symbols());
  return id == kNone ? 0 : node(id).count;
}

std::uint64_t CountTrie::successor_count(const Sequence& w, Symbol a) const {
  if (w.length() + 1 > depth_) {
    throw ValidationError("successor query on length " + std::to_string(w.length()) +
                          " exceeds trie depth " + std::to_string(depth_));
  }
  const auto id = find(w.symbols());
  return id == kNone ? 0 : node(id).next[static_cast<std::size_t>(index(a))];
}

std::uint64_t CountTrie::successor_total(const Sequence& w) const {
  return successor_count(w, Symbol::Zero) + successor_count(w, Symbol::One);
}

std::uint64_t count_naive(std::span<const Symbol> sample, const Sequence& w) {
  if (w.length() > sample.size()) return 0;
  std::uint64_t hits = 0;
  const auto pat = w.symbols();
  for (std::size_t t = 0; t + pat.size() <= sample.size(); ++t) {
    if (std::equal(pat.begin(), pat.end(), sample.begin() + static_cast<std::ptrdiff_t>(t))) ++hits;
  }
  return hits;
}

double empirical_conditional(const CountTrie& trie, Symbol a, const Sequence& w) {
  const double num = static_cast<double>(trie.successor_count(w, a)) + 1.0;
  const double den = static_cast<double>(trie.successor_total(w)) + kAlphabetSize;
  return num / den;
}

double delta(const CountTrie& trie, const Sequence& w) {
  if (w.empty()) throw ValidationError("delta is undefined on the empty string");
  const Sequence parent = w.suffix();
  double gap = 0.0;
  for (Symbol a : kSymbols) {
    gap = std::max(gap, std::abs(empirical_conditional(trie, a, w) -
                                 empirical_conditional(trie, a, parent)));
  }
  return gap;
}

std::set<Sequence> EstimatedTree::context_set() const {
  if (contexts.empty()) return {Sequence{}};
  return {contexts.begin(), contexts.end()};
}

ContextTree EstimatedTree::to_tree() const {
  std::vector<ContextEntry> entries;
  for (const auto& [w, row] : probs) entries.push_back({w, row});
  return ContextTree::from_entries(std::move(entries), Completeness::Optional);
}

EstimatedTree estimate_tree(std::span<const Symbol> sample, double delta_threshold,
                            std::size_t d) {
  if (d >= sample.size()) {
    throw ValidationError("depth d = " + std::to_string(d) + " must be below the sample length " +
                          std::to_string(sample.size()));
  }
  if (!(delta_threshold >= 0.0)) throw ValidationError("delta threshold must be >= 0");

  const CountTrie trie = CountTrie::build(sample, d + 1);
  EstimatedTree est;
  est.delta = delta_threshold;
  est.d = d;
  est.n = sample.size();

  // `rev` holds the current node most-recent-first, so prepending is push_back.
  std::vector<Symbol> rev;
  auto to_sequence = [&rev] { return Sequence(std::vector<Symbol>(rev.rbegin(), rev.rend())); };

  // Returns whether the node or any of its extensions is significant.
  auto walk = [&](auto&& self, std::int32_t id, const TransitionRow& row, bool significant) -> bool {
    bool below = false;
    if (id != CountTrie::kNone && rev.size() < d) {
      for (Symbol u : kSymbols) {
        const std::int32_t child = trie.node(id).child[static_cast<std::size_t>(index(u))];
        const TransitionRow child_row =
            smoothed_row(child == CountTrie::kNone ? nullptr : &trie.node(child));
        const double gap = std::max(std::abs(child_row[0] - row[0]), std::abs(child_row[1] - row[1]));
        est.max_delta = std::max(est.max_delta, gap);
        rev.push_back(u);
        below = self(self, child, child_row, gap > delta_threshold) || below;
        rev.pop_back();
      }
    }
    if (significant && !below) {
      Sequence w = to_sequence();
      est.probs.emplace(w, row);
      est.contexts.insert(std::move(w));
    }
    return significant || below;
  };
  const TransitionRow root_row = smoothed_row(&trie.node(CountTrie::kRoot));
  walk(walk, CountTrie::kRoot, root_row, false);

  if (est.contexts.empty()) est.probs.emplace(Sequence{}, root_row);
  return est;
}

TruncatedComparison compare_truncated(const std::set<Sequence>& estimated,
                                      const ContextTree& truth, std::size_t k) {
  const auto est_k = truncate(estimated, k);
  const auto true_k = truncate(truth, k);
  TruncatedComparison out;
  std::set_difference(true_k.begin(), true_k.end(), est_k.begin(), est_k.end(),
                      std::inserter(out.missing, out.missing.end()));
  std::set_difference(est_k.begin(), est_k.end(), true_k.begin(), true_k.end(),
                      std::inserter(out.extra, out.extra.end()));
  out.equal = out.missing.empty() && out.extra.empty();
  return out;
}

}  // namespace vlmc
