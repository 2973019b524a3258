#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vlmc/context_tree.hpp"
#include "vlmc/sequence.hpp"

namespace vlmc {

/// Largest tree height the order-h embedding accepts (2^20 states).
inline constexpr std::size_t kMaxEmbeddingOrder = 20;
/// Heights up to this use a dense linear solve for the stationary law.
inline constexpr std::size_t kDirectSolveMaxOrder = 10;
inline constexpr double kPowerIterationTolerance = 1e-12;
inline constexpr std::size_t kPowerIterationMaxSteps = 1'000'000;

/// Hidden states are the last h symbols packed into an integer with the most
/// recent symbol in bit 0. For h = 2 the states "00","01","10","11" are 0..3.
using StateIndex = std::uint32_t;

/// The chain seen as an order-h Markov chain on {0,1}^h.
class MarkovEmbedding {
 public:
  /// Requires a complete tree with height <= kMaxEmbeddingOrder.
  static MarkovEmbedding build(const ContextTree& tree);

  std::size_t order() const noexcept { return order_; }
  std::size_t num_states() const noexcept { return p_one_.size(); }

  double emit(StateIndex s, Symbol a) const noexcept {
    return a == Symbol::One ? p_one_[s] : p_zero_[s];
  }
  StateIndex next(StateIndex s, Symbol a) const noexcept {
    return static_cast<StateIndex>(((s << 1) | static_cast<StateIndex>(index(a))) & mask_);
  }
  /// Index of the context used by state s.
  std::size_t context_of(StateIndex s) const noexcept { return context_[s]; }

 private:
  std::size_t order_ = 0;
  StateIndex mask_ = 0;
  std::vector<double> p_zero_;
  std::vector<double> p_one_;
  std::vector<std::size_t> context_;
};

struct StationaryMeasure {
  std::vector<double> pi;
  bool direct_solve = true;
  std::size_t iterations = 0;
};

/// Solves pi P = pi, sum(pi) = 1. Throws ValidationError on non-convergence.
StationaryMeasure stationary(const MarkovEmbedding& embedding);

struct SamplePath {
  std::vector<Symbol> symbols;
  std::uint64_t seed = 0;
  std::string source;  // fingerprint of the generating tree, or a file label
};

/// Exact law of the stationary chain compatible with a complete finite tree.
/// Immutable after construction.
class ChainLaw {
 public:
  explicit ChainLaw(ContextTree tree);

  const ContextTree& tree() const noexcept { return tree_; }
  const TreeConstants& constants() const noexcept { return constants_; }
  const MarkovEmbedding& embedding() const noexcept { return embedding_; }
  const StationaryMeasure& stationary_measure() const noexcept { return stationary_; }
  std::size_t height() const noexcept { return tree_.height(); }

  /// p(w) = P(X_1^j = w); p(λ) = 1.
  double marginal(std::span<const Symbol> w) const;
  double marginal(const Sequence& w) const { return marginal(w.symbols()); }

  /// p(a|w). Exact tree row when a context is a suffix of w, otherwise the
  /// stationary mixture p(wa)/p(w). Throws ValidationError when p(w) = 0.
  double conditional(Symbol a, std::span<const Symbol> w) const;
  double conditional(Symbol a, const Sequence& w) const { return conditional(a, w.symbols()); }

  /// D_k; +infinity when no context has length in [1, k].
  double d_k(std::size_t k) const;

  /// Stationary path of length n: the first h symbols are drawn from pi.
  SamplePath sample(std::size_t n, std::uint64_t seed) const;

 private:
  ContextTree tree_;
  TreeConstants constants_;
  MarkovEmbedding embedding_;
  StationaryMeasure stationary_;
};

}  // namespace vlmc
