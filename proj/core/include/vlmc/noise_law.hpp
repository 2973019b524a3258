#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "vlmc/chain_law.hpp"
#include "vlmc/sequence.hpp"

namespace vlmc {

inline constexpr std::size_t kMaxMarginalLength = 30;
inline constexpr std::size_t kMaxQMinDepth = 20;
inline constexpr std::size_t kMaxCertifyDepth = 16;
inline constexpr std::size_t kMaxLemmaDepth = 12;
inline constexpr std::size_t kMaxWindowDepth = 16;
/// Slack added to every exact-law inequality check.
inline constexpr double kCertifySlack = 1e-10;

/// Independent flips: Z_t = X_t xor xi_t with P(xi_t = 1) = epsilon.
class PerturbationModel {
 public:
  /// Throws ValidationError unless 0 <= epsilon <= 1.
  explicit PerturbationModel(double epsilon);
  double epsilon() const noexcept { return epsilon_; }

 private:
  double epsilon_;
};

/// Flips each symbol independently with probability epsilon. Position t is
/// flipped iff the t-th uniform draw is below epsilon, so for a fixed seed the
/// flip sets are nested in epsilon.
SamplePath perturb(const SamplePath& path, const PerturbationModel& model, std::uint64_t seed);

/// Normalized forward variable: the law of the hidden state given an observed
/// prefix, with the prefix's log-probability carried separately.
struct FilterState {
  std::vector<double> weights;
  double log_prob = 0.0;
  bool null() const noexcept;
};

/// Exact law of the perturbed chain by forward recursion over the hidden
/// order-h states. Pure given (tree, epsilon); safe to share across threads.
///
/// Internally the hidden state has order max(h, 1) so that the most recent
/// true symbol is always part of the state.
class PerturbedLaw {
 public:
  PerturbedLaw(std::shared_ptr<const ChainLaw> base, PerturbationModel model);

  const ChainLaw& base() const noexcept { return *base_; }
  double epsilon() const noexcept { return epsilon_; }
  std::size_t num_states() const noexcept { return pi_.size(); }

  FilterState initial() const;
  FilterState advance(const FilterState& f, Symbol z) const;
  FilterState filter(std::span<const Symbol> w) const;

  /// P(Z_next = a | observed prefix summarized by f).
  double predict(const FilterState& f, Symbol a) const;
  /// P(X_next = a | observed prefix summarized by f).
  double predict_hidden(const FilterState& f, Symbol a) const;

  /// q(w); ℓ(w) <= kMaxMarginalLength.
  double q_marginal(const Sequence& w) const;
  double log_q_marginal(const Sequence& w) const;
  /// q(a|w) = q(wa)/q(w). Throws ValidationError when q(w) = 0.
  double q_conditional(Symbol a, const Sequence& w) const;
  /// q_d: smallest positive cylinder probability over 1 <= ℓ(w) <= d.
  double q_min(std::size_t d) const;

  // Hidden-chain pieces, exposed for the lemma checks.
  double emit(StateIndex s, Symbol a) const noexcept {
    return a == Symbol::One ? p_one_[s] : p_zero_[s];
  }
  StateIndex next(StateIndex s, Symbol a) const noexcept {
    return static_cast<StateIndex>(((s << 1) | static_cast<StateIndex>(index(a))) & mask_);
  }

 private:
  std::shared_ptr<const ChainLaw> base_;
  double epsilon_;
  std::size_t order_;
  StateIndex mask_;
  std::vector<double> pi_;
  std::vector<double> p_zero_;
  std::vector<double> p_one_;
};

struct Theorem1Row {
  std::size_t j = 0;
  double max_gap = 0.0;
  Sequence argmax;  // w_{-j}^{0}
  double bound = 0.0;
  bool holds = false;
};

struct Theorem1Report {
  std::vector<Theorem1Row> rows;
  double max_gap = 0.0;
  double bound = 0.0;  // C * epsilon
  bool holds = false;
};

/// Exhaustive sup over 0 <= j <= j_max and all w_{-j}^0 of
/// |q(w_0 | w_{-j}^{-1}) - p(w_0 | w_{-j}^{-1})| against C * epsilon.
Theorem1Report theorem1_certify(const PerturbedLaw& law, std::size_t j_max);

struct LemmaReport {
  std::size_t k_max = 0;
  double alpha = 0.0;
  double min_q_conditional = 1.0;  // min q(a|w)
  double min_hidden_given_observed = 1.0;  // min P(X_0 = a | Z past = w)
  bool floor_holds = false;
  double max_flip_posterior = 0.0;
  double flip_bound = 0.0;  // (beta* / alpha) * epsilon
  bool flip_holds = false;
  bool holds = false;
};

/// Checks the conditional floor (>= alpha) over ℓ(w) <= k_max, and the flip
/// posterior P(X_{-j-1} != w_{-j-1} | X_{-j}^{-1} = w_{-j}^{-1},
/// Z_{-k}^{-j-1} = w_{-k}^{-j-1}) <= (beta*/alpha) epsilon for 0 <= j < k <= k_max.
LemmaReport lemma_bounds_check(const PerturbedLaw& law, std::size_t k_max);

struct DeltaWindow {
  double low = 0.0;
  double high = 0.0;
  /// low < high with a finite upper end.
  bool usable() const noexcept;
  double midpoint() const noexcept { return 0.5 * (low + high); }
};

/// Exact-law separation at depth d: `high` is the smallest context signal
/// min_w max_a |q(a|w) - q(a|suf w)| over contexts with 1 <= ℓ(w) <= d, `low`
/// the largest such gap over strict extensions uw of contexts with ℓ(uw) <= d.
DeltaWindow exact_delta_window(const PerturbedLaw& law, std::size_t d);

}  // namespace vlmc
