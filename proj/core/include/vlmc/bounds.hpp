#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "vlmc/context_tree.hpp"
#include "vlmc/noise_law.hpp"

namespace vlmc {

/// Everything the recovery bound depends on. The derived fields are filled by
/// make_theorem2_params from the exact laws; tests may also set them by hand.
struct Theorem2Params {
  std::size_t d = 0;
  std::size_t k = 0;
  std::uint64_t n = 0;
  double delta = 0.0;
  double epsilon = 0.0;
  // derived
  double c_const = 1.0;
  double d_d = 0.0;    // D_d of the unperturbed chain
  double q_d = 0.0;    // smallest cylinder probability of Z up to length d
  double beta = 0.0;   // summed continuity rate
  std::size_t min_depth = 0;  // min_valid_depth(tree, K); d must exceed it

  /// min(δ, D_d - δ) - 2εC; positive iff δ is inside the theoretical window.
  double margin() const noexcept;
};

Theorem2Params make_theorem2_params(const PerturbedLaw& law, std::size_t d, std::size_t k,
                                    std::uint64_t n, double delta);

struct Admissibility {
  bool ok = false;
  std::string violated;  // empty when ok
};

Admissibility check_admissible(const Theorem2Params& p);

/// The explicit exponential bound, evaluated without any admissibility check.
/// The value may exceed 1.
double theorem2_bound_formula(const Theorem2Params& p);

/// The bound for admissible parameters; throws AdmissibilityError naming the
/// first violated condition otherwise.
double theorem2_bound(const Theorem2Params& p);

/// Largest n accepted anywhere in the library.
inline constexpr std::uint64_t kMaxSampleLength = 100'000'000;

/// Smallest integer n with n > 4(|A|+1) / (margin * q_d) + d. Throws
/// AdmissibilityError when the δ window is empty or the result exceeds
/// kMaxSampleLength.
std::uint64_t theorem2_min_n(const Theorem2Params& p);

/// (2Cε, D_d - 2Cε).
DeltaWindow theoretical_delta_window(const ChainLaw& law, double epsilon, std::size_t d);

}  // namespace vlmc
