#include "vlmc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vlmc/errors.hpp"

namespace vlmc {

double Theorem2Params::margin() const noexcept {
  return std::min(delta, d_d - delta) - 2.0 * epsilon * c_const;
}

Theorem2Params make_theorem2_params(const PerturbedLaw& law, std::size_t d, std::size_t k,
                                    std::uint64_t n, double delta) {
  const ChainLaw& base = law.base();
  Theorem2Params p;
  p.d = d;
  p.k = k;
  p.n = n;
  p.delta = delta;
  p.epsilon = law.epsilon();
  p.c_const = base.constants().c_const;
  p.beta = base.constants().beta_sum;
  p.d_d = base.d_k(d);
  p.q_d = law.q_min(d);
  p.min_depth = min_valid_depth(base.tree(), k);
  return p;
}

Admissibility check_admissible(const Theorem2Params& p) {
  const double noise = 2.0 * p.c_const * p.epsilon;
  if (p.d <= p.min_depth) {
    return {false, "depth condition: d = " + std::to_string(p.d) + " must exceed " +
                       std::to_string(p.min_depth)};
  }
  if (!(noise < p.delta)) {
    return {false, "delta window: delta = " + format_double(p.delta) + " must exceed 2*C*eps = " +
                       format_double(noise)};
  }
  if (!(p.delta < p.d_d - noise)) {
    return {false, "delta window: delta = " + format_double(p.delta) +
                       " must be below D_d - 2*C*eps = " + format_double(p.d_d - noise)};
  }
  const double threshold = 4.0 * (kAlphabetSize + 1) / (p.margin() * p.q_d) + static_cast<double>(p.d);
  if (!(static_cast<double>(p.n) > threshold)) {
    return {false, "sample size: n = " + std::to_string(p.n) + " must exceed " +
                       format_double(threshold)};
  }
  return {true, {}};
}

double theorem2_bound_formula(const Theorem2Params& p) {
  constexpr double e = std::numbers::e;
  const double a = kAlphabetSize;
  const double prefactor =
      4.0 * std::exp(1.0 / e) * (a + 1.0) * std::pow(a, static_cast<double>(p.d + 1));
  const double m = p.margin();
  const double rate = m * m * p.q_d * p.q_d /
                      (256.0 * e * (1.0 + p.beta) * a * a * static_cast<double>(p.d + 1));
  return prefactor * std::exp(-(static_cast<double>(p.n) - static_cast<double>(p.d)) * rate);
}

double theorem2_bound(const Theorem2Params& p) {
  if (auto adm = check_admissible(p); !adm.ok) throw AdmissibilityError(adm.violated);
  return theorem2_bound_formula(p);
}

std::uint64_t theorem2_min_n(const Theorem2Params& p) {
  const double m = p.margin();
  if (!(m > 0.0)) {
    throw AdmissibilityError("empty delta window: min(delta, D_d - delta) - 2*C*eps = " +
                             format_double(m));
  }
  const double threshold = 4.0 * (kAlphabetSize + 1) / (m * p.q_d) + static_cast<double>(p.d);
  if (!(threshold < static_cast<double>(kMaxSampleLength))) {
    throw AdmissibilityError("minimal sample size " + format_double(threshold) +
                             " exceeds the cap " + std::to_string(kMaxSampleLength));
  }
  return static_cast<std::uint64_t>(std::floor(threshold)) + 1;
}

DeltaWindow theoretical_delta_window(const ChainLaw& law, double epsilon, std::size_t d) {
  const double noise = 2.0 * law.constants().c_const * epsilon;
  return {noise, law.d_k(d) - noise};
}

}  // namespace vlmc
