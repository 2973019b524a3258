#include "vlmc/noise_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vlmc/errors.hpp"
#include "vlmc/rng.hpp"

namespace vlmc {

PerturbationModel::PerturbationModel(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw ValidationError("flip probability must lie in [0, 1], got " + format_double(epsilon));
  }
}

SamplePath perturb(const SamplePath& path, const PerturbationModel& model, std::uint64_t seed) {
  SamplePath out;
  out.seed = seed;
  out.source = path.source;
  out.symbols = path.symbols;
  Rng rng(seed);
  const double eps = model.epsilon();
  for (Symbol& s : out.symbols) {
    if (rng.uniform01() < eps) s = complement(s);
  }
  return out;
}

bool FilterState::null() const noexcept {
  return log_prob == -std::numeric_limits<double>::infinity();
}

PerturbedLaw::PerturbedLaw(std::shared_ptr<const ChainLaw> base, PerturbationModel model)
    : base_(std::move(base)), epsilon_(model.epsilon()) {
  if (!base_) throw ValidationError("perturbed law needs a base chain law");
  const auto& emb = base_->embedding();
  order_ = std::max<std::size_t>(emb.order(), 1);
  const std::size_t n = std::size_t{1} << order_;
  mask_ = static_cast<StateIndex>(n - 1);
  const auto base_mask = static_cast<StateIndex>(emb.num_states() - 1);
  pi_.resize(n);
  p_zero_.resize(n);
  p_one_.resize(n);
  for (StateIndex s = 0; s < n; ++s) {
    p_zero_[s] = emb.emit(s & base_mask, Symbol::Zero);
    p_one_[s] = emb.emit(s & base_mask, Symbol::One);
    pi_[s] = emb.order() == order_ ? base_->stationary_measure().pi[s]
                                   : base_->marginal(Sequence::from_bits(s, order_));
  }
}

FilterState PerturbedLaw::initial() const { return FilterState{pi_, 0.0}; }

FilterState PerturbedLaw::advance(const FilterState& f, Symbol z) const {
  FilterState out;
  out.weights.assign(pi_.size(), 0.0);
  if (f.null()) {
    out.log_prob = f.log_prob;
    return out;
  }
  for (StateIndex s = 0; s < pi_.size(); ++s) {
    const double w = f.weights[s];
    if (w == 0.0) continue;
    for (Symbol x : kSymbols) {
      const double channel = x == z ? 1.0 - epsilon_ : epsilon_;
      out.weights[next(s, x)] += w * emit(s, x) * channel;
    }
  }
  double total = 0.0;
  for (double w : out.weights) total += w;
  if (!(total > 0.0)) {
    std::fill(out.weights.begin(), out.weights.end(), 0.0);
    out.log_prob = -std::numeric_limits<double>::infinity();
    return out;
  }
  for (double& w : out.weights) w /= total;
  out.log_prob = f.log_prob + std::log(total);
  return out;
}

FilterState PerturbedLaw::filter(std::span<const Symbol> w) const {
  FilterState f = initial();
  for (Symbol z : w) f = advance(f, z);
  return f;
}

double PerturbedLaw::predict(const FilterState& f, Symbol a) const {
  const Symbol b = complement(a);
  double p = 0.0;
  for (StateIndex s = 0; s < pi_.size(); ++s) {
    p += f.weights[s] * ((1.0 - epsilon_) * emit(s, a) + epsilon_ * emit(s, b));
  }
  return p;
}

double PerturbedLaw::predict_hidden(const FilterState& f, Symbol a) const {
  double p = 0.0;
  for (StateIndex s = 0; s < pi_.size(); ++s) p += f.weights[s] * emit(s, a);
  return p;
}

double PerturbedLaw::log_q_marginal(const Sequence& w) const {
  if (w.length() > kMaxMarginalLength) {
    throw ValidationError("cylinder length " + std::to_string(w.length()) + " exceeds the cap " +
                          std::to_string(kMaxMarginalLength));
  }
  return filter(w.symbols()).log_prob;
}

double PerturbedLaw::q_marginal(const Sequence& w) const { return std::exp(log_q_marginal(w)); }

double PerturbedLaw::q_conditional(Symbol a, const Sequence& w) const {
  if (w.length() >= kMaxMarginalLength) {
    throw ValidationError("conditioning length " + std::to_string(w.length()) +
                          " exceeds the cap");
  }
  const FilterState f = filter(w.symbols());
  if (f.null()) throw ValidationError("conditional on a null cylinder " + w.str());
  return predict(f, a);
}

double PerturbedLaw::q_min(std::size_t d) const {
  if (d > kMaxQMinDepth) {
    throw ValidationError("q_min depth " + std::to_string(d) + " exceeds the cap " +
                          std::to_string(kMaxQMinDepth));
  }
  double best = std::numeric_limits<double>::infinity();
  auto dfs = [&](auto&& self, const FilterState& f, std::size_t len) -> void {
    for (Symbol z : kSymbols) {
      FilterState g = advance(f, z);
      if (!g.null()) best = std::min(best, std::exp(g.log_prob));
      if (len + 1 < d) self(self, g, len + 1);
    }
  };
  if (d >= 1) dfs(dfs, initial(), 0);
  return best;
}

Theorem1Report theorem1_certify(const PerturbedLaw& law, std::size_t j_max) {
  if (j_max > kMaxCertifyDepth) {
    throw ValidationError("j_max " + std::to_string(j_max) + " exceeds the cap " +
                          std::to_string(kMaxCertifyDepth));
  }
  const ChainLaw& base = law.base();
  Theorem1Report report;
  report.bound = base.constants().c_const * law.epsilon();
  report.rows.resize(j_max + 1);
  for (std::size_t j = 0; j <= j_max; ++j) report.rows[j].j = j;

  std::vector<Symbol> w;
  w.reserve(j_max + 1);
  auto dfs = [&](auto&& self, const FilterState& f) -> void {
    if (f.null()) return;
    auto& row = report.rows[w.size()];
    for (Symbol a : kSymbols) {
      const double gap = std::abs(law.predict(f, a) - base.conditional(a, w));
      if (gap > row.max_gap || row.argmax.empty()) {
        row.max_gap = std::max(row.max_gap, gap);
        row.argmax = Sequence(w).append(a);
      }
    }
    if (w.size() == j_max) return;
    for (Symbol z : kSymbols) {
      w.push_back(z);
      self(self, law.advance(f, z));
      w.pop_back();
    }
  };
  dfs(dfs, law.initial());

  report.holds = true;
  for (auto& row : report.rows) {
    row.bound = report.bound;
    row.holds = row.max_gap <= report.bound + kCertifySlack;
    report.max_gap = std::max(report.max_gap, row.max_gap);
    report.holds = report.holds && row.holds;
  }
  return report;
}

LemmaReport lemma_bounds_check(const PerturbedLaw& law, std::size_t k_max) {
  if (k_max > kMaxLemmaDepth) {
    throw ValidationError("k_max " + std::to_string(k_max) + " exceeds the cap " +
                          std::to_string(kMaxLemmaDepth));
  }
  const auto& constants = law.base().constants();
  LemmaReport r;
  r.k_max = k_max;
  r.alpha = constants.alpha;
  r.flip_bound = constants.beta_star / constants.alpha * law.epsilon();
  const std::size_t n = law.num_states();

  // Posterior of the true symbol behind the last observation, after the
  // following j true symbols are revealed as `reveal`. Split by whether the
  // hidden symbol agrees with the observation and propagate both halves.
  auto flip_posteriors = [&](const FilterState& f, Symbol observed, std::size_t max_reveal) {
    std::vector<double> keep(n, 0.0), flip(n, 0.0);
    for (StateIndex s = 0; s < n; ++s) {
      (symbol_from_bit(s) == observed ? keep : flip)[s] = f.weights[s];
    }
    auto dfs = [&](auto&& self, const std::vector<double>& k, const std::vector<double>& fl,
                   std::size_t depth) -> void {
      double sk = 0.0, sf = 0.0;
      for (StateIndex s = 0; s < n; ++s) {
        sk += k[s];
        sf += fl[s];
      }
      if (sk + sf > 0.0) r.max_flip_posterior = std::max(r.max_flip_posterior, sf / (sk + sf));
      if (depth == max_reveal || !(sk + sf > 0.0)) return;
      const double scale = 1.0 / (sk + sf);
      for (Symbol x : kSymbols) {
        std::vector<double> k2(n, 0.0), f2(n, 0.0);
        for (StateIndex s = 0; s < n; ++s) {
          const double e = law.emit(s, x) * scale;
          k2[law.next(s, x)] += k[s] * e;
          f2[law.next(s, x)] += fl[s] * e;
        }
        self(self, k2, f2, depth + 1);
      }
    };
    dfs(dfs, keep, flip, 0);
  };

  std::size_t observed_len = 0;
  auto dfs = [&](auto&& self, const FilterState& f, Symbol last) -> void {
    if (f.null()) return;
    for (Symbol a : kSymbols) {
      r.min_q_conditional = std::min(r.min_q_conditional, law.predict(f, a));
      r.min_hidden_given_observed = std::min(r.min_hidden_given_observed, law.predict_hidden(f, a));
    }
    if (observed_len >= 1) flip_posteriors(f, last, k_max - observed_len);
    if (observed_len == k_max) return;
    for (Symbol z : kSymbols) {
      ++observed_len;
      self(self, law.advance(f, z), z);
      --observed_len;
    }
  };
  dfs(dfs, law.initial(), Symbol::Zero);

  r.floor_holds = r.min_q_conditional >= r.alpha - kCertifySlack &&
                  r.min_hidden_given_observed >= r.alpha - kCertifySlack;
  r.flip_holds = r.max_flip_posterior <= r.flip_bound + kCertifySlack;
  r.holds = r.floor_holds && r.flip_holds;
  return r;
}

bool DeltaWindow::usable() const noexcept { return std::isfinite(high) && low < high; }

DeltaWindow exact_delta_window(const PerturbedLaw& law, std::size_t d) {
  if (d > kMaxWindowDepth) {
    throw ValidationError("window depth " + std::to_string(d) + " exceeds the cap " +
                          std::to_string(kMaxWindowDepth));
  }
  auto signal = [&](const Sequence& x) {
    const FilterState fx = law.filter(x.symbols());
    const FilterState fs = law.filter(x.suffix().symbols());
    double gap = 0.0;
    for (Symbol a : kSymbols) gap = std::max(gap, std::abs(law.predict(fx, a) - law.predict(fs, a)));
    return gap;
  };

  DeltaWindow win;
  win.low = 0.0;
  win.high = std::numeric_limits<double>::infinity();
  for (const auto& e : law.base().tree().entries()) {
    const Sequence& w = e.context;
    if (w.length() > d) continue;
    if (!w.empty()) win.high = std::min(win.high, signal(w));
    auto extend = [&](auto&& self, const Sequence& x) -> void {
      if (x.length() == d) return;
      for (Symbol u : kSymbols) {
        const Sequence ux = x.prepend(u);
        win.low = std::max(win.low, signal(ux));
        self(self, ux);
      }
    };
    extend(extend, w);
  }
  return win;
}

}  // namespace vlmc
