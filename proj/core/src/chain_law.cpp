#include "vlmc/chain_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vlmc/errors.hpp"
#include "vlmc/rng.hpp"

namespace vlmc {
namespace {

std::vector<double> solve_direct(const MarkovEmbedding& m) {
  const std::size_t n = m.num_states();
  // Row i of A is the balance equation of state i: sum_s pi(s) P(s, i) - pi(i) = 0;
  // the last equation is replaced by normalization.
  std::vector<double> a(n * n, 0.0);
  std::vector<double> b(n, 0.0);
  for (StateIndex s = 0; s < n; ++s) {
    for (Symbol sym : kSymbols) a[m.next(s, sym) * n + s] += m.emit(s, sym);
  }
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] -= 1.0;
  std::fill(a.begin() + static_cast<std::ptrdiff_t>((n - 1) * n), a.end(), 1.0);
  b[n - 1] = 1.0;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    }
    if (a[pivot * n + col] == 0.0) throw ValidationError("singular stationary system");
    if (pivot != col) {
      std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(col * n),
                       a.begin() + static_cast<std::ptrdiff_t>(col * n + n),
                       a.begin() + static_cast<std::ptrdiff_t>(pivot * n));
      std::swap(b[col], b[pivot]);
    }
    const double diag = a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / diag;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a[i * n + c] * x[c];
    x[i] = acc / a[i * n + i];
  }
  return x;
}

}  // namespace

MarkovEmbedding MarkovEmbedding::build(const ContextTree& tree) {
  if (tree.height() > kMaxEmbeddingOrder) {
    throw ValidationError("tree height " + std::to_string(tree.height()) +
                          " exceeds the embedding cap " + std::to_string(kMaxEmbeddingOrder));
  }
  if (!tree.complete()) throw ValidationError("embedding requires a complete context tree");

  MarkovEmbedding m;
  m.order_ = tree.height();
  const std::size_t n = std::size_t{1} << m.order_;
  m.mask_ = static_cast<StateIndex>(n - 1);
  m.p_zero_.resize(n);
  m.p_one_.resize(n);
  m.context_.resize(n);
  for (StateIndex s = 0; s < n; ++s) {
    const Sequence past = Sequence::from_bits(s, m.order_);
    const auto idx = tree.find_suffix_context(past.symbols());
    if (!idx) throw ValidationError("no context for state " + past.str());
    const auto& row = tree.entries()[*idx].row;
    m.context_[s] = *idx;
    m.p_zero_[s] = row[0];
    m.p_one_[s] = row[1];
  }
  return m;
}

StationaryMeasure stationary(const MarkovEmbedding& m) {
  StationaryMeasure out;
  const std::size_t n = m.num_states();
  if (m.order() <= kDirectSolveMaxOrder) {
    out.pi = solve_direct(m);
    out.direct_solve = true;
  } else {
    out.direct_solve = false;
    std::vector<double> cur(n, 1.0 / static_cast<double>(n));
    std::vector<double> nxt(n);
    bool converged = false;
    for (std::size_t it = 1; it <= kPowerIterationMaxSteps; ++it) {
      std::fill(nxt.begin(), nxt.end(), 0.0);
      for (StateIndex s = 0; s < n; ++s) {
        for (Symbol sym : kSymbols) nxt[m.next(s, sym)] += cur[s] * m.emit(s, sym);
      }
      double diff = 0.0;
      for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(nxt[i] - cur[i]));
      cur.swap(nxt);
      out.iterations = it;
      if (diff < kPowerIterationTolerance) {
        converged = true;
        break;
      }
    }
    if (!converged) throw ValidationError("stationary power iteration did not converge");
    out.pi = std::move(cur);
  }
  double total = 0.0;
  for (double p : out.pi) total += p;
  for (double& p : out.pi) p /= total;
  return out;
}

ChainLaw::ChainLaw(ContextTree tree)
    : tree_(std::move(tree)),
      constants_(compute_constants(tree_)),
      embedding_(MarkovEmbedding::build(tree_)),
      stationary_(stationary(embedding_)) {}

double ChainLaw::marginal(std::span<const Symbol> w) const {
  const std::size_t h = embedding_.order();
  const auto& pi = stationary_.pi;
  if (w.size() <= h) {
    // By stationarity p(w) is the mass of the states ending in w.
    StateIndex tail = 0;
    for (Symbol s : w) tail = (tail << 1) | static_cast<StateIndex>(index(s));
    const std::size_t free_bits = h - w.size();
    double total = 0.0;
    for (StateIndex head = 0; head < (StateIndex{1} << free_bits); ++head) {
      total += pi[(head << w.size()) | tail];
    }
    return total;
  }
  StateIndex s = 0;
  for (std::size_t i = 0; i < h; ++i) s = (s << 1) | static_cast<StateIndex>(index(w[i]));
  double p = pi[s];
  for (std::size_t i = h; i < w.size(); ++i) {
    p *= embedding_.emit(s, w[i]);
    s = embedding_.next(s, w[i]);
  }
  return p;
}

double ChainLaw::conditional(Symbol a, std::span<const Symbol> w) const {
  if (auto idx = tree_.find_suffix_context(w)) {
    return tree_.entries()[*idx].row[static_cast<std::size_t>(index(a))];
  }
  const double pw = marginal(w);
  if (!(pw > 0.0)) throw ValidationError("conditional on a null cylinder " + Sequence(w).str());
  std::vector<Symbol> wa(w.begin(), w.end());
  wa.push_back(a);
  return marginal(wa) / pw;
}

double ChainLaw::d_k(std::size_t k) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : tree_.entries()) {
    if (e.context.empty() || e.context.length() > k) continue;
    const Sequence parent = e.context.suffix();
    double gap = 0.0;
    for (Symbol a : kSymbols) {
      gap = std::max(gap, std::abs(e.row[static_cast<std::size_t>(index(a))] -
                                   conditional(a, parent)));
    }
    best = std::min(best, gap);
  }
  return best;
}

SamplePath ChainLaw::sample(std::size_t n, std::uint64_t seed) const {
  const std::size_t h = embedding_.order();
  if (n < h) {
    throw ValidationError("sample length " + std::to_string(n) + " is shorter than the tree height " +
                          std::to_string(h));
  }
  SamplePath path;
  path.seed = seed;
  path.source = tree_.fingerprint();
  path.symbols.resize(n);

  Rng rng(seed);
  const auto& pi = stationary_.pi;
  const double u0 = rng.uniform01();
  StateIndex s = static_cast<StateIndex>(pi.size() - 1);
  double acc = 0.0;
  for (StateIndex i = 0; i < pi.size(); ++i) {
    acc += pi[i];
    if (u0 < acc) {
      s = i;
      break;
    }
  }
  for (std::size_t i = 0; i < h; ++i) {
    path.symbols[i] = symbol_from_bit(s >> (h - 1 - i));
  }
  for (std::size_t t = h; t < n; ++t) {
    const Symbol a = rng.uniform01() < embedding_.emit(s, Symbol::Zero) ? Symbol::Zero : Symbol::One;
    path.symbols[t] = a;
    s = embedding_.next(s, a);
  }
  return path;
}

}  // namespace vlmc
