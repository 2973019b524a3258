#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>

#include "oracles.hpp"
#include "vlmc/chain_law.hpp"
#include "vlmc/errors.hpp"

using namespace vlmc;

namespace {

ContextTree comb_tree(std::size_t height) {
  // 1, 10, 100, ..., 10^{h-1}, 0^h with probabilities drifting by depth
  std::string text;
  std::string zeros;
  for (std::size_t l = 1; l <= height; ++l) {
    const double p = 0.2 + 0.05 * static_cast<double>(l % 10);
    text += "1" + zeros + " " + format_double(p) + " " + format_double(1.0 - p) + "\n";
    zeros += "0";
  }
  text += zeros + " 0.5 0.5\n";
  return ContextTree::parse(text);
}

double residual(const ChainLaw& law) {
  const auto& m = law.embedding();
  const auto& pi = law.stationary_measure().pi;
  std::vector<double> next(pi.size(), 0.0);
  for (StateIndex s = 0; s < pi.size(); ++s) {
    for (Symbol a : kSymbols) next[m.next(s, a)] += pi[s] * m.emit(s, a);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) worst = std::max(worst, std::abs(next[i] - pi[i]));
  return worst;
}

}  // namespace

TEST_CASE("embedding rows") {
  const ChainLaw law(oracle::t1());
  const auto& m = law.embedding();
  CHECK(m.num_states() == 4);
  // state "01" ends in 1 -> context "1"
  CHECK(m.emit(0b01, Symbol::Zero) == 0.7);
  CHECK(m.emit(0b01, Symbol::One) == 0.3);
  CHECK(m.emit(0b00, Symbol::Zero) == 0.2);
  CHECK(m.emit(0b00, Symbol::One) == 0.8);
  CHECK(m.next(0b01, Symbol::Zero) == 0b10);

  const ChainLaw order1(ContextTree::parse("0 0.9 0.1\n1 0.2 0.8\n"));
  CHECK(order1.embedding().num_states() == 2);
  CHECK(order1.embedding().emit(0, Symbol::Zero) == 0.9);
  CHECK(order1.embedding().emit(1, Symbol::One) == 0.8);
}

TEST_CASE("embedding rejects incomplete or too tall trees") {
  CHECK_THROWS_AS(ChainLaw(ContextTree::parse("1 0.5 0.5\n00 0.5 0.5\n", Completeness::Optional)),
                  ValidationError);
  CHECK_THROWS_AS(ChainLaw(comb_tree(21)), ValidationError);
}

TEST_CASE("stationary law of T1") {
  const ChainLaw law(oracle::t1());
  const auto& pi = law.stationary_measure().pi;
  CHECK(law.stationary_measure().direct_solve);
  CHECK(std::abs(pi[0] - 21.0 / 89) < 1e-12);
  CHECK(std::abs(pi[1] - 28.0 / 89) < 1e-12);
  CHECK(std::abs(pi[2] - 28.0 / 89) < 1e-12);
  CHECK(std::abs(pi[3] - 12.0 / 89) < 1e-12);
  CHECK(residual(law) < 1e-10);

  const auto brute = oracle::brute_stationary(law.tree());
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(pi[i] - brute[i]) < 1e-12);
}

TEST_CASE("stationary: symmetric and memoryless trees") {
  const ChainLaw sym(ContextTree::parse("0 0.5 0.5\n1 0.5 0.5\n"));
  CHECK(std::abs(sym.stationary_measure().pi[0] - 0.5) < 1e-12);
  const ChainLaw root(ContextTree::parse("- 0.25 0.75\n"));
  CHECK(root.stationary_measure().pi.size() == 1);
  CHECK(std::abs(root.marginal(Sequence::parse("11")) - 0.5625) < 1e-15);
  CHECK(std::abs(root.conditional(Symbol::One, Sequence::parse("0")) - 0.75) < 1e-15);
}

TEST_CASE("stationary: power iteration above the direct-solve threshold") {
  const ChainLaw law(comb_tree(kDirectSolveMaxOrder + 2));
  CHECK_FALSE(law.stationary_measure().direct_solve);
  double total = 0.0;
  for (double p : law.stationary_measure().pi) {
    CHECK(p > 0.0);
    total += p;
  }
  CHECK(std::abs(total - 1.0) < 1e-12);
  CHECK(residual(law) < 1e-10);

  // same law solved directly at the threshold
  const ChainLaw direct(comb_tree(kDirectSolveMaxOrder));
  CHECK(direct.stationary_measure().direct_solve);
  CHECK(residual(direct) < 1e-10);
}

TEST_CASE("marginals of T1") {
  const ChainLaw law(oracle::t1());
  const auto brute_pi = oracle::brute_stationary(law.tree());
  CHECK(std::abs(law.marginal(Sequence::parse("111")) - 3.6 / 89) < 1e-12);
  CHECK(std::abs(law.marginal(Sequence::parse("111")) -
                 oracle::brute_p(law.tree(), brute_pi, "111")) < 1e-12);
  CHECK(std::abs(law.marginal(Sequence::parse("1")) - 40.0 / 89) < 1e-12);
  CHECK(law.marginal(Sequence{}) == doctest::Approx(1.0).epsilon(1e-15));
  for (std::size_t len = 1; len <= 5; ++len) {
    for (const auto& w : oracle::all_words(len)) {
      CHECK(std::abs(law.marginal(Sequence::parse(w)) - oracle::brute_p(law.tree(), brute_pi, w)) <
            1e-12);
    }
  }
}

TEST_CASE("marginal invariants") {
  for (const auto& tree : {oracle::t1(), oracle::deep(), oracle::iid()}) {
    const ChainLaw law(tree);
    for (std::size_t j = 1; j <= 10; ++j) {
      double total = 0.0;
      for (std::uint64_t b = 0; b < (std::uint64_t{1} << j); ++b) {
        const Sequence w = Sequence::from_bits(b, j);
        const double pw = law.marginal(w);
        total += pw;
        if (j <= 8) {
          const double split =
              law.marginal(w.append(Symbol::Zero)) + law.marginal(w.append(Symbol::One));
          CHECK(std::abs(split - pw) < 1e-12);
        }
      }
      CHECK(std::abs(total - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("conditionals of T1") {
  const ChainLaw law(oracle::t1());
  CHECK(law.conditional(Symbol::One, Sequence::parse("10")) == 0.4);
  CHECK(std::abs(law.conditional(Symbol::One, Sequence::parse("0")) - 4.0 / 7) < 1e-12);
  CHECK(law.conditional(Symbol::One, Sequence::parse("110")) == 0.4);
  CHECK(std::abs(law.conditional(Symbol::One, Sequence{}) - 40.0 / 89) < 1e-12);

  // exact tree row whenever a context is a suffix of w
  for (std::size_t len = 1; len <= 6; ++len) {
    for (const auto& w : oracle::all_words(len)) {
      const Sequence s = Sequence::parse(w);
      if (auto idx = law.tree().find_suffix_context(s.symbols())) {
        CHECK(law.conditional(Symbol::Zero, s) == law.tree().entries()[*idx].row[0]);
      }
    }
  }
}

TEST_CASE("D_k") {
  const ChainLaw law(oracle::t1());
  const double d1 = std::abs(0.3 - 40.0 / 89);
  CHECK(std::abs(law.d_k(1) - d1) < 1e-12);
  CHECK(std::abs(law.d_k(1) - 0.149438202247191) < 1e-12);
  CHECK(std::abs(law.d_k(2) - d1) < 1e-12);
  CHECK(law.d_k(7) == law.d_k(2));

  const ChainLaw full2(ContextTree::parse("00 0.2 0.8\n10 0.6 0.4\n01 0.7 0.3\n11 0.4 0.6\n"));
  CHECK(full2.d_k(1) == std::numeric_limits<double>::infinity());
  CHECK(std::isfinite(full2.d_k(2)));

  const ChainLaw dl(oracle::deep());
  for (std::size_t k = 1; k < 6; ++k) CHECK(dl.d_k(k + 1) <= dl.d_k(k));
  CHECK(dl.d_k(5) == dl.d_k(3));
}

TEST_CASE("sampler determinism and validation") {
  const ChainLaw law(oracle::t1());
  const auto a = law.sample(1000, 99);
  const auto b = law.sample(1000, 99);
  const auto c = law.sample(1000, 100);
  CHECK(a.symbols == b.symbols);
  CHECK(a.symbols != c.symbols);
  CHECK(a.seed == 99);
  CHECK(a.source == law.tree().fingerprint());
  CHECK_THROWS_AS(law.sample(1, 1), ValidationError);
  CHECK(law.sample(2, 1).symbols.size() == 2);
}

TEST_CASE("sampler: initial block follows pi") {
  const ChainLaw law(oracle::t1());
  std::array<int, 4> hits{};
  const int reps = 40000;
  for (int s = 0; s < reps; ++s) {
    const auto p = law.sample(2, static_cast<std::uint64_t>(s));
    ++hits[static_cast<std::size_t>(index(p.symbols[0]) * 2 + index(p.symbols[1]))];
  }
  const auto& pi = law.stationary_measure().pi;
  for (std::size_t i = 0; i < 4; ++i) {
    const double se = std::sqrt(pi[i] * (1 - pi[i]) / reps);
    CHECK(std::abs(hits[i] / static_cast<double>(reps) - pi[i]) < 4 * se);
  }
}

TEST_CASE("sampler law at n = 10^6") {
  const ChainLaw law(oracle::t1());
  const std::size_t n = 1'000'000;
  const auto path = law.sample(n, 2024);
  const auto& x = path.symbols;

  std::size_t ones = 0;
  for (Symbol s : x) ones += index(s);
  CHECK(std::abs(static_cast<double>(ones) / n - 40.0 / 89) < 0.005);

  std::size_t after00 = 0, one_after00 = 0;
  std::map<int, std::size_t> cyl;
  for (std::size_t t = 2; t < n; ++t) {
    if (x[t - 2] == Symbol::Zero && x[t - 1] == Symbol::Zero) {
      ++after00;
      one_after00 += index(x[t]);
    }
    ++cyl[index(x[t - 2]) * 4 + index(x[t - 1]) * 2 + index(x[t])];
  }
  CHECK(std::abs(static_cast<double>(one_after00) / after00 - 0.8) < 0.01);

  const double windows = static_cast<double>(n - 2);
  for (int c = 0; c < 8; ++c) {
    const double p = law.marginal(Sequence::from_bits(static_cast<std::uint64_t>(c), 3));
    const double se = std::sqrt(p * (1 - p) / windows);
    CHECK(std::abs(cyl[c] / windows - p) < 4 * se);
  }
}
