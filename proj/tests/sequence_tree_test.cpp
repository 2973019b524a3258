#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "vlmc/context_tree.hpp"
#include "vlmc/errors.hpp"

using namespace vlmc;

TEST_CASE("sequence orientation and suffix") {
  const Sequence w = Sequence::parse("0110");
  CHECK(w.length() == 4);
  CHECK(w.back() == Symbol::Zero);
  CHECK(w.suffix().str() == "110");
  CHECK(Sequence::parse("1").suffix().empty());
  CHECK(Sequence::parse("-").empty());
  CHECK(Sequence{}.str() == "-");
  CHECK_THROWS_AS(Sequence{}.suffix(), ValidationError);
  CHECK_THROWS_AS(Sequence::parse("012"), FormatError);
  CHECK(Sequence::parse("10").is_suffix_of(Sequence::parse("110")));
  CHECK(Sequence::parse("10").is_proper_suffix_of(Sequence::parse("110")));
  CHECK_FALSE(Sequence::parse("10").is_proper_suffix_of(Sequence::parse("10")));
  CHECK(Sequence::from_bits(0b01, 2).str() == "01");
  CHECK(Sequence::parse("0110").bits() == 0b0110);
  CHECK(complement(complement(Symbol::One)) == Symbol::One);
  CHECK(w.complemented().str() == "1001");
}

TEST_CASE("parse T1: valid, complete, irreducible") {
  const auto tree = oracle::t1();
  CHECK(tree.size() == 3);
  CHECK(tree.height() == 2);
  CHECK(tree.complete());
  CHECK(tree.irreducible());
}

TEST_CASE("parse errors") {
  SUBCASE("suffix property") {
    CHECK_THROWS_WITH_AS(ContextTree::parse("1 0.5 0.5\n11 0.5 0.5\n", Completeness::Optional),
                         doctest::Contains("suffix property"), ValidationError);
  }
  SUBCASE("non-nullness") {
    CHECK_THROWS_WITH_AS(ContextTree::parse("1 1.0 0.0\n00 0.2 0.8\n10 0.6 0.4\n"),
                         doctest::Contains("non-nullness"), ValidationError);
  }
  SUBCASE("duplicate") {
    CHECK_THROWS_WITH_AS(ContextTree::parse("1 0.5 0.5\n1 0.5 0.5\n0 0.5 0.5\n"),
                         doctest::Contains("duplicate"), ValidationError);
  }
  SUBCASE("row sum") {
    CHECK_THROWS_AS(ContextTree::parse("1 0.5 0.6\n0 0.5 0.5\n"), ValidationError);
    // within the 1e-9 text tolerance
    CHECK_NOTHROW(ContextTree::parse("1 0.5 0.5000000001\n0 0.5 0.5\n"));
  }
  SUBCASE("incomplete") {
    CHECK_THROWS_WITH_AS(ContextTree::parse("1 0.5 0.5\n00 0.5 0.5\n"),
                         doctest::Contains("incomplete"), ValidationError);
    const auto t = ContextTree::parse("1 0.5 0.5\n00 0.5 0.5\n", Completeness::Optional);
    CHECK_FALSE(t.complete());
    // "00" could be shortened to "0" without clashing with anything
    CHECK_FALSE(t.irreducible());
  }
  SUBCASE("format") {
    CHECK_THROWS_AS(ContextTree::parse("1 0.5\n"), FormatError);
    CHECK_THROWS_AS(ContextTree::parse("1 0.5 abc\n0 0.5 0.5\n"), FormatError);
    CHECK_THROWS_AS(ContextTree::parse("12 0.5 0.5\n"), FormatError);
    CHECK_THROWS_AS(ContextTree::parse("# nothing\n"), ValidationError);
  }
}

TEST_CASE("memoryless root tree") {
  const auto t = ContextTree::parse("- 0.25 0.75\n");
  CHECK(t.height() == 0);
  CHECK(t.complete());
  CHECK(t.irreducible());
  CHECK(t.serialize() == "- 0.25 0.75\n");
  CHECK_THROWS_AS(ContextTree::parse("- 0.5 0.5\n1 0.5 0.5\n", Completeness::Optional),
                  ValidationError);
}

TEST_CASE("longest_context on T1") {
  const auto tree = oracle::t1();
  CHECK(tree.longest_context(Sequence::parse("001")).context.str() == "1");
  CHECK(tree.longest_context(Sequence::parse("010")).context.str() == "10");
  CHECK(tree.longest_context(Sequence::parse("100")).context.str() == "00");
  CHECK_THROWS_AS(tree.longest_context(Sequence::parse("0")), ValidationError);

  const auto inc = ContextTree::parse("1 0.5 0.5\n00 0.5 0.5\n", Completeness::Optional);
  CHECK_THROWS_AS(inc.longest_context(Sequence::parse("10")), ValidationError);
}

TEST_CASE("complete tree partitions all pasts") {
  for (const auto& tree : {oracle::t1(), oracle::deep(), oracle::iid()}) {
    for (const auto& past : oracle::all_words(tree.height())) {
      int matches = 0;
      for (const auto& e : tree.entries()) {
        if (e.context.is_suffix_of(Sequence::parse(past))) ++matches;
      }
      CHECK(matches == 1);
      CHECK_NOTHROW(tree.longest_context(Sequence::parse(past)));
    }
  }
}

TEST_CASE("truncate") {
  const auto t1 = oracle::t1();
  CHECK(oracle::strings(truncate(t1, 2)) == std::set<std::string>{"1", "00", "10"});
  CHECK(oracle::strings(truncate(t1, 1)) == std::set<std::string>{"1", "0"});
  CHECK(oracle::strings(truncate(oracle::deep(), 2)) == std::set<std::string>{"1", "00", "10"});
  CHECK(truncate(t1, 5) == t1.context_set());

  // Agreement with the definition, and the suffix property of the result.
  for (const auto& tree : {t1, oracle::deep()}) {
    for (std::size_t k = 1; k <= 4; ++k) {
      const auto got = truncate(tree, k);
      CHECK(oracle::strings(got) == oracle::brute_truncate(oracle::strings(tree.context_set()), k));
      for (const auto& a : got) {
        for (const auto& b : got) CHECK_FALSE(a.is_proper_suffix_of(b));
      }
    }
  }
}

TEST_CASE("compute_constants on T1 against pair enumeration") {
  const auto tree = oracle::t1();
  const auto c = compute_constants(tree);
  CHECK(c.alpha == doctest::Approx(0.2).epsilon(1e-12));
  REQUIRE(c.beta_seq.size() == 2);
  CHECK(c.beta_seq[0] == doctest::Approx(oracle::brute_beta(tree, 0)).epsilon(1e-12));
  CHECK(c.beta_seq[1] == doctest::Approx(oracle::brute_beta(tree, 1)).epsilon(1e-12));
  CHECK(std::abs(c.beta_seq[0] - 2.5) < 1e-9);
  CHECK(std::abs(c.beta_seq[1] - 2.0) < 1e-9);
  CHECK(c.beta_k(2) == 0.0);
  CHECK(std::abs(c.beta_sum - 4.5) < 1e-9);
  CHECK(std::abs(c.beta_star - 10.5) < 1e-9);
  CHECK(std::abs(c.c_const - 946.0) < 1e-9);
}

TEST_CASE("constants: identical rows give C = 1") {
  const auto c = compute_constants(oracle::iid());
  CHECK(c.beta_sum == 0.0);
  CHECK(c.beta_star == 1.0);
  CHECK(c.c_const == 1.0);
}

TEST_CASE("constants property: random complete trees") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> prob(0.05, 0.95);
  const char* shapes[] = {"0\n1\n", "1\n00\n10\n", "1\n00\n010\n110\n", "00\n10\n01\n11\n",
                          "0\n001\n101\n11\n"};
  for (int rep = 0; rep < 40; ++rep) {
    std::string text;
    const std::string shape = shapes[rep % 5];
    std::size_t pos = 0;
    while (pos < shape.size()) {
      auto nl = shape.find('\n', pos);
      const double p = prob(gen);
      text += shape.substr(pos, nl - pos) + " " + format_double(p) + " " + format_double(1.0 - p) + "\n";
      pos = nl + 1;
    }
    const auto tree = ContextTree::parse(text);
    const auto c = compute_constants(tree);
    CHECK(c.alpha > 0.0);
    CHECK(c.alpha <= 0.5);
    CHECK(c.beta_star >= 1.0);
    CHECK(c.c_const >= 1.0);
    for (std::size_t k = 0; k < tree.height(); ++k) {
      CHECK(c.beta_k(k) == doctest::Approx(oracle::brute_beta(tree, k)).epsilon(1e-12));
      CHECK(c.beta_k(0) >= c.beta_k(k));
    }
    // parse(serialize(tree)) reproduces every probability bit for bit
    CHECK(ContextTree::parse(tree.serialize()) == tree);
  }
}

TEST_CASE("min_valid_depth") {
  CHECK(min_valid_depth(oracle::t1(), 2) == 2);
  CHECK(min_valid_depth(oracle::t1(), 1) == 2);
  CHECK(min_valid_depth(oracle::deep(), 2) == 3);
}
