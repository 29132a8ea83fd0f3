#include <gtest/gtest.h>

#include <random>
#include <set>

#include "gricean/semantics.hpp"

using namespace gricean;

namespace {

// Set-of-worlds oracle, independent of the bitmask representation.
std::set<std::size_t> worlds_of(const std::string& bits) {
  std::set<std::size_t> s;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') s.insert(i);
  }
  return s;
}

bool oracle_subset(const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

TEST(Denotation, BitsRoundTrip) {
  const auto d = Denotation::from_bits("101");
  EXPECT_TRUE(d.contains(0));
  EXPECT_FALSE(d.contains(1));
  EXPECT_TRUE(d.contains(2));
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.to_bits(), "101");
  EXPECT_FALSE(d.contains(3));
}

TEST(Denotation, RejectsMalformedInput) {
  EXPECT_THROW(Denotation::from_bits(""), StructuralError);
  EXPECT_THROW(Denotation::from_bits("10x"), StructuralError);
  EXPECT_THROW(Denotation(0b1000, 3), StructuralError);
  EXPECT_THROW(Denotation(1, 0), StructuralError);
  EXPECT_THROW(Denotation(1, 65), StructuralError);
}

TEST(Denotation, SixtyFourWorlds) {
  const auto full = Denotation::full(64);
  EXPECT_TRUE(full.is_full());
  EXPECT_EQ(full.size(), 64u);
  EXPECT_TRUE(full.contains(63));
}

TEST(WorldSpace, ValidatesPrior) {
  EXPECT_THROW(WorldSpace(std::vector<double>{}), StructuralError);
  EXPECT_THROW(WorldSpace({0.5, 0.5, 0.0}), StructuralError);
  EXPECT_THROW(WorldSpace({0.5, 0.6}), StructuralError);
  EXPECT_THROW(WorldSpace::uniform(65), StructuralError);
  const auto ws = WorldSpace::from_weights(std::vector<double>{1, 1, 2});
  EXPECT_DOUBLE_EQ(ws.prior(2), 0.5);
  EXPECT_DOUBLE_EQ(ws.log_prior(2), std::log(0.5));
}

TEST(Language, StructuralChecks) {
  const auto full = Denotation::from_bits("11");
  const auto half = Denotation::from_bits("10");
  EXPECT_THROW(Language({}, 0), StructuralError);
  EXPECT_THROW(Language({{"a", half, "a"}, {"a", full, "w"}}, 1), StructuralError);  // duplicate id
  EXPECT_THROW(Language({{"a", half, "a"}, {"w", half, "w"}}, 1), StructuralError);  // omega not a tautology
  EXPECT_THROW(Language({{"a", Denotation::empty_set(2), "a"}, {"w", full, "w"}}, 1), StructuralError);
  EXPECT_THROW(Language({{"a", Denotation::from_bits("100"), "a"}, {"w", full, "w"}}, 1), StructuralError);
  // A language of omega alone is degenerate but well formed.
  EXPECT_NO_THROW(Language({{"w", full, "w"}}, 0));
}

TEST(Text, OmegaOnlyAtTheEnd) {
  const auto s = make_synthetic_language(3);
  EXPECT_TRUE(Text::parse("100 111", s.language).complete());
  EXPECT_FALSE(Text::parse("100 110", s.language).complete());
  EXPECT_FALSE(Text::parse("", s.language).complete());
  EXPECT_THROW(Text::parse("111 100", s.language), StructuralError);
  EXPECT_THROW(Text({99}, s.language), StructuralError);
  EXPECT_THROW(s.language.parse("abc"), StructuralError);
}

TEST(TextDenotation, Examples) {
  const auto s = make_synthetic_language(3);
  const auto& L = s.language;
  EXPECT_TRUE(text_denotation(Tokens{}, L).is_full());
  EXPECT_EQ(text_denotation(L.parse("110 011"), L).to_bits(), "010");
  EXPECT_TRUE(text_denotation(L.parse("100 010"), L).empty());
}

TEST(TextDenotation, MatchesSetIntersectionOracle) {
  const auto s = make_synthetic_language(4);
  const auto& L = s.language;
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    Tokens z;
    const std::size_t len = rng() % 5;
    std::set<std::size_t> expected{0, 1, 2, 3};
    for (std::size_t i = 0; i < len; ++i) {
      const auto u = static_cast<UttIndex>(rng() % L.size());
      z.push_back(u);
      std::set<std::size_t> next;
      const auto w = worlds_of(L[u].id);
      std::set_intersection(expected.begin(), expected.end(), w.begin(), w.end(), std::inserter(next, next.begin()));
      expected = next;
    }
    EXPECT_EQ(worlds_of(text_denotation(z, L).to_bits()), expected);
  }
}

TEST(Entailment, ExhaustiveAgainstSubsetOracle) {
  const auto s = make_synthetic_language(3);
  const auto& L = s.language;
  for (const auto& x : L.utterances()) {
    for (const auto& y : L.utterances()) {
      const auto a = worlds_of(x.id), b = worlds_of(y.id);
      EXPECT_EQ(entails(x, y), oracle_subset(a, b)) << x.id << " " << y.id;
      EXPECT_EQ(strictly_entails(x, y), oracle_subset(a, b) && a != b) << x.id << " " << y.id;
    }
  }
  EXPECT_TRUE(entails(L[L.index_of("100")], L[L.index_of("110")]));
  EXPECT_FALSE(strictly_entails(L[L.index_of("110")], L[L.index_of("110")]));
}

TEST(SyntheticLanguage, ShapeAndOrder) {
  const auto s = make_synthetic_language(3);
  ASSERT_EQ(s.language.size(), 7u);
  const std::vector<std::string> expected{"100", "010", "001", "110", "101", "011", "111"};
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(s.language[static_cast<UttIndex>(i)].id, expected[i]);
  EXPECT_EQ(s.language[s.language.eos()].id, "111");
  EXPECT_EQ(s.language.sentences().size(), 6u);
  EXPECT_EQ(make_synthetic_language(4).language.size(), 15u);
  EXPECT_THROW(make_synthetic_language(0), StructuralError);
}

TEST(TruthProbability, SumsPrior) {
  const auto ws = WorldSpace::from_weights(std::vector<double>{1, 2, 1});
  EXPECT_DOUBLE_EQ(truth_probability(Denotation::from_bits("110"), ws), 0.75);
  EXPECT_DOUBLE_EQ(truth_probability(Denotation::from_bits("000"), ws), 0.0);
  EXPECT_DOUBLE_EQ(truth_probability(Denotation::full(3), ws), 1.0);
}
