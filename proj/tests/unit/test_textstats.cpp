#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "herdsig/random.hpp"
#include "herdsig/textstats.hpp"
#include "signals.hpp"

namespace herdsig {
namespace {

using Entries = std::vector<std::pair<std::string, std::size_t>>;
using herdsig::testing::error_code_of;

std::string random_text(std::size_t words, std::uint64_t seed) {
  static const std::string alphabet = "rmoaeuRMh'-.";
  Rng rng(seed);
  std::string text;
  for (std::size_t w = 0; w < words; ++w) {
    const std::size_t len = 1 + rng.index(6);
    for (std::size_t i = 0; i < len; ++i) text.push_back(alphabet[rng.index(alphabet.size())]);
    text.push_back(rng.index(5) == 0 ? '\n' : ' ');
  }
  return text;
}

// Linear-scan counting over space-split tokens, then a full sort.
Entries brute_force(const std::string& text, std::size_t n) {
  Entries counts;
  std::string token;
  const auto flush = [&] {
    for (std::size_t i = 0; i + n <= token.size(); ++i) {
      const std::string g = token.substr(i, n);
      auto it = std::find_if(counts.begin(), counts.end(), [&](const auto& e) { return e.first == g; });
      if (it == counts.end()) counts.emplace_back(g, 1);
      else ++it->second;
    }
    token.clear();
  };
  for (char c : text) {
    if (c == ' ' || c == '\n' || c == '\t') flush();
    else if (std::isalpha(static_cast<unsigned char>(c))) token.push_back(static_cast<char>(std::tolower(c)));
  }
  flush();
  std::sort(counts.begin(), counts.end(),
            [](const auto& a, const auto& b) { return a.second != b.second ? a.second > b.second : a.first < b.first; });
  return counts;
}

TEST(Ngrams, OverlappingCount) {
  const auto t = ngram_counts("rrr", 2);
  EXPECT_EQ(t.n, 2u);
  EXPECT_EQ(t.entries, (Entries{{"rr", 2}}));
}

TEST(Ngrams, NoCrossTokenGrams) {
  EXPECT_EQ(ngram_counts("rr mm oo", 2).entries, (Entries{{"mm", 1}, {"oo", 1}, {"rr", 1}}));
}

TEST(Ngrams, LowercasesAndDropsNonAlphabetic) {
  EXPECT_EQ(ngram_counts("R-r! Mm", 2).entries, (Entries{{"mm", 1}, {"rr", 1}}));
  EXPECT_EQ(ngram_counts("Ab1c", 1).entries, (Entries{{"a", 1}, {"b", 1}, {"c", 1}}));
}

TEST(Ngrams, EmptyTextGivesEmptyTable) {
  EXPECT_TRUE(ngram_counts("", 2).entries.empty());
  EXPECT_TRUE(ngram_counts("a b c", 2).entries.empty());
}

TEST(Ngrams, RejectsUnsupportedN) {
  EXPECT_EQ(error_code_of([] { ngram_counts("abc", 3); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(error_code_of([] { ngram_counts("abc", 0); }), ErrorCode::InvalidArgument);
}

TEST(Ngrams, RepeatedTokenCorpusMagnitude) {
  std::string text;
  for (int i = 0; i < 40000; ++i) text += "rrx ";
  const auto t = ngram_counts(text, 2);
  ASSERT_FALSE(t.entries.empty());
  EXPECT_EQ(t.entries[0], (std::pair<std::string, std::size_t>{"rr", 40000}));
  EXPECT_EQ(t.entries[1], (std::pair<std::string, std::size_t>{"rx", 40000}));
}

TEST(Ngrams, TranscriptStyleTopBigramIsRr) {
  const std::string text = "Mmmrr rrrr oooRRr mmm rrgh Errr uurr mrr oo rrm";
  EXPECT_EQ(ngram_counts(text, 2).entries.front().first, "rr");
}

TEST(Ngrams, UnigramTotalEqualsLetterCount) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::string text = random_text(200, seed);
    std::size_t letters = 0;
    for (char c : text) letters += std::isalpha(static_cast<unsigned char>(c)) ? 1 : 0;
    std::size_t total = 0;
    for (const auto& [g, c] : ngram_counts(text, 1).entries) total += c;
    EXPECT_EQ(total, letters);
  }
}

TEST(Ngrams, MatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::string text = random_text(300, 100 + seed);
    for (std::size_t n : {1u, 2u}) EXPECT_EQ(ngram_counts(text, n).entries, brute_force(text, n)) << seed;
  }
}

TEST(TopK, WholeTableWhenKLarge) {
  const auto t = ngram_counts("rr mm", 2);
  EXPECT_EQ(top_k(t, 50).entries, t.entries);
}

TEST(TopK, TiesBrokenLexicographically) {
  NgramTable t;
  t.entries = {{"aa", 3}, {"bb", 3}};
  EXPECT_EQ(top_k(t, 1).entries, (Entries{{"aa", 3}}));
  EXPECT_EQ(top_k(ngram_counts("bb aa", 2), 1).entries, (Entries{{"aa", 1}}));
}

TEST(TopK, TenMatchesBruteForceSort) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::string text = random_text(500, 900 + seed);
    auto expected = brute_force(text, 2);
    expected.resize(std::min<std::size_t>(10, expected.size()));
    EXPECT_EQ(top_k(ngram_counts(text, 2), 10).entries, expected);
  }
}

TEST(TopK, RejectsZero) {
  EXPECT_EQ(error_code_of([] { top_k(NgramTable{}, 0); }), ErrorCode::InvalidArgument);
}

TEST(Merge, ConcatenationIsEntrywiseSum) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::string a = random_text(100, 300 + seed), b = random_text(100, 400 + seed);
    for (std::size_t n : {1u, 2u}) {
      EXPECT_EQ(merge(ngram_counts(a, n), ngram_counts(b, n)).entries, ngram_counts(a + " " + b, n).entries);
    }
  }
}

TEST(Merge, RejectsDifferentN) {
  EXPECT_EQ(error_code_of([] { merge(ngram_counts("ab", 1), ngram_counts("ab", 2)); }), ErrorCode::InvalidArgument);
}

TEST(NgramCsv, Format) {
  EXPECT_EQ(ngram_csv(ngram_counts("rrr mm", 2)), "gram,count\nrr,2\nmm,1\n");
}

}  // namespace
}  // namespace herdsig
