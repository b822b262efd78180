#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "helpers.hpp"
#include "lrlprep/bpe_trainer.hpp"
#include "lrlprep/error.hpp"

using namespace lrlprep;

namespace {

std::vector<std::pair<std::string, std::uint64_t>> as_pairs(const WeightedWordList& words) {
  std::vector<std::pair<std::string, std::uint64_t>> out;
  for (const auto& w : words) out.emplace_back(w.word, w.weight);
  return out;
}

std::vector<std::pair<std::string, std::string>> as_pairs(const std::vector<MergeRule>& merges) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& m : merges) out.emplace_back(m.left, m.right);
  return out;
}

WeightedWordList random_list(std::mt19937& rng, std::size_t max_words) {
  std::uniform_int_distribution<std::size_t> count(1, max_words);
  std::uniform_int_distribution<std::uint64_t> weight(1, 9);
  std::set<std::string> words;
  const std::size_t n = count(rng);
  while (words.size() < n) words.insert(oracle::random_word(rng, 7, 6));
  WeightedWordList out;
  for (const auto& w : words) out.push_back({w, weight(rng)});
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace

TEST_CASE("single pair") {
  const auto r = train_bpe({{"ab", 3}}, 1);
  REQUIRE(r.merges.size() == 1);
  CHECK(r.merges[0] == MergeRule{"a", "b"});
  CHECK(r.new_tokens == std::vector<std::string>{"ab"});
}

TEST_CASE("weighted pair counts pick the heaviest pair") {
  // (a,b)=5, (b,c)=2, (b,d)=3
  const auto r = train_bpe({{"abc", 2}, {"abd", 3}}, 1);
  REQUIRE(r.merges.size() == 1);
  CHECK(r.merges[0] == MergeRule{"a", "b"});
}

TEST_CASE("ties go to the lexicographically smallest pair") {
  const auto r = train_bpe({{"cd", 2}, {"ab", 2}}, 2);
  REQUIRE(r.merges.size() == 2);
  CHECK(r.merges[0] == MergeRule{"a", "b"});
  CHECK(r.merges[1] == MergeRule{"c", "d"});
}

TEST_CASE("stops early when no pair occurs twice") {
  const auto r = train_bpe({{"ab", 1}, {"cd", 1}}, 5);
  CHECK(r.merges.empty());
  const auto r2 = train_bpe({{"abab", 1}}, 5);
  // (a,b) x2 -> [ab, ab] -> (ab,ab) x1 stops.
  REQUIRE(r2.merges.size() == 1);
  CHECK(r2.new_tokens == std::vector<std::string>{"ab"});
}

TEST_CASE("K = 0 and empty inputs") {
  CHECK(train_bpe({{"ab", 3}}, 0).merges.empty());
  CHECK(train_bpe({}, 3).merges.empty());
}

TEST_CASE("overlapping pairs rewrite leftmost first") {
  const auto r = train_bpe({{"aaa", 2}}, 2);
  // (a,a) counts 4 -> [aa, a]; then (aa, a) counts 2.
  REQUIRE(r.merges.size() == 2);
  CHECK(r.merges[1] == MergeRule{"aa", "a"});
}

TEST_CASE("invalid word lists") {
  CHECK_THROWS_AS(BpeTrainer({{"ab", 1}, {"ab", 2}}), Error);
  CHECK_THROWS_AS(BpeTrainer({{"ab", 0}}), Error);
}

TEST_CASE("matches the brute-force recount trainer") {
  std::mt19937 rng(101);
  for (int round = 0; round < 200; ++round) {
    const auto words = random_list(rng, 30);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, 10)(rng);
    const auto got = train_bpe(words, k);
    REQUIRE(as_pairs(got.merges) == oracle::brute_force_bpe(as_pairs(words), k));
  }
}

// Scaling can lift counts of 1 over the stop threshold, so the scaled run
// may go further; the shared prefix must agree.
TEST_CASE("scaling all weights preserves the merge sequence") {
  std::mt19937 rng(102);
  for (int round = 0; round < 50; ++round) {
    auto words = random_list(rng, 20);
    const auto base = train_bpe(words, 10);
    for (auto& w : words) w.weight *= 7;
    const auto scaled = train_bpe(words, 10).merges;
    REQUIRE(scaled.size() >= base.merges.size());
    CHECK(std::equal(base.merges.begin(), base.merges.end(), scaled.begin()));
  }
}
