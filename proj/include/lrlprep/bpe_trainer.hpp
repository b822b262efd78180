#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lrlprep/tokenizer.hpp"

namespace lrlprep {

struct WeightedWord {
  std::string word;
  std::uint64_t weight = 1;

  friend bool operator==(const WeightedWord&, const WeightedWord&) = default;
};

// A word repeated `weight` times in a whitespace-separated corpus is the same
// BPE training input as the word listed once with that weight.
using WeightedWordList = std::vector<WeightedWord>;

struct BpeTrainingResult {
  std::vector<MergeRule> merges;
  std::vector<std::string> new_tokens;  // merge results, creation order
};

// Classic BPE over a weighted word list, one merge per step(). Each word
// starts as its code points. The chosen pair maximizes the weight-summed
// count of adjacent occurrences; ties go to the smallest (left, right) in
// code-point order. Training stops once no pair occurs at least twice.
class BpeTrainer {
 public:
  explicit BpeTrainer(const WeightedWordList& words);

  std::optional<MergeRule> step();
  std::size_t merges_done() const noexcept { return merges_done_; }

 private:
  using Symbol = std::uint32_t;
  using PairKey = std::uint64_t;

  static PairKey key(Symbol l, Symbol r) { return (static_cast<PairKey>(l) << 32) | r; }
  Symbol intern(const std::string& s);
  void count_word(std::size_t w, std::int64_t sign);

  std::vector<std::string> symbols_;
  std::unordered_map<std::string, Symbol> symbol_ids_;
  std::vector<std::vector<Symbol>> words_;
  std::vector<std::uint64_t> weights_;
  std::unordered_map<PairKey, std::int64_t> pair_counts_;
  std::unordered_map<PairKey, std::unordered_set<std::uint32_t>> pair_words_;
  std::size_t merges_done_ = 0;
};

BpeTrainingResult train_bpe(const WeightedWordList& words, std::size_t num_merges);

}  // namespace lrlprep
