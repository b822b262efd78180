#include "lrlprep/bpe_trainer.hpp"

#include <algorithm>

#include "lrlprep/error.hpp"
#include "lrlprep/unicode.hpp"

namespace lrlprep {

BpeTrainer::BpeTrainer(const WeightedWordList& words) {
  std::unordered_set<std::string> seen;
  words_.reserve(words.size());
  weights_.reserve(words.size());
  for (const auto& entry : words) {
    if (entry.weight == 0) {
      throw Error(ErrorKind::invalid_argument, "word '" + entry.word + "' has zero weight");
    }
    if (!seen.insert(entry.word).second) {
      throw Error(ErrorKind::invalid_argument, "duplicate word '" + entry.word + "' in word list");
    }
    std::vector<Symbol> seq;
    for (const auto& cp : unicode::split_code_points(entry.word)) seq.push_back(intern(cp));
    words_.push_back(std::move(seq));
    weights_.push_back(entry.weight);
  }
  for (std::size_t w = 0; w < words_.size(); ++w) count_word(w, +1);
}

BpeTrainer::Symbol BpeTrainer::intern(const std::string& s) {
  auto [it, inserted] = symbol_ids_.emplace(s, static_cast<Symbol>(symbols_.size()));
  if (inserted) symbols_.push_back(s);
  return it->second;
}

void BpeTrainer::count_word(std::size_t w, std::int64_t sign) {
  const auto& seq = words_[w];
  const auto weight = static_cast<std::int64_t>(weights_[w]);
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    const PairKey k = key(seq[i], seq[i + 1]);
    auto& c = pair_counts_[k];
    c += sign * weight;
    if (c == 0) {
      pair_counts_.erase(k);
    } else if (sign > 0) {
      pair_words_[k].insert(static_cast<std::uint32_t>(w));
    }
  }
}

std::optional<MergeRule> BpeTrainer::step() {
  const std::string* best_left = nullptr;
  const std::string* best_right = nullptr;
  std::int64_t best_count = 0;
  PairKey best_key = 0;
  for (const auto& [k, c] : pair_counts_) {
    if (c < best_count) continue;
    const std::string& l = symbols_[static_cast<Symbol>(k >> 32)];
    const std::string& r = symbols_[static_cast<Symbol>(k & 0xFFFFFFFFu)];
    if (c == best_count && best_left &&
        std::tie(*best_left, *best_right) <= std::tie(l, r)) {
      continue;
    }
    best_count = c;
    best_left = &l;
    best_right = &r;
    best_key = k;
  }
  if (best_count < 2) return std::nullopt;

  MergeRule rule{*best_left, *best_right};
  const Symbol left = static_cast<Symbol>(best_key >> 32);
  const Symbol right = static_cast<Symbol>(best_key & 0xFFFFFFFFu);
  const Symbol merged = intern(rule.merged());

  std::vector<std::uint32_t> affected(pair_words_[best_key].begin(), pair_words_[best_key].end());
  pair_words_.erase(best_key);
  std::sort(affected.begin(), affected.end());
  for (std::uint32_t w : affected) {
    auto& seq = words_[w];
    bool present = false;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      if (seq[i] == left && seq[i + 1] == right) {
        present = true;
        break;
      }
    }
    if (!present) continue;
    count_word(w, -1);
    std::vector<Symbol> rewritten;
    rewritten.reserve(seq.size());
    for (std::size_t i = 0; i < seq.size();) {
      if (i + 1 < seq.size() && seq[i] == left && seq[i + 1] == right) {
        rewritten.push_back(merged);
        i += 2;
      } else {
        rewritten.push_back(seq[i]);
        ++i;
      }
    }
    seq = std::move(rewritten);
    count_word(w, +1);
  }
  ++merges_done_;
  return rule;
}

BpeTrainingResult train_bpe(const WeightedWordList& words, std::size_t num_merges) {
  BpeTrainingResult result;
  if (num_merges == 0 || words.empty()) return result;
  BpeTrainer trainer(words);
  while (result.merges.size() < num_merges) {
    auto rule = trainer.step();
    if (!rule) break;
    result.new_tokens.push_back(rule->merged());
    result.merges.push_back(std::move(*rule));
  }
  return result;
}

}  // namespace lrlprep
