#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lrlprep {

using TokenId = std::int64_t;

struct MergeRule {
  std::string left;
  std::string right;

  std::string merged() const { return left + right; }
  friend bool operator==(const MergeRule&, const MergeRule&) = default;
  friend auto operator<=>(const MergeRule&, const MergeRule&) = default;
};

struct PairHash {
  std::size_t operator()(const std::pair<std::string, std::string>& p) const noexcept;
};

// BPE tokenizer: base vocabulary, ordered merges (index = priority, lower
// wins) and added tokens that pre-match with longest-match precedence.
// Immutable once built; `with_added_tokens` returns a new model.
class TokenizerModel {
 public:
  TokenizerModel() = default;

  // Validates the invariants: unique non-negative ids, every merge result
  // present in the vocabulary.
  TokenizerModel(std::vector<std::pair<std::string, TokenId>> base_vocab,
                 std::vector<MergeRule> merges, bool byte_fallback = true);

  // Appends tokens after the current maximum id. Throws if a token is empty,
  // contains whitespace, duplicates another token or collides with an
  // existing entry.
  TokenizerModel with_added_tokens(const std::vector<std::string>& tokens) const;

  std::vector<std::string> tokenize_word(std::string_view word) const;
  std::vector<std::string> tokenize_sentence(std::string_view text) const;

  // Id of a token string as produced by tokenize_word. Raw fallback bytes
  // resolve through "<0xHH>" vocabulary entries; nullopt when no id exists.
  std::optional<TokenId> token_id(std::string_view token) const;

  bool in_base_vocab(std::string_view token) const;
  bool is_added_token(std::string_view token) const;
  bool contains(std::string_view token) const {
    return in_base_vocab(token) || is_added_token(token);
  }

  TokenId max_id() const noexcept { return max_id_; }
  bool byte_fallback() const noexcept { return byte_fallback_; }
  const std::vector<MergeRule>& merges() const noexcept { return merges_; }
  const std::vector<std::string>& added_tokens() const noexcept { return added_tokens_; }
  // Base vocabulary ordered by id.
  const std::vector<std::pair<std::string, TokenId>>& base_vocab() const noexcept {
    return base_vocab_;
  }

 private:
  std::vector<std::string> tokenize_span(std::string_view span) const;
  std::vector<std::string> apply_merges(std::vector<std::string> symbols) const;

  std::vector<std::pair<std::string, TokenId>> base_vocab_;
  std::unordered_map<std::string, TokenId> vocab_index_;
  std::vector<MergeRule> merges_;
  std::unordered_map<std::pair<std::string, std::string>, std::size_t, PairHash> merge_rank_;
  std::vector<std::string> added_tokens_;
  std::unordered_map<std::string, TokenId> added_index_;
  std::vector<std::size_t> added_lengths_;  // distinct byte lengths, descending
  TokenId max_id_ = -1;
  bool byte_fallback_ = true;
};

// vocab: JSON object token -> id. merges: "LEFT RIGHT" per line, an optional
// leading "#version" line is skipped.
TokenizerModel load_tokenizer(const std::filesystem::path& vocab_path,
                              const std::filesystem::path& merges_path);
TokenizerModel parse_tokenizer(std::string_view vocab_json, std::string_view merges_text);

// One token per line in id order.
std::vector<std::string> load_added_tokens(const std::filesystem::path& path);
std::vector<std::string> parse_added_tokens(std::string_view text);

std::string serialize_vocab(const TokenizerModel& model);
std::string serialize_merges(const TokenizerModel& model);
std::string serialize_added_tokens(const TokenizerModel& model);

void save_tokenizer(const TokenizerModel& model, const std::filesystem::path& vocab_path,
                    const std::filesystem::path& merges_path,
                    const std::filesystem::path& added_path);

// Name of the vocabulary entry backing a fallback byte, e.g. "<0xE0>".
std::string byte_token_name(unsigned char byte);

}  // namespace lrlprep
