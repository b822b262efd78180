#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lrlprep/bpe_trainer.hpp"
#include "lrlprep/corpus.hpp"
#include "lrlprep/scoring.hpp"
#include "lrlprep/tokenizer.hpp"

namespace lrlprep {

inline constexpr double kDefaultPercentile = 50.0;
inline constexpr std::size_t kDefaultNewTokens = 100;

enum class TokenMode { bpe, single_char };

struct AugmentationConfig {
  double q_percentile = kDefaultPercentile;
  std::size_t k_new_tokens = kDefaultNewTokens;
  TokenMode mode = TokenMode::bpe;
  double alpha = kDefaultAlpha;
  double beta = kDefaultBeta;
  // When false, BPE mode keeps the first k merges as trained and only drops
  // results that already exist verbatim.
  bool filter_existing = true;

  void validate() const;
};

struct NewToken {
  std::string token;
  TokenId id = 0;
  // Decomposition under the tokenizer before augmentation.
  std::vector<std::string> pieces;
  std::vector<TokenId> init_ids;
};

struct AugmentationResult {
  std::vector<NewToken> new_tokens;
  std::size_t target_words = 0;
  std::uint64_t target_weight = 0;

  std::size_t candidates_examined = 0;
  std::vector<std::string> skipped_existing;
  std::vector<std::string> skipped_uninitializable;  // a piece has no id

  bool incomplete = false;  // fewer than k tokens were found
  std::string warning;
};

// Top ceil(q/100 * |W|) words by joint score (ties: word byte order), each
// weighted by its corpus count. Returned in rank order.
WeightedWordList select_target_words(const CorpusStats& stats, const ScoreTables& tables, double q);

// The dummy corpus literally: every word repeated `weight` times, separated
// by single spaces.
std::string expand_dummy_corpus(const WeightedWordList& targets);
void write_dummy_corpus(const WeightedWordList& targets, const std::filesystem::path& path);
// Recounts an expanded dummy corpus back into weighted form.
WeightedWordList count_dummy_corpus(std::string_view text);

// Returns the result and the augmented tokenizer; `model` is left untouched.
std::pair<AugmentationResult, TokenizerModel> augment(const TokenizerModel& model,
                                                      const WeightedWordList& targets,
                                                      const AugmentationConfig& config);

// Scores the corpus words, picks the targets and augments.
std::pair<AugmentationResult, TokenizerModel> augment_from_corpus(
    const CorpusStats& stats, const TokenizerModel& model, const AugmentationConfig& config,
    const ScoreOptions& score_options);

// {"new_tokens":[{"id":..,"mean_of_ids":[..],"token":..}]}
std::string init_instructions_json(const AugmentationResult& result);
void emit_init_instructions(const AugmentationResult& result, const std::filesystem::path& path);
std::string augmentation_report_json(const AugmentationResult& result, const AugmentationConfig& config);

struct InitInstruction {
  std::string token;
  TokenId id = 0;
  std::vector<TokenId> mean_of_ids;
};

std::vector<InitInstruction> parse_init_instructions(std::string_view json);

// Row-major dense matrix, used only to check init instructions.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

// Mean of the listed rows; throws on an empty list or an id outside the matrix.
std::vector<double> mean_of_rows(const Matrix& embeddings, std::span<const TokenId> ids);

// Largest absolute difference between each instruction's row mean and the
// caller's expected row, in instruction order.
double max_init_deviation(const std::vector<InitInstruction>& instructions, const Matrix& embeddings,
                          const std::vector<std::vector<double>>& expected);

inline bool verify_init_instructions(const std::vector<InitInstruction>& instructions,
                                     const Matrix& embeddings,
                                     const std::vector<std::vector<double>>& expected,
                                     double tolerance = 1e-12) {
  return max_init_deviation(instructions, embeddings, expected) <= tolerance;
}

const char* to_string(TokenMode m);

}  // namespace lrlprep
