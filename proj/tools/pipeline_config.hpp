#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "lrlprep/lrlprep.h"

namespace lrlprep::cli {

// Usage or configuration problem; the CLI exits with status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { score, select, augment, analyze, expand_dummy };

const char* command_name(Command c);

struct PipelineConfig {
  lrlp_score_options scoring{};
  lrlp_augment_options augmenting{};
  lrlp_band_thresholds bands{};

  std::size_t top_k = 0;  // required by select
  lrlp_selection_mode selection_mode = LRLP_SELECT_TOP;
  std::size_t max_sentences = 0;
  std::size_t top_n = 20;
  bool distinct_words = false;

  std::string corpus;
  std::string tokenizer_vocab;
  std::string tokenizer_merges;
  std::string tokenizer_added;
  std::string after_vocab;
  std::string after_merges;
  std::string after_added;
  std::string out_dir = ".";

  bool has_after() const {
    return !after_vocab.empty() || !after_merges.empty() || !after_added.empty();
  }
};

// Library defaults for every numeric field.
PipelineConfig default_config();

// Applies a JSON config file on top of `config`. Unknown keys are errors.
void apply_config_file(PipelineConfig& config, const std::string& path);
void apply_config_json(PipelineConfig& config, const std::string& json_text);

// Value parsers shared by the file loader and the flag handlers.
lrlp_selection_mode parse_selection_mode(const std::string& s);
lrlp_token_mode parse_token_mode(const std::string& s);
lrlp_normalization parse_normalization(const std::string& s);

// Checks ranges and that every input file the command reads exists. Runs
// before anything is written.
void validate(const PipelineConfig& config, Command command);

}  // namespace lrlprep::cli
