#include "pipeline_config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lrlprep::cli {

const char* command_name(Command c) {
  switch (c) {
    case Command::score: return "score";
    case Command::select: return "select";
    case Command::augment: return "augment";
    case Command::analyze: return "analyze";
    case Command::expand_dummy: return "expand-dummy";
  }
  return "?";
}

PipelineConfig default_config() {
  PipelineConfig c;
  lrlp_score_options_default(&c.scoring);
  lrlp_augment_options_default(&c.augmenting);
  lrlp_band_thresholds_default(&c.bands);
  return c;
}

lrlp_selection_mode parse_selection_mode(const std::string& s) {
  if (s == "top") return LRLP_SELECT_TOP;
  if (s == "bottom") return LRLP_SELECT_BOTTOM;
  throw ConfigError("mode must be 'top' or 'bottom', got '" + s + "'");
}

lrlp_token_mode parse_token_mode(const std::string& s) {
  if (s == "bpe") return LRLP_TOKENS_BPE;
  if (s == "single-char" || s == "single_char") return LRLP_TOKENS_SINGLE_CHAR;
  throw ConfigError("token mode must be 'bpe' or 'single-char', got '" + s + "'");
}

lrlp_normalization parse_normalization(const std::string& s) {
  if (s == "minmax") return LRLP_NORMALIZE_MINMAX;
  if (s == "raw") return LRLP_NORMALIZE_RAW;
  throw ConfigError("normalization must be 'minmax' or 'raw', got '" + s + "'");
}

namespace {

std::size_t get_count(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError("config key '" + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

double get_number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

std::string get_string(const nlohmann::json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

bool get_bool(const nlohmann::json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError("config key '" + key + "' must be a boolean");
  return v.get<bool>();
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string("missing required ") + what);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw ConfigError(std::string(what) + " not found: " + path);
  }
}

void optional_file(const std::string& path, const char* what) {
  if (!path.empty()) require_file(path, what);
}

}  // namespace

void apply_config_json(PipelineConfig& c, const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, v] : doc.items()) {
    if (key == "alpha") c.scoring.alpha = get_number(v, key);
    else if (key == "beta") c.scoring.beta = get_number(v, key);
    else if (key == "window") c.scoring.window = get_count(v, key);
    else if (key == "normalization") c.scoring.normalization = parse_normalization(get_string(v, key));
    else if (key == "damping") c.scoring.damping = get_number(v, key);
    else if (key == "tolerance") c.scoring.tolerance = get_number(v, key);
    else if (key == "max_iterations") c.scoring.max_iterations = get_count(v, key);
    else if (key == "top_k") c.top_k = get_count(v, key);
    else if (key == "mode") c.selection_mode = parse_selection_mode(get_string(v, key));
    else if (key == "percentile") c.augmenting.percentile = get_number(v, key);
    else if (key == "new_tokens") c.augmenting.new_tokens = get_count(v, key);
    else if (key == "token_mode") c.augmenting.mode = parse_token_mode(get_string(v, key));
    else if (key == "no_filter") c.augmenting.filter_existing = get_bool(v, key) ? 0 : 1;
    else if (key == "max_sentences") c.max_sentences = get_count(v, key);
    else if (key == "top_n") c.top_n = get_count(v, key);
    else if (key == "distinct_words") c.distinct_words = get_bool(v, key);
    else if (key == "large_threshold") c.bands.large = get_number(v, key);
    else if (key == "medium_threshold") c.bands.medium = get_number(v, key);
    else if (key == "corpus") c.corpus = get_string(v, key);
    else if (key == "tokenizer_vocab") c.tokenizer_vocab = get_string(v, key);
    else if (key == "tokenizer_merges") c.tokenizer_merges = get_string(v, key);
    else if (key == "tokenizer_added") c.tokenizer_added = get_string(v, key);
    else if (key == "after_vocab") c.after_vocab = get_string(v, key);
    else if (key == "after_merges") c.after_merges = get_string(v, key);
    else if (key == "after_added") c.after_added = get_string(v, key);
    else if (key == "out_dir") c.out_dir = get_string(v, key);
    else throw ConfigError("unknown config key '" + key + "'");
  }
}

void apply_config_file(PipelineConfig& c, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_json(c, buf.str());
}

void validate(const PipelineConfig& c, Command command) {
  const auto& s = c.scoring;
  if (!std::isfinite(s.alpha) || !std::isfinite(s.beta) || s.alpha < 0 || s.beta < 0) {
    throw ConfigError("alpha and beta must be finite and non-negative");
  }
  if (s.alpha == 0 && s.beta == 0) throw ConfigError("alpha and beta must not both be zero");
  if (s.window < 1) throw ConfigError("window must be >= 1");
  if (!(s.damping >= 0 && s.damping <= 1)) throw ConfigError("damping must lie in [0, 1]");
  if (!(s.tolerance > 0)) throw ConfigError("tolerance must be positive");

  require_file(c.corpus, "corpus file");
  require_file(c.tokenizer_vocab, "tokenizer vocabulary file");
  require_file(c.tokenizer_merges, "tokenizer merges file");
  optional_file(c.tokenizer_added, "added-tokens file");
  if (c.out_dir.empty()) throw ConfigError("output directory must not be empty");

  switch (command) {
    case Command::score:
      break;
    case Command::select:
      if (c.top_k < 1) throw ConfigError("select needs --top-k >= 1");
      break;
    case Command::augment:
    case Command::expand_dummy:
      if (!(c.augmenting.percentile > 0 && c.augmenting.percentile <= 100)) {
        throw ConfigError("percentile must lie in (0, 100]");
      }
      if (command == Command::augment && c.augmenting.new_tokens < 1) {
        throw ConfigError("--new-tokens must be >= 1");
      }
      break;
    case Command::analyze:
      optional_file(c.after_vocab, "after-augmentation vocabulary file");
      optional_file(c.after_merges, "after-augmentation merges file");
      optional_file(c.after_added, "after-augmentation added-tokens file");
      if (!(c.bands.large >= c.bands.medium) || c.bands.medium < 0) {
        throw ConfigError("band thresholds need 0 <= medium <= large");
      }
      break;
  }
}

}  // namespace lrlprep::cli
