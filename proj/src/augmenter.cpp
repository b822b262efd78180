#include "lrlprep/augmenter.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "lrlprep/error.hpp"
#include "lrlprep/json_writer.hpp"
#include "lrlprep/unicode.hpp"

namespace lrlprep {

void AugmentationConfig::validate() const {
  if (!(q_percentile > 0.0 && q_percentile <= 100.0)) {
    throw Error(ErrorKind::invalid_argument, "percentile must lie in (0, 100]");
  }
  if (k_new_tokens < 1) throw Error(ErrorKind::invalid_argument, "number of new tokens must be >= 1");
  ScoreOptions weights;
  weights.alpha = alpha;
  weights.beta = beta;
  weights.validate();
}

WeightedWordList select_target_words(const CorpusStats& stats, const ScoreTables& tables, double q) {
  const std::size_t n = stats.vocabulary_size();
  if (n == 0) throw Error(ErrorKind::empty_input, "empty vocabulary");
  if (!(q > 0.0 && q <= 100.0)) throw Error(ErrorKind::invalid_argument, "percentile must lie in (0, 100]");
  if (tables.word_joint.size() != n) {
    throw Error(ErrorKind::invalid_argument, "score tables do not match the vocabulary");
  }

  // ceil(q * n / 100), snapping values within rounding noise of an integer.
  const double exact = q * static_cast<double>(n) / 100.0;
  const double nearest = std::round(exact);
  std::size_t keep = static_cast<std::size_t>(
      std::abs(exact - nearest) < 1e-9 ? nearest : std::ceil(exact));
  keep = std::clamp<std::size_t>(keep, 1, n);

  std::vector<WordId> order(n);
  std::iota(order.begin(), order.end(), WordId{0});
  // Word ids already follow byte order of the words.
  std::stable_sort(order.begin(), order.end(), [&](WordId a, WordId b) {
    return tables.word_joint[a] > tables.word_joint[b];
  });

  WeightedWordList out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    out.push_back({stats.vocabulary[order[i]], stats.word_counts[order[i]]});
  }
  return out;
}

std::string expand_dummy_corpus(const WeightedWordList& targets) {
  std::string out;
  for (const auto& t : targets) {
    for (std::uint64_t i = 0; i < t.weight; ++i) {
      if (!out.empty()) out += ' ';
      out += t.word;
    }
  }
  return out;
}

void write_dummy_corpus(const WeightedWordList& targets, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write dummy corpus: " + path.string());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (std::uint64_t r = 0; r < targets[i].weight; ++r) {
      if (i > 0 || r > 0) out << ' ';
      out << targets[i].word;
    }
  }
  if (!out) throw Error(ErrorKind::io, "failed writing dummy corpus: " + path.string());
}

WeightedWordList count_dummy_corpus(std::string_view text) {
  WeightedWordList out;
  std::unordered_map<std::string, std::size_t> position;
  for (auto& w : segment_words(text)) {
    auto [it, inserted] = position.emplace(w, out.size());
    if (inserted) {
      out.push_back({std::move(w), 1});
    } else {
      ++out[it->second].weight;
    }
  }
  return out;
}

namespace {

// Shared acceptance logic for both modes. Returns true when the candidate
// became a new token.
struct CandidateSink {
  const TokenizerModel& model;
  bool filter_existing;
  AugmentationResult& result;
  std::unordered_set<std::string> taken;

  bool offer(const std::string& candidate) {
    ++result.candidates_examined;
    if (taken.count(candidate)) return false;
    if (model.contains(candidate)) {
      result.skipped_existing.push_back(candidate);
      return false;
    }
    std::vector<std::string> pieces = model.tokenize_word(candidate);
    if (filter_existing && pieces.size() == 1) {
      result.skipped_existing.push_back(candidate);
      return false;
    }
    NewToken t;
    t.token = candidate;
    for (const auto& p : pieces) {
      auto id = model.token_id(p);
      if (!id) {
        result.skipped_uninitializable.push_back(candidate);
        return false;
      }
      t.init_ids.push_back(*id);
    }
    t.pieces = std::move(pieces);
    taken.insert(candidate);
    result.new_tokens.push_back(std::move(t));
    return true;
  }
};

}  // namespace

std::pair<AugmentationResult, TokenizerModel> augment(const TokenizerModel& model,
                                                      const WeightedWordList& targets,
                                                      const AugmentationConfig& config) {
  config.validate();
  AugmentationResult result;
  result.target_words = targets.size();
  for (const auto& t : targets) result.target_weight += t.weight;

  CandidateSink sink{model, config.filter_existing, result, {}};
  const std::size_t k = config.k_new_tokens;

  if (config.mode == TokenMode::bpe) {
    if (!targets.empty()) {
      BpeTrainer trainer(targets);
      if (config.filter_existing) {
        while (result.new_tokens.size() < k) {
          auto rule = trainer.step();
          if (!rule) break;
          sink.offer(rule->merged());
        }
      } else {
        for (std::size_t i = 0; i < k; ++i) {
          auto rule = trainer.step();
          if (!rule) break;
          sink.offer(rule->merged());
        }
      }
    }
  } else {
    std::map<std::string, std::uint64_t> frequency;
    for (const auto& t : targets) {
      for (const auto& cp : unicode::split_code_points(t.word)) frequency[cp] += t.weight;
    }
    std::vector<std::pair<std::string, std::uint64_t>> ranked(frequency.begin(), frequency.end());
    // std::map order is byte order == code-point order for the tie-break.
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    for (const auto& [ch, weight] : ranked) {
      if (result.new_tokens.size() >= k) break;
      sink.offer(ch);
    }
  }

  std::vector<std::string> tokens;
  tokens.reserve(result.new_tokens.size());
  for (const auto& t : result.new_tokens) tokens.push_back(t.token);
  TokenizerModel updated = model.with_added_tokens(tokens);
  for (auto& t : result.new_tokens) t.id = *updated.token_id(t.token);

  if (result.new_tokens.size() < k) {
    result.incomplete = true;
    result.warning = "requested " + std::to_string(k) + " new tokens, found " +
                     std::to_string(result.new_tokens.size());
  }
  return {std::move(result), std::move(updated)};
}

std::pair<AugmentationResult, TokenizerModel> augment_from_corpus(
    const CorpusStats& stats, const TokenizerModel& model, const AugmentationConfig& config,
    const ScoreOptions& score_options) {
  config.validate();
  ScoreOptions options = score_options;
  options.alpha = config.alpha;
  options.beta = config.beta;
  const ScoreTables tables = score_corpus(stats, model, options);
  const WeightedWordList targets = select_target_words(stats, tables, config.q_percentile);
  return augment(model, targets, config);
}

std::string init_instructions_json(const AugmentationResult& result) {
  JsonWriter j;
  j.begin_object();
  j.key("new_tokens").begin_array();
  for (const auto& t : result.new_tokens) {
    j.begin_object();
    j.key("id").value(static_cast<std::int64_t>(t.id));
    j.key("mean_of_ids").begin_array();
    for (TokenId id : t.init_ids) j.value(static_cast<std::int64_t>(id));
    j.end_array();
    j.key("token").value(t.token);
    j.end_object();
  }
  j.end_array();
  j.end_object();
  return j.str();
}

void emit_init_instructions(const AugmentationResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write init instructions: " + path.string());
  out << init_instructions_json(result);
  if (!out) throw Error(ErrorKind::io, "failed writing init instructions: " + path.string());
}

std::string augmentation_report_json(const AugmentationResult& result, const AugmentationConfig& config) {
  JsonWriter j;
  j.begin_object();
  j.key("candidates_examined").value(static_cast<std::uint64_t>(result.candidates_examined));
  j.key("filter_existing").value(config.filter_existing);
  j.key("incomplete").value(result.incomplete);
  j.key("mode").value(to_string(config.mode));
  j.key("new_tokens").begin_array();
  for (const auto& t : result.new_tokens) {
    j.begin_object();
    j.key("id").value(static_cast<std::int64_t>(t.id));
    j.key("pieces").begin_array();
    for (const auto& p : t.pieces) j.value(p);
    j.end_array();
    j.key("token").value(t.token);
    j.end_object();
  }
  j.end_array();
  j.key("percentile").value(config.q_percentile);
  j.key("requested").value(static_cast<std::uint64_t>(config.k_new_tokens));
  j.key("skipped_existing").begin_array();
  for (const auto& s : result.skipped_existing) j.value(s);
  j.end_array();
  j.key("skipped_uninitializable").begin_array();
  for (const auto& s : result.skipped_uninitializable) j.value(s);
  j.end_array();
  j.key("target_weight").value(result.target_weight);
  j.key("target_words").value(static_cast<std::uint64_t>(result.target_words));
  j.key("warning").value(result.warning);
  j.end_object();
  return j.str();
}

std::vector<InitInstruction> parse_init_instructions(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, std::string("malformed init instructions: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("new_tokens") || !doc["new_tokens"].is_array()) {
    throw Error(ErrorKind::parse, "init instructions need a \"new_tokens\" array");
  }
  std::vector<InitInstruction> out;
  try {
    for (const auto& item : doc["new_tokens"]) {
      InitInstruction ins;
      ins.token = item.at("token").get<std::string>();
      ins.id = item.at("id").get<TokenId>();
      ins.mean_of_ids = item.at("mean_of_ids").get<std::vector<TokenId>>();
      out.push_back(std::move(ins));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("malformed init instruction: ") + e.what());
  }
  return out;
}

std::vector<double> mean_of_rows(const Matrix& embeddings, std::span<const TokenId> ids) {
  if (ids.empty()) throw Error(ErrorKind::invalid_argument, "mean of an empty row list");
  std::vector<double> mean(embeddings.cols, 0.0);
  for (TokenId id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= embeddings.rows) {
      throw Error(ErrorKind::out_of_range, "row id " + std::to_string(id) + " outside the matrix");
    }
    const auto row = embeddings.row(static_cast<std::size_t>(id));
    for (std::size_t c = 0; c < embeddings.cols; ++c) mean[c] += row[c];
  }
  const double n = static_cast<double>(ids.size());
  for (double& v : mean) v /= n;
  return mean;
}

double max_init_deviation(const std::vector<InitInstruction>& instructions, const Matrix& embeddings,
                          const std::vector<std::vector<double>>& expected) {
  if (expected.size() != instructions.size()) {
    throw Error(ErrorKind::invalid_argument, "expected rows do not match the instruction count");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < instructions.size(); ++i) {
    const auto mean = mean_of_rows(embeddings, instructions[i].mean_of_ids);
    if (expected[i].size() != mean.size()) {
      throw Error(ErrorKind::invalid_argument, "expected row has the wrong width");
    }
    for (std::size_t c = 0; c < mean.size(); ++c) {
      worst = std::max(worst, std::abs(mean[c] - expected[i][c]));
    }
  }
  return worst;
}

const char* to_string(TokenMode m) { return m == TokenMode::bpe ? "bpe" : "single_char"; }

}  // namespace lrlprep
