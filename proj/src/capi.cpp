#include "lrlprep/lrlprep.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "lrlprep/analyzer.hpp"
#include "lrlprep/augmenter.hpp"
#include "lrlprep/corpus.hpp"
#include "lrlprep/error.hpp"
#include "lrlprep/scoring.hpp"
#include "lrlprep/selector.hpp"
#include "lrlprep/tokenizer.hpp"

using namespace lrlprep;

struct lrlp_corpus {
  Corpus corpus;
};

struct lrlp_tokenizer {
  TokenizerModel model;
};

struct lrlp_tokens {
  std::vector<std::string> text;
  std::vector<int64_t> ids;
};

struct lrlp_scores {
  CorpusStats stats;
  ScoreTables tables;
};

struct lrlp_selection {
  SelectionResult result;
  std::vector<SentenceIndex> indices;
  lrlp_corpus subset;
};

struct lrlp_augmentation {
  AugmentationResult result;
  AugmentationConfig config;
};

struct lrlp_fragment_report {
  FragmentReport report;
};

struct lrlp_diff_report {
  DiffReport report;
};

namespace {

thread_local std::string g_last_error;

lrlp_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return LRLP_ERR_INVALID_ARGUMENT;
    case ErrorKind::io: return LRLP_ERR_IO;
    case ErrorKind::parse: return LRLP_ERR_PARSE;
    case ErrorKind::out_of_range: return LRLP_ERR_OUT_OF_RANGE;
    case ErrorKind::empty_input: return LRLP_ERR_EMPTY_INPUT;
  }
  return LRLP_ERR_INTERNAL;
}

lrlp_status fail(lrlp_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
lrlp_status guarded(F&& body) {
  try {
    body();
    return LRLP_OK;
  } catch (const Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(LRLP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LRLP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(LRLP_ERR_INTERNAL, "unknown error");
  }
}

#define LRLP_REQUIRE(cond, what)                                 \
  do {                                                           \
    if (!(cond)) return fail(LRLP_ERR_INVALID_ARGUMENT, (what)); \
  } while (0)

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

ScoreOptions to_cpp(const lrlp_score_options* options) {
  ScoreOptions o;
  if (!options) return o;
  o.alpha = options->alpha;
  o.beta = options->beta;
  o.window = options->window;
  o.normalization =
      options->normalization == LRLP_NORMALIZE_RAW ? Normalization::raw : Normalization::minmax;
  o.pagerank.damping = options->damping;
  o.pagerank.tolerance = options->tolerance;
  o.pagerank.max_iterations = options->max_iterations;
  return o;
}

AugmentationConfig to_cpp(const lrlp_augment_options* options, const ScoreOptions& scoring) {
  AugmentationConfig c;
  if (options) {
    c.q_percentile = options->percentile;
    c.k_new_tokens = options->new_tokens;
    c.mode = options->mode == LRLP_TOKENS_SINGLE_CHAR ? TokenMode::single_char : TokenMode::bpe;
    c.filter_existing = options->filter_existing != 0;
  }
  c.alpha = scoring.alpha;
  c.beta = scoring.beta;
  return c;
}

BandThresholds to_cpp(const lrlp_band_thresholds* t) {
  BandThresholds out;
  if (t) {
    out.large = t->large;
    out.medium = t->medium;
  }
  return out;
}

lrlp_band to_c(FragmentBand b) {
  switch (b) {
    case FragmentBand::large: return LRLP_BAND_LARGE;
    case FragmentBand::medium: return LRLP_BAND_MEDIUM;
    case FragmentBand::small: return LRLP_BAND_SMALL;
  }
  return LRLP_BAND_SMALL;
}

lrlp_status make_tokens(const TokenizerModel& model, std::vector<std::string> tokens,
                        lrlp_tokens** out) {
  auto t = std::make_unique<lrlp_tokens>();
  for (const auto& tok : tokens) t->ids.push_back(model.token_id(tok).value_or(-1));
  t->text = std::move(tokens);
  *out = t.release();
  return LRLP_OK;
}

}  // namespace

extern "C" {

const char* lrlp_version(void) { return "1.0.0"; }

const char* lrlp_last_error(void) { return g_last_error.c_str(); }

const char* lrlp_status_string(lrlp_status status) {
  switch (status) {
    case LRLP_OK: return "ok";
    case LRLP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case LRLP_ERR_IO: return "i/o error";
    case LRLP_ERR_PARSE: return "parse error";
    case LRLP_ERR_OUT_OF_RANGE: return "out of range";
    case LRLP_ERR_EMPTY_INPUT: return "empty input";
    case LRLP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void lrlp_string_free(char* s) { std::free(s); }

void lrlp_score_options_default(lrlp_score_options* options) {
  if (!options) return;
  const ScoreOptions d;
  options->alpha = d.alpha;
  options->beta = d.beta;
  options->window = d.window;
  options->normalization = LRLP_NORMALIZE_MINMAX;
  options->damping = d.pagerank.damping;
  options->tolerance = d.pagerank.tolerance;
  options->max_iterations = d.pagerank.max_iterations;
}

void lrlp_augment_options_default(lrlp_augment_options* options) {
  if (!options) return;
  const AugmentationConfig d;
  options->percentile = d.q_percentile;
  options->new_tokens = d.k_new_tokens;
  options->mode = LRLP_TOKENS_BPE;
  options->filter_existing = d.filter_existing ? 1 : 0;
}

void lrlp_band_thresholds_default(lrlp_band_thresholds* thresholds) {
  if (!thresholds) return;
  const BandThresholds d;
  thresholds->large = d.large;
  thresholds->medium = d.medium;
}

/* corpus */

lrlp_status lrlp_corpus_load(const char* path, size_t max_sentences, lrlp_corpus** out) {
  LRLP_REQUIRE(path && out, "lrlp_corpus_load: null argument");
  return guarded([&] {
    auto c = std::make_unique<lrlp_corpus>();
    c->corpus = load_corpus(path, max_sentences ? std::optional<std::size_t>(max_sentences)
                                                : std::nullopt);
    *out = c.release();
  });
}

lrlp_status lrlp_corpus_parse(const char* text, size_t length, size_t max_sentences,
                              lrlp_corpus** out) {
  LRLP_REQUIRE((text || length == 0) && out, "lrlp_corpus_parse: null argument");
  return guarded([&] {
    auto c = std::make_unique<lrlp_corpus>();
    c->corpus = parse_corpus(std::string_view(text ? text : "", length),
                             max_sentences ? std::optional<std::size_t>(max_sentences)
                                           : std::nullopt);
    *out = c.release();
  });
}

size_t lrlp_corpus_size(const lrlp_corpus* corpus) { return corpus ? corpus->corpus.size() : 0; }

const char* lrlp_corpus_sentence(const lrlp_corpus* corpus, size_t index) {
  if (!corpus || index >= corpus->corpus.size()) return nullptr;
  return corpus->corpus[index].text.c_str();
}

lrlp_status lrlp_corpus_save(const lrlp_corpus* corpus, const char* path) {
  LRLP_REQUIRE(corpus && path, "lrlp_corpus_save: null argument");
  return guarded([&] { write_corpus(corpus->corpus, path); });
}

void lrlp_corpus_free(lrlp_corpus* corpus) { delete corpus; }

/* tokenizer */

lrlp_status lrlp_tokenizer_load(const char* vocab_path, const char* merges_path,
                                const char* added_path, lrlp_tokenizer** out) {
  LRLP_REQUIRE(vocab_path && merges_path && out, "lrlp_tokenizer_load: null argument");
  return guarded([&] {
    auto t = std::make_unique<lrlp_tokenizer>();
    t->model = load_tokenizer(vocab_path, merges_path);
    if (added_path) t->model = t->model.with_added_tokens(load_added_tokens(added_path));
    *out = t.release();
  });
}

lrlp_status lrlp_tokenizer_parse(const char* vocab_json, const char* merges_text,
                                 const char* added_text, lrlp_tokenizer** out) {
  LRLP_REQUIRE(vocab_json && merges_text && out, "lrlp_tokenizer_parse: null argument");
  return guarded([&] {
    auto t = std::make_unique<lrlp_tokenizer>();
    t->model = parse_tokenizer(vocab_json, merges_text);
    if (added_text) t->model = t->model.with_added_tokens(parse_added_tokens(added_text));
    *out = t.release();
  });
}

lrlp_status lrlp_tokenizer_save(const lrlp_tokenizer* tokenizer, const char* vocab_path,
                                const char* merges_path, const char* added_path) {
  LRLP_REQUIRE(tokenizer && vocab_path && merges_path && added_path,
               "lrlp_tokenizer_save: null argument");
  return guarded([&] { save_tokenizer(tokenizer->model, vocab_path, merges_path, added_path); });
}

size_t lrlp_tokenizer_added_count(const lrlp_tokenizer* tokenizer) {
  return tokenizer ? tokenizer->model.added_tokens().size() : 0;
}

void lrlp_tokenizer_free(lrlp_tokenizer* tokenizer) { delete tokenizer; }

lrlp_status lrlp_tokenize_word(const lrlp_tokenizer* tokenizer, const char* word, lrlp_tokens** out) {
  LRLP_REQUIRE(tokenizer && word && out, "lrlp_tokenize_word: null argument");
  return guarded([&] { make_tokens(tokenizer->model, tokenizer->model.tokenize_word(word), out); });
}

lrlp_status lrlp_tokenize_sentence(const lrlp_tokenizer* tokenizer, const char* text,
                                   lrlp_tokens** out) {
  LRLP_REQUIRE(tokenizer && text && out, "lrlp_tokenize_sentence: null argument");
  return guarded(
      [&] { make_tokens(tokenizer->model, tokenizer->model.tokenize_sentence(text), out); });
}

size_t lrlp_tokens_count(const lrlp_tokens* tokens) { return tokens ? tokens->text.size() : 0; }

const char* lrlp_tokens_text(const lrlp_tokens* tokens, size_t index, size_t* length) {
  if (!tokens || index >= tokens->text.size()) return nullptr;
  if (length) *length = tokens->text[index].size();
  return tokens->text[index].c_str();
}

int64_t lrlp_tokens_id(const lrlp_tokens* tokens, size_t index) {
  if (!tokens || index >= tokens->ids.size()) return -1;
  return tokens->ids[index];
}

void lrlp_tokens_free(lrlp_tokens* tokens) { delete tokens; }

/* scoring */

lrlp_status lrlp_score(const lrlp_corpus* corpus, const lrlp_tokenizer* tokenizer,
                       const lrlp_score_options* options, lrlp_scores** out) {
  LRLP_REQUIRE(corpus && tokenizer && out, "lrlp_score: null argument");
  return guarded([&] {
    auto s = std::make_unique<lrlp_scores>();
    s->stats = compute_stats(corpus->corpus);
    s->tables = score_corpus(s->stats, tokenizer->model, to_cpp(options));
    *out = s.release();
  });
}

size_t lrlp_scores_sentence_count(const lrlp_scores* scores) {
  return scores ? scores->tables.sentence_joint.size() : 0;
}

lrlp_status lrlp_scores_sentence(const lrlp_scores* scores, size_t index, double* local,
                                 double* global, double* joint) {
  LRLP_REQUIRE(scores, "lrlp_scores_sentence: null argument");
  if (index >= scores->tables.sentence_joint.size()) {
    return fail(LRLP_ERR_OUT_OF_RANGE, "sentence index out of range");
  }
  if (local) *local = scores->tables.sentence_local[index];
  if (global) *global = scores->tables.sentence_global[index];
  if (joint) *joint = scores->tables.sentence_joint[index];
  return LRLP_OK;
}

size_t lrlp_scores_word_count(const lrlp_scores* scores) {
  return scores ? scores->stats.vocabulary_size() : 0;
}

lrlp_status lrlp_scores_word(const lrlp_scores* scores, size_t index, const char** word,
                             uint64_t* popularity, double* pagerank, double* joint) {
  LRLP_REQUIRE(scores, "lrlp_scores_word: null argument");
  if (index >= scores->stats.vocabulary_size()) {
    return fail(LRLP_ERR_OUT_OF_RANGE, "word index out of range");
  }
  if (word) *word = scores->stats.vocabulary[index].c_str();
  if (popularity) *popularity = scores->tables.word_popularity[index];
  if (pagerank) *pagerank = scores->tables.word_pagerank[index];
  if (joint) *joint = scores->tables.word_joint[index];
  return LRLP_OK;
}

lrlp_status lrlp_scores_dump_json(const lrlp_scores* scores, char** out) {
  LRLP_REQUIRE(scores && out, "lrlp_scores_dump_json: null argument");
  return guarded([&] { *out = copy_string(score_dump_json(scores->stats, scores->tables)); });
}

void lrlp_scores_free(lrlp_scores* scores) { delete scores; }

/* selection */

lrlp_status lrlp_select(const lrlp_corpus* corpus, const lrlp_scores* scores, size_t k,
                        lrlp_selection_mode mode, lrlp_selection** out) {
  LRLP_REQUIRE(corpus && scores && out, "lrlp_select: null argument");
  return guarded([&] {
    auto s = std::make_unique<lrlp_selection>();
    auto [result, subset] = select(corpus->corpus, scores->tables, k,
                                   mode == LRLP_SELECT_BOTTOM ? SelectionMode::bottom
                                                              : SelectionMode::top);
    s->indices = result.selected();
    s->result = std::move(result);
    s->subset.corpus = std::move(subset);
    *out = s.release();
  });
}

size_t lrlp_selection_count(const lrlp_selection* selection) {
  return selection ? selection->indices.size() : 0;
}

size_t lrlp_selection_index(const lrlp_selection* selection, size_t i) {
  if (!selection || i >= selection->indices.size()) return SIZE_MAX;
  return selection->indices[i];
}

const lrlp_corpus* lrlp_selection_corpus(const lrlp_selection* selection) {
  return selection ? &selection->subset : nullptr;
}

lrlp_status lrlp_selection_ranking_json(const lrlp_selection* selection, char** out) {
  LRLP_REQUIRE(selection && out, "lrlp_selection_ranking_json: null argument");
  return guarded([&] { *out = copy_string(ranking_json(selection->result)); });
}

lrlp_status lrlp_selection_report_json(const lrlp_selection* selection, char** out) {
  LRLP_REQUIRE(selection && out, "lrlp_selection_report_json: null argument");
  return guarded(
      [&] { *out = copy_string(selection_report_json(selection_report(selection->result))); });
}

void lrlp_selection_free(lrlp_selection* selection) { delete selection; }

/* augmentation */

lrlp_status lrlp_augment(const lrlp_corpus* corpus, const lrlp_tokenizer* tokenizer,
                         const lrlp_augment_options* options, const lrlp_score_options* score_options,
                         lrlp_augmentation** out, lrlp_tokenizer** updated) {
  LRLP_REQUIRE(corpus && tokenizer && out, "lrlp_augment: null argument");
  return guarded([&] {
    const ScoreOptions scoring = to_cpp(score_options);
    const AugmentationConfig config = to_cpp(options, scoring);
    auto [result, model] =
        augment_from_corpus(compute_stats(corpus->corpus), tokenizer->model, config, scoring);
    auto a = std::make_unique<lrlp_augmentation>();
    a->result = std::move(result);
    a->config = config;
    std::unique_ptr<lrlp_tokenizer> t;
    if (updated) {
      t = std::make_unique<lrlp_tokenizer>();
      t->model = std::move(model);
    }
    *out = a.release();
    if (updated) *updated = t.release();
  });
}

size_t lrlp_augmentation_count(const lrlp_augmentation* augmentation) {
  return augmentation ? augmentation->result.new_tokens.size() : 0;
}

lrlp_status lrlp_augmentation_token(const lrlp_augmentation* augmentation, size_t index,
                                    const char** token, int64_t* id) {
  LRLP_REQUIRE(augmentation, "lrlp_augmentation_token: null argument");
  if (index >= augmentation->result.new_tokens.size()) {
    return fail(LRLP_ERR_OUT_OF_RANGE, "token index out of range");
  }
  const auto& t = augmentation->result.new_tokens[index];
  if (token) *token = t.token.c_str();
  if (id) *id = t.id;
  return LRLP_OK;
}

int lrlp_augmentation_incomplete(const lrlp_augmentation* augmentation) {
  return augmentation && augmentation->result.incomplete ? 1 : 0;
}

const char* lrlp_augmentation_warning(const lrlp_augmentation* augmentation) {
  return augmentation ? augmentation->result.warning.c_str() : "";
}

lrlp_status lrlp_augmentation_init_json(const lrlp_augmentation* augmentation, char** out) {
  LRLP_REQUIRE(augmentation && out, "lrlp_augmentation_init_json: null argument");
  return guarded([&] { *out = copy_string(init_instructions_json(augmentation->result)); });
}

lrlp_status lrlp_augmentation_report_json(const lrlp_augmentation* augmentation, char** out) {
  LRLP_REQUIRE(augmentation && out, "lrlp_augmentation_report_json: null argument");
  return guarded([&] {
    *out = copy_string(augmentation_report_json(augmentation->result, augmentation->config));
  });
}

void lrlp_augmentation_free(lrlp_augmentation* augmentation) { delete augmentation; }

lrlp_status lrlp_expand_dummy(const lrlp_corpus* corpus, const lrlp_tokenizer* tokenizer,
                              const lrlp_augment_options* options,
                              const lrlp_score_options* score_options, const char* path) {
  LRLP_REQUIRE(corpus && tokenizer && path, "lrlp_expand_dummy: null argument");
  return guarded([&] {
    const ScoreOptions scoring = to_cpp(score_options);
    const AugmentationConfig config = to_cpp(options, scoring);
    config.validate();
    const CorpusStats stats = compute_stats(corpus->corpus);
    const ScoreTables tables = score_corpus(stats, tokenizer->model, scoring);
    write_dummy_corpus(select_target_words(stats, tables, config.q_percentile), path);
  });
}

lrlp_status lrlp_check_init_instructions(const char* instructions_json, const double* matrix,
                                         size_t rows, size_t cols, const double* expected,
                                         size_t expected_rows, double* max_deviation) {
  LRLP_REQUIRE(instructions_json && (matrix || rows * cols == 0) &&
                   (expected || expected_rows == 0) && max_deviation,
               "lrlp_check_init_instructions: null argument");
  return guarded([&] {
    Matrix m;
    m.rows = rows;
    m.cols = cols;
    m.data.assign(matrix, matrix + rows * cols);
    std::vector<std::vector<double>> exp(expected_rows);
    for (size_t r = 0; r < expected_rows; ++r) {
      exp[r].assign(expected + r * cols, expected + (r + 1) * cols);
    }
    *max_deviation = max_init_deviation(parse_init_instructions(instructions_json), m, exp);
  });
}

/* analysis */

lrlp_band lrlp_classify_fragmentation(double ratio, const lrlp_band_thresholds* thresholds) {
  return to_c(classify_fragmentation(ratio, to_cpp(thresholds)));
}

const char* lrlp_band_name(lrlp_band band) {
  switch (band) {
    case LRLP_BAND_LARGE: return "large";
    case LRLP_BAND_MEDIUM: return "medium";
    case LRLP_BAND_SMALL: return "small";
  }
  return "unknown";
}

lrlp_status lrlp_fragment_analyze(const lrlp_corpus* corpus, const lrlp_tokenizer* tokenizer,
                                  size_t top_n, int distinct_words,
                                  const lrlp_band_thresholds* thresholds, const char* corpus_id,
                                  lrlp_fragment_report** out) {
  LRLP_REQUIRE(corpus && tokenizer && out, "lrlp_fragment_analyze: null argument");
  return guarded([&] {
    auto r = std::make_unique<lrlp_fragment_report>();
    r->report = fragment_ratio(corpus->corpus, tokenizer->model, top_n, distinct_words != 0,
                               to_cpp(thresholds));
    if (corpus_id) r->report.corpus_id = corpus_id;
    *out = r.release();
  });
}

double lrlp_fragment_ratio(const lrlp_fragment_report* report) {
  return report ? report->report.fragment_ratio : 0.0;
}

lrlp_band lrlp_fragment_band(const lrlp_fragment_report* report) {
  return report ? to_c(report->report.band) : LRLP_BAND_SMALL;
}

lrlp_status lrlp_fragment_json(const lrlp_fragment_report* report, char** out) {
  LRLP_REQUIRE(report && out, "lrlp_fragment_json: null argument");
  return guarded([&] { *out = copy_string(fragment_report_json(report->report)); });
}

lrlp_status lrlp_fragment_text(const lrlp_fragment_report* report, char** out) {
  LRLP_REQUIRE(report && out, "lrlp_fragment_text: null argument");
  return guarded([&] { *out = copy_string(fragment_report_text(report->report)); });
}

void lrlp_fragment_free(lrlp_fragment_report* report) { delete report; }

lrlp_status lrlp_diff_analyze(const lrlp_corpus* corpus, const lrlp_tokenizer* before,
                              const lrlp_tokenizer* after, size_t top_n, lrlp_diff_report** out) {
  LRLP_REQUIRE(corpus && before && after && out, "lrlp_diff_analyze: null argument");
  return guarded([&] {
    auto r = std::make_unique<lrlp_diff_report>();
    r->report = tokenization_diff(corpus->corpus, before->model, after->model, top_n);
    *out = r.release();
  });
}

int64_t lrlp_diff_total_delta(const lrlp_diff_report* report) {
  return report ? report->report.total_delta : 0;
}

lrlp_status lrlp_diff_json(const lrlp_diff_report* report, char** out) {
  LRLP_REQUIRE(report && out, "lrlp_diff_json: null argument");
  return guarded([&] { *out = copy_string(diff_report_json(report->report)); });
}

lrlp_status lrlp_diff_text(const lrlp_diff_report* report, char** out) {
  LRLP_REQUIRE(report && out, "lrlp_diff_text: null argument");
  return guarded([&] { *out = copy_string(diff_report_text(report->report)); });
}

lrlp_status lrlp_diff_csv(const lrlp_diff_report* report, char** out) {
  LRLP_REQUIRE(report && out, "lrlp_diff_csv: null argument");
  return guarded([&] { *out = copy_string(diff_report_csv(report->report)); });
}

void lrlp_diff_free(lrlp_diff_report* report) { delete report; }

}  // extern "C"
