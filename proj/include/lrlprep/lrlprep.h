/*
 * lrlprep C API.
 *
 * Every object is an opaque handle owned by the caller and released with its
 * matching *_free function. Functions that can fail return lrlp_status; on
 * failure lrlp_last_error() describes the problem (thread-local, valid until
 * the next failing call on the same thread). Strings returned through char**
 * out-parameters are heap allocated and released with lrlp_string_free.
 * Strings returned as const char* are owned by the handle they came from.
 */
#ifndef LRLPREP_H
#define LRLPREP_H

#include <stddef.h>
#include <stdint.h>

#if defined(LRLP_BUILDING_LIBRARY)
#  define LRLP_API __attribute__((visibility("default")))
#else
#  define LRLP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lrlp_status {
  LRLP_OK = 0,
  LRLP_ERR_INVALID_ARGUMENT = 1,
  LRLP_ERR_IO = 2,
  LRLP_ERR_PARSE = 3,
  LRLP_ERR_OUT_OF_RANGE = 4,
  LRLP_ERR_EMPTY_INPUT = 5,
  LRLP_ERR_INTERNAL = 6
} lrlp_status;

typedef enum lrlp_normalization {
  LRLP_NORMALIZE_MINMAX = 0,
  LRLP_NORMALIZE_RAW = 1
} lrlp_normalization;

typedef enum lrlp_selection_mode {
  LRLP_SELECT_TOP = 0,
  LRLP_SELECT_BOTTOM = 1
} lrlp_selection_mode;

typedef enum lrlp_token_mode {
  LRLP_TOKENS_BPE = 0,
  LRLP_TOKENS_SINGLE_CHAR = 1
} lrlp_token_mode;

typedef enum lrlp_band {
  LRLP_BAND_SMALL = 0,
  LRLP_BAND_MEDIUM = 1,
  LRLP_BAND_LARGE = 2
} lrlp_band;

typedef struct lrlp_corpus lrlp_corpus;
typedef struct lrlp_tokenizer lrlp_tokenizer;
typedef struct lrlp_tokens lrlp_tokens;
typedef struct lrlp_scores lrlp_scores;
typedef struct lrlp_selection lrlp_selection;
typedef struct lrlp_augmentation lrlp_augmentation;
typedef struct lrlp_fragment_report lrlp_fragment_report;
typedef struct lrlp_diff_report lrlp_diff_report;

typedef struct lrlp_score_options {
  double alpha;
  double beta;
  size_t window;
  lrlp_normalization normalization;
  double damping;
  double tolerance;
  size_t max_iterations;
} lrlp_score_options;

typedef struct lrlp_augment_options {
  double percentile;   /* top-Q percentile of words, (0, 100] */
  size_t new_tokens;   /* K >= 1 */
  lrlp_token_mode mode;
  int filter_existing; /* nonzero: skip candidates already a single token */
} lrlp_augment_options;

typedef struct lrlp_band_thresholds {
  double large;
  double medium;
} lrlp_band_thresholds;

LRLP_API const char* lrlp_version(void);
LRLP_API const char* lrlp_last_error(void);
LRLP_API const char* lrlp_status_string(lrlp_status status);
LRLP_API void lrlp_string_free(char* s);

/* Defaults: alpha = beta = 0.5, window 5, min-max normalization, damping
 * 0.85, tolerance 1e-13, 200 iterations. */
LRLP_API void lrlp_score_options_default(lrlp_score_options* options);
/* Defaults: percentile 50, 100 tokens, BPE mode, filtering on. */
LRLP_API void lrlp_augment_options_default(lrlp_augment_options* options);
/* Defaults: large >= 10, medium >= 6. */
LRLP_API void lrlp_band_thresholds_default(lrlp_band_thresholds* thresholds);

/* ---- corpus ---- */

/* max_sentences == 0 means no limit. */
LRLP_API lrlp_status lrlp_corpus_load(const char* path, size_t max_sentences, lrlp_corpus** out);
LRLP_API lrlp_status lrlp_corpus_parse(const char* text, size_t length, size_t max_sentences,
                                       lrlp_corpus** out);
LRLP_API size_t lrlp_corpus_size(const lrlp_corpus* corpus);
/* NULL when index is out of range. */
LRLP_API const char* lrlp_corpus_sentence(const lrlp_corpus* corpus, size_t index);
LRLP_API lrlp_status lrlp_corpus_save(const lrlp_corpus* corpus, const char* path);
LRLP_API void lrlp_corpus_free(lrlp_corpus* corpus);

/* ---- tokenizer ---- */

/* added_path may be NULL. */
LRLP_API lrlp_status lrlp_tokenizer_load(const char* vocab_path, const char* merges_path,
                                         const char* added_path, lrlp_tokenizer** out);
LRLP_API lrlp_status lrlp_tokenizer_parse(const char* vocab_json, const char* merges_text,
                                          const char* added_text, lrlp_tokenizer** out);
LRLP_API lrlp_status lrlp_tokenizer_save(const lrlp_tokenizer* tokenizer, const char* vocab_path,
                                         const char* merges_path, const char* added_path);
LRLP_API size_t lrlp_tokenizer_added_count(const lrlp_tokenizer* tokenizer);
LRLP_API void lrlp_tokenizer_free(lrlp_tokenizer* tokenizer);

/* Tokenizes a word (no internal whitespace) or a whole sentence. */
LRLP_API lrlp_status lrlp_tokenize_word(const lrlp_tokenizer* tokenizer, const char* word,
                                        lrlp_tokens** out);
LRLP_API lrlp_status lrlp_tokenize_sentence(const lrlp_tokenizer* tokenizer, const char* text,
                                            lrlp_tokens** out);
LRLP_API size_t lrlp_tokens_count(const lrlp_tokens* tokens);
/* Token bytes (not NUL-terminated-safe for fallback byte 0x00; see length). */
LRLP_API const char* lrlp_tokens_text(const lrlp_tokens* tokens, size_t index, size_t* length);
/* -1 when the token has no id in the vocabulary. */
LRLP_API int64_t lrlp_tokens_id(const lrlp_tokens* tokens, size_t index);
LRLP_API void lrlp_tokens_free(lrlp_tokens* tokens);

/* ---- scoring ---- */

/* options may be NULL for defaults. */
LRLP_API lrlp_status lrlp_score(const lrlp_corpus* corpus, const lrlp_tokenizer* tokenizer,
                                const lrlp_score_options* options, lrlp_scores** out);
LRLP_API size_t lrlp_scores_sentence_count(const lrlp_scores* scores);
LRLP_API lrlp_status lrlp_scores_sentence(const lrlp_scores* scores, size_t index, double* local,
                                          double* global, double* joint);
LRLP_API size_t lrlp_scores_word_count(const lrlp_scores* scores);
LRLP_API lrlp_status lrlp_scores_word(const lrlp_scores* scores, size_t index, const char** word,
                                      uint64_t* popularity, double* pagerank, double* joint);
LRLP_API lrlp_status lrlp_scores_dump_json(const lrlp_scores* scores, char** out);
LRLP_API void lrlp_scores_free(lrlp_scores* scores);

/* ---- sentence selection ---- */

LRLP_API lrlp_status lrlp_select(const lrlp_corpus* corpus, const lrlp_scores* scores, size_t k,
                                 lrlp_selection_mode mode, lrlp_selection** out);
/* Selected indices in ascending (corpus) order. */
LRLP_API size_t lrlp_selection_count(const lrlp_selection* selection);
LRLP_API size_t lrlp_selection_index(const lrlp_selection* selection, size_t i);
LRLP_API const lrlp_corpus* lrlp_selection_corpus(const lrlp_selection* selection);
LRLP_API lrlp_status lrlp_selection_ranking_json(const lrlp_selection* selection, char** out);
LRLP_API lrlp_status lrlp_selection_report_json(const lrlp_selection* selection, char** out);
LRLP_API void lrlp_selection_free(lrlp_selection* selection);

/* ---- vocabulary augmentation ---- */

/* Scores the corpus words, keeps the top percentile and selects new tokens.
 * score_options may be NULL; its alpha/beta weight the word scores. *updated
 * receives the augmented tokenizer (may be NULL if not wanted). */
LRLP_API lrlp_status lrlp_augment(const lrlp_corpus* corpus, const lrlp_tokenizer* tokenizer,
                                  const lrlp_augment_options* options,
                                  const lrlp_score_options* score_options,
                                  lrlp_augmentation** out, lrlp_tokenizer** updated);
LRLP_API size_t lrlp_augmentation_count(const lrlp_augmentation* augmentation);
LRLP_API lrlp_status lrlp_augmentation_token(const lrlp_augmentation* augmentation, size_t index,
                                             const char** token, int64_t* id);
LRLP_API int lrlp_augmentation_incomplete(const lrlp_augmentation* augmentation);
LRLP_API const char* lrlp_augmentation_warning(const lrlp_augmentation* augmentation);
LRLP_API lrlp_status lrlp_augmentation_init_json(const lrlp_augmentation* augmentation, char** out);
LRLP_API lrlp_status lrlp_augmentation_report_json(const lrlp_augmentation* augmentation, char** out);
LRLP_API void lrlp_augmentation_free(lrlp_augmentation* augmentation);

/* Writes the literal dummy corpus (each target word repeated by its count). */
LRLP_API lrlp_status lrlp_expand_dummy(const lrlp_corpus* corpus, const lrlp_tokenizer* tokenizer,
                                       const lrlp_augment_options* options,
                                       const lrlp_score_options* score_options, const char* path);

/* Checks init instructions against an embedding matrix (row-major,
 * rows x cols): *max_deviation receives the largest |mean - expected| over
 * all instructions; expected holds one row of width cols per instruction. */
LRLP_API lrlp_status lrlp_check_init_instructions(const char* instructions_json,
                                                  const double* matrix, size_t rows, size_t cols,
                                                  const double* expected, size_t expected_rows,
                                                  double* max_deviation);

/* ---- analysis ---- */

LRLP_API lrlp_band lrlp_classify_fragmentation(double ratio, const lrlp_band_thresholds* thresholds);
LRLP_API const char* lrlp_band_name(lrlp_band band);

/* thresholds may be NULL; corpus_id may be NULL. */
LRLP_API lrlp_status lrlp_fragment_analyze(const lrlp_corpus* corpus, const lrlp_tokenizer* tokenizer,
                                           size_t top_n, int distinct_words,
                                           const lrlp_band_thresholds* thresholds,
                                           const char* corpus_id, lrlp_fragment_report** out);
LRLP_API double lrlp_fragment_ratio(const lrlp_fragment_report* report);
LRLP_API lrlp_band lrlp_fragment_band(const lrlp_fragment_report* report);
LRLP_API lrlp_status lrlp_fragment_json(const lrlp_fragment_report* report, char** out);
LRLP_API lrlp_status lrlp_fragment_text(const lrlp_fragment_report* report, char** out);
LRLP_API void lrlp_fragment_free(lrlp_fragment_report* report);

/* top_n == 0 keeps every word. */
LRLP_API lrlp_status lrlp_diff_analyze(const lrlp_corpus* corpus, const lrlp_tokenizer* before,
                                       const lrlp_tokenizer* after, size_t top_n,
                                       lrlp_diff_report** out);
LRLP_API int64_t lrlp_diff_total_delta(const lrlp_diff_report* report);
LRLP_API lrlp_status lrlp_diff_json(const lrlp_diff_report* report, char** out);
LRLP_API lrlp_status lrlp_diff_text(const lrlp_diff_report* report, char** out);
LRLP_API lrlp_status lrlp_diff_csv(const lrlp_diff_report* report, char** out);
LRLP_API void lrlp_diff_free(lrlp_diff_report* report);

#ifdef __cplusplus
}
#endif

#endif /* LRLPREP_H */
