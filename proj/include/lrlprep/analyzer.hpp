#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lrlprep/corpus.hpp"
#include "lrlprep/tokenizer.hpp"

namespace lrlprep {

enum class FragmentBand { small, medium, large };

// Defaults group the nine reference ratios (13.67 ... 2.85) into the three
// reference bands.
struct BandThresholds {
  double large = 10.0;   // ratio >= large
  double medium = 6.0;   // medium <= ratio < large
};

FragmentBand classify_fragmentation(double ratio, const BandThresholds& thresholds = {});
const char* to_string(FragmentBand b);

struct WordFragment {
  std::string word;
  std::size_t tokens = 0;
  std::uint64_t occurrences = 0;
};

struct FragmentReport {
  std::string corpus_id;
  bool distinct_words = false;
  std::uint64_t total_words = 0;
  std::uint64_t total_tokens = 0;
  double fragment_ratio = 0.0;
  FragmentBand band = FragmentBand::small;
  std::vector<WordFragment> per_word_top;  // most fragmented first
};

// Tokens per word occurrence (or per distinct word when `distinct_words`).
// Throws when the corpus has no words.
FragmentReport fragment_ratio(const CorpusStats& stats, const TokenizerModel& model,
                              std::size_t top_n = 20, bool distinct_words = false,
                              const BandThresholds& thresholds = {});
FragmentReport fragment_ratio(const Corpus& corpus, const TokenizerModel& model,
                              std::size_t top_n = 20, bool distinct_words = false,
                              const BandThresholds& thresholds = {});

struct DiffRow {
  std::string word;
  std::uint64_t occurrences = 0;
  std::vector<std::string> tokens_before;
  std::vector<std::string> tokens_after;
  std::int64_t count_before = 0;
  std::int64_t count_after = 0;
  std::int64_t delta = 0;  // count_after - count_before
};

struct DiffReport {
  std::vector<DiffRow> rows;  // |delta| descending, then word; truncated to top_n
  std::size_t distinct_words = 0;
  double mean_before = 0.0;  // over distinct words
  double mean_after = 0.0;
  double weighted_mean_before = 0.0;  // over word occurrences
  double weighted_mean_after = 0.0;
  std::int64_t total_delta = 0;  // occurrence-weighted token change
  std::size_t increased = 0;
  std::size_t decreased = 0;
  std::size_t unchanged = 0;
};

// top_n == 0 keeps every row.
DiffReport tokenization_diff(const CorpusStats& stats, const TokenizerModel& before,
                             const TokenizerModel& after, std::size_t top_n = 0);
DiffReport tokenization_diff(const Corpus& corpus, const TokenizerModel& before,
                             const TokenizerModel& after, std::size_t top_n = 0);

std::string fragment_report_json(const FragmentReport& report);
std::string fragment_report_text(const FragmentReport& report);
std::string diff_report_json(const DiffReport& report);
std::string diff_report_text(const DiffReport& report);
// word,before,after
std::string diff_report_csv(const DiffReport& report);

}  // namespace lrlprep
