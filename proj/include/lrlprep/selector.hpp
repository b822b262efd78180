#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "lrlprep/corpus.hpp"
#include "lrlprep/scoring.hpp"

namespace lrlprep {

enum class SelectionMode { top, bottom };

struct RankedSentence {
  SentenceIndex index;
  double score;
};

struct SelectionResult {
  SelectionMode mode = SelectionMode::top;
  std::size_t k = 0;
  // Every sentence, score descending, ties by ascending index.
  std::vector<RankedSentence> ranked;
  std::vector<SentenceIndex> selected_top;     // first k of ranked
  std::vector<SentenceIndex> selected_bottom;  // last k of ranked

  // Indices for the active mode, ascending (original corpus order).
  std::vector<SentenceIndex> selected() const;
};

std::vector<RankedSentence> rank_sentences(const std::vector<double>& scores);

// Requires 1 <= k <= number of sentences.
SelectionResult select_sentences(const std::vector<double>& sentence_joint, std::size_t k,
                                 SelectionMode mode);

// Selection plus the stable subset of the corpus, in original order.
std::pair<SelectionResult, Corpus> select(const Corpus& corpus, const ScoreTables& tables,
                                          std::size_t k, SelectionMode mode);

struct ScoreSummary {
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

struct SelectionReport {
  SelectionMode mode = SelectionMode::top;
  std::size_t k = 0;
  std::size_t corpus_size = 0;
  ScoreSummary selected;
  ScoreSummary rejected;  // count 0 when nothing was rejected
};

SelectionReport selection_report(const SelectionResult& result);
std::string selection_report_json(const SelectionReport& report);
std::string ranking_json(const SelectionResult& result);

const char* to_string(SelectionMode m);

}  // namespace lrlprep
