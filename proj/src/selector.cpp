#include "lrlprep/selector.hpp"

#include <algorithm>
#include <numeric>

#include "lrlprep/error.hpp"
#include "lrlprep/json_writer.hpp"

namespace lrlprep {

std::vector<SentenceIndex> SelectionResult::selected() const {
  std::vector<SentenceIndex> out = mode == SelectionMode::top ? selected_top : selected_bottom;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<RankedSentence> rank_sentences(const std::vector<double>& scores) {
  std::vector<RankedSentence> ranked(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) ranked[i] = {i, scores[i]};
  std::sort(ranked.begin(), ranked.end(), [](const RankedSentence& a, const RankedSentence& b) {
    return a.score != b.score ? a.score > b.score : a.index < b.index;
  });
  return ranked;
}

SelectionResult select_sentences(const std::vector<double>& sentence_joint, std::size_t k,
                                 SelectionMode mode) {
  const std::size_t n = sentence_joint.size();
  if (k < 1 || k > n) {
    throw Error(ErrorKind::out_of_range, "k=" + std::to_string(k) +
                                             " must lie in [1, " + std::to_string(n) + "]");
  }
  SelectionResult r;
  r.mode = mode;
  r.k = k;
  r.ranked = rank_sentences(sentence_joint);
  for (std::size_t i = 0; i < k; ++i) r.selected_top.push_back(r.ranked[i].index);
  for (std::size_t i = n - k; i < n; ++i) r.selected_bottom.push_back(r.ranked[i].index);
  return r;
}

std::pair<SelectionResult, Corpus> select(const Corpus& corpus, const ScoreTables& tables,
                                          std::size_t k, SelectionMode mode) {
  if (tables.sentence_joint.size() != corpus.size()) {
    throw Error(ErrorKind::invalid_argument, "score tables do not match the corpus");
  }
  SelectionResult r = select_sentences(tables.sentence_joint, k, mode);
  Corpus subset = corpus.subset(r.selected());
  return {std::move(r), std::move(subset)};
}

namespace {

ScoreSummary summarize(const std::vector<double>& values) {
  ScoreSummary s;
  s.count = values.size();
  if (values.empty()) return s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  return s;
}

void write_summary(JsonWriter& j, const ScoreSummary& s) {
  j.begin_object();
  j.key("count").value(static_cast<std::uint64_t>(s.count));
  if (s.count == 0) {
    j.key("max").null();
    j.key("mean").null();
    j.key("min").null();
  } else {
    j.key("max").value(s.max);
    j.key("mean").value(s.mean);
    j.key("min").value(s.min);
  }
  j.end_object();
}

}  // namespace

SelectionReport selection_report(const SelectionResult& result) {
  const std::size_t n = result.ranked.size();
  std::vector<double> selected;
  std::vector<double> rejected;
  for (std::size_t i = 0; i < n; ++i) {
    const bool in_top = i < result.k;
    const bool in_bottom = i >= n - result.k;
    const bool chosen = result.mode == SelectionMode::top ? in_top : in_bottom;
    (chosen ? selected : rejected).push_back(result.ranked[i].score);
  }
  SelectionReport report;
  report.mode = result.mode;
  report.k = result.k;
  report.corpus_size = n;
  report.selected = summarize(selected);
  report.rejected = summarize(rejected);
  return report;
}

std::string selection_report_json(const SelectionReport& report) {
  JsonWriter j;
  j.begin_object();
  j.key("corpus_size").value(static_cast<std::uint64_t>(report.corpus_size));
  j.key("k").value(static_cast<std::uint64_t>(report.k));
  j.key("mode").value(to_string(report.mode));
  j.key("rejected");
  write_summary(j, report.rejected);
  j.key("selected");
  write_summary(j, report.selected);
  j.end_object();
  return j.str();
}

std::string ranking_json(const SelectionResult& result) {
  JsonWriter j;
  j.begin_array();
  for (const auto& r : result.ranked) {
    j.begin_object();
    j.key("index").value(static_cast<std::uint64_t>(r.index));
    j.key("score").value(r.score);
    j.end_object();
  }
  j.end_array();
  return j.str();
}

const char* to_string(SelectionMode m) { return m == SelectionMode::top ? "top" : "bottom"; }

}  // namespace lrlprep
