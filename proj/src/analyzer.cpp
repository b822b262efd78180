#include "lrlprep/analyzer.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "lrlprep/error.hpp"
#include "lrlprep/json_writer.hpp"
#include "lrlprep/unicode.hpp"

namespace lrlprep {

FragmentBand classify_fragmentation(double ratio, const BandThresholds& thresholds) {
  if (ratio >= thresholds.large) return FragmentBand::large;
  if (ratio >= thresholds.medium) return FragmentBand::medium;
  return FragmentBand::small;
}

const char* to_string(FragmentBand b) {
  switch (b) {
    case FragmentBand::large: return "large";
    case FragmentBand::medium: return "medium";
    case FragmentBand::small: return "small";
  }
  return "small";
}

FragmentReport fragment_ratio(const CorpusStats& stats, const TokenizerModel& model,
                              std::size_t top_n, bool distinct_words,
                              const BandThresholds& thresholds) {
  if (stats.total_words == 0) throw Error(ErrorKind::empty_input, "fragment ratio of a corpus with no words");

  FragmentReport report;
  report.distinct_words = distinct_words;
  std::vector<WordFragment> words;
  words.reserve(stats.vocabulary_size());
  for (std::size_t w = 0; w < stats.vocabulary_size(); ++w) {
    const std::size_t tokens = model.tokenize_word(stats.vocabulary[w]).size();
    const std::uint64_t weight = distinct_words ? 1 : stats.word_counts[w];
    report.total_words += weight;
    report.total_tokens += weight * tokens;
    words.push_back({stats.vocabulary[w], tokens, stats.word_counts[w]});
  }
  report.fragment_ratio =
      static_cast<double>(report.total_tokens) / static_cast<double>(report.total_words);
  report.band = classify_fragmentation(report.fragment_ratio, thresholds);

  std::stable_sort(words.begin(), words.end(),
                   [](const auto& a, const auto& b) { return a.tokens > b.tokens; });
  if (words.size() > top_n) words.resize(top_n);
  report.per_word_top = std::move(words);
  return report;
}

FragmentReport fragment_ratio(const Corpus& corpus, const TokenizerModel& model, std::size_t top_n,
                              bool distinct_words, const BandThresholds& thresholds) {
  return fragment_ratio(compute_stats(corpus), model, top_n, distinct_words, thresholds);
}

DiffReport tokenization_diff(const CorpusStats& stats, const TokenizerModel& before,
                             const TokenizerModel& after, std::size_t top_n) {
  DiffReport report;
  report.distinct_words = stats.vocabulary_size();
  std::vector<DiffRow> rows;
  rows.reserve(stats.vocabulary_size());
  double sum_before = 0.0, sum_after = 0.0, wsum_before = 0.0, wsum_after = 0.0;
  for (std::size_t w = 0; w < stats.vocabulary_size(); ++w) {
    DiffRow row;
    row.word = stats.vocabulary[w];
    row.occurrences = stats.word_counts[w];
    row.tokens_before = before.tokenize_word(row.word);
    row.tokens_after = after.tokenize_word(row.word);
    row.count_before = static_cast<std::int64_t>(row.tokens_before.size());
    row.count_after = static_cast<std::int64_t>(row.tokens_after.size());
    row.delta = row.count_after - row.count_before;

    const auto occ = static_cast<double>(row.occurrences);
    sum_before += static_cast<double>(row.count_before);
    sum_after += static_cast<double>(row.count_after);
    wsum_before += occ * static_cast<double>(row.count_before);
    wsum_after += occ * static_cast<double>(row.count_after);
    report.total_delta += static_cast<std::int64_t>(row.occurrences) * row.delta;
    if (row.delta > 0) ++report.increased;
    else if (row.delta < 0) ++report.decreased;
    else ++report.unchanged;
    rows.push_back(std::move(row));
  }
  if (report.distinct_words > 0) {
    const auto n = static_cast<double>(report.distinct_words);
    report.mean_before = sum_before / n;
    report.mean_after = sum_after / n;
  }
  if (stats.total_words > 0) {
    const auto n = static_cast<double>(stats.total_words);
    report.weighted_mean_before = wsum_before / n;
    report.weighted_mean_after = wsum_after / n;
  }
  // Vocabulary order is word byte order, so a stable sort settles ties by word.
  std::stable_sort(rows.begin(), rows.end(), [](const DiffRow& a, const DiffRow& b) {
    return std::llabs(a.delta) > std::llabs(b.delta);
  });
  if (top_n > 0 && rows.size() > top_n) rows.resize(top_n);
  report.rows = std::move(rows);
  return report;
}

DiffReport tokenization_diff(const Corpus& corpus, const TokenizerModel& before,
                             const TokenizerModel& after, std::size_t top_n) {
  return tokenization_diff(compute_stats(corpus), before, after, top_n);
}

std::string fragment_report_json(const FragmentReport& report) {
  JsonWriter j;
  j.begin_object();
  j.key("band").value(to_string(report.band));
  j.key("corpus_id").value(report.corpus_id);
  j.key("distinct_words").value(report.distinct_words);
  j.key("fragment_ratio").value(report.fragment_ratio);
  j.key("per_word_top").begin_array();
  for (const auto& w : report.per_word_top) {
    j.begin_object();
    j.key("occurrences").value(w.occurrences);
    j.key("tokens").value(static_cast<std::uint64_t>(w.tokens));
    j.key("word").value(w.word);
    j.end_object();
  }
  j.end_array();
  j.key("total_tokens").value(report.total_tokens);
  j.key("total_words").value(report.total_words);
  j.end_object();
  return j.str();
}

namespace {

std::string pad(const std::string& s, std::size_t width) {
  const std::size_t len = unicode::code_point_count(s);
  return len >= width ? s : s + std::string(width - len, ' ');
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string fragment_report_text(const FragmentReport& report) {
  std::ostringstream out;
  out << "corpus: " << (report.corpus_id.empty() ? "-" : report.corpus_id) << '\n'
      << "words: " << report.total_words << (report.distinct_words ? " (distinct)" : "") << '\n'
      << "tokens: " << report.total_tokens << '\n'
      << "fragment ratio: " << format_number(report.fragment_ratio) << " (" << to_string(report.band)
      << ")\n";
  if (!report.per_word_top.empty()) {
    std::size_t width = 4;
    for (const auto& w : report.per_word_top) width = std::max(width, unicode::code_point_count(w.word));
    out << '\n' << pad("word", width) << "  tokens  occurrences\n";
    for (const auto& w : report.per_word_top) {
      out << pad(w.word, width) << "  " << pad(std::to_string(w.tokens), 6) << "  " << w.occurrences
          << '\n';
    }
  }
  return out.str();
}

std::string diff_report_json(const DiffReport& report) {
  JsonWriter j;
  j.begin_object();
  j.key("decreased").value(static_cast<std::uint64_t>(report.decreased));
  j.key("distinct_words").value(static_cast<std::uint64_t>(report.distinct_words));
  j.key("increased").value(static_cast<std::uint64_t>(report.increased));
  j.key("mean_after").value(report.mean_after);
  j.key("mean_before").value(report.mean_before);
  j.key("rows").begin_array();
  for (const auto& r : report.rows) {
    j.begin_object();
    j.key("count_after").value(r.count_after);
    j.key("count_before").value(r.count_before);
    j.key("delta").value(r.delta);
    j.key("occurrences").value(r.occurrences);
    j.key("tokens_after").begin_array();
    for (const auto& t : r.tokens_after) j.value(t);
    j.end_array();
    j.key("tokens_before").begin_array();
    for (const auto& t : r.tokens_before) j.value(t);
    j.end_array();
    j.key("word").value(r.word);
    j.end_object();
  }
  j.end_array();
  j.key("total_delta").value(report.total_delta);
  j.key("unchanged").value(static_cast<std::uint64_t>(report.unchanged));
  j.key("weighted_mean_after").value(report.weighted_mean_after);
  j.key("weighted_mean_before").value(report.weighted_mean_before);
  j.end_object();
  return j.str();
}

std::string diff_report_text(const DiffReport& report) {
  std::ostringstream out;
  out << "distinct words: " << report.distinct_words << '\n'
      << "mean tokens per word: " << format_number(report.mean_before) << " -> "
      << format_number(report.mean_after) << '\n'
      << "mean tokens per occurrence: " << format_number(report.weighted_mean_before) << " -> "
      << format_number(report.weighted_mean_after) << '\n'
      << "increased/decreased/unchanged: " << report.increased << '/' << report.decreased << '/'
      << report.unchanged << '\n';
  if (!report.rows.empty()) {
    std::size_t word_w = 4, before_w = 6;
    for (const auto& r : report.rows) {
      word_w = std::max(word_w, unicode::code_point_count(r.word));
      before_w = std::max(before_w, unicode::code_point_count(join(r.tokens_before)));
    }
    out << '\n'
        << pad("word", word_w) << "  " << pad("before", 6) << "  " << pad("after", 5) << "  "
        << pad("delta", 5) << "  " << pad("tokens before", before_w) << "  tokens after\n";
    for (const auto& r : report.rows) {
      out << pad(r.word, word_w) << "  " << pad(std::to_string(r.count_before), 6) << "  "
          << pad(std::to_string(r.count_after), 5) << "  "
          << pad((r.delta > 0 ? "+" : "") + std::to_string(r.delta), 5) << "  "
          << pad(join(r.tokens_before), before_w) << "  " << join(r.tokens_after) << '\n';
    }
  }
  return out.str();
}

std::string diff_report_csv(const DiffReport& report) {
  std::string out = "word,before,after\n";
  for (const auto& r : report.rows) {
    out += csv_field(r.word) + "," + std::to_string(r.count_before) + "," +
           std::to_string(r.count_after) + "\n";
  }
  return out;
}

}  // namespace lrlprep
