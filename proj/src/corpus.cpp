#include "lrlprep/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lrlprep/error.hpp"
#include "lrlprep/unicode.hpp"

namespace lrlprep {

namespace {

bool is_blank(std::string_view line) {
  for (const auto& cp : unicode::decode(line)) {
    if (!unicode::is_whitespace(cp.value)) return false;
  }
  return true;
}

}  // namespace

Corpus::Corpus(std::vector<std::string> texts) {
  sentences_.reserve(texts.size());
  for (auto& t : texts) {
    sentences_.push_back(Sentence{sentences_.size(), std::move(t)});
  }
}

Corpus Corpus::subset(const std::vector<SentenceIndex>& indices) const {
  std::vector<SentenceIndex> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::string> texts;
  texts.reserve(sorted.size());
  for (SentenceIndex i : sorted) {
    if (i >= sentences_.size()) {
      throw Error(ErrorKind::out_of_range,
                  "sentence index " + std::to_string(i) + " out of range");
    }
    texts.push_back(sentences_[i].text);
  }
  return Corpus(std::move(texts));
}

Corpus parse_corpus(std::string_view content, std::optional<std::size_t> max_sentences) {
  std::vector<std::string> texts;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    if (max_sentences && texts.size() >= *max_sentences) break;
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (auto bad = unicode::find_invalid_utf8(line)) {
      throw Error(ErrorKind::parse, "invalid UTF-8 on line " + std::to_string(line_no) +
                                        " at byte " + std::to_string(*bad + 1));
    }
    if (is_blank(line)) continue;
    texts.emplace_back(line);
  }
  return Corpus(std::move(texts));
}

Corpus load_corpus(const std::filesystem::path& path, std::optional<std::size_t> max_sentences) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open corpus file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::io, "failed reading corpus file: " + path.string());
  return parse_corpus(buf.str(), max_sentences);
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write corpus file: " + path.string());
  for (const auto& s : corpus) out << s.text << '\n';
  if (!out) throw Error(ErrorKind::io, "failed writing corpus file: " + path.string());
}

std::vector<std::string> segment_words(std::string_view text) {
  std::vector<std::string> words;
  std::size_t start = 0;
  std::size_t end = 0;
  auto flush = [&] {
    if (end > start) words.push_back(unicode::to_nfc(text.substr(start, end - start)));
  };
  for (const auto& cp : unicode::decode(text)) {
    const auto offset = static_cast<std::size_t>(cp.bytes.data() - text.data());
    if (unicode::is_whitespace(cp.value)) {
      flush();
      start = offset + cp.bytes.size();
    }
    end = offset + cp.bytes.size();
  }
  flush();
  return words;
}

std::optional<WordId> CorpusStats::find(std::string_view word) const {
  auto it = ids.find(std::string(word));
  if (it == ids.end()) return std::nullopt;
  return it->second;
}

std::uint64_t CorpusStats::count(std::string_view word) const {
  auto id = find(word);
  return id ? word_counts[*id] : 0;
}

CorpusStats compute_stats(const Corpus& corpus) {
  std::unordered_map<std::string, std::uint64_t> counts;
  std::vector<std::vector<std::string>> segmented;
  segmented.reserve(corpus.size());
  for (const auto& s : corpus) {
    segmented.push_back(segment_words(s.text));
    for (const auto& w : segmented.back()) ++counts[w];
  }

  CorpusStats stats;
  stats.vocabulary.reserve(counts.size());
  for (const auto& [w, c] : counts) stats.vocabulary.push_back(w);
  std::sort(stats.vocabulary.begin(), stats.vocabulary.end());
  stats.word_counts.reserve(stats.vocabulary.size());
  stats.ids.reserve(stats.vocabulary.size());
  for (std::size_t i = 0; i < stats.vocabulary.size(); ++i) {
    const auto& w = stats.vocabulary[i];
    stats.ids.emplace(w, static_cast<WordId>(i));
    stats.word_counts.push_back(counts[w]);
    stats.total_words += counts[w];
  }
  stats.sentence_words.reserve(segmented.size());
  for (const auto& words : segmented) {
    std::vector<WordId> encoded;
    encoded.reserve(words.size());
    for (const auto& w : words) encoded.push_back(stats.ids.at(w));
    stats.sentence_words.push_back(std::move(encoded));
  }
  return stats;
}

}  // namespace lrlprep
