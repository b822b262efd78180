#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lrlprep {

using WordId = std::uint32_t;
using SentenceIndex = std::size_t;

struct Sentence {
  SentenceIndex index = 0;
  std::string text;
};

// Ordered sentence store. Indices are 0..size()-1 in file order.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<std::string> texts);

  std::size_t size() const noexcept { return sentences_.size(); }
  bool empty() const noexcept { return sentences_.empty(); }
  const Sentence& operator[](SentenceIndex i) const { return sentences_[i]; }
  const std::vector<Sentence>& sentences() const noexcept { return sentences_; }

  auto begin() const noexcept { return sentences_.begin(); }
  auto end() const noexcept { return sentences_.end(); }

  // Subset in ascending index order, re-indexed from 0.
  Corpus subset(const std::vector<SentenceIndex>& indices) const;

 private:
  std::vector<Sentence> sentences_;
};

// One sentence per line; CRLF accepted. Blank (whitespace-only) lines are
// skipped. Throws Error(parse) naming the first line with invalid UTF-8.
Corpus load_corpus(const std::filesystem::path& path,
                   std::optional<std::size_t> max_sentences = std::nullopt);

Corpus parse_corpus(std::string_view content,
                    std::optional<std::size_t> max_sentences = std::nullopt);

// Writes one sentence per line with LF endings.
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);

// Unicode-whitespace split, empty segments dropped, each segment NFC
// normalized. No case folding.
std::vector<std::string> segment_words(std::string_view text);

// Word vocabulary and counts of a corpus, plus every sentence re-encoded as
// word ids. Word ids follow byte order of the UTF-8 word strings (which is
// code-point order), so iteration over ids is deterministic.
struct CorpusStats {
  std::vector<std::string> vocabulary;
  std::vector<std::uint64_t> word_counts;
  std::uint64_t total_words = 0;
  std::vector<std::vector<WordId>> sentence_words;

  std::size_t vocabulary_size() const noexcept { return vocabulary.size(); }
  std::optional<WordId> find(std::string_view word) const;
  std::uint64_t count(std::string_view word) const;

  std::unordered_map<std::string, WordId> ids;
};

CorpusStats compute_stats(const Corpus& corpus);

}  // namespace lrlprep
