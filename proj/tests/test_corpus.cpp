#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "lrlprep/corpus.hpp"
#include "lrlprep/error.hpp"

using namespace lrlprep;

TEST_CASE("load_corpus skips blank lines and keeps indices contiguous") {
  testing::TempDir dir("corpus");
  testing::write_file(dir / "c.txt", "a b\n\nc\n");
  const Corpus c = load_corpus(dir / "c.txt");
  REQUIRE(c.size() == 2);
  CHECK(c[0].index == 0);
  CHECK(c[0].text == "a b");
  CHECK(c[1].index == 1);
  CHECK(c[1].text == "c");
}

TEST_CASE("load_corpus on an empty file") {
  testing::TempDir dir("corpus");
  testing::write_file(dir / "empty.txt", "");
  CHECK(load_corpus(dir / "empty.txt").empty());
}

TEST_CASE("load_corpus honours max_sentences") {
  const Corpus c = parse_corpus("1\n2\n3\n4\n5\n", 3);
  REQUIRE(c.size() == 3);
  CHECK(c[2].index == 2);
  CHECK(c[2].text == "3");
}

TEST_CASE("CRLF and whitespace-only lines") {
  const Corpus c = parse_corpus("x y\r\n \t\r\n\xe3\x80\x80\nz\r\n");  // U+3000 ideographic space
  REQUIRE(c.size() == 2);
  CHECK(c[0].text == "x y");
  CHECK(c[1].text == "z");
}

TEST_CASE("invalid UTF-8 is rejected with its line number") {
  try {
    parse_corpus("ok\nfine\nbad \xff here\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("missing corpus file is an I/O error") {
  try {
    load_corpus("/nonexistent/definitely/missing.txt");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }
}

TEST_CASE("segment_words") {
  using V = std::vector<std::string>;
  CHECK(segment_words("\xe0\xa4\x95 \xe0\xa4\x96  \xe0\xa4\x95") ==
        V{"\xe0\xa4\x95", "\xe0\xa4\x96", "\xe0\xa4\x95"});
  CHECK(segment_words("  ").empty());
  CHECK(segment_words("a\tb c") == V{"a", "b", "c"});
  CHECK(segment_words("A a") == V{"A", "a"});
  // e + combining acute composes to U+00E9 under NFC.
  CHECK(segment_words("e\xcc\x81") == V{"\xc3\xa9"});
  // NBSP (U+00A0) is Unicode whitespace.
  CHECK(segment_words("x\xc2\xa0y") == V{"x", "y"});
}

TEST_CASE("segment_words is idempotent under re-joining") {
  std::mt19937 rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto sentence = oracle::random_corpus(rng, 1, 20).front();
    const auto words = segment_words(sentence);
    std::string joined;
    for (const auto& w : words) joined += (joined.empty() ? "" : " ") + w;
    CHECK(segment_words(joined) == words);
  }
}

TEST_CASE("compute_stats hand count") {
  const CorpusStats s = compute_stats(Corpus({"a b a", "b c"}));
  REQUIRE(s.vocabulary == std::vector<std::string>{"a", "b", "c"});
  CHECK(s.word_counts == std::vector<std::uint64_t>{2, 2, 1});
  CHECK(s.total_words == 5);
  CHECK(s.count("a") == 2);
  CHECK(s.count("zzz") == 0);
  CHECK(s.sentence_words[1] == std::vector<WordId>{1, 2});
}

TEST_CASE("compute_stats on an empty corpus") {
  const CorpusStats s = compute_stats(Corpus{});
  CHECK(s.vocabulary.empty());
  CHECK(s.total_words == 0);
}

TEST_CASE("compute_stats matches a naive two-pass recount") {
  std::mt19937 rng(11);
  const auto sentences = oracle::random_corpus(rng, 1000, 150);
  const CorpusStats s = compute_stats(Corpus(sentences));
  const auto expected = oracle::word_counts(sentences);
  REQUIRE(s.vocabulary_size() == expected.size());
  std::uint64_t total = 0;
  for (const auto& [w, c] : expected) {
    CHECK(s.count(w) == c);
    total += c;
  }
  CHECK(s.total_words == total);
}

TEST_CASE("compute_stats is order invariant") {
  std::mt19937 rng(3);
  auto sentences = oracle::random_corpus(rng, 200, 60);
  const CorpusStats a = compute_stats(Corpus(sentences));
  std::shuffle(sentences.begin(), sentences.end(), rng);
  const CorpusStats b = compute_stats(Corpus(sentences));
  CHECK(a.vocabulary == b.vocabulary);
  CHECK(a.word_counts == b.word_counts);
}

TEST_CASE("write_corpus then load_corpus round-trips") {
  testing::TempDir dir("corpus");
  const Corpus c({"one two", "\xe0\xa4\x95\xe0\xa4\x96", "three"});
  write_corpus(c, dir / "out.txt");
  CHECK(testing::read_file(dir / "out.txt") == "one two\n\xe0\xa4\x95\xe0\xa4\x96\nthree\n");
  const Corpus back = load_corpus(dir / "out.txt");
  REQUIRE(back.size() == 3);
  CHECK(back[1].text == c[1].text);
}

TEST_CASE("subset keeps corpus order and re-indexes") {
  const Corpus c({"s0", "s1", "s2", "s3"});
  const Corpus sub = c.subset({3, 0});
  REQUIRE(sub.size() == 2);
  CHECK(sub[0].text == "s0");
  CHECK(sub[1].text == "s3");
  CHECK(sub[1].index == 1);
}
