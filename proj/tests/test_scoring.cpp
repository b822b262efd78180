#include <doctest.h>

#include <numeric>
#include <random>

#include "helpers.hpp"
#include "lrlprep/error.hpp"
#include "lrlprep/scoring.hpp"
#include "lrlprep/selector.hpp"

using namespace lrlprep;

namespace {

CooccurrenceGraph graph_from(const std::vector<std::vector<double>>& w) {
  CooccurrenceGraph g;
  g.adjacency.resize(w.size());
  for (std::size_t u = 0; u < w.size(); ++u)
    for (std::size_t v = 0; v < w.size(); ++v)
      if (w[u][v] > 0) g.adjacency[u].push_back({static_cast<WordId>(v), w[u][v]});
  return g;
}

std::vector<std::vector<double>> random_symmetric(std::mt19937& rng, std::size_t n, double density) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> weight(1, 6);
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (u(rng) < density) w[i][j] = w[j][i] = weight(rng);
  return w;
}

TokenizerModel chars_model() {
  return parse_tokenizer(R"({"a":0,"b":1,"c":2,"x":3})", "");
}

}  // namespace

TEST_CASE("subword stats hand example") {
  const auto stats = compute_stats(Corpus({"ab ab ab", "ac ac"}));
  const auto sub = compute_subword_stats(stats, chars_model());
  CHECK(sub.subword_counts == std::map<std::string, std::uint64_t>{{"a", 5}, {"b", 3}, {"c", 2}});
  CHECK(sub.popularity[*stats.find("ab")] == 2);
  CHECK(sub.popularity[*stats.find("ac")] == 3);
}

TEST_CASE("a sole contributor has zero popularity") {
  const auto stats = compute_stats(Corpus({"x x", "x x"}));
  const auto sub = compute_subword_stats(stats, chars_model());
  CHECK(sub.subword_counts.at("x") == 4);
  CHECK(sub.popularity[0] == 0);
}

TEST_CASE("duplicate tokens inside a word count per occurrence") {
  // T("aa") = [a, a]: SWC[a] = 2*WC; N = 2 * (2*WC - WC).
  const auto stats = compute_stats(Corpus({"aa aa aa"}));
  const auto sub = compute_subword_stats(stats, chars_model());
  CHECK(sub.subword_counts.at("a") == 6);
  CHECK(sub.popularity[0] == 6);
}

TEST_CASE("subword stats match the naive oracle on a 200-word vocabulary") {
  std::mt19937 rng(41);
  const auto sentences = oracle::random_corpus(rng, 400, 200);
  const auto tok = oracle::random_tokenizer(rng, 40);
  const auto stats = compute_stats(Corpus(sentences));
  const auto sub = compute_subword_stats(stats, testing::to_model(tok));
  const auto expected = oracle::score(sentences, tok, 0.5, 0.5);
  CHECK(sub.subword_counts == expected.swc);
  for (const auto& [w, n] : expected.n) CHECK(sub.popularity[*stats.find(w)] == n);
}

TEST_CASE("N[w] ignores sentences whose subwords are disjoint from T(w)") {
  const auto model = chars_model();
  const auto a = compute_stats(Corpus({"ab ab", "ab"}));
  const auto b = compute_stats(Corpus({"ab ab", "ab", "xx x", "x"}));
  CHECK(compute_subword_stats(a, model).popularity[*a.find("ab")] ==
        compute_subword_stats(b, model).popularity[*b.find("ab")]);
}

TEST_CASE("co-occurrence examples") {
  {
    const auto s = compute_stats(Corpus({"a b c"}));
    const auto g = build_cooccurrence(s, 5);
    CHECK(g.weight(0, 1) == 1);
    CHECK(g.weight(0, 2) == 1);
    CHECK(g.weight(1, 2) == 1);
    CHECK(g.weight(2, 1) == 1);
    CHECK(g.total_weight() == 3);
  }
  {
    const auto g = build_cooccurrence(Corpus({"a a"}), 5);
    CHECK(g.total_weight() == 0);
    CHECK(g.node_count() == 1);
  }
  {
    const auto s = compute_stats(Corpus({"a b c d e f g"}));
    const auto g = build_cooccurrence(s, 2);
    const std::vector<std::pair<char, char>> expected = {
        {'a', 'b'}, {'a', 'c'}, {'b', 'c'}, {'b', 'd'}, {'c', 'd'}, {'c', 'e'},
        {'d', 'e'}, {'d', 'f'}, {'e', 'f'}, {'e', 'g'}, {'f', 'g'}};
    for (auto [u, v] : expected) {
      CHECK(g.weight(*s.find(std::string(1, u)), *s.find(std::string(1, v))) == 1);
    }
    CHECK(g.total_weight() == static_cast<double>(expected.size()));
  }
  {
    // Pairs never cross sentences.
    const auto s = compute_stats(Corpus({"a", "b"}));
    CHECK(build_cooccurrence(s, 5).total_weight() == 0);
  }
  CHECK_THROWS_AS(build_cooccurrence(Corpus({"a b"}), 0), Error);
}

TEST_CASE("co-occurrence weights match the enumeration oracle") {
  std::mt19937 rng(43);
  for (std::size_t window : {1u, 2u, 5u}) {
    const auto sentences = oracle::random_corpus(rng, 100, 40);
    const auto s = compute_stats(Corpus(sentences));
    const auto g = build_cooccurrence(s, window);
    const auto expected = oracle::cooccurrence(sentences, window);
    double total = 0;
    for (const auto& [p, c] : expected) {
      CHECK(g.weight(*s.find(p.first), *s.find(p.second)) == static_cast<double>(c));
      total += static_cast<double>(c);
    }
    CHECK(g.total_weight() == total);
  }
}

TEST_CASE("pagerank: two nodes share mass equally") {
  const auto pr = pagerank(graph_from({{0, 3}, {3, 0}}));
  CHECK(pr[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pr[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("pagerank: regular graphs are uniform") {
  for (std::size_t n : {3u, 5u, 8u}) {
    std::vector<std::vector<double>> cycle(n, std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> complete(n, std::vector<double>(n, 1.0));
    for (std::size_t i = 0; i < n; ++i) {
      cycle[i][(i + 1) % n] = cycle[(i + 1) % n][i] = 1;
      complete[i][i] = 0;
    }
    for (const auto& w : {cycle, complete}) {
      for (double x : pagerank(graph_from(w))) CHECK(std::abs(x - 1.0 / n) < 1e-9);
    }
  }
}

TEST_CASE("pagerank: 3-node path, frozen closed form") {
  // x_a = x_c = 0.15/3 + 0.85 x_b / 2, x_b = 0.15/3 + 0.85 (x_a + x_c)
  // => (19, 36, 19) / 74.
  const auto pr = pagerank(graph_from({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}));
  CHECK(std::abs(pr[0] - 19.0 / 74) < 1e-9);
  CHECK(std::abs(pr[1] - 36.0 / 74) < 1e-9);
  CHECK(std::abs(pr[2] - 19.0 / 74) < 1e-9);
  const auto dense = oracle::dense_pagerank({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}, 0.85);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(pr[i] - dense[i]) < 1e-8);
}

TEST_CASE("pagerank: isolated nodes and the dense oracle") {
  std::mt19937 rng(47);
  for (int round = 0; round < 30; ++round) {
    const std::size_t n = 3 + round % 8;
    const auto w = random_symmetric(rng, n, 0.4);  // may leave isolated nodes
    const auto pr = pagerank(graph_from(w));
    const auto dense = oracle::dense_pagerank(w, 0.85);
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(pr[i] - dense[i]) < 1e-8);
      CHECK(pr[i] >= 0.15 / n - 1e-15);
      sum += pr[i];
    }
    CHECK(std::abs(sum - 1.0) < 1e-6);
  }
}

TEST_CASE("pagerank is invariant to uniform weight scaling") {
  std::mt19937 rng(53);
  auto w = random_symmetric(rng, 9, 0.5);
  const auto a = pagerank(graph_from(w));
  for (auto& row : w)
    for (auto& x : row) x *= 13.5;
  const auto b = pagerank(graph_from(w));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-9);
}

TEST_CASE("pagerank on an empty graph throws") {
  CHECK_THROWS_AS(pagerank(CooccurrenceGraph{}), Error);
}

TEST_CASE("word_scores: alpha only ranks by raw N") {
  SubwordStats sub;
  sub.popularity = {5, 1, 9, 3};
  const auto t = word_scores(sub, {0.4, 0.3, 0.2, 0.1}, 1.0, 0.0);
  const auto by_joint = rank_sentences(t.word_joint);
  const auto by_n = rank_sentences({5, 1, 9, 3});
  for (std::size_t i = 0; i < 4; ++i) CHECK(by_joint[i].index == by_n[i].index);
}

TEST_CASE("word_scores: constant families normalize to zero") {
  SubwordStats sub;
  sub.popularity = {4, 4, 4};
  const auto t = word_scores(sub, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 0.5, 0.5);
  for (double j : t.word_joint) CHECK(j == 0.0);
}

TEST_CASE("word_scores: weights are validated") {
  SubwordStats sub;
  sub.popularity = {1};
  CHECK_THROWS_AS(word_scores(sub, {1.0}, 0.0, 0.0), Error);
  CHECK_THROWS_AS(word_scores(sub, {1.0}, -1.0, 1.0), Error);
  CHECK_THROWS_AS(word_scores(sub, {1.0, 0.0}, 0.5, 0.5), Error);
}

TEST_CASE("raw normalization combines unscaled values") {
  SubwordStats sub;
  sub.popularity = {10, 0};
  const auto t = word_scores(sub, {0.25, 0.75}, 0.5, 0.5, Normalization::raw);
  CHECK(t.word_joint[0] == doctest::Approx(0.5 * 10 + 0.5 * 0.25));
  CHECK(t.word_joint[1] == doctest::Approx(0.5 * 0.75));
}

TEST_CASE("word and sentence scores match the independent oracle") {
  std::mt19937 rng(59);
  const auto sentences = oracle::random_corpus(rng, 100, 50);
  const auto tok = oracle::random_tokenizer(rng, 25);
  const auto stats = compute_stats(Corpus(sentences));
  const auto t = score_corpus(stats, testing::to_model(tok));
  const auto e = oracle::score(sentences, tok, 0.5, 0.5);
  for (const auto& [w, j] : e.joint) {
    const WordId id = *stats.find(w);
    CHECK(std::abs(t.word_pagerank[id] - e.pagerank.at(w)) < 1e-9);
    CHECK(std::abs(t.word_local[id] - e.local.at(w)) < 1e-9);
    CHECK(std::abs(t.word_global[id] - e.global.at(w)) < 1e-9);
    CHECK(std::abs(t.word_joint[id] - j) < 1e-9);
  }
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    CHECK(std::abs(t.sentence_local[s] - e.s_local[s]) < 1e-9);
    CHECK(std::abs(t.sentence_global[s] - e.s_global[s]) < 1e-9);
    CHECK(std::abs(t.sentence_joint[s] - e.s_joint[s]) < 1e-9);
  }
}

TEST_CASE("sentence scores count repeated words per occurrence") {
  const auto stats = compute_stats(Corpus({"w w", "w v", "v"}));
  const auto t = score_corpus(stats, chars_model());
  const WordId w = *stats.find("w");
  CHECK(t.sentence_local[0] == doctest::Approx(2 * t.word_local[w]));
  CHECK(t.sentence_global[0] == doctest::Approx(2 * t.word_global[w]));
}

TEST_CASE("sentence scores on an empty corpus") {
  ScoreTables t;
  sentence_scores(compute_stats(Corpus{}), t);
  CHECK(t.sentence_joint.empty());
  CHECK_THROWS_AS(score_corpus(compute_stats(Corpus{}), chars_model()), Error);
}

TEST_CASE("ranking is invariant to positive scaling of alpha and beta") {
  std::mt19937 rng(61);
  const auto sentences = oracle::random_corpus(rng, 80, 40);
  const auto model = testing::to_model(oracle::random_tokenizer(rng, 20));
  const auto stats = compute_stats(Corpus(sentences));
  ScoreOptions a;
  a.alpha = 0.3;
  a.beta = 0.7;
  ScoreOptions b = a;
  b.alpha *= 4;
  b.beta *= 4;
  const auto ra = rank_sentences(score_corpus(stats, model, a).sentence_joint);
  const auto rb = rank_sentences(score_corpus(stats, model, b).sentence_joint);
  for (std::size_t i = 0; i < ra.size(); ++i) CHECK(ra[i].index == rb[i].index);
}

TEST_CASE("score dump is deterministic with sorted keys") {
  const auto stats = compute_stats(Corpus({"ab c", "c ab ab"}));
  const auto t = score_corpus(stats, chars_model());
  const auto json = score_dump_json(stats, t);
  CHECK(json == score_dump_json(stats, score_corpus(stats, chars_model())));
  CHECK(json.find("\"alpha\": 0.5") != std::string::npos);
  CHECK(json.find("\"alpha\"") < json.find("\"beta\""));
  CHECK(json.find("\"sentences\"") < json.find("\"words\""));
  CHECK(json.find("\"N\": ") != std::string::npos);
}
