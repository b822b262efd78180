#include "lrlprep/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "lrlprep/error.hpp"
#include "lrlprep/json_writer.hpp"

namespace lrlprep {

SubwordStats compute_subword_stats(const CorpusStats& stats, const TokenizerModel& model) {
  const std::size_t n = stats.vocabulary_size();
  std::vector<std::vector<std::string>> tokenized(n);
  std::unordered_map<std::string, std::uint64_t> swc;
  for (std::size_t w = 0; w < n; ++w) {
    tokenized[w] = model.tokenize_word(stats.vocabulary[w]);
    for (const auto& t : tokenized[w]) swc[t] += stats.word_counts[w];
  }

  SubwordStats out;
  out.popularity.assign(n, 0);
  for (std::size_t w = 0; w < n; ++w) {
    std::uint64_t popularity = 0;
    for (const auto& t : tokenized[w]) popularity += swc.at(t) - stats.word_counts[w];
    out.popularity[w] = popularity;
  }
  out.subword_counts.insert(swc.begin(), swc.end());
  return out;
}

double CooccurrenceGraph::weight(WordId u, WordId v) const {
  if (u >= adjacency.size()) return 0.0;
  const auto& edges = adjacency[u];
  auto it = std::lower_bound(edges.begin(), edges.end(), v,
                             [](const Edge& e, WordId id) { return e.to < id; });
  return it != edges.end() && it->to == v ? it->weight : 0.0;
}

double CooccurrenceGraph::total_weight() const {
  double total = 0.0;
  for (std::size_t u = 0; u < adjacency.size(); ++u) {
    for (const auto& e : adjacency[u]) {
      if (e.to > u) total += e.weight;
    }
  }
  return total;
}

CooccurrenceGraph build_cooccurrence(const CorpusStats& stats, std::size_t window) {
  if (window == 0) throw Error(ErrorKind::invalid_argument, "co-occurrence window must be >= 1");
  std::unordered_map<std::uint64_t, std::uint64_t> pairs;
  for (const auto& words : stats.sentence_words) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      const std::size_t last = std::min(words.size() - 1, i + window);
      for (std::size_t j = i + 1; j <= last; ++j) {
        if (words[i] == words[j]) continue;
        const auto lo = std::min(words[i], words[j]);
        const auto hi = std::max(words[i], words[j]);
        ++pairs[(static_cast<std::uint64_t>(lo) << 32) | hi];
      }
    }
  }

  CooccurrenceGraph graph;
  graph.window = window;
  graph.adjacency.resize(stats.vocabulary_size());
  for (const auto& [k, c] : pairs) {
    const auto lo = static_cast<WordId>(k >> 32);
    const auto hi = static_cast<WordId>(k & 0xFFFFFFFFu);
    graph.adjacency[lo].push_back({hi, static_cast<double>(c)});
    graph.adjacency[hi].push_back({lo, static_cast<double>(c)});
  }
  for (auto& edges : graph.adjacency) {
    std::sort(edges.begin(), edges.end(),
              [](const auto& a, const auto& b) { return a.to < b.to; });
  }
  return graph;
}

CooccurrenceGraph build_cooccurrence(const Corpus& corpus, std::size_t window) {
  return build_cooccurrence(compute_stats(corpus), window);
}

std::vector<double> pagerank(const CooccurrenceGraph& graph, const PageRankOptions& options) {
  const std::size_t n = graph.node_count();
  if (n == 0) throw Error(ErrorKind::empty_input, "PageRank on an empty vocabulary");
  if (!(options.damping >= 0.0 && options.damping <= 1.0)) {
    throw Error(ErrorKind::invalid_argument, "damping must lie in [0, 1]");
  }

  std::vector<double> out_weight(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    for (const auto& e : graph.adjacency[u]) out_weight[u] += e.weight;
  }

  const double d = options.damping;
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> x(n, inv_n);
  std::vector<double> next(n);
  std::vector<double> share(n);
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    double dangling = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      if (out_weight[u] > 0.0) {
        share[u] = x[u] / out_weight[u];
      } else {
        share[u] = 0.0;
        dangling += x[u];
      }
    }
    const double base = (1.0 - d) * inv_n + d * dangling * inv_n;
    double change = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      // Symmetric graph: in-neighbors are the adjacency list.
      double incoming = 0.0;
      for (const auto& e : graph.adjacency[v]) incoming += share[e.to] * e.weight;
      next[v] = base + d * incoming;
      change += std::abs(next[v] - x[v]);
    }
    x.swap(next);
    if (change < options.tolerance) break;
  }

  double total = 0.0;
  for (double v : x) total += v;
  for (double& v : x) v /= total;
  return x;
}

void ScoreOptions::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw Error(ErrorKind::invalid_argument, "alpha and beta must be finite and non-negative");
  }
  if (alpha == 0.0 && beta == 0.0) {
    throw Error(ErrorKind::invalid_argument, "alpha and beta must not both be zero");
  }
  if (window == 0) throw Error(ErrorKind::invalid_argument, "window must be >= 1");
  if (!(pagerank.damping >= 0.0 && pagerank.damping <= 1.0)) {
    throw Error(ErrorKind::invalid_argument, "damping must lie in [0, 1]");
  }
  if (!(pagerank.tolerance > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "PageRank tolerance must be positive");
  }
}

std::vector<double> minmax_normalize(const std::vector<double>& values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  if (range <= 0.0) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - *lo) / range;
  return out;
}

ScoreTables word_scores(const SubwordStats& subwords, const std::vector<double>& pagerank_scores,
                        double alpha, double beta, Normalization normalization) {
  ScoreOptions check;
  check.alpha = alpha;
  check.beta = beta;
  check.validate();
  if (pagerank_scores.size() != subwords.popularity.size()) {
    throw Error(ErrorKind::invalid_argument, "PageRank scores do not cover the vocabulary");
  }

  ScoreTables t;
  t.alpha = alpha;
  t.beta = beta;
  t.normalization = normalization;
  t.word_popularity = subwords.popularity;
  t.word_pagerank = pagerank_scores;
  std::vector<double> local(subwords.popularity.begin(), subwords.popularity.end());
  if (normalization == Normalization::minmax) {
    t.word_local = minmax_normalize(local);
    t.word_global = minmax_normalize(pagerank_scores);
  } else {
    t.word_local = std::move(local);
    t.word_global = pagerank_scores;
  }
  t.word_joint.resize(t.word_local.size());
  for (std::size_t w = 0; w < t.word_joint.size(); ++w) {
    t.word_joint[w] = alpha * t.word_local[w] + beta * t.word_global[w];
  }
  return t;
}

void sentence_scores(const CorpusStats& stats, ScoreTables& tables) {
  const std::size_t n = stats.sentence_words.size();
  tables.sentence_local.assign(n, 0.0);
  tables.sentence_global.assign(n, 0.0);
  tables.sentence_joint.assign(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    double local = 0.0;
    double global = 0.0;
    for (WordId w : stats.sentence_words[s]) {
      local += tables.word_local.at(w);
      global += tables.word_global.at(w);
    }
    tables.sentence_local[s] = local;
    tables.sentence_global[s] = global;
    tables.sentence_joint[s] = tables.alpha * local + tables.beta * global;
  }
}

ScoreTables score_corpus(const CorpusStats& stats, const TokenizerModel& model,
                         const ScoreOptions& options) {
  options.validate();
  if (stats.vocabulary_size() == 0) {
    throw Error(ErrorKind::empty_input, "corpus has no words to score");
  }
  const SubwordStats subwords = compute_subword_stats(stats, model);
  const CooccurrenceGraph graph = build_cooccurrence(stats, options.window);
  const std::vector<double> pr = pagerank(graph, options.pagerank);
  ScoreTables tables = word_scores(subwords, pr, options.alpha, options.beta, options.normalization);
  sentence_scores(stats, tables);
  return tables;
}

const char* to_string(Normalization n) {
  return n == Normalization::minmax ? "minmax" : "raw";
}

std::string score_dump_json(const CorpusStats& stats, const ScoreTables& tables) {
  JsonWriter j;
  j.begin_object();
  j.key("alpha").value(tables.alpha);
  j.key("beta").value(tables.beta);
  j.key("normalization").value(to_string(tables.normalization));
  j.key("sentences").begin_array();
  for (std::size_t s = 0; s < tables.sentence_joint.size(); ++s) {
    j.begin_object();
    j.key("global").value(tables.sentence_global[s]);
    j.key("index").value(static_cast<std::uint64_t>(s));
    j.key("joint").value(tables.sentence_joint[s]);
    j.key("local").value(tables.sentence_local[s]);
    j.end_object();
  }
  j.end_array();
  j.key("words").begin_array();
  for (std::size_t w = 0; w < stats.vocabulary_size(); ++w) {
    j.begin_object();
    j.key("N").value(tables.word_popularity[w]);
    j.key("count").value(stats.word_counts[w]);
    j.key("joint").value(tables.word_joint[w]);
    j.key("pagerank").value(tables.word_pagerank[w]);
    j.key("word").value(stats.vocabulary[w]);
    j.end_object();
  }
  j.end_array();
  j.end_object();
  return j.str();
}

}  // namespace lrlprep
