#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lrlprep/corpus.hpp"
#include "lrlprep/tokenizer.hpp"

namespace lrlprep {

inline constexpr double kDefaultAlpha = 0.5;
inline constexpr double kDefaultBeta = 0.5;
inline constexpr std::size_t kDefaultWindow = 5;
inline constexpr double kDefaultDamping = 0.85;
inline constexpr double kDefaultTolerance = 1e-13;  // L1 change between iterations
inline constexpr std::size_t kDefaultMaxIterations = 200;

// Subword counts (SWC) aggregated over word occurrences, and each word's
// local popularity N[w] = sum over t in T(w) of (SWC[t] - WC[w]).
struct SubwordStats {
  std::map<std::string, std::uint64_t> subword_counts;
  std::vector<std::uint64_t> popularity;  // indexed by WordId
};

SubwordStats compute_subword_stats(const CorpusStats& stats, const TokenizerModel& model);

// Symmetric word co-occurrence graph in adjacency-list form. Nodes are the
// corpus word ids; neighbors are sorted by id.
struct CooccurrenceGraph {
  struct Edge {
    WordId to;
    double weight;
  };
  std::size_t window = kDefaultWindow;
  std::vector<std::vector<Edge>> adjacency;

  std::size_t node_count() const noexcept { return adjacency.size(); }
  double weight(WordId u, WordId v) const;
  double total_weight() const;  // each undirected edge counted once
};

// Adds 1 to weight(w_i, w_j) for every within-sentence pair i < j <= i+window
// with w_i != w_j.
CooccurrenceGraph build_cooccurrence(const CorpusStats& stats, std::size_t window = kDefaultWindow);
CooccurrenceGraph build_cooccurrence(const Corpus& corpus, std::size_t window = kDefaultWindow);

struct PageRankOptions {
  double damping = kDefaultDamping;
  double tolerance = kDefaultTolerance;
  std::size_t max_iterations = kDefaultMaxIterations;
};

// Weighted PageRank by power iteration. Mass leaves a node in proportion to
// edge weight; isolated nodes spread theirs uniformly. Throws on an empty graph.
std::vector<double> pagerank(const CooccurrenceGraph& graph, const PageRankOptions& options = {});

enum class Normalization { minmax, raw };

struct ScoreOptions {
  double alpha = kDefaultAlpha;
  double beta = kDefaultBeta;
  std::size_t window = kDefaultWindow;
  Normalization normalization = Normalization::minmax;
  PageRankOptions pagerank;

  void validate() const;
};

// Word- and sentence-level local (R_l), global (R_g) and joint (R_j) scores.
struct ScoreTables {
  double alpha = kDefaultAlpha;
  double beta = kDefaultBeta;
  Normalization normalization = Normalization::minmax;

  // Indexed by WordId.
  std::vector<std::uint64_t> word_popularity;  // N[w]
  std::vector<double> word_pagerank;
  std::vector<double> word_local;   // N[w] after normalization
  std::vector<double> word_global;  // pagerank after normalization
  std::vector<double> word_joint;

  // Indexed by SentenceIndex.
  std::vector<double> sentence_local;
  std::vector<double> sentence_global;
  std::vector<double> sentence_joint;
};

// Min-max to [0, 1]; a constant family maps to all zeros.
std::vector<double> minmax_normalize(const std::vector<double>& values);

// Fills the word part of ScoreTables.
ScoreTables word_scores(const SubwordStats& subwords, const std::vector<double>& pagerank_scores,
                        double alpha, double beta, Normalization normalization = Normalization::minmax);

// Fills the sentence part: per-occurrence sums of the word-level local and
// global scores, combined without re-normalization.
void sentence_scores(const CorpusStats& stats, ScoreTables& tables);

// The whole scoring pipeline over one corpus.
ScoreTables score_corpus(const CorpusStats& stats, const TokenizerModel& model,
                         const ScoreOptions& options = {});

// Deterministic JSON dump: sorted keys, 12 significant digits.
std::string score_dump_json(const CorpusStats& stats, const ScoreTables& tables);

const char* to_string(Normalization n);

}  // namespace lrlprep
