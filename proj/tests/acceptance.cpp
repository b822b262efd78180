// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Tolerances are fixed here and nowhere else.

#include <sys/resource.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "lrlprep/analyzer.hpp"
#include "lrlprep/augmenter.hpp"
#include "lrlprep/bpe_trainer.hpp"
#include "lrlprep/scoring.hpp"
#include "lrlprep/selector.hpp"
#include "lrlprep/unicode.hpp"

using namespace lrlprep;

namespace {

constexpr double kFloatTol = 1e-9;           // scoring floats vs oracle
constexpr double kPagerankSumTol = 1e-6;
constexpr double kRegularTol = 1e-9;
constexpr double kDenseTol = 1e-8;
constexpr double kScaleTol = 1e-9;
constexpr double kInitTol = 1e-12;
constexpr double kScoringSeconds = 10.0;
constexpr double kEndToEndSeconds = 60.0;
constexpr long kMaxRssKb = 1024L * 1024L;   // 1 GB

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects the first failure message; later ones are counted only.
struct Check {
  std::string first;
  std::size_t failures = 0;
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ == 0) first = what;
  }
  bool ok() const { return failures == 0; }
};

int report(int id, const char* title, const Check& c, const std::string& detail) {
  std::printf("criterion %d: %s  %s", id, c.ok() ? "PASS" : "FAIL", title);
  if (!detail.empty()) std::printf(" [%s]", detail.c_str());
  if (!c.ok()) std::printf(" -- %zu failure(s), first: %s", c.failures, c.first.c_str());
  std::printf("\n");
  std::fflush(stdout);
  return c.ok() ? 0 : 1;
}

Check guarded(const std::function<void(Check&)>& body) {
  Check c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  return c;
}

CooccurrenceGraph graph_from(const std::vector<std::vector<double>>& w) {
  CooccurrenceGraph g;
  g.adjacency.resize(w.size());
  for (std::size_t u = 0; u < w.size(); ++u)
    for (std::size_t v = 0; v < w.size(); ++v)
      if (w[u][v] > 0) g.adjacency[u].push_back({static_cast<WordId>(v), w[u][v]});
  return g;
}

// ---- 1 ----
int scoring_oracle() {
  double elapsed = 0;
  const auto c = guarded([&](Check& c) {
    std::mt19937 rng(1001);
    const auto t0 = Clock::now();
    for (int round = 0; round < 50; ++round) {
      std::uniform_int_distribution<std::size_t> ns(1, 50), nw(1, 200);
      const auto sentences = oracle::random_corpus(rng, ns(rng), nw(rng));
      const auto tok = oracle::random_tokenizer(rng, 30);
      std::uniform_real_distribution<double> w(0.05, 1.0);
      const double alpha = w(rng), beta = w(rng);

      const auto stats = compute_stats(Corpus(sentences));
      const auto model = testing::to_model(tok);
      ScoreOptions opts;
      opts.alpha = alpha;
      opts.beta = beta;
      const auto sub = compute_subword_stats(stats, model);
      const auto t = score_corpus(stats, model, opts);
      const auto e = oracle::score(sentences, tok, alpha, beta);
      const std::string at = "corpus " + std::to_string(round) + ": ";

      c.expect(sub.subword_counts == e.swc, at + "SWC");
      for (const auto& [word, n] : e.n) c.expect(sub.popularity[*stats.find(word)] == n, at + "N[" + word + "]");
      const auto g = build_cooccurrence(stats, kDefaultWindow);
      double total = 0;
      for (const auto& [p, cnt] : oracle::cooccurrence(sentences, kDefaultWindow)) {
        c.expect(g.weight(*stats.find(p.first), *stats.find(p.second)) == static_cast<double>(cnt),
                 at + "co-occurrence");
        total += static_cast<double>(cnt);
      }
      c.expect(g.total_weight() == total, at + "co-occurrence total");
      for (const auto& [word, joint] : e.joint) {
        const WordId id = *stats.find(word);
        c.expect(std::abs(t.word_local[id] - e.local.at(word)) <= kFloatTol, at + "R_l[" + word + "]");
        c.expect(std::abs(t.word_global[id] - e.global.at(word)) <= kFloatTol, at + "R_g[" + word + "]");
        c.expect(std::abs(t.word_joint[id] - joint) <= kFloatTol, at + "R_j[" + word + "]");
      }
      for (std::size_t s = 0; s < sentences.size(); ++s) {
        c.expect(std::abs(t.sentence_local[s] - e.s_local[s]) <= kFloatTol, at + "sentence R_l");
        c.expect(std::abs(t.sentence_global[s] - e.s_global[s]) <= kFloatTol, at + "sentence R_g");
        c.expect(std::abs(t.sentence_joint[s] - e.s_joint[s]) <= kFloatTol, at + "sentence R_j");
      }
    }
    elapsed = seconds_since(t0);
    c.expect(elapsed < kScoringSeconds, "runtime over budget");
  });
  char buf[96];
  std::snprintf(buf, sizeof(buf), "50 corpora, tol %.0e, %.2f s < %.0f s", kFloatTol, elapsed, kScoringSeconds);
  return report(1, "scoring matches naive oracle", c, buf);
}

// ---- 2 ----
int pagerank_properties() {
  const auto c = guarded([](Check& c) {
    auto sums_to_one = [&](const std::vector<double>& pr, const std::string& what) {
      double s = 0;
      for (double x : pr) s += x;
      c.expect(std::abs(s - 1.0) <= kPagerankSumTol, what + ": sum");
    };
    // k-regular: cycles, complete graphs, and a 3-regular circulant.
    for (std::size_t n = 3; n <= 12; ++n) {
      std::vector<std::vector<double>> cycle(n, std::vector<double>(n, 0.0));
      std::vector<std::vector<double>> complete(n, std::vector<double>(n, 2.0));
      for (std::size_t i = 0; i < n; ++i) {
        cycle[i][(i + 1) % n] = cycle[(i + 1) % n][i] = 1;
        complete[i][i] = 0;
      }
      for (const auto& w : {cycle, complete}) {
        const auto pr = pagerank(graph_from(w));
        sums_to_one(pr, "regular");
        for (double x : pr) c.expect(std::abs(x - 1.0 / n) <= kRegularTol, "regular graph not uniform");
      }
    }
    std::mt19937 rng(2002);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> weight(1, 9);
    for (int round = 0; round < 200; ++round) {
      const std::size_t n = 3 + static_cast<std::size_t>(round) % 8;
      std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (u(rng) < 0.45) w[i][j] = w[j][i] = weight(rng);
      const auto pr = pagerank(graph_from(w));
      sums_to_one(pr, "random");
      const auto dense = oracle::dense_pagerank(w, kDefaultDamping);
      for (std::size_t i = 0; i < n; ++i) c.expect(std::abs(pr[i] - dense[i]) <= kDenseTol, "dense oracle");
      for (auto& row : w)
        for (auto& x : row) x *= 37.25;
      const auto scaled = pagerank(graph_from(w));
      for (std::size_t i = 0; i < n; ++i) c.expect(std::abs(pr[i] - scaled[i]) <= kScaleTol, "scaling");
    }
  });
  char buf[128];
  std::snprintf(buf, sizeof(buf), "sum tol %.0e, regular tol %.0e, dense tol %.0e, scale tol %.0e",
                kPagerankSumTol, kRegularTol, kDenseTol, kScaleTol);
  return report(2, "PageRank properties", c, buf);
}

// ---- 3 ----
int selection_oracle() {
  const auto c = guarded([](Check& c) {
    std::mt19937 rng(3003);
    for (int round = 0; round < 3; ++round) {
      const auto sentences = oracle::random_corpus(rng, 1000, 300, 8);
      const Corpus corpus(sentences);
      const auto stats = compute_stats(corpus);
      const auto model = testing::to_model(oracle::random_tokenizer(rng, 40));
      const auto t = score_corpus(stats, model);
      const auto order = oracle::sorted_order(t.sentence_joint);
      for (std::size_t k : {std::size_t{1}, std::size_t{10}, std::size_t{100}, corpus.size()}) {
        for (auto mode : {SelectionMode::top, SelectionMode::bottom}) {
          std::vector<SentenceIndex> expect =
              mode == SelectionMode::top
                  ? std::vector<SentenceIndex>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k))
                  : std::vector<SentenceIndex>(order.end() - static_cast<std::ptrdiff_t>(k), order.end());
          std::sort(expect.begin(), expect.end());
          const auto [r, out] = select(corpus, t, k, mode);
          c.expect(r.selected() == expect, "set differs from stable-sort oracle, k=" + std::to_string(k));
          for (std::size_t i = 0; i < order.size(); ++i)
            c.expect(r.ranked[i].index == order[i], "ranking order / tie-break");
          c.expect(out.size() == k, "output corpus size");
        }
      }
      // Reruns from scratch give identical bytes.
      const auto again = score_corpus(compute_stats(Corpus(sentences)), model);
      const auto a = select(corpus, t, 100, SelectionMode::top);
      const auto b = select(corpus, again, 100, SelectionMode::top);
      c.expect(ranking_json(a.first) == ranking_json(b.first), "ranking not byte-identical");
      c.expect(selection_report_json(selection_report(a.first)) ==
                   selection_report_json(selection_report(b.first)),
               "report not byte-identical");
    }
  });
  return report(3, "selection matches full stable sort", c, "3 corpora x 1000 sentences, K in {1,10,100,n}");
}

// ---- 4 ----
int bpe_oracle() {
  const auto c = guarded([](Check& c) {
    std::mt19937 rng(4004);
    auto as_pairs = [](const auto& merges) {
      std::vector<std::pair<std::string, std::string>> out;
      for (const auto& m : merges) out.emplace_back(m.left, m.right);
      return out;
    };
    for (int round = 0; round < 100; ++round) {
      std::uniform_int_distribution<std::size_t> count(1, 30);
      std::set<std::string> pool;
      const std::size_t n = count(rng);
      while (pool.size() < n) pool.insert(oracle::random_word(rng, 7, 5));
      std::uniform_int_distribution<std::uint64_t> weight(1, 12);
      WeightedWordList list;
      std::vector<std::pair<std::string, std::uint64_t>> plain;
      for (const auto& w : pool) {
        list.push_back({w, weight(rng)});
        plain.emplace_back(w, list.back().weight);
      }
      const std::size_t k = std::uniform_int_distribution<std::size_t>(0, 10)(rng);
      const auto got = train_bpe(list, k);
      c.expect(as_pairs(got.merges) == oracle::brute_force_bpe(plain, k),
               "merge sequence, list " + std::to_string(round));
      const auto expanded = count_dummy_corpus(expand_dummy_corpus(list));
      c.expect(train_bpe(expanded, k).merges == got.merges, "expanded dummy corpus differs");
    }
  });
  return report(4, "BPE trainer matches brute force", c, "100 lists, <= 30 words, K <= 10");
}

// ---- 5 ----
int tokenizer_totality() {
  std::size_t words = 0;
  const auto c = guarded([&](Check& c) {
    std::mt19937 rng(5005);
    const auto tok = oracle::random_tokenizer(rng, 60);
    const auto model = testing::to_model(tok).with_added_tokens({"\xe0\xa4\x95\xe0\xa4\xae", "kn"});
    std::uniform_int_distribution<char32_t> any(0x21, 0x10FFFF);
    std::uniform_int_distribution<int> coin(0, 2), len(1, 10);
    for (; words < 10000; ++words) {
      std::string w;
      for (int i = 0, n = len(rng); i < n; ++i) {
        if (coin(rng) == 0) {
          char32_t cp;
          do cp = any(rng);
          while ((cp >= 0xD800 && cp <= 0xDFFF) || unicode::is_whitespace(cp));
          w += unicode::encode_code_point(cp);
        } else {
          w += oracle::random_word(rng, 1);
        }
      }
      std::vector<std::string> tokens;
      try {
        tokens = model.tokenize_word(w);
      } catch (const std::exception& e) {
        c.expect(false, std::string("tokenization threw: ") + e.what());
        continue;
      }
      std::string joined;
      for (const auto& t : tokens) {
        c.expect(!t.empty(), "empty token");
        joined += t;
      }
      c.expect(joined == unicode::to_nfc(w), "not lossless");
    }
  });
  return report(5, "tokenizer is total and lossless", c, std::to_string(words) + " random words");
}

// ---- 6 ----
int augmentation_direction() {
  std::string detail;
  const auto c = guarded([&](Check& c) {
    // Increase: virama-final clusters merge, a single-character virama token
    // pre-matches and splits them apart.
    const std::string ka = "क", ssa = "ष", ma = "म", virama = "्", ra = "र", aa = "ा", ja = "ज";
    std::ostringstream vocab;
    vocab << "{\"" << ka << "\":0,\"" << ssa << "\":1,\"" << ma << "\":2,\"" << virama << "\":3,\"" << ra
          << "\":4,\"" << aa << "\":5,\"" << ja << "\":6,\"" << ka + virama << "\":7,\"" << ssa + virama
          << "\":8,\"" << ma + virama << "\":9}";
    const std::string merges = ka + " " + virama + "\n" + ssa + " " + virama + "\n" + ma + " " + virama + "\n";
    const auto deva = parse_tokenizer(vocab.str(), merges);
    const std::string word = ka + virama + ssa + virama + ma + virama + ra + aa + ja;
    const auto up = tokenization_diff(Corpus({word}), deva, deva.with_added_tokens({virama}));
    c.expect(up.rows.size() == 1 && up.rows[0].delta > 0, "single-character token did not increase count");

    // Decrease: a 14-character Telugu word with no merges, then BPE tokens
    // trained from it.
    const std::vector<std::string> te = {"వ", "ి", "ద", "్", "య", "ా", "ర", "్", "థ", "ు", "ల", "ం", "ద", "ర"};
    std::string tword, tvocab = "{";
    std::set<std::string> seen;
    TokenId id = 0;
    for (const auto& ch : te) {
      tword += ch;
      if (!seen.insert(ch).second) continue;
      if (id > 0) tvocab += ",";
      tvocab += "\"" + ch + "\":" + std::to_string(id);
      ++id;
    }
    tvocab += "}";
    const auto telugu = parse_tokenizer(tvocab, "");
    AugmentationConfig cfg;
    cfg.k_new_tokens = 7;
    const auto [result, after] = augment(telugu, {{tword, 3}}, cfg);
    const auto down = tokenization_diff(Corpus({tword}), telugu, after);
    c.expect(!result.new_tokens.empty() && down.rows.size() == 1 && down.rows[0].delta < 0,
             "BPE tokens did not decrease count");
    if (!up.rows.empty() && !down.rows.empty()) {
      detail = "Devanagari " + std::to_string(up.rows[0].count_before) + "->" +
               std::to_string(up.rows[0].count_after) + ", Telugu " + std::to_string(down.rows[0].count_before) +
               "->" + std::to_string(down.rows[0].count_after);
    }
  });
  return report(6, "augmentation changes token counts both ways", c, detail);
}

// ---- 7 ----
int init_checker() {
  const auto c = guarded([](Check& c) {
    std::mt19937 rng(7007);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::uniform_int_distribution<std::size_t> dim(1, 16), len(1, 8);
    for (int round = 0; round < 50; ++round) {
      Matrix m;
      m.rows = dim(rng) + 1;
      m.cols = dim(rng);
      m.data.resize(m.rows * m.cols);
      for (auto& x : m.data) x = u(rng);
      std::uniform_int_distribution<TokenId> row(0, static_cast<TokenId>(m.rows) - 1);
      AugmentationResult r;
      std::vector<std::vector<double>> direct;
      for (int i = 0, n = static_cast<int>(len(rng)); i < n; ++i) {
        NewToken t;
        t.token = "tok" + std::to_string(i);
        t.id = static_cast<TokenId>(m.rows) + i;
        for (std::size_t j = 0, k = len(rng); j < k; ++j) t.init_ids.push_back(row(rng));
        std::vector<double> mean(m.cols, 0.0);
        for (std::size_t col = 0; col < m.cols; ++col) {
          for (auto id : t.init_ids) mean[col] += m.data[static_cast<std::size_t>(id) * m.cols + col];
          mean[col] /= static_cast<double>(t.init_ids.size());
        }
        direct.push_back(mean);
        r.new_tokens.push_back(t);
      }
      const auto parsed = parse_init_instructions(init_instructions_json(r));
      c.expect(max_init_deviation(parsed, m, direct) <= kInitTol, "deviation over tolerance");
    }
  });
  char buf[48];
  std::snprintf(buf, sizeof(buf), "50 matrices, tol %.0e", kInitTol);
  return report(7, "init instructions reproduce row means", c, buf);
}

// ---- 8 ----
int default_constants() {
  const auto c = guarded([](Check& c) {
    const ScoreOptions s;
    const AugmentationConfig a;
    c.expect(s.alpha == 0.5 && s.beta == 0.5, "alpha/beta defaults");
    c.expect(a.alpha == 0.5 && a.beta == 0.5, "augment alpha/beta defaults");
    c.expect(s.window == 5, "window default");
    c.expect(a.q_percentile == 50.0, "percentile default");
    for (double r : {13.67, 12.44}) c.expect(classify_fragmentation(r) == FragmentBand::large, "large band");
    for (double r : {8.82, 8.04, 7.54}) c.expect(classify_fragmentation(r) == FragmentBand::medium, "medium band");
    for (double r : {5.32, 3.89, 3.67, 2.85}) c.expect(classify_fragmentation(r) == FragmentBand::small, "small band");
  });
  return report(8, "default constants and reference banding", c, "alpha=beta=0.5, window=5, Q=50, 9 ratios");
}

// ---- 9 ----
struct Artifacts {
  std::string scores, ranking, selection, init, augment_report, fragment_before, fragment_after, diff;
  bool operator==(const Artifacts&) const = default;
};

Artifacts desk_run(const std::vector<std::string>& sentences, const TokenizerModel& model) {
  Artifacts a;
  const Corpus corpus(sentences);
  const auto stats = compute_stats(corpus);
  const auto tables = score_corpus(stats, model);
  a.scores = score_dump_json(stats, tables);
  const auto [sel, top] = select(corpus, tables, 1000, SelectionMode::top);
  a.ranking = ranking_json(sel);
  a.selection = selection_report_json(selection_report(sel));
  AugmentationConfig cfg;
  cfg.k_new_tokens = 50;
  const auto [aug, updated] = augment_from_corpus(stats, model, cfg, {});
  a.init = init_instructions_json(aug);
  a.augment_report = augmentation_report_json(aug, cfg);
  a.fragment_before = fragment_report_json(fragment_ratio(stats, model));
  a.fragment_after = fragment_report_json(fragment_ratio(stats, updated));
  a.diff = diff_report_json(tokenization_diff(stats, model, updated, 50));
  return a;
}

int end_to_end() {
  double elapsed = 0;
  long rss = 0;
  const auto c = guarded([&](Check& c) {
    std::mt19937 rng(9009);
    const auto sentences = oracle::random_corpus(rng, 10000, 8000, 16);
    const auto model = testing::to_model(oracle::random_tokenizer(rng, 120));
    const auto t0 = Clock::now();
    const auto first = desk_run(sentences, model);
    elapsed = seconds_since(t0);
    const auto second = desk_run(sentences, model);
    c.expect(first == second, "artifacts differ between runs");
    c.expect(first.init.find("\"token\"") != std::string::npos, "no tokens added");
    c.expect(elapsed < kEndToEndSeconds, "runtime over budget");
    rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    rss = usage.ru_maxrss;
    c.expect(rss < kMaxRssKb, "peak memory over budget");
  });
  char buf[128];
  std::snprintf(buf, sizeof(buf), "10000 sentences, %.2f s < %.0f s, peak RSS %.1f MB < 1024 MB", elapsed,
                kEndToEndSeconds, static_cast<double>(rss) / 1024.0);
  return report(9, "end-to-end desk run", c, buf);
}

}  // namespace

int main() {
  int failed = 0;
  failed += scoring_oracle();
  failed += pagerank_properties();
  failed += selection_oracle();
  failed += bpe_oracle();
  failed += tokenizer_totality();
  failed += augmentation_direction();
  failed += init_checker();
  failed += default_constants();
  failed += end_to_end();
  std::printf("%d of 9 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
