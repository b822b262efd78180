// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lrlprep/lrlprep.h"
#include "pipeline_config.hpp"

namespace fs = std::filesystem;
using namespace lrlprep::cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void check(lrlp_status status, const std::string& what) {
  if (status != LRLP_OK) {
    throw RuntimeFailure(what + ": " + lrlp_status_string(status) + ": " + lrlp_last_error());
  }
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using CorpusPtr = std::unique_ptr<lrlp_corpus, Deleter<lrlp_corpus, lrlp_corpus_free>>;
using TokenizerPtr = std::unique_ptr<lrlp_tokenizer, Deleter<lrlp_tokenizer, lrlp_tokenizer_free>>;
using ScoresPtr = std::unique_ptr<lrlp_scores, Deleter<lrlp_scores, lrlp_scores_free>>;
using SelectionPtr = std::unique_ptr<lrlp_selection, Deleter<lrlp_selection, lrlp_selection_free>>;
using AugmentationPtr =
    std::unique_ptr<lrlp_augmentation, Deleter<lrlp_augmentation, lrlp_augmentation_free>>;
using FragmentPtr =
    std::unique_ptr<lrlp_fragment_report, Deleter<lrlp_fragment_report, lrlp_fragment_free>>;
using DiffPtr = std::unique_ptr<lrlp_diff_report, Deleter<lrlp_diff_report, lrlp_diff_free>>;

// Takes ownership of a C string from the library.
std::string take(char* s) {
  std::string out(s ? s : "");
  lrlp_string_free(s);
  return out;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  out << content;
  if (!out) throw RuntimeFailure("failed writing " + path.string());
}

// Flag values; unset optionals leave the config-file / default value alone.
struct Flags {
  std::optional<std::string> config;
  std::optional<double> alpha, beta, percentile, large_threshold, medium_threshold;
  std::optional<std::size_t> window, top_k, new_tokens, max_sentences, top_n;
  std::optional<std::string> mode, token_mode, normalization;
  std::optional<std::string> corpus, tokenizer_vocab, tokenizer_merges, tokenizer_added;
  std::optional<std::string> after_vocab, after_merges, after_added, out_dir;
  bool no_filter = false;
  bool distinct_words = false;
};

void add_flags(CLI::App* app, Flags& f, Command command) {
  app->add_option("--config", f.config, "JSON config file; flags override its values");
  app->add_option("--corpus", f.corpus, "Corpus file, one sentence per line");
  app->add_option("--tokenizer-vocab", f.tokenizer_vocab, "Vocabulary JSON (token -> id)");
  app->add_option("--tokenizer-merges", f.tokenizer_merges, "Merges file, 'LEFT RIGHT' per line");
  app->add_option("--tokenizer-added", f.tokenizer_added, "Added-tokens file, one per line");
  app->add_option("--out-dir", f.out_dir, "Output directory");
  app->add_option("--max-sentences", f.max_sentences, "Read at most this many sentences");
  app->add_option("--alpha", f.alpha, "Weight of the local (subword popularity) score");
  app->add_option("--beta", f.beta, "Weight of the global (PageRank) score");
  app->add_option("--window", f.window, "Co-occurrence window");
  app->add_option("--normalization", f.normalization, "minmax|raw");
  if (command == Command::select) {
    app->add_option("--top-k", f.top_k, "Number of sentences to select");
    app->add_option("--mode", f.mode, "top|bottom");
  }
  if (command == Command::augment || command == Command::expand_dummy) {
    app->add_option("--percentile", f.percentile, "Top-Q percentile of words used for training");
  }
  if (command == Command::augment) {
    app->add_option("--new-tokens", f.new_tokens, "Number of tokens to add");
    app->add_option("--token-mode", f.token_mode, "bpe|single-char");
    app->add_flag("--no-filter", f.no_filter, "Keep the first K merges without skipping known tokens");
  }
  if (command == Command::analyze) {
    app->add_option("--after-vocab", f.after_vocab, "Vocabulary of the augmented tokenizer");
    app->add_option("--after-merges", f.after_merges, "Merges of the augmented tokenizer");
    app->add_option("--after-added", f.after_added, "Added tokens of the augmented tokenizer");
    app->add_option("--top-n", f.top_n, "Rows in the per-word tables");
    app->add_flag("--distinct-words", f.distinct_words, "Average over distinct words");
    app->add_option("--large-threshold", f.large_threshold, "Ratio at or above which a corpus is 'large'");
    app->add_option("--medium-threshold", f.medium_threshold, "Ratio at or above which a corpus is 'medium'");
  }
}

PipelineConfig build_config(const Flags& f) {
  PipelineConfig c = default_config();
  if (f.config) apply_config_file(c, *f.config);
  if (f.alpha) c.scoring.alpha = *f.alpha;
  if (f.beta) c.scoring.beta = *f.beta;
  if (f.window) c.scoring.window = *f.window;
  if (f.normalization) c.scoring.normalization = parse_normalization(*f.normalization);
  if (f.top_k) c.top_k = *f.top_k;
  if (f.mode) c.selection_mode = parse_selection_mode(*f.mode);
  if (f.percentile) c.augmenting.percentile = *f.percentile;
  if (f.new_tokens) c.augmenting.new_tokens = *f.new_tokens;
  if (f.token_mode) c.augmenting.mode = parse_token_mode(*f.token_mode);
  if (f.no_filter) c.augmenting.filter_existing = 0;
  if (f.max_sentences) c.max_sentences = *f.max_sentences;
  if (f.top_n) c.top_n = *f.top_n;
  if (f.distinct_words) c.distinct_words = true;
  if (f.large_threshold) c.bands.large = *f.large_threshold;
  if (f.medium_threshold) c.bands.medium = *f.medium_threshold;
  if (f.corpus) c.corpus = *f.corpus;
  if (f.tokenizer_vocab) c.tokenizer_vocab = *f.tokenizer_vocab;
  if (f.tokenizer_merges) c.tokenizer_merges = *f.tokenizer_merges;
  if (f.tokenizer_added) c.tokenizer_added = *f.tokenizer_added;
  if (f.after_vocab) c.after_vocab = *f.after_vocab;
  if (f.after_merges) c.after_merges = *f.after_merges;
  if (f.after_added) c.after_added = *f.after_added;
  if (f.out_dir) c.out_dir = *f.out_dir;
  return c;
}

CorpusPtr load_corpus(const PipelineConfig& c) {
  lrlp_corpus* corpus = nullptr;
  check(lrlp_corpus_load(c.corpus.c_str(), c.max_sentences, &corpus), "loading corpus");
  return CorpusPtr(corpus);
}

TokenizerPtr load_tokenizer(const std::string& vocab, const std::string& merges,
                            const std::string& added) {
  lrlp_tokenizer* tok = nullptr;
  check(lrlp_tokenizer_load(vocab.c_str(), merges.c_str(), added.empty() ? nullptr : added.c_str(),
                            &tok),
        "loading tokenizer");
  return TokenizerPtr(tok);
}

ScoresPtr score(const lrlp_corpus* corpus, const lrlp_tokenizer* tok, const PipelineConfig& c) {
  lrlp_scores* scores = nullptr;
  check(lrlp_score(corpus, tok, &c.scoring, &scores), "scoring corpus");
  return ScoresPtr(scores);
}

void run_score(const PipelineConfig& c) {
  auto corpus = load_corpus(c);
  auto tok = load_tokenizer(c.tokenizer_vocab, c.tokenizer_merges, c.tokenizer_added);
  auto scores = score(corpus.get(), tok.get(), c);
  char* json = nullptr;
  check(lrlp_scores_dump_json(scores.get(), &json), "dumping scores");
  const fs::path out = fs::path(c.out_dir) / "scores.json";
  write_text(out, take(json));
  std::cout << "scored " << lrlp_corpus_size(corpus.get()) << " sentences, "
            << lrlp_scores_word_count(scores.get()) << " words -> " << out.string() << '\n';
}

void run_select(const PipelineConfig& c) {
  auto corpus = load_corpus(c);
  auto tok = load_tokenizer(c.tokenizer_vocab, c.tokenizer_merges, c.tokenizer_added);
  auto scores = score(corpus.get(), tok.get(), c);
  lrlp_selection* raw = nullptr;
  check(lrlp_select(corpus.get(), scores.get(), c.top_k, c.selection_mode, &raw), "selecting sentences");
  SelectionPtr sel(raw);

  const fs::path dir = c.out_dir;
  check(lrlp_corpus_save(lrlp_selection_corpus(sel.get()), (dir / "selected.txt").c_str()),
        "writing selected corpus");
  char* json = nullptr;
  check(lrlp_selection_ranking_json(sel.get(), &json), "ranking");
  write_text(dir / "ranking.json", take(json));
  check(lrlp_selection_report_json(sel.get(), &json), "selection report");
  write_text(dir / "selection_report.json", take(json));
  std::cout << "selected " << lrlp_selection_count(sel.get()) << " of "
            << lrlp_corpus_size(corpus.get()) << " sentences ("
            << (c.selection_mode == LRLP_SELECT_TOP ? "top" : "bottom") << ") -> "
            << (dir / "selected.txt").string() << '\n';
}

void run_augment(const PipelineConfig& c) {
  auto corpus = load_corpus(c);
  auto tok = load_tokenizer(c.tokenizer_vocab, c.tokenizer_merges, c.tokenizer_added);
  lrlp_augmentation* raw = nullptr;
  lrlp_tokenizer* updated_raw = nullptr;
  check(lrlp_augment(corpus.get(), tok.get(), &c.augmenting, &c.scoring, &raw, &updated_raw),
        "augmenting vocabulary");
  AugmentationPtr aug(raw);
  TokenizerPtr updated(updated_raw);

  const fs::path dir = c.out_dir;
  std::string added;
  for (std::size_t i = 0; i < lrlp_augmentation_count(aug.get()); ++i) {
    const char* token = nullptr;
    check(lrlp_augmentation_token(aug.get(), i, &token, nullptr), "reading new token");
    added += token;
    added += '\n';
  }
  write_text(dir / "new_tokens.txt", added);
  char* json = nullptr;
  check(lrlp_augmentation_init_json(aug.get(), &json), "init instructions");
  write_text(dir / "init.json", take(json));
  check(lrlp_augmentation_report_json(aug.get(), &json), "augmentation report");
  write_text(dir / "augment_report.json", take(json));
  const fs::path tok_dir = dir / "tokenizer";
  fs::create_directories(tok_dir);
  check(lrlp_tokenizer_save(updated.get(), (tok_dir / "vocab.json").c_str(),
                            (tok_dir / "merges.txt").c_str(), (tok_dir / "added_tokens.txt").c_str()),
        "saving tokenizer");

  if (lrlp_augmentation_incomplete(aug.get())) {
    std::cerr << "warning: " << lrlp_augmentation_warning(aug.get()) << '\n';
  }
  std::cout << "added " << lrlp_augmentation_count(aug.get()) << " tokens -> "
            << (dir / "new_tokens.txt").string() << '\n';
}

void run_analyze(const PipelineConfig& c) {
  auto corpus = load_corpus(c);
  auto before = load_tokenizer(c.tokenizer_vocab, c.tokenizer_merges, c.tokenizer_added);
  const fs::path dir = c.out_dir;

  auto fragment = [&](const lrlp_tokenizer* tok, const char* label) {
    lrlp_fragment_report* raw = nullptr;
    check(lrlp_fragment_analyze(corpus.get(), tok, c.top_n, c.distinct_words ? 1 : 0, &c.bands,
                                label, &raw),
          "fragment analysis");
    FragmentPtr rep(raw);
    char* s = nullptr;
    check(lrlp_fragment_json(rep.get(), &s), "fragment report");
    write_text(dir / (std::string("fragment_") + label + ".json"), take(s));
    check(lrlp_fragment_text(rep.get(), &s), "fragment report");
    const std::string text = take(s);
    write_text(dir / (std::string("fragment_") + label + ".txt"), text);
    std::cout << "[" << label << "]\n" << text;
  };
  fragment(before.get(), "before");

  if (!c.has_after()) return;
  auto after = load_tokenizer(c.after_vocab.empty() ? c.tokenizer_vocab : c.after_vocab,
                              c.after_merges.empty() ? c.tokenizer_merges : c.after_merges,
                              c.after_added);
  fragment(after.get(), "after");

  lrlp_diff_report* raw = nullptr;
  check(lrlp_diff_analyze(corpus.get(), before.get(), after.get(), c.top_n, &raw), "diff");
  DiffPtr diff(raw);
  char* s = nullptr;
  check(lrlp_diff_json(diff.get(), &s), "diff report");
  write_text(dir / "diff.json", take(s));
  check(lrlp_diff_csv(diff.get(), &s), "diff report");
  write_text(dir / "diff.csv", take(s));
  check(lrlp_diff_text(diff.get(), &s), "diff report");
  const std::string text = take(s);
  write_text(dir / "diff.txt", text);
  std::cout << "[diff]\n" << text;
}

void run_expand_dummy(const PipelineConfig& c) {
  auto corpus = load_corpus(c);
  auto tok = load_tokenizer(c.tokenizer_vocab, c.tokenizer_merges, c.tokenizer_added);
  const fs::path out = fs::path(c.out_dir) / "dummy_corpus.txt";
  check(lrlp_expand_dummy(corpus.get(), tok.get(), &c.augmenting, &c.scoring, out.c_str()),
        "expanding dummy corpus");
  std::cout << "wrote " << out.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corpus and vocabulary selection for continual pre-training"};
  app.require_subcommand(1);
  app.set_version_flag("--version", lrlp_version());

  struct Sub {
    Command command;
    const char* help;
    Flags flags;
    CLI::App* app = nullptr;
  };
  Sub subs[] = {
      {Command::score, "Compute word and sentence scores", {}},
      {Command::select, "Select the top- or bottom-K sentences", {}},
      {Command::augment, "Select new tokens and emit embedding-init instructions", {}},
      {Command::analyze, "Fragment ratios and before/after tokenization diffs", {}},
      {Command::expand_dummy, "Write the literal dummy training corpus", {}},
  };
  for (auto& s : subs) {
    s.app = app.add_subcommand(command_name(s.command), s.help);
    add_flags(s.app, s.flags, s.command);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  for (auto& s : subs) {
    if (!s.app->parsed()) continue;
    PipelineConfig config;
    try {
      config = build_config(s.flags);
      validate(config, s.command);
    } catch (const ConfigError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitUsage;
    }
    try {
      fs::create_directories(config.out_dir);
      switch (s.command) {
        case Command::score: run_score(config); break;
        case Command::select: run_select(config); break;
        case Command::augment: run_augment(config); break;
        case Command::analyze: run_analyze(config); break;
        case Command::expand_dummy: run_expand_dummy(config); break;
      }
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitRuntime;
    }
    return kExitOk;
  }
  return kExitUsage;
}
