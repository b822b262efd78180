#include "lrlprep/tokenizer.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lrlprep/corpus.hpp"
#include "lrlprep/error.hpp"
#include "lrlprep/unicode.hpp"

namespace lrlprep {

namespace {

std::string read_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, std::string("cannot open ") + what + ": " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::io, "failed writing " + path.string());
}

std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

bool has_whitespace(std::string_view s) {
  for (const auto& cp : unicode::decode(s)) {
    if (unicode::is_whitespace(cp.value)) return true;
  }
  return false;
}

}  // namespace

std::size_t PairHash::operator()(const std::pair<std::string, std::string>& p) const noexcept {
  const std::size_t h1 = std::hash<std::string>{}(p.first);
  const std::size_t h2 = std::hash<std::string>{}(p.second);
  return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
}

std::string byte_token_name(unsigned char byte) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "<0x%02X>", byte);
  return buf;
}

TokenizerModel::TokenizerModel(std::vector<std::pair<std::string, TokenId>> base_vocab,
                               std::vector<MergeRule> merges, bool byte_fallback)
    : base_vocab_(std::move(base_vocab)), merges_(std::move(merges)), byte_fallback_(byte_fallback) {
  std::sort(base_vocab_.begin(), base_vocab_.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  vocab_index_.reserve(base_vocab_.size());
  for (std::size_t i = 0; i < base_vocab_.size(); ++i) {
    const auto& [token, id] = base_vocab_[i];
    if (id < 0) {
      throw Error(ErrorKind::parse, "negative id " + std::to_string(id) + " for token '" + token + "'");
    }
    if (i > 0 && base_vocab_[i - 1].second == id) {
      throw Error(ErrorKind::parse, "duplicate id " + std::to_string(id) + " ('" +
                                        base_vocab_[i - 1].first + "' and '" + token + "')");
    }
    if (token.empty()) throw Error(ErrorKind::parse, "empty token string in vocabulary");
    if (!vocab_index_.emplace(token, id).second) {
      throw Error(ErrorKind::parse, "duplicate token '" + token + "'");
    }
    max_id_ = std::max(max_id_, id);
  }
  merge_rank_.reserve(merges_.size());
  for (std::size_t i = 0; i < merges_.size(); ++i) {
    const auto& m = merges_[i];
    if (!vocab_index_.count(m.merged())) {
      throw Error(ErrorKind::parse, "merge " + std::to_string(i + 1) + " ('" + m.left + "' '" +
                                        m.right + "') produces a token absent from the vocabulary");
    }
    merge_rank_.emplace(std::make_pair(m.left, m.right), i);
  }
}

TokenizerModel TokenizerModel::with_added_tokens(const std::vector<std::string>& tokens) const {
  TokenizerModel out = *this;
  for (const auto& t : tokens) {
    if (t.empty()) throw Error(ErrorKind::invalid_argument, "added token is empty");
    if (unicode::find_invalid_utf8(t)) {
      throw Error(ErrorKind::invalid_argument, "added token is not valid UTF-8");
    }
    if (has_whitespace(t)) {
      throw Error(ErrorKind::invalid_argument, "added token '" + t + "' contains whitespace");
    }
    if (out.is_added_token(t)) {
      throw Error(ErrorKind::invalid_argument, "added token '" + t + "' already exists");
    }
    // A base token listed as added keeps its id and only gains pre-matching.
    TokenId id;
    if (auto base = out.vocab_index_.find(t); base != out.vocab_index_.end()) {
      id = base->second;
    } else {
      id = ++out.max_id_;
    }
    out.added_tokens_.push_back(t);
    out.added_index_.emplace(t, id);
  }
  std::set<std::size_t, std::greater<>> lengths;
  for (const auto& t : out.added_tokens_) lengths.insert(t.size());
  out.added_lengths_.assign(lengths.begin(), lengths.end());
  return out;
}

bool TokenizerModel::in_base_vocab(std::string_view token) const {
  return vocab_index_.count(std::string(token)) != 0;
}

bool TokenizerModel::is_added_token(std::string_view token) const {
  return added_index_.count(std::string(token)) != 0;
}

std::optional<TokenId> TokenizerModel::token_id(std::string_view token) const {
  const std::string key(token);
  if (auto it = vocab_index_.find(key); it != vocab_index_.end()) return it->second;
  if (auto it = added_index_.find(key); it != added_index_.end()) return it->second;
  if (token.size() == 1) {
    if (auto it = vocab_index_.find(byte_token_name(static_cast<unsigned char>(token[0])));
        it != vocab_index_.end()) {
      return it->second;
    }
  }
  return std::nullopt;
}

std::vector<std::string> TokenizerModel::apply_merges(std::vector<std::string> symbols) const {
  const std::size_t n = symbols.size();
  if (n < 2 || merge_rank_.empty()) return symbols;

  std::vector<std::ptrdiff_t> prev(n), next(n);
  std::vector<bool> alive(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    prev[i] = static_cast<std::ptrdiff_t>(i) - 1;
    next[i] = i + 1 < n ? static_cast<std::ptrdiff_t>(i + 1) : -1;
  }

  struct Candidate {
    std::size_t rank;
    std::size_t left;
    std::size_t right;
    // Lower rank first, then leftmost position.
    bool operator>(const Candidate& o) const {
      return rank != o.rank ? rank > o.rank : left > o.left;
    }
  };
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> queue;
  auto push = [&](std::ptrdiff_t l, std::ptrdiff_t r) {
    if (l < 0 || r < 0) return;
    auto it = merge_rank_.find({symbols[l], symbols[r]});
    if (it != merge_rank_.end()) {
      queue.push(Candidate{it->second, static_cast<std::size_t>(l), static_cast<std::size_t>(r)});
    }
  };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    push(static_cast<std::ptrdiff_t>(i), static_cast<std::ptrdiff_t>(i + 1));
  }

  while (!queue.empty()) {
    const Candidate c = queue.top();
    queue.pop();
    if (!alive[c.left] || !alive[c.right] || next[c.left] != static_cast<std::ptrdiff_t>(c.right)) {
      continue;
    }
    auto it = merge_rank_.find({symbols[c.left], symbols[c.right]});
    if (it == merge_rank_.end() || it->second != c.rank) continue;

    symbols[c.left] += symbols[c.right];
    symbols[c.right].clear();
    alive[c.right] = false;
    next[c.left] = next[c.right];
    if (next[c.left] >= 0) prev[next[c.left]] = static_cast<std::ptrdiff_t>(c.left);
    push(prev[c.left], static_cast<std::ptrdiff_t>(c.left));
    push(static_cast<std::ptrdiff_t>(c.left), next[c.left]);
  }

  std::vector<std::string> out;
  for (std::ptrdiff_t i = 0; i >= 0; i = next[i]) out.push_back(std::move(symbols[i]));
  return out;
}

std::vector<std::string> TokenizerModel::tokenize_span(std::string_view span) const {
  std::vector<std::string> symbols;
  for (const auto& cp : unicode::decode(span)) {
    if (vocab_index_.count(std::string(cp.bytes)) || !byte_fallback_) {
      symbols.emplace_back(cp.bytes);
    } else {
      for (char b : cp.bytes) symbols.emplace_back(1, b);
    }
  }
  return apply_merges(std::move(symbols));
}

std::vector<std::string> TokenizerModel::tokenize_word(std::string_view word) const {
  const std::string normalized = unicode::to_nfc(word);
  const std::string_view w = normalized;
  std::vector<std::string> out;
  auto emit_span = [&](std::size_t from, std::size_t to) {
    if (to <= from) return;
    for (auto& t : tokenize_span(w.substr(from, to - from))) out.push_back(std::move(t));
  };

  std::size_t pending = 0;
  std::size_t i = 0;
  while (i < w.size()) {
    bool matched = false;
    for (std::size_t len : added_lengths_) {
      if (i + len > w.size()) continue;
      const std::string candidate(w.substr(i, len));
      if (added_index_.count(candidate)) {
        emit_span(pending, i);
        out.push_back(candidate);
        i += len;
        pending = i;
        matched = true;
        break;
      }
    }
    if (!matched) i += utf8_length(static_cast<unsigned char>(w[i]));
  }
  emit_span(pending, w.size());
  return out;
}

std::vector<std::string> TokenizerModel::tokenize_sentence(std::string_view text) const {
  std::vector<std::string> out;
  for (const auto& word : segment_words(text)) {
    for (auto& t : tokenize_word(word)) out.push_back(std::move(t));
  }
  return out;
}

TokenizerModel parse_tokenizer(std::string_view vocab_json, std::string_view merges_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(vocab_json);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, std::string("malformed vocabulary JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::parse, "vocabulary JSON must be an object");
  std::vector<std::pair<std::string, TokenId>> vocab;
  vocab.reserve(doc.size());
  for (const auto& [token, id] : doc.items()) {
    if (!id.is_number_integer()) {
      throw Error(ErrorKind::parse, "id of token '" + token + "' is not an integer");
    }
    vocab.emplace_back(token, id.get<TokenId>());
  }

  std::vector<MergeRule> merges;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::vector<std::size_t> merge_lines;
  while (pos < merges_text.size()) {
    std::size_t nl = merges_text.find('\n', pos);
    if (nl == std::string_view::npos) nl = merges_text.size();
    std::string_view line = merges_text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1 && line.starts_with("#version")) continue;
    if (line.empty()) continue;
    const std::size_t sp = line.find(' ');
    if (sp == std::string_view::npos || sp == 0 || sp + 1 >= line.size() ||
        line.find(' ', sp + 1) != std::string_view::npos) {
      throw Error(ErrorKind::parse, "merges line " + std::to_string(line_no) +
                                        ": expected 'LEFT RIGHT'");
    }
    merges.push_back(MergeRule{std::string(line.substr(0, sp)), std::string(line.substr(sp + 1))});
    merge_lines.push_back(line_no);
  }

  // Re-check merges here so the error can carry the file line number.
  std::unordered_map<std::string, TokenId> known(vocab.begin(), vocab.end());
  for (std::size_t i = 0; i < merges.size(); ++i) {
    if (!known.count(merges[i].merged())) {
      throw Error(ErrorKind::parse, "merges line " + std::to_string(merge_lines[i]) + ": '" +
                                        merges[i].merged() + "' is not in the vocabulary");
    }
  }
  return TokenizerModel(std::move(vocab), std::move(merges), true);
}

TokenizerModel load_tokenizer(const std::filesystem::path& vocab_path,
                              const std::filesystem::path& merges_path) {
  const std::string vocab = read_file(vocab_path, "vocabulary file");
  const std::string merges = read_file(merges_path, "merges file");
  return parse_tokenizer(vocab, merges);
}

std::vector<std::string> parse_added_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) tokens.emplace_back(line);
  }
  return tokens;
}

std::vector<std::string> load_added_tokens(const std::filesystem::path& path) {
  return parse_added_tokens(read_file(path, "added-tokens file"));
}

std::string serialize_vocab(const TokenizerModel& model) {
  std::string out = "{";
  bool first = true;
  for (const auto& [token, id] : model.base_vocab()) {
    out += first ? "\n  " : ",\n  ";
    first = false;
    out += nlohmann::json(token).dump();
    out += ": ";
    out += std::to_string(id);
  }
  out += first ? "}\n" : "\n}\n";
  return out;
}

std::string serialize_merges(const TokenizerModel& model) {
  std::string out = "#version: 0.2\n";
  for (const auto& m : model.merges()) out += m.left + " " + m.right + "\n";
  return out;
}

std::string serialize_added_tokens(const TokenizerModel& model) {
  std::string out;
  for (const auto& t : model.added_tokens()) out += t + "\n";
  return out;
}

void save_tokenizer(const TokenizerModel& model, const std::filesystem::path& vocab_path,
                    const std::filesystem::path& merges_path,
                    const std::filesystem::path& added_path) {
  write_file(vocab_path, serialize_vocab(model));
  write_file(merges_path, serialize_merges(model));
  write_file(added_path, serialize_added_tokens(model));
}

}  // namespace lrlprep
