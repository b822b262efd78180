#pragma once

#include "lrlprep/tokenizer.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

namespace testing {

inline lrlprep::TokenizerModel to_model(const oracle::Tokenizer& t) {
  auto m = lrlprep::parse_tokenizer(oracle::vocab_json(t), oracle::merges_text(t));
  return t.added.empty() ? m : m.with_added_tokens(t.added);
}

}  // namespace testing
