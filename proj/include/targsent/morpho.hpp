// Copyright 2026 The targsent Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Scheme-specific token sequences derived from analyzed words, plus the
// label projections between word space and token space.

#ifndef TARGSENT_MORPHO_HPP_
#define TARGSENT_MORPHO_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "targsent/corpus.hpp"

namespace targsent {

enum class Scheme { kSurface, kLemma, kLemmaAtb, kLemmaD3 };

std::string_view to_string(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view s);

enum class TokenKind { kWordform, kClitic };

struct Token {
  // Surface, lemma, or clitic form with its attachment side ("f+", "+hA").
  std::string repr;
  std::string pos;
  TokenKind kind = TokenKind::kWordform;
  bool carries_definite_article = false;
  // Lexicon key: the word lemma for word forms, `repr` for clitics.
  std::string lemma;
  // English glosses of the source word; empty for clitics.
  std::vector<std::string> glosses;

  bool operator==(const Token&) const = default;
};

// Tokens plus the per-word attribute table they were derived from.
// alignment[i] is the source word of token i.
struct TokenSequence {
  Scheme scheme = Scheme::kLemma;
  std::vector<Token> tokens;
  std::vector<int> alignment;
  std::vector<WordAnalysis> words;

  std::size_t size() const { return tokens.size(); }
  const WordAnalysis& word_of(std::size_t token) const {
    return words[alignment[token]];
  }
  bool operator==(const TokenSequence&) const = default;
};

enum class Task { kTarget, kSentiment };

std::string_view to_string(Task t);
std::optional<Task> parse_task(std::string_view s);

// Label indices. Target: {T, O}; sentiment: {P, N, NEUTRAL}.
namespace label {
inline constexpr int kT = 0;
inline constexpr int kO = 1;
inline constexpr int kP = 0;
inline constexpr int kN = 1;
inline constexpr int kNeutral = 2;
}  // namespace label

const std::vector<std::string>& label_names(Task task);

struct LabelSequence {
  Task task = Task::kTarget;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  bool operator==(const LabelSequence&) const = default;
};

TokenSequence derive_tokens(const Post& post, Scheme scheme);

// Gold spans onto tokens. AMBIG spans are T for the target task and
// NEUTRAL for the sentiment task.
LabelSequence project_gold_labels(const Post& post, const TokenSequence& seq,
                                  Task task);

// Word-level spans from token labels. A word is inside a target iff any of
// its tokens is T; span polarity is the P/N majority over the span's tokens,
// ties resolved to NEG.
std::vector<TargetSpan> project_word_predictions(
    const TokenSequence& seq, const LabelSequence& target_labels,
    const LabelSequence& sentiment_labels);

// Folds split-off definite articles back into their stems. A fused token is
// T iff any constituent was T.
std::pair<TokenSequence, LabelSequence> reduce_d3_to_atb(
    const TokenSequence& seq_d3, const LabelSequence& target_labels);

// Two-column "repr<TAB>pos" dump, one token per line.
std::string dump_tokens(const TokenSequence& seq);

}  // namespace targsent

#endif  // TARGSENT_MORPHO_HPP_
