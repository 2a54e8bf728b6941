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

// Sentiment lexicons in three families and the lookups built on them.

#ifndef TARGSENT_LEXICON_HPP_
#define TARGSENT_LEXICON_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "targsent/corpus.hpp"
#include "targsent/morpho.hpp"

namespace targsent {

enum class LexiconKind { kPriorList, kScored, kGlossKeyed };

std::string_view to_string(LexiconKind k);
std::optional<LexiconKind> parse_lexicon_kind(std::string_view s);

enum class Prior { kPos, kNeg, kNeutral };

std::string_view to_string(Prior p);  // "positive", "negative", "neutral"

struct LexEntry {
  Prior prior = Prior::kNeutral;
  bool subjective = false;
  // SCORED only.
  double pos_score = 0.0;
  double neg_score = 0.0;
  // GLOSS_KEYED only: strong vs weak subjectivity clue.
  bool strong = false;

  bool operator==(const LexEntry&) const = default;
};

struct Lexicon {
  LexiconKind kind = LexiconKind::kPriorList;
  std::map<std::string, LexEntry> entries;
  double threshold = 0.2;

  std::size_t subjective_count() const;
};

// SCORED entry classification under threshold t.
LexEntry classify_scored(double pos_score, double neg_score, double threshold);

// Formats, all tab separated:
//   PRIOR_LIST   word  pos|neg
//   SCORED       lemma pos_score neg_score
//   GLOSS_KEYED  english_word pos|neg|neutral strong|weak
// Blank lines and lines starting with '#' are ignored. Later duplicates of a
// key are ignored.
Lexicon parse_lexicon(std::string_view text, LexiconKind kind,
                      double threshold = 0.2);
Lexicon load_lexicon(const std::string& path, LexiconKind kind,
                     double threshold = 0.2);
std::string serialize_lexicon(const Lexicon& lex);

// Key material of one lookup: a lemma and the English glosses.
struct LexKey {
  std::string_view lemma;
  const std::vector<std::string>* glosses = nullptr;
};

std::optional<LexEntry> lookup(const Lexicon& lex, const LexKey& key);
std::optional<LexEntry> lookup(const Lexicon& lex, const Token& token);
std::optional<LexEntry> lookup(const Lexicon& lex, const WordAnalysis& word);

bool is_phrase_boundary(std::string_view surface);

// Lexicon-vote polarity of the punctuation-delimited phrase containing the
// span: POS iff strictly more positive than negative hits.
Polarity phrase_polarity(const Post& post, const TargetSpan& span,
                         const Lexicon& lex);

}  // namespace targsent

#endif  // TARGSENT_LEXICON_HPP_
