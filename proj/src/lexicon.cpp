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

#include "targsent/lexicon.hpp"

#include <array>
#include <cstdlib>

#include "targsent/common.hpp"

namespace targsent {

std::string_view to_string(LexiconKind k) {
  switch (k) {
    case LexiconKind::kPriorList: return "prior";
    case LexiconKind::kScored: return "scored";
    case LexiconKind::kGlossKeyed: return "gloss";
  }
  return "prior";
}

std::optional<LexiconKind> parse_lexicon_kind(std::string_view s) {
  const std::string k = to_lower(s);
  if (k == "prior" || k == "prior_list" || k == "sifaat") return LexiconKind::kPriorList;
  if (k == "scored" || k == "arsenl") return LexiconKind::kScored;
  if (k == "gloss" || k == "gloss_keyed" || k == "mpqa") return LexiconKind::kGlossKeyed;
  return std::nullopt;
}

std::string_view to_string(Prior p) {
  switch (p) {
    case Prior::kPos: return "positive";
    case Prior::kNeg: return "negative";
    case Prior::kNeutral: return "neutral";
  }
  return "neutral";
}

std::size_t Lexicon::subjective_count() const {
  std::size_t n = 0;
  for (const auto& [key, e] : entries) n += e.subjective;
  return n;
}

LexEntry classify_scored(double pos_score, double neg_score, double threshold) {
  LexEntry e;
  e.pos_score = pos_score;
  e.neg_score = neg_score;
  if (pos_score == neg_score) return e;  // tie: neutral, not subjective
  e.prior = pos_score > neg_score ? Prior::kPos : Prior::kNeg;
  e.subjective = std::max(pos_score, neg_score) >= threshold;
  return e;
}

namespace {

double parse_score(const std::string& s, std::size_t line_no) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !(v >= 0.0 && v <= 1.0))
    throw DataError("line " + std::to_string(line_no) + ": score '" + s +
                    "' is not a number in [0,1]");
  return v;
}

}  // namespace

Lexicon parse_lexicon(std::string_view text, LexiconKind kind,
                      double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw UsageError("lexicon threshold must lie in [0,1]");
  Lexicon lex;
  lex.kind = kind;
  lex.threshold = threshold;
  std::size_t line_no = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cols = split(line, '\t');
    for (auto& c : cols) c = std::string(trim(c));
    const std::string where = "line " + std::to_string(line_no) + ": ";
    LexEntry e;
    std::string key;
    switch (kind) {
      case LexiconKind::kPriorList: {
        if (cols.size() != 2)
          throw DataError(where + "expected 'word<TAB>pos|neg'");
        key = cols[0];
        const std::string pol = to_lower(cols[1]);
        if (pol == "pos")
          e.prior = Prior::kPos;
        else if (pol == "neg")
          e.prior = Prior::kNeg;
        else
          throw DataError(where + "polarity '" + cols[1] + "' is not pos|neg");
        e.subjective = true;
        break;
      }
      case LexiconKind::kScored: {
        if (cols.size() != 3)
          throw DataError(where + "expected 'lemma<TAB>pos_score<TAB>neg_score'");
        key = cols[0];
        e = classify_scored(parse_score(cols[1], line_no),
                            parse_score(cols[2], line_no), threshold);
        break;
      }
      case LexiconKind::kGlossKeyed: {
        if (cols.size() != 3)
          throw DataError(where +
                          "expected 'english_word<TAB>pos|neg|neutral<TAB>strong|weak'");
        key = to_lower(cols[0]);
        const std::string pol = to_lower(cols[1]);
        if (pol == "pos")
          e.prior = Prior::kPos;
        else if (pol == "neg")
          e.prior = Prior::kNeg;
        else if (pol == "neutral")
          e.prior = Prior::kNeutral;
        else
          throw DataError(where + "polarity '" + cols[1] +
                          "' is not pos|neg|neutral");
        const std::string strength = to_lower(cols[2]);
        if (strength != "strong" && strength != "weak")
          throw DataError(where + "strength '" + cols[2] + "' is not strong|weak");
        e.strong = strength == "strong";
        // Every clue in a gloss-keyed list is a subjectivity clue.
        e.subjective = true;
        break;
      }
    }
    if (key.empty()) throw DataError(where + "empty key");
    lex.entries.emplace(std::move(key), e);
  }
  return lex;
}

Lexicon load_lexicon(const std::string& path, LexiconKind kind,
                     double threshold) {
  try {
    return parse_lexicon(read_file(path), kind, threshold);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string serialize_lexicon(const Lexicon& lex) {
  std::string out;
  auto short_pol = [](Prior p) -> std::string {
    return p == Prior::kPos ? "pos" : p == Prior::kNeg ? "neg" : "neutral";
  };
  for (const auto& [key, e] : lex.entries) {
    out += key;
    out += '\t';
    switch (lex.kind) {
      case LexiconKind::kPriorList:
        out += short_pol(e.prior);
        break;
      case LexiconKind::kScored: {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6g\t%.6g", e.pos_score, e.neg_score);
        out += buf;
        break;
      }
      case LexiconKind::kGlossKeyed:
        out += short_pol(e.prior);
        out += e.strong ? "\tstrong" : "\tweak";
        break;
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string first_gloss_word(std::string_view gloss) {
  gloss = trim(gloss);
  const std::size_t sp = gloss.find_first_of(" \t");
  return to_lower(gloss.substr(0, sp));
}

}  // namespace

std::optional<LexEntry> lookup(const Lexicon& lex, const LexKey& key) {
  if (lex.kind != LexiconKind::kGlossKeyed) {
    auto it = lex.entries.find(std::string(key.lemma));
    if (it == lex.entries.end()) return std::nullopt;
    return it->second;
  }
  if (key.glosses == nullptr) return std::nullopt;
  std::optional<LexEntry> first_hit;
  for (const std::string& gloss : *key.glosses) {
    auto it = lex.entries.find(first_gloss_word(gloss));
    if (it == lex.entries.end()) continue;
    if (it->second.subjective) return it->second;
    if (!first_hit) first_hit = it->second;
  }
  return first_hit;
}

std::optional<LexEntry> lookup(const Lexicon& lex, const Token& token) {
  return lookup(lex, LexKey{token.lemma, &token.glosses});
}

std::optional<LexEntry> lookup(const Lexicon& lex, const WordAnalysis& word) {
  return lookup(lex, LexKey{word.lemma, &word.glosses});
}

bool is_phrase_boundary(std::string_view surface) {
  static const std::array<std::string_view, 7> kPunct = {
      ".", "!", "?", "\xd8\x9f" /* ؟ */, "\xd8\x8c" /* ، */, ";", ":"};
  surface = trim(surface);
  for (auto p : kPunct)
    if (surface == p) return true;
  return false;
}

Polarity phrase_polarity(const Post& post, const TargetSpan& span,
                         const Lexicon& lex) {
  const int n = static_cast<int>(post.words.size());
  int lo = std::clamp(span.first_word, 0, n);
  int hi = std::clamp(span.last_word, -1, n - 1);
  while (lo > 0 && !is_phrase_boundary(post.words[lo - 1].surface)) --lo;
  while (hi + 1 < n && !is_phrase_boundary(post.words[hi + 1].surface)) ++hi;
  int pos = 0, neg = 0;
  for (int w = lo; w <= hi; ++w) {
    auto e = lookup(lex, post.words[w]);
    if (!e) continue;
    if (e->prior == Prior::kPos) ++pos;
    if (e->prior == Prior::kNeg) ++neg;
  }
  return pos > neg ? Polarity::kPos : Polarity::kNeg;
}

}  // namespace targsent
