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

#include "targsent/morpho.hpp"

#include <array>

#include "targsent/common.hpp"

namespace targsent {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::kSurface: return "surface";
    case Scheme::kLemma: return "lemma";
    case Scheme::kLemmaAtb: return "lemma_atb";
    case Scheme::kLemmaD3: return "lemma_d3";
  }
  return "lemma";
}

std::optional<Scheme> parse_scheme(std::string_view s) {
  const std::string lower = to_lower(s);
  for (Scheme sc :
       {Scheme::kSurface, Scheme::kLemma, Scheme::kLemmaAtb, Scheme::kLemmaD3})
    if (to_string(sc) == lower) return sc;
  if (lower == "atb") return Scheme::kLemmaAtb;
  if (lower == "d3") return Scheme::kLemmaD3;
  return std::nullopt;
}

std::string_view to_string(Task t) {
  return t == Task::kTarget ? "target" : "sentiment";
}

std::optional<Task> parse_task(std::string_view s) {
  if (s == "target") return Task::kTarget;
  if (s == "sentiment") return Task::kSentiment;
  return std::nullopt;
}

const std::vector<std::string>& label_names(Task task) {
  static const std::vector<std::string> target = {"T", "O"};
  static const std::vector<std::string> sentiment = {"P", "N", "NEUTRAL"};
  return task == Task::kTarget ? target : sentiment;
}

namespace {

Token wordform(const WordAnalysis& w, std::string repr, bool definite) {
  Token t;
  t.repr = std::move(repr);
  t.pos = w.pos;
  t.kind = TokenKind::kWordform;
  t.carries_definite_article = definite;
  t.lemma = w.lemma;
  t.glosses = w.glosses;
  return t;
}

Token clitic(const Segment& seg) {
  Token t;
  t.repr = seg.kind == SegmentKind::kProclitic ? seg.form + "+" : "+" + seg.form;
  t.pos = seg.detailed_pos;
  t.kind = TokenKind::kClitic;
  t.carries_definite_article = seg.is_definite_article;
  t.lemma = t.repr;
  return t;
}

void check_aligned(const Post& post, const TokenSequence& seq) {
  if (seq.words.size() != post.words.size() ||
      seq.alignment.size() != seq.tokens.size())
    throw UsageError("token sequence is not aligned with post '" + post.id + "'");
  int prev = 0;
  for (int w : seq.alignment) {
    if (w < prev || w >= static_cast<int>(post.words.size()))
      throw UsageError("token alignment is not monotone over post '" +
                       post.id + "'");
    prev = w;
  }
}

}  // namespace

TokenSequence derive_tokens(const Post& post, Scheme scheme) {
  TokenSequence seq;
  seq.scheme = scheme;
  seq.words = post.words;
  for (std::size_t i = 0; i < post.words.size(); ++i) {
    const WordAnalysis& w = post.words[i];
    const int wi = static_cast<int>(i);
    auto emit = [&](Token t) {
      seq.tokens.push_back(std::move(t));
      seq.alignment.push_back(wi);
    };
    switch (scheme) {
      case Scheme::kSurface:
        emit(wordform(w, w.surface, false));
        break;
      case Scheme::kLemma:
        emit(wordform(w, w.lemma, false));
        break;
      case Scheme::kLemmaAtb:
      case Scheme::kLemmaD3: {
        const bool split_article = scheme == Scheme::kLemmaD3;
        bool fused_article = false;
        for (const Segment& seg : w.segments) {
          if (seg.kind == SegmentKind::kProclitic) {
            if (seg.is_definite_article && !split_article)
              fused_article = true;
            else
              emit(clitic(seg));
          } else if (seg.kind == SegmentKind::kStem) {
            emit(wordform(w, w.lemma, fused_article));
          } else {
            emit(clitic(seg));
          }
        }
        break;
      }
    }
  }
  return seq;
}

LabelSequence project_gold_labels(const Post& post, const TokenSequence& seq,
                                  Task task) {
  check_aligned(post, seq);
  const std::size_t n = post.words.size();
  // Per word: target flag and sentiment label.
  std::vector<int> word_target(n, label::kO);
  std::vector<int> word_sent(n, label::kNeutral);
  for (const TargetSpan& s : post.gold_targets) {
    for (int w = s.first_word; w <= s.last_word; ++w) {
      word_target[w] = label::kT;
      if (s.polarity == Polarity::kPos)
        word_sent[w] = label::kP;
      else if (s.polarity == Polarity::kNeg)
        word_sent[w] = label::kN;
    }
  }
  LabelSequence out;
  out.task = task;
  out.labels.reserve(seq.size());
  for (int w : seq.alignment)
    out.labels.push_back(task == Task::kTarget ? word_target[w] : word_sent[w]);
  return out;
}

std::vector<TargetSpan> project_word_predictions(
    const TokenSequence& seq, const LabelSequence& target_labels,
    const LabelSequence& sentiment_labels) {
  if (target_labels.size() != seq.size() ||
      sentiment_labels.size() != seq.size())
    throw UsageError("label sequences are not aligned with the tokens");
  const std::size_t n = seq.words.size();
  std::vector<bool> is_target(n, false);
  std::vector<int> pos_votes(n, 0), neg_votes(n, 0);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const int w = seq.alignment[i];
    if (target_labels.labels[i] == label::kT) is_target[w] = true;
    if (sentiment_labels.labels[i] == label::kP) ++pos_votes[w];
    if (sentiment_labels.labels[i] == label::kN) ++neg_votes[w];
  }
  std::vector<TargetSpan> spans;
  std::size_t w = 0;
  while (w < n) {
    if (!is_target[w]) {
      ++w;
      continue;
    }
    std::size_t end = w;
    int pos = 0, neg = 0;
    while (end < n && is_target[end]) {
      pos += pos_votes[end];
      neg += neg_votes[end];
      ++end;
    }
    spans.push_back({static_cast<int>(w), static_cast<int>(end - 1),
                     pos > neg ? Polarity::kPos : Polarity::kNeg});
    w = end;
  }
  return spans;
}

std::pair<TokenSequence, LabelSequence> reduce_d3_to_atb(
    const TokenSequence& seq_d3, const LabelSequence& target_labels) {
  if (seq_d3.scheme != Scheme::kLemmaD3)
    throw UsageError("reduce_d3_to_atb expects a lemma_d3 sequence, got " +
                     std::string(to_string(seq_d3.scheme)));
  if (target_labels.task != Task::kTarget ||
      target_labels.size() != seq_d3.size())
    throw UsageError("reduce_d3_to_atb expects aligned target labels");

  TokenSequence out;
  out.scheme = Scheme::kLemmaAtb;
  out.words = seq_d3.words;
  LabelSequence labels;
  labels.task = Task::kTarget;

  bool pending_article = false;
  bool pending_target = false;
  for (std::size_t i = 0; i < seq_d3.size(); ++i) {
    const Token& t = seq_d3.tokens[i];
    const bool is_t = target_labels.labels[i] == label::kT;
    if (t.kind == TokenKind::kClitic && t.carries_definite_article) {
      pending_article = true;
      pending_target = pending_target || is_t;
      continue;
    }
    Token copy = t;
    int lab = target_labels.labels[i];
    if (pending_article && t.kind == TokenKind::kWordform) {
      copy.carries_definite_article = true;
      if (pending_target) lab = label::kT;
      pending_article = false;
      pending_target = false;
    }
    out.tokens.push_back(std::move(copy));
    out.alignment.push_back(seq_d3.alignment[i]);
    labels.labels.push_back(lab);
  }
  if (pending_article)
    throw DataError("definite article clitic without a following stem");
  return {std::move(out), std::move(labels)};
}

std::string dump_tokens(const TokenSequence& seq) {
  std::string out;
  for (const Token& t : seq.tokens) {
    out += t.repr;
    out += '\t';
    out += t.pos;
    out += '\n';
  }
  return out;
}

}  // namespace targsent
