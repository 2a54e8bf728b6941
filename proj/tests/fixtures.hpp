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

// Small builders shared by the test programs.

#ifndef TARGSENT_TESTS_FIXTURES_HPP_
#define TARGSENT_TESTS_FIXTURES_HPP_

#include <string>
#include <utility>
#include <vector>

#include "targsent/corpus.hpp"

namespace targsent::testing {

inline Segment stem(std::string form, std::string pos) {
  return {std::move(form), std::move(pos), SegmentKind::kStem, false};
}
inline Segment pro(std::string form, std::string pos, bool article = false) {
  return {std::move(form), std::move(pos), SegmentKind::kProclitic, article};
}
inline Segment enc(std::string form, std::string pos) {
  return {std::move(form), std::move(pos), SegmentKind::kEnclitic, false};
}

// One-segment word; surface and stem form are the lemma's stem.
inline WordAnalysis word(const std::string& lemma, const std::string& pos = "noun",
                         int head = kRootHead, const std::string& rel = "---") {
  WordAnalysis w;
  w.surface = lemma;
  w.lemma = lemma;
  w.pos = pos;
  w.segments = {stem(lemma, pos)};
  w.glosses = {lemma};
  w.dep_head = head;
  w.dep_rel = rel;
  return w;
}

inline WordAnalysis with_segments(WordAnalysis w, std::vector<Segment> segs) {
  w.segments = std::move(segs);
  std::string surface;
  for (const Segment& s : w.segments) surface += s.form;
  w.surface = surface;
  return w;
}

inline Post post(std::string id, std::vector<WordAnalysis> words,
                 std::vector<TargetSpan> targets = {}) {
  Post p;
  p.id = std::move(id);
  p.words = std::move(words);
  p.gold_targets = std::move(targets);
  return p;
}

// Post of bare nouns named by `lemmas`, all attached to the first word.
inline Post noun_post(std::string id, const std::vector<std::string>& lemmas,
                      std::vector<TargetSpan> targets = {}) {
  std::vector<WordAnalysis> words;
  for (std::size_t i = 0; i < lemmas.size(); ++i)
    words.push_back(word(lemmas[i], "noun", i == 0 ? kRootHead : 0,
                         i == 0 ? "---" : "MOD"));
  return post(std::move(id), std::move(words), std::move(targets));
}

}  // namespace targsent::testing

#endif  // TARGSENT_TESTS_FIXTURES_HPP_
