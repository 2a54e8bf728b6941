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

// Template-grammar corpus generator with planted target and polarity
// structure, for tests and desk-scale experiments.

#ifndef TARGSENT_SYNTH_HPP_
#define TARGSENT_SYNTH_HPP_

#include <cstdint>
#include <utility>

#include "targsent/corpus.hpp"
#include "targsent/lexicon.hpp"

namespace targsent {

struct SynthConfig {
  int n_posts = 200;
  std::uint64_t vocab_seed = 1;
  std::uint64_t seed = 1;
  // Share of target heads with the Al+ proclitic, and of distractor nouns.
  double definite_target_rate = 0.7;
  double definite_distractor_rate = 0.1;
  // Share of target heads (without Al+) carrying a possessive enclitic.
  double enclitic_target_rate = 0.25;
  double enclitic_distractor_rate = 0.05;
  // Share of targets placed away from their opinion word.
  double hidden_rate = 0.5;
  // Gold polarity mix; AMBIG takes the remainder.
  double pos_rate = 0.382;
  double neg_rate = 0.505;
};

struct SynthLexicons {
  Lexicon prior_list;
  Lexicon scored;
  Lexicon gloss_keyed;
};

// Posts plus a PRIOR_LIST lexicon holding every planted opinion lemma.
std::pair<Corpus, Lexicon> generate_synthetic(const SynthConfig& config);

// The planted opinion vocabulary in all three lexicon formats.
SynthLexicons synthetic_lexicons(const SynthConfig& config);

}  // namespace targsent

#endif  // TARGSENT_SYNTH_HPP_
