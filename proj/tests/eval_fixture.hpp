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

// Twenty-five small posts with predictions and hand-tallied counts.

#ifndef TARGSENT_TESTS_EVAL_FIXTURE_HPP_
#define TARGSENT_TESTS_EVAL_FIXTURE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "targsent/common.hpp"
#include "targsent/eval.hpp"

namespace targsent::testing {

struct HandCase {
  std::string words;  // space separated lemmas
  std::vector<TargetSpan> gold;
  std::optional<std::vector<TargetSpan>> predicted;  // nullopt: no entry
  // gold, recalled, predicted, correct, polar scope, polar gold, pairs,
  // sentiment correct, pos (pred, gold, correct), neg (pred, gold, correct)
  EvalCounts expected;
};

inline TargetSpan P(int a, int b) { return {a, b, Polarity::kPos}; }
inline TargetSpan N(int a, int b) { return {a, b, Polarity::kNeg}; }
inline TargetSpan A(int a, int b) { return {a, b, Polarity::kAmbig}; }

inline const std::vector<HandCase>& hand_cases() {
  static const std::vector<HandCase> kCases = {
      {"position Egypt and Palestine criticized state of Palestine position Israel",
       {P(3, 3), N(8, 9), A(0, 1)},
       {{P(5, 7), N(0, 1), P(9, 9), N(8, 9), N(4, 4)}},
       {3, 3, 5, 4, 4, 2, 2, 2, 1, 1, 1, 1, 1, 1}},
      {"minister said the government failed minister",
       {N(0, 0), N(3, 3)},
       {{P(5, 5), N(5, 5), N(2, 3)}},
       {2, 2, 2, 2, 2, 2, 2, 1, 1, 0, 0, 1, 2, 1}},
      {"a b c", {P(1, 1)}, std::nullopt, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
      {"state of Palestine", {P(0, 2)}, {{P(2, 2)}},
       {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0}},
      {"position Egypt position Israel", {N(0, 1)}, {{N(2, 3)}},
       {1, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
      {"x y", {N(0, 0)}, {{}}, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
      {"x y z", {}, {{P(0, 0), N(1, 2)}}, {0, 0, 2, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
      {"the army attacked the city", {N(1, 1), P(4, 4)}, {{N(1, 1), P(4, 4)}},
       {2, 2, 2, 2, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1}},
      {"new york city hall", {P(0, 2)}, {{P(1, 3)}},
       {1, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
      {"Obama spoke Obama lied", {N(0, 0)}, {{N(2, 2)}},
       {1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 1, 1, 1}},
      {"the red car red car", {P(1, 2)}, {{N(1, 1), P(4, 4)}},
       {1, 1, 2, 2, 2, 1, 1, 0, 0, 1, 0, 1, 0, 0}},
      {"peace deal", {A(0, 1)}, {{P(0, 1)}}, {1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
      {"peace deal peace", {A(0, 1), N(2, 2)}, {{P(2, 2)}},
       {2, 2, 1, 1, 1, 1, 1, 0, 1, 0, 0, 0, 1, 0}},
      {"the law", {N(1, 1)}, {{N(1, 1), N(1, 1), N(1, 1)}},
       {1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 1, 1, 1}},
      {"the new law passed", {P(2, 2)}, {{P(0, 3)}},
       {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0}},
      {"Egypt and Israel", {P(0, 0), N(2, 2)}, {{N(0, 2)}},
       {2, 2, 1, 1, 1, 2, 2, 1, 0, 1, 0, 2, 1, 1}},
      {"peace process process peace", {P(0, 1)}, {{P(2, 3)}},
       {1, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
      {"king said king of land", {N(2, 4)}, {{N(0, 1)}},
       {1, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
      {"the president and the people and the army",
       {P(1, 1), N(4, 4), A(7, 7)},
       {{P(0, 1), P(3, 4), N(6, 6)}},
       {3, 2, 3, 2, 3, 2, 2, 1, 2, 1, 1, 0, 1, 0}},
      {"culture ministry", {P(0, 1)}, {{N(0, 1)}},
       {1, 1, 1, 1, 1, 1, 1, 0, 0, 1, 0, 1, 0, 0}},
      {"the state of Palestine", {N(1, 3)}, {{P(3, 3), N(1, 3)}},
       {1, 1, 2, 2, 2, 1, 1, 1, 0, 0, 0, 1, 1, 1}},
      {"state of Palestine and state of Palestine", {P(0, 2)}, {{N(1, 2), P(4, 6)}},
       {1, 1, 2, 2, 2, 1, 1, 1, 1, 1, 1, 0, 0, 0}},
      {"a b", {A(0, 0), A(1, 1)}, {{N(0, 1)}},
       {2, 2, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
      {"oil prices oil", {N(0, 1), P(2, 2)}, {{P(0, 0)}},
       {2, 2, 1, 1, 1, 2, 2, 1, 2, 1, 1, 0, 1, 0}},
      {"the opposition rejected the new constitution", {N(1, 1), N(4, 5)},
       {{N(1, 1), N(5, 5)}},
       {2, 2, 2, 2, 2, 2, 2, 2, 0, 0, 0, 2, 2, 2}},
  };
  return kCases;
}

// Corpus totals tallied by hand from the table above.
inline EvalCounts hand_totals() {
  return {35, 28, 36, 28, 33, 29, 23, 16, 11, 10, 7, 12, 13, 9};
}

inline std::string hand_id(std::size_t i) { return "hand-" + std::to_string(i + 1); }

inline Corpus hand_corpus() {
  Corpus c;
  const auto& cases = hand_cases();
  for (std::size_t i = 0; i < cases.size(); ++i)
    c.push_back(noun_post(hand_id(i), split(cases[i].words, ' '), cases[i].gold));
  return c;
}

inline Predictions hand_predictions() {
  Predictions out;
  const auto& cases = hand_cases();
  for (std::size_t i = 0; i < cases.size(); ++i)
    if (cases[i].predicted) out.push_back({hand_id(i), *cases[i].predicted});
  return out;
}

}  // namespace targsent::testing

#endif  // TARGSENT_TESTS_EVAL_FIXTURE_HPP_
