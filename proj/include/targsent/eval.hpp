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

// Subset-match target metrics, sentiment metrics on matched targets,
// baselines, and the approximate randomization test.

#ifndef TARGSENT_EVAL_HPP_
#define TARGSENT_EVAL_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "targsent/corpus.hpp"
#include "targsent/lexicon.hpp"

namespace targsent {

// Predicted spans of one post (polarity POS or NEG).
struct Prediction {
  std::string post_id;
  std::vector<TargetSpan> spans;

  bool operator==(const Prediction&) const = default;
};

using Predictions = std::vector<Prediction>;

// "post_id<TAB>first:last:polarity<TAB>..." per line.
std::string serialize_predictions(const Predictions& preds);
Predictions parse_predictions(std::string_view text);
Predictions load_predictions(const std::string& path);

// True iff one sequence occurs contiguously, in order, inside the other.
bool subset_match(std::span<const std::string> pred,
                  std::span<const std::string> gold);

enum class MatchMode {
  kSubset,
  // Provisional: any shared token counts as a match. Off by default.
  kMentionOverlap,
};

// Additive tallies; metrics are functions of summed counts.
struct EvalCounts {
  long gold = 0;
  long gold_recalled = 0;
  long predicted = 0;
  long predicted_correct = 0;
  // Predictions not matched exclusively to ambiguous gold targets.
  long predicted_polar_scope = 0;
  long polar_gold = 0;
  long sent_pairs = 0;
  long sent_correct = 0;
  long pos_predicted = 0;
  long pos_gold = 0;
  long pos_correct = 0;
  long neg_predicted = 0;
  long neg_gold = 0;
  long neg_correct = 0;

  EvalCounts& operator+=(const EvalCounts& o);
  bool operator==(const EvalCounts&) const = default;
};

struct PostAlignment {
  std::string post_id;
  std::vector<TargetSpan> predictions;  // deduplicated
  std::vector<bool> prediction_correct;
  std::vector<bool> gold_recalled;
  // Prediction whose polarity is scored against each gold span, or -1.
  std::vector<int> gold_pairing;
  EvalCounts counts;
};

// Matching is position independent: a prediction is correct when it
// matches any gold mention. Each recalled polar gold span is paired with
// the matching prediction of largest token overlap, earliest on ties.
PostAlignment align(const Post& post, const std::vector<TargetSpan>& predictions,
                    MatchMode mode = MatchMode::kSubset);

struct Metrics {
  double target_recall = 0.0;
  double target_precision = 0.0;
  double target_f = 0.0;
  double f_pos = 0.0;
  double f_neg = 0.0;
  double acc_sent = 0.0;
  double f_all = 0.0;
  // No predictions at all: precision reported as 0.
  bool precision_undefined = false;
};

Metrics metrics_from_counts(const EvalCounts& c);

struct EvalReport {
  Metrics metrics;
  EvalCounts counts;
  std::vector<PostAlignment> posts;
};

// Posts without a prediction entry count as having no predictions.
// Throws DataError for prediction ids missing from the corpus.
EvalReport score(const Corpus& gold, const Predictions& predictions,
                 MatchMode mode = MatchMode::kSubset);

std::string report_to_json(const EvalReport& report, int indent = 2);
// Gold spans as system output; ambiguous spans are emitted as NEG.
Predictions gold_as_predictions(const Corpus& corpus);

// Human-readable table, metrics scaled by 100.
std::string report_table(const EvalReport& report, std::string_view title = "");

// Every maximal NP chunk, plus nouns outside chunks as singletons. Spans
// carry NEG until a sentiment baseline assigns polarity.
std::vector<TargetSpan> baseline_all_np(const Post& post);

enum class SentimentBaseline { kMajority, kLexicon };

std::vector<TargetSpan> baseline_sentiment(const Post& post,
                                           std::vector<TargetSpan> spans,
                                           SentimentBaseline variant,
                                           const Lexicon* lex = nullptr);

enum class Metric {
  kTargetRecall,
  kTargetPrecision,
  kTargetF,
  kFPos,
  kFNeg,
  kAccSent,
  kFAll,
};

std::string_view to_string(Metric m);
std::optional<Metric> parse_metric(std::string_view s);
double metric_value(const Metrics& m, Metric which);

struct SignificanceResult {
  Metric metric = Metric::kFAll;
  double delta_observed = 0.0;  // metric(A) - metric(B)
  double p_value = 1.0;
  int iterations = 0;
  std::uint64_t seed = 0;
  std::vector<double> null_deltas;  // |delta| per shuffle
};

// Paired approximate randomization: per shuffle each post's two outputs
// swap with probability 1/2; p = (#{|d| >= |d_obs|} + 1) / (R + 1).
SignificanceResult approx_randomization(const Predictions& a,
                                        const Predictions& b,
                                        const Corpus& gold, Metric metric,
                                        int iterations, std::uint64_t seed);

// p-value of an observed |delta| against a recorded null distribution.
double randomization_p_value(const std::vector<double>& null_deltas,
                             double delta_observed);

std::string significance_tsv(const std::vector<SignificanceResult>& results);

}  // namespace targsent

#endif  // TARGSENT_EVAL_HPP_
