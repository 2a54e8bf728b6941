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

// Two-model target/sentiment system: training, pipelined prediction and
// experiment runs.

#ifndef TARGSENT_PIPELINE_HPP_
#define TARGSENT_PIPELINE_HPP_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "targsent/clusters.hpp"
#include "targsent/corpus.hpp"
#include "targsent/crf.hpp"
#include "targsent/eval.hpp"
#include "targsent/features.hpp"
#include "targsent/lexicon.hpp"
#include "targsent/morpho.hpp"

namespace targsent {

enum class PipelineScheme { kSurface, kLemma, kLemmaAtb, kLemmaD3, kCombinedD3Atb };

std::string_view to_string(PipelineScheme s);
// Accepts the morpho scheme names plus "combined" / "d3+atb".
std::optional<PipelineScheme> parse_pipeline_scheme(std::string_view s);

struct PipelineConfig {
  PipelineScheme scheme = PipelineScheme::kLemmaD3;
  FeatureConfig target_features = FeatureConfig::basic();
  FeatureConfig sentiment_features = FeatureConfig::basic();
  TrainConfig target_train;
  TrainConfig sentiment_train;
  // Train the sentiment model on target labels predicted by the freshly
  // trained target model instead of gold ones.
  bool sentiment_on_predicted_targets = false;

  Scheme target_scheme() const;
  Scheme sentiment_scheme() const;
};

// Where feature resources come from; recorded in model metadata so a saved
// model pair can be reloaded with the same inputs.
struct ResourceSpec {
  std::vector<std::pair<LexiconKind, std::string>> lexicons;
  double lexicon_threshold = 0.2;
  std::string clusters;
};

struct Resources {
  std::vector<std::shared_ptr<const Lexicon>> lexicons;
  std::shared_ptr<const ClusterModel> clusters;
};

Resources load_resources(const ResourceSpec& spec);
// Installs the resources into both feature configs of `cfg`.
void attach_resources(PipelineConfig& cfg, const Resources& res);

// JSON description of one model's inputs (scheme, task, feature families,
// windows, resources).
std::string model_metadata(const PipelineConfig& cfg, Task task,
                           const ResourceSpec& resources);

struct ModelDescription {
  PipelineScheme scheme = PipelineScheme::kLemmaD3;
  Task task = Task::kTarget;
  FeatureConfig features;  // without resources
  ResourceSpec resources;
  bool sentiment_on_predicted_targets = false;
};

// Throws DataError when the metadata is not a model description.
ModelDescription parse_model_metadata(std::string_view metadata);

struct PipelineModels {
  CrfModel target;
  CrfModel sentiment;

  bool operator==(const PipelineModels&) const = default;
};

// Training sequences for one task under the config's schemes. Sentiment
// sequences mark ambiguous spans E=O and S=NEUTRAL.
std::vector<LabeledSequence> target_training_data(const Corpus& corpus,
                                                  const PipelineConfig& cfg);
std::vector<LabeledSequence> sentiment_training_data(
    const Corpus& corpus, const PipelineConfig& cfg,
    const CrfModel* target_model = nullptr);

// One model of the pair. The sentiment model reads target labels from
// `target_model` when given, gold ones otherwise. Throws DataError when the
// sentiment training data has no POS or NEG target tokens.
CrfModel train_model(Task task, const Corpus& train, const PipelineConfig& cfg,
                     const CrfModel* target_model = nullptr);

// Both models; metadata records cfg and `resources`.
PipelineModels train_pipeline(const Corpus& train, const PipelineConfig& cfg,
                              const ResourceSpec& resources = {});

// Intermediate state of one pipelined prediction.
struct PostDecoding {
  TokenSequence target_tokens;
  LabelSequence target_labels;
  // Sentiment-stage tokens with the target labels carried over to them.
  TokenSequence sentiment_tokens;
  LabelSequence sentiment_target_labels;
  LabelSequence sentiment_labels;
  bool sentiment_skipped = false;
  Prediction prediction;
};

// Throws UsageError when the models were not trained for cfg's schemes.
void check_models(const PipelineModels& models, const PipelineConfig& cfg);

PostDecoding decode_post(const Post& post, const PipelineModels& models,
                         const PipelineConfig& cfg);
Prediction predict_post(const Post& post, const PipelineModels& models,
                        const PipelineConfig& cfg);
// Parallel over posts; output in corpus order.
Predictions predict_corpus(const Corpus& corpus, const PipelineModels& models,
                           const PipelineConfig& cfg);

enum class ExperimentMode {
  kCrf,
  kAllNpMajority,
  kAllNpLexicon,
};

struct ExperimentOptions {
  ExperimentMode mode = ExperimentMode::kCrf;
  bool evaluate_on_test = false;  // default: dev split
  // Lexicon for the lexicon baseline.
  std::shared_ptr<const Lexicon> baseline_lexicon;
  // Written when non-empty.
  std::string predictions_path;
  std::string report_path;
};

struct ExperimentResult {
  EvalReport report;
  Predictions predictions;
  std::optional<PipelineModels> models;
};

ExperimentResult run_experiment(const CorpusSplit& splits,
                                const PipelineConfig& cfg,
                                const ExperimentOptions& options);

// Baseline predictions for a whole corpus.
Predictions baseline_predictions(const Corpus& corpus, SentimentBaseline variant,
                                 const Lexicon* lex = nullptr);

}  // namespace targsent

#endif  // TARGSENT_PIPELINE_HPP_
