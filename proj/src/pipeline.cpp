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

#include "targsent/pipeline.hpp"

#include <algorithm>

#include "json.hpp"
#include "targsent/common.hpp"

namespace targsent {

using nlohmann::json;

std::string_view to_string(PipelineScheme s) {
  switch (s) {
    case PipelineScheme::kSurface: return "surface";
    case PipelineScheme::kLemma: return "lemma";
    case PipelineScheme::kLemmaAtb: return "lemma_atb";
    case PipelineScheme::kLemmaD3: return "lemma_d3";
    case PipelineScheme::kCombinedD3Atb: return "combined";
  }
  return "lemma_d3";
}

std::optional<PipelineScheme> parse_pipeline_scheme(std::string_view s) {
  const std::string l = to_lower(s);
  if (l == "combined" || l == "d3+atb" || l == "combined_d3_atb")
    return PipelineScheme::kCombinedD3Atb;
  auto base = parse_scheme(l);
  if (!base) return std::nullopt;
  switch (*base) {
    case Scheme::kSurface: return PipelineScheme::kSurface;
    case Scheme::kLemma: return PipelineScheme::kLemma;
    case Scheme::kLemmaAtb: return PipelineScheme::kLemmaAtb;
    case Scheme::kLemmaD3: return PipelineScheme::kLemmaD3;
  }
  return std::nullopt;
}

Scheme PipelineConfig::target_scheme() const {
  switch (scheme) {
    case PipelineScheme::kSurface: return Scheme::kSurface;
    case PipelineScheme::kLemma: return Scheme::kLemma;
    case PipelineScheme::kLemmaAtb: return Scheme::kLemmaAtb;
    case PipelineScheme::kLemmaD3:
    case PipelineScheme::kCombinedD3Atb: return Scheme::kLemmaD3;
  }
  return Scheme::kLemmaD3;
}

Scheme PipelineConfig::sentiment_scheme() const {
  return scheme == PipelineScheme::kCombinedD3Atb ? Scheme::kLemmaAtb
                                                  : target_scheme();
}

Resources load_resources(const ResourceSpec& spec) {
  Resources r;
  for (const auto& [kind, path] : spec.lexicons)
    r.lexicons.push_back(std::make_shared<const Lexicon>(
        load_lexicon(path, kind, spec.lexicon_threshold)));
  if (!spec.clusters.empty())
    r.clusters = std::make_shared<const ClusterModel>(load_clusters(spec.clusters));
  return r;
}

void attach_resources(PipelineConfig& cfg, const Resources& res) {
  for (FeatureConfig* f : {&cfg.target_features, &cfg.sentiment_features}) {
    f->lexicons = res.lexicons;
    f->clusters = res.clusters;
  }
}

namespace {

json features_json(const FeatureConfig& f) {
  json fam = json::array();
  for (Family x : f.families) fam.push_back(std::string(to_string(x)));
  return {{"families", fam},
          {"window_default", f.window_default},
          {"window_dependency", f.window_dependency},
          {"label_conjunctions", f.label_conjunctions}};
}

}  // namespace

std::string model_metadata(const PipelineConfig& cfg, Task task,
                           const ResourceSpec& resources) {
  json lex = json::array();
  for (const auto& [kind, path] : resources.lexicons)
    lex.push_back({{"kind", std::string(to_string(kind))}, {"path", path}});
  json j = {
      {"scheme", std::string(to_string(cfg.scheme))},
      {"task", std::string(to_string(task))},
      {"features", features_json(task == Task::kTarget ? cfg.target_features
                                                       : cfg.sentiment_features)},
      {"resources",
       {{"lexicons", lex},
        {"lexicon_threshold", resources.lexicon_threshold},
        {"clusters", resources.clusters}}},
      {"sentiment_on_predicted_targets", cfg.sentiment_on_predicted_targets},
  };
  return j.dump();
}

ModelDescription parse_model_metadata(std::string_view metadata) {
  ModelDescription d;
  try {
    const json j = json::parse(metadata);
    auto scheme = parse_pipeline_scheme(j.at("scheme").get<std::string>());
    auto task = parse_task(j.at("task").get<std::string>());
    if (!scheme || !task) throw DataError("unknown scheme or task");
    d.scheme = *scheme;
    d.task = *task;
    const json& f = j.at("features");
    for (const auto& name : f.at("families")) {
      auto fam = parse_family(name.get<std::string>());
      if (!fam) throw DataError("unknown feature family " + name.dump());
      d.features.families.insert(*fam);
    }
    d.features.window_default = f.at("window_default").get<int>();
    d.features.window_dependency = f.at("window_dependency").get<int>();
    d.features.label_conjunctions = f.at("label_conjunctions").get<bool>();
    const json& r = j.at("resources");
    for (const auto& l : r.at("lexicons")) {
      auto kind = parse_lexicon_kind(l.at("kind").get<std::string>());
      if (!kind) throw DataError("unknown lexicon kind");
      d.resources.lexicons.emplace_back(*kind, l.at("path").get<std::string>());
    }
    d.resources.lexicon_threshold = r.at("lexicon_threshold").get<double>();
    d.resources.clusters = r.at("clusters").get<std::string>();
    d.sentiment_on_predicted_targets =
        j.at("sentiment_on_predicted_targets").get<bool>();
  } catch (const json::exception& e) {
    throw DataError(std::string("model metadata: ") + e.what());
  } catch (const DataError& e) {
    throw DataError(std::string("model metadata: ") + e.what());
  }
  return d;
}

namespace {

// Gold target labels for the sentiment stage: ambiguous spans read as O so
// that the E=T => S in {P,N} constraint holds on training data too.
LabelSequence polar_target_labels(const Post& post, const TokenSequence& seq) {
  Post polar = post;
  std::erase_if(polar.gold_targets, [](const TargetSpan& s) {
    return s.polarity == Polarity::kAmbig;
  });
  return project_gold_labels(polar, seq, Task::kTarget);
}

TrainConfig effective(TrainConfig t, const FeatureConfig& f) {
  t.label_conjunctions = t.label_conjunctions || f.label_conjunctions;
  return t;
}

}  // namespace

std::vector<LabeledSequence> target_training_data(const Corpus& corpus,
                                                  const PipelineConfig& cfg) {
  std::vector<LabeledSequence> data(corpus.size());
  parallel_for(corpus.size(), [&](std::size_t i) {
    const TokenSequence seq = derive_tokens(corpus[i], cfg.target_scheme());
    data[i].features = extract_target_features(seq, cfg.target_features);
    data[i].labels = project_gold_labels(corpus[i], seq, Task::kTarget);
  });
  return data;
}

std::vector<LabeledSequence> sentiment_training_data(const Corpus& corpus,
                                                     const PipelineConfig& cfg,
                                                     const CrfModel* target_model) {
  std::vector<LabeledSequence> data(corpus.size());
  parallel_for(corpus.size(), [&](std::size_t i) {
    const Post& post = corpus[i];
    const TokenSequence seq = derive_tokens(post, cfg.sentiment_scheme());
    LabelSequence e;
    if (target_model != nullptr) {
      const TokenSequence tseq = derive_tokens(post, cfg.target_scheme());
      e = viterbi_decode(*target_model,
                         extract_target_features(tseq, cfg.target_features));
      if (cfg.scheme == PipelineScheme::kCombinedD3Atb)
        e = reduce_d3_to_atb(tseq, e).second;
    } else {
      e = polar_target_labels(post, seq);
    }
    data[i].features = extract_sentiment_features(seq, e, cfg.sentiment_features);
    data[i].labels = project_gold_labels(post, seq, Task::kSentiment);
  });
  return data;
}

CrfModel train_model(Task task, const Corpus& train, const PipelineConfig& cfg,
                     const CrfModel* target_model) {
  if (train.empty()) throw UsageError("training corpus is empty");
  if (task == Task::kTarget)
    return train_crf(Task::kTarget, target_training_data(train, cfg),
                     effective(cfg.target_train, cfg.target_features))
        .model;
  auto data = sentiment_training_data(train, cfg, target_model);
  bool polar = false;
  for (const auto& s : data)
    for (int y : s.labels.labels) polar = polar || y != label::kNeutral;
  if (!polar)
    throw DataError(
        "sentiment training set has no POS or NEG target tokens; the "
        "training corpus needs polar gold targets");
  return train_crf(Task::kSentiment, data,
                   effective(cfg.sentiment_train, cfg.sentiment_features))
      .model;
}

PipelineModels train_pipeline(const Corpus& train, const PipelineConfig& cfg,
                              const ResourceSpec& resources) {
  PipelineModels models;
  models.target = train_model(Task::kTarget, train, cfg);
  models.target.metadata = model_metadata(cfg, Task::kTarget, resources);
  models.sentiment =
      train_model(Task::kSentiment, train, cfg,
                  cfg.sentiment_on_predicted_targets ? &models.target : nullptr);
  models.sentiment.metadata = model_metadata(cfg, Task::kSentiment, resources);
  return models;
}

void check_models(const PipelineModels& models, const PipelineConfig& cfg) {
  if (models.target.task != Task::kTarget)
    throw UsageError("the target model was trained for the sentiment task");
  if (models.sentiment.task != Task::kSentiment)
    throw UsageError("the sentiment model was trained for the target task");
  for (const CrfModel* m : {&models.target, &models.sentiment}) {
    if (m->metadata.empty()) continue;
    const ModelDescription d = parse_model_metadata(m->metadata);
    PipelineConfig probe;
    probe.scheme = d.scheme;
    const Scheme trained = m->task == Task::kTarget ? probe.target_scheme()
                                                    : probe.sentiment_scheme();
    const Scheme wanted = m->task == Task::kTarget ? cfg.target_scheme()
                                                   : cfg.sentiment_scheme();
    if (trained != wanted)
      throw UsageError(std::string("the ") + std::string(to_string(m->task)) +
                       " model was trained on scheme " +
                       std::string(to_string(trained)) + ", not " +
                       std::string(to_string(wanted)));
  }
}

PostDecoding decode_post(const Post& post, const PipelineModels& models,
                         const PipelineConfig& cfg) {
  PostDecoding d;
  d.target_tokens = derive_tokens(post, cfg.target_scheme());
  d.target_labels = viterbi_decode(
      models.target, extract_target_features(d.target_tokens, cfg.target_features));
  if (cfg.scheme == PipelineScheme::kCombinedD3Atb) {
    auto [seq, labels] = reduce_d3_to_atb(d.target_tokens, d.target_labels);
    d.sentiment_tokens = std::move(seq);
    d.sentiment_target_labels = std::move(labels);
  } else {
    d.sentiment_tokens = d.target_tokens;
    d.sentiment_target_labels = d.target_labels;
  }
  const auto& e = d.sentiment_target_labels.labels;
  d.sentiment_skipped =
      std::none_of(e.begin(), e.end(), [](int y) { return y == label::kT; });
  if (d.sentiment_skipped) {
    d.sentiment_labels.task = Task::kSentiment;
    d.sentiment_labels.labels.assign(e.size(), label::kNeutral);
  } else {
    LabelMask mask(e.size());
    for (std::size_t i = 0; i < e.size(); ++i)
      mask[i] = e[i] == label::kT ? (1u << label::kP) | (1u << label::kN)
                                  : 1u << label::kNeutral;
    d.sentiment_labels = viterbi_decode(
        models.sentiment,
        extract_sentiment_features(d.sentiment_tokens, d.sentiment_target_labels,
                                   cfg.sentiment_features),
        &mask);
  }
  d.prediction.post_id = post.id;
  d.prediction.spans = project_word_predictions(
      d.sentiment_tokens, d.sentiment_target_labels, d.sentiment_labels);
  return d;
}

Prediction predict_post(const Post& post, const PipelineModels& models,
                        const PipelineConfig& cfg) {
  check_models(models, cfg);
  return decode_post(post, models, cfg).prediction;
}

Predictions predict_corpus(const Corpus& corpus, const PipelineModels& models,
                           const PipelineConfig& cfg) {
  check_models(models, cfg);
  Predictions out(corpus.size());
  parallel_for(corpus.size(), [&](std::size_t i) {
    out[i] = decode_post(corpus[i], models, cfg).prediction;
  });
  return out;
}

Predictions baseline_predictions(const Corpus& corpus, SentimentBaseline variant,
                                 const Lexicon* lex) {
  Predictions out;
  out.reserve(corpus.size());
  for (const Post& p : corpus)
    out.push_back({p.id, baseline_sentiment(p, baseline_all_np(p), variant, lex)});
  return out;
}

ExperimentResult run_experiment(const CorpusSplit& splits,
                                const PipelineConfig& cfg,
                                const ExperimentOptions& options) {
  const Corpus& eval = options.evaluate_on_test ? splits.test : splits.dev;
  ExperimentResult r;
  switch (options.mode) {
    case ExperimentMode::kCrf:
      r.models = train_pipeline(splits.train, cfg);
      r.predictions = predict_corpus(eval, *r.models, cfg);
      break;
    case ExperimentMode::kAllNpMajority:
      r.predictions = baseline_predictions(eval, SentimentBaseline::kMajority);
      break;
    case ExperimentMode::kAllNpLexicon:
      if (!options.baseline_lexicon)
        throw UsageError("the lexicon baseline needs a lexicon");
      r.predictions = baseline_predictions(eval, SentimentBaseline::kLexicon,
                                           options.baseline_lexicon.get());
      break;
  }
  r.report = score(eval, r.predictions);
  if (!options.predictions_path.empty())
    write_file(options.predictions_path, serialize_predictions(r.predictions));
  if (!options.report_path.empty())
    write_file(options.report_path, report_to_json(r.report));
  return r;
}

}  // namespace targsent
