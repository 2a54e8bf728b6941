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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>

#include "fixtures.hpp"
#include "targsent/common.hpp"
#include "targsent/pipeline.hpp"
#include "targsent/synth.hpp"

using namespace targsent;
using namespace targsent::testing;

namespace {

// "the X is V-ing his country", whole "the X" is the target.
Post opinion_post(const std::string& id, const std::string& noun,
                  const std::string& verb, Polarity pol) {
  std::vector<WordAnalysis> w = {
      word("the", "det", 1, "MOD"),   word(noun, "noun", 3, "SBJ"),
      word("is", "verb", 3, "MOD"),   word(verb, "verb"),
      word("his", "pron", 5, "IDF"), word("country", "noun", 3, "OBJ")};
  return post(id, w, {{0, 1, pol}});
}

Corpus toy_corpus() {
  Corpus c;
  const std::vector<std::string> nouns = {"dictator", "king", "leader", "general",
                                          "regime", "tyrant", "ruler", "chief"};
  int k = 0;
  for (const std::string& n : nouns) {
    c.push_back(opinion_post("d" + std::to_string(k++), n, "destroying", Polarity::kNeg));
    c.push_back(opinion_post("b" + std::to_string(k++), n, "building", Polarity::kPos));
  }
  return c;
}

CorpusSplit synthetic_split(std::uint64_t seed, int n = 200) {
  SynthConfig cfg;
  cfg.seed = seed;
  cfg.n_posts = n;
  return split_corpus(generate_synthetic(cfg).first, {}, seed);
}

PipelineConfig config(PipelineScheme s) {
  PipelineConfig cfg;
  cfg.scheme = s;
  return cfg;
}

// Models that tag every token T, and every target P.
PipelineModels flat_models() {
  return {make_model(Task::kTarget, {}), make_model(Task::kSentiment, {})};
}

}  // namespace

TEST_CASE("toy model recovers the dictator as a negative target") {
  const PipelineConfig cfg = config(PipelineScheme::kLemma);
  const PipelineModels m = train_pipeline(toy_corpus(), cfg);
  const Post p = opinion_post("q", "dictator", "destroying", Polarity::kNeg);
  const Prediction pred = predict_post(p, m, cfg);
  CHECK(pred.spans == std::vector<TargetSpan>{{0, 1, Polarity::kNeg}});
  const Post q = opinion_post("q2", "dictator", "building", Polarity::kPos);
  CHECK(predict_post(q, m, cfg).spans == std::vector<TargetSpan>{{0, 1, Polarity::kPos}});
}

TEST_CASE("training is deterministic") {
  const PipelineConfig cfg = config(PipelineScheme::kLemmaD3);
  const Corpus train = synthetic_split(2, 60).train;
  const PipelineModels a = train_pipeline(train, cfg);
  const PipelineModels b = train_pipeline(train, cfg);
  CHECK(serialize_model(a.target) == serialize_model(b.target));
  CHECK(serialize_model(a.sentiment) == serialize_model(b.sentiment));
  CHECK(predict_corpus(train, a, cfg) == predict_corpus(train, b, cfg));
}

TEST_CASE("a corpus without targets cannot train the sentiment model") {
  Corpus c = toy_corpus();
  for (Post& p : c) p.gold_targets.clear();
  const PipelineConfig cfg = config(PipelineScheme::kLemma);
  CHECK_NOTHROW(train_model(Task::kTarget, c, cfg));
  CHECK_THROWS_AS(train_pipeline(c, cfg), DataError);
  CHECK_THROWS_AS(train_pipeline({}, cfg), UsageError);
}

TEST_CASE("ambiguous targets are T for the target model and neutral for sentiment") {
  Post p = opinion_post("a", "dictator", "destroying", Polarity::kAmbig);
  const PipelineConfig cfg = config(PipelineScheme::kLemma);
  const auto t = target_training_data({p}, cfg);
  CHECK(t[0].labels.labels == std::vector<int>{label::kT, label::kT, label::kO,
                                               label::kO, label::kO, label::kO});
  const auto s = sentiment_training_data({p}, cfg);
  for (int y : s[0].labels.labels) CHECK(y == label::kNeutral);
  for (const auto& fv : s[0].features)
    CHECK(std::find(fv.begin(), fv.end(), "istarget:0=T") == fv.end());
}

TEST_CASE("all-O target output skips the sentiment stage") {
  PipelineModels m = flat_models();
  m.target = make_model(Task::kTarget, {"pos:0=noun", "pos:0=verb", "pos:0=det",
                                        "pos:0=pron"});
  m.target.unary.col(label::kO).setConstant(1.0);
  const PipelineConfig cfg = config(PipelineScheme::kLemma);
  const PostDecoding d = decode_post(toy_corpus()[0], m, cfg);
  CHECK(d.sentiment_skipped);
  CHECK(d.prediction.spans.empty());
}

TEST_CASE("combined scheme fuses the article before the sentiment stage") {
  WordAnalysis w = with_segments(word("dwlp_1", "noun"),
                                 {pro("Al", "det", true), stem("dwlp", "noun")});
  const Post p = post("c", {word("qAl_1", "verb"), w});
  const PipelineModels m = flat_models();
  const PostDecoding d = decode_post(p, m, config(PipelineScheme::kCombinedD3Atb));
  CHECK(d.target_tokens.size() == 3);
  CHECK(d.target_labels.labels == std::vector<int>{label::kT, label::kT, label::kT});
  REQUIRE(d.sentiment_tokens.size() == 2);
  CHECK(d.sentiment_tokens.tokens[1].carries_definite_article);
  CHECK(d.sentiment_target_labels.labels == std::vector<int>{label::kT, label::kT});
  CHECK(d.prediction.spans == std::vector<TargetSpan>{{0, 1, Polarity::kPos}});
}

TEST_CASE("combined target stage equals the plain D3 target stage") {
  const CorpusSplit s = synthetic_split(3, 80);
  PipelineConfig combined = config(PipelineScheme::kCombinedD3Atb);
  const PipelineModels m = train_pipeline(s.train, combined);
  PipelineModels d3 = m;
  d3.sentiment = train_model(Task::kSentiment, s.train, config(PipelineScheme::kLemmaD3));
  for (const Post& p : s.dev) {
    const PostDecoding a = decode_post(p, m, combined);
    const PostDecoding b = decode_post(p, d3, config(PipelineScheme::kLemmaD3));
    CHECK(a.target_labels == b.target_labels);
  }
}

TEST_CASE("scheme mismatch is refused") {
  const Corpus c = toy_corpus();
  const PipelineModels m = train_pipeline(c, config(PipelineScheme::kLemma));
  CHECK_THROWS_AS(predict_post(c[0], m, config(PipelineScheme::kLemmaD3)), UsageError);
  PipelineModels swapped{m.sentiment, m.target};
  CHECK_THROWS_AS(predict_post(c[0], swapped, config(PipelineScheme::kLemma)), UsageError);
}

TEST_CASE("predictions obey the target/sentiment constraint") {
  Rng rng(17);
  const CorpusSplit s = synthetic_split(5, 60);
  const PipelineConfig cfg = config(PipelineScheme::kLemmaD3);
  for (int trial = 0; trial < 5; ++trial) {
    PipelineModels m = train_pipeline(s.train, cfg);
    for (CrfModel* model : {&m.target, &m.sentiment}) {
      Eigen::VectorXd w = model->parameters();
      for (Eigen::Index i = 0; i < w.size(); ++i) w(i) += rng.uniform() * 4 - 2;
      model->set_parameters(w);
    }
    for (const Post& p : s.dev) {
      const PostDecoding d = decode_post(p, m, cfg);
      for (std::size_t i = 0; i < d.sentiment_labels.size(); ++i)
        CHECK((d.sentiment_target_labels.labels[i] == label::kT) ==
              (d.sentiment_labels.labels[i] != label::kNeutral));
      for (const TargetSpan& sp : d.prediction.spans) CHECK(sp.polarity != Polarity::kAmbig);
    }
  }
}

TEST_CASE("model metadata round trip") {
  PipelineConfig cfg = config(PipelineScheme::kCombinedD3Atb);
  cfg.target_features = FeatureConfig::best_linguistic();
  cfg.target_features.window_dependency = 3;
  ResourceSpec spec;
  spec.lexicons = {{LexiconKind::kScored, "lex/scored.tsv"}};
  spec.lexicon_threshold = 0.3;
  const ModelDescription d =
      parse_model_metadata(model_metadata(cfg, Task::kTarget, spec));
  CHECK(d.scheme == PipelineScheme::kCombinedD3Atb);
  CHECK(d.task == Task::kTarget);
  CHECK(d.features.families == cfg.target_features.families);
  CHECK(d.features.window_dependency == 3);
  CHECK(d.resources.lexicons == spec.lexicons);
  CHECK(d.resources.lexicon_threshold == 0.3);
  CHECK_THROWS_AS(parse_model_metadata("not json"), DataError);
  CHECK(parse_pipeline_scheme("d3+atb") == PipelineScheme::kCombinedD3Atb);
  CHECK(parse_pipeline_scheme("lemma_atb") == PipelineScheme::kLemmaAtb);
}

TEST_CASE("experiments over all schemes") {
  const CorpusSplit s = synthetic_split(1);
  for (PipelineScheme sc : {PipelineScheme::kLemma, PipelineScheme::kLemmaAtb,
                            PipelineScheme::kLemmaD3, PipelineScheme::kCombinedD3Atb}) {
    const ExperimentResult r = run_experiment(s, config(sc), {});
    CHECK(r.models.has_value());
    CHECK(r.predictions.size() == s.dev.size());
    CHECK(r.report.metrics.target_f > 0.0);
  }
  ExperimentOptions base;
  base.mode = ExperimentMode::kAllNpMajority;
  const ExperimentResult np = run_experiment(s, config(PipelineScheme::kLemma), base);
  CHECK(np.report.metrics.target_recall == 1.0);
  CHECK(np.report.metrics.f_pos == 0.0);
  CHECK_FALSE(np.models.has_value());

  const auto dir = std::filesystem::temp_directory_path() / "targsent_pipeline_test";
  std::filesystem::create_directories(dir);
  ExperimentOptions files;
  files.predictions_path = (dir / "pred.tsv").string();
  files.report_path = (dir / "report.json").string();
  files.evaluate_on_test = true;
  const ExperimentResult a = run_experiment(s, config(PipelineScheme::kLemmaD3), files);
  const std::string first = read_file(files.report_path);
  run_experiment(s, config(PipelineScheme::kLemmaD3), files);
  CHECK(read_file(files.report_path) == first);
  CHECK(load_predictions(files.predictions_path) == a.predictions);
  CHECK(a.predictions.size() == s.test.size());
  std::filesystem::remove_all(dir);
}
