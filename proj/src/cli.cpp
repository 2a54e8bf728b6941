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

#include "targsent/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "targsent/clusters.hpp"
#include "targsent/common.hpp"
#include "targsent/corpus.hpp"
#include "targsent/crf.hpp"
#include "targsent/eval.hpp"
#include "targsent/features.hpp"
#include "targsent/lexicon.hpp"
#include "targsent/morpho.hpp"
#include "targsent/pipeline.hpp"
#include "targsent/synth.hpp"

#ifndef TARGSENT_VERSION
#define TARGSENT_VERSION "0.0.0"
#endif

namespace targsent::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string version_string() {
  return std::string("targsent ") + TARGSENT_VERSION + " (model format " +
         std::to_string(kModelFormatVersion) + ")";
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string file_digest(const std::string& path) {
  return hex64(fnv1a64(read_file(path)));
}

// Per-invocation state, including what the manifest will record.
struct Context {
  std::vector<std::string> args;
  std::string data_dir;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  bool write_manifest = true;
  std::string manifest_path;
  std::string command;
  json config = json::object();
  json derived_seeds = json::object();
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

std::string resolve(const Context& ctx, const std::string& path) {
  if (path.empty() || path == "-") return path;
  fs::path p(path);
  if (p.is_relative() && !ctx.data_dir.empty()) p = fs::path(ctx.data_dir) / p;
  return p.lexically_normal().string();
}

std::string input(Context& ctx, const std::string& path) {
  std::string r = resolve(ctx, path);
  ctx.inputs.push_back(r);
  return r;
}

std::string output(Context& ctx, const std::string& path) {
  std::string r = resolve(ctx, path);
  const fs::path parent = fs::path(r).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  ctx.outputs.push_back(r);
  return r;
}

std::uint64_t component_seed(Context& ctx, const std::string& name) {
  const std::uint64_t s = derive_seed(ctx.seed, name);
  ctx.derived_seeds[name] = s;
  return s;
}

json digests(const std::vector<std::string>& paths) {
  json out = json::array();
  std::set<std::string> seen;
  for (const std::string& p : paths) {
    if (!seen.insert(p).second) continue;
    std::error_code ec;
    const std::string abs = fs::absolute(p, ec).lexically_normal().string();
    out.push_back({{"path", ec ? p : abs},
                   {"fnv1a64", fs::exists(p) ? file_digest(p) : ""}});
  }
  return out;
}

void write_manifest(const Context& ctx, double seconds) {
  if (!ctx.write_manifest || ctx.outputs.empty()) return;
  std::string path = ctx.manifest_path.empty()
                         ? ctx.outputs.front() + ".manifest.json"
                         : resolve(ctx, ctx.manifest_path);
  json m = {
      {"tool", "targsent"},
      {"version", TARGSENT_VERSION},
      {"model_format_version", kModelFormatVersion},
      {"command", ctx.command},
      {"args", ctx.args},
      {"working_directory", fs::current_path().string()},
      {"data_dir", ctx.data_dir},
      {"config", ctx.config},
      {"seed", ctx.seed},
      {"derived_seeds", ctx.derived_seeds},
      {"threads", thread_count()},
      {"inputs", digests(ctx.inputs)},
      {"outputs", digests(ctx.outputs)},
      {"timings", {{"wall_seconds", seconds}}},
  };
  write_file(path, m.dump(2) + "\n");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (const std::string& part : split(s, ','))
    if (!trim(part).empty()) out.emplace_back(trim(part));
  return out;
}

Scheme require_scheme(const std::string& name) {
  auto s = parse_scheme(name);
  if (!s) throw UsageError("unknown scheme '" + name + "'");
  return *s;
}

PipelineScheme require_pipeline_scheme(const std::string& name) {
  auto s = parse_pipeline_scheme(name);
  if (!s) throw UsageError("unknown scheme '" + name + "'");
  return *s;
}

LexiconKind require_lexicon_kind(const std::string& name) {
  auto k = parse_lexicon_kind(name);
  if (!k) throw UsageError("unknown lexicon kind '" + name + "'");
  return *k;
}

// "basic", "best", "all" or a comma-separated family list.
std::set<Family> parse_families(const std::string& spec) {
  if (spec == "basic") return FeatureConfig::basic().families;
  if (spec == "best") return FeatureConfig::best_linguistic().families;
  if (spec == "all")
    return std::set<Family>(all_families().begin(), all_families().end());
  std::set<Family> out;
  for (const std::string& name : split_list(spec)) {
    auto f = parse_family(name);
    if (!f) throw UsageError("unknown feature family '" + name + "'");
    out.insert(*f);
  }
  if (out.empty()) throw UsageError("empty feature family list");
  return out;
}

// "kind:path" lexicon arguments.
ResourceSpec parse_resource_spec(Context& ctx, const std::vector<std::string>& lexicons,
                                 double threshold, const std::string& clusters) {
  ResourceSpec spec;
  spec.lexicon_threshold = threshold;
  for (const std::string& arg : lexicons) {
    const auto colon = arg.find(':');
    if (colon == std::string::npos)
      throw UsageError("lexicon argument '" + arg + "' is not kind:path");
    spec.lexicons.emplace_back(require_lexicon_kind(arg.substr(0, colon)),
                               input(ctx, arg.substr(colon + 1)));
  }
  if (!clusters.empty()) spec.clusters = input(ctx, clusters);
  return spec;
}

struct FeatureArgs {
  std::string families = "basic";
  int window = 2;
  int dep_window = 4;
  std::vector<std::string> lexicons;
  double threshold = 0.2;
  std::string clusters;
  bool conjunctions = false;
  double sigma = 1.0;
  int max_iters = 300;
  int min_count = 1;

  void add_to(CLI::App* app) {
    app->add_option("--features", families,
                    "basic | best | all | comma-separated families");
    app->add_option("--window", window, "context window of word features");
    app->add_option("--dep-window", dep_window, "context window of dependency features");
    app->add_option("--lexicon", lexicons, "lexicon as kind:path (prior|scored|gloss)");
    app->add_option("--threshold", threshold, "subjectivity threshold of scored lexicons");
    app->add_option("--clusters", clusters, "word cluster TSV");
    app->add_flag("--conjunctions", conjunctions,
                  "conjoin observations with the previous label");
    app->add_option("--sigma", sigma, "L2 prior standard deviation");
    app->add_option("--max-iters", max_iters, "L-BFGS iteration cap");
    app->add_option("--min-count", min_count, "minimum atom frequency");
  }

  json to_json() const {
    return {{"features", families}, {"window", window}, {"dep_window", dep_window},
            {"lexicons", lexicons}, {"threshold", threshold}, {"clusters", clusters},
            {"conjunctions", conjunctions}, {"sigma", sigma},
            {"max_iters", max_iters}, {"min_count", min_count}};
  }

  // Pipeline config with resources loaded.
  PipelineConfig build(Context& ctx, PipelineScheme scheme, ResourceSpec& spec) const {
    PipelineConfig cfg;
    cfg.scheme = scheme;
    FeatureConfig f;
    f.families = parse_families(families);
    f.window_default = window;
    f.window_dependency = dep_window;
    f.label_conjunctions = conjunctions;
    if (window < 0 || dep_window < 0) throw UsageError("windows must be non-negative");
    cfg.target_features = f;
    cfg.sentiment_features = f;
    TrainConfig t;
    t.l2_sigma = sigma;
    t.max_iters = max_iters;
    t.min_feature_count = min_count;
    t.label_conjunctions = conjunctions;
    if (!(sigma > 0)) throw UsageError("--sigma must be positive");
    cfg.target_train = t;
    cfg.sentiment_train = t;
    spec = parse_resource_spec(ctx, lexicons, threshold, clusters);
    attach_resources(cfg, load_resources(spec));
    return cfg;
  }
};

void print_report(const EvalReport& report, const std::string& title) {
  std::cout << report_table(report, title);
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string out;
  int posts = 200;
  std::optional<std::uint64_t> vocab_seed;
  std::string lexicon_dir;
};

void cmd_synth(Context& ctx, const SynthArgs& a) {
  SynthConfig cfg;
  cfg.n_posts = a.posts;
  cfg.seed = component_seed(ctx, "synth");
  cfg.vocab_seed = a.vocab_seed.value_or(ctx.seed);
  if (a.posts < 1) throw UsageError("--posts must be at least 1");
  ctx.config = {{"posts", a.posts}, {"vocab_seed", cfg.vocab_seed},
                {"lexicon_dir", a.lexicon_dir}};
  auto [corpus, lex] = generate_synthetic(cfg);
  save_corpus(output(ctx, a.out), corpus);
  if (!a.lexicon_dir.empty()) {
    const SynthLexicons all = synthetic_lexicons(cfg);
    write_file(output(ctx, (fs::path(a.lexicon_dir) / "prior.tsv").string()),
               serialize_lexicon(all.prior_list));
    write_file(output(ctx, (fs::path(a.lexicon_dir) / "scored.tsv").string()),
               serialize_lexicon(all.scored));
    write_file(output(ctx, (fs::path(a.lexicon_dir) / "gloss.tsv").string()),
               serialize_lexicon(all.gloss_keyed));
  }
  long targets = 0;
  for (const Post& p : corpus) targets += static_cast<long>(p.gold_targets.size());
  std::cout << "wrote " << corpus.size() << " posts with " << targets
            << " gold targets\n";
}

struct SplitArgs {
  std::string corpus;
  std::string out_dir;
  std::string ratios = "0.8,0.1,0.1";
  bool random = false;
};

void cmd_split(Context& ctx, const SplitArgs& a) {
  const auto parts = split_list(a.ratios);
  if (parts.size() != 3) throw UsageError("--ratios needs three comma-separated values");
  SplitRatios r;
  try {
    r = {std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2])};
  } catch (const std::exception&) {
    throw UsageError("--ratios values must be numbers");
  }
  ctx.config = {{"ratios", a.ratios}, {"stratified", !a.random}};
  const Corpus corpus = load_corpus(input(ctx, a.corpus));
  const CorpusSplit s = split_corpus(corpus, r, ctx.seed, !a.random);
  ctx.manifest_path = ctx.manifest_path.empty()
                          ? (fs::path(a.out_dir) / "split.manifest.json").string()
                          : ctx.manifest_path;
  save_corpus(output(ctx, (fs::path(a.out_dir) / "train.jsonl").string()), s.train);
  save_corpus(output(ctx, (fs::path(a.out_dir) / "dev.jsonl").string()), s.dev);
  save_corpus(output(ctx, (fs::path(a.out_dir) / "test.jsonl").string()), s.test);
  std::cout << "train " << s.train.size() << "  dev " << s.dev.size() << "  test "
            << s.test.size() << "\n";
}

struct TokenizeArgs {
  std::string corpus;
  std::string scheme = "lemma_d3";
  std::string out;
};

void cmd_tokenize(Context& ctx, const TokenizeArgs& a) {
  const Scheme scheme = require_scheme(a.scheme);
  ctx.config = {{"scheme", to_string(scheme)}};
  const Corpus corpus = load_corpus(input(ctx, a.corpus));
  std::string text;
  for (const Post& p : corpus) {
    text += "# " + p.id + "\n";
    text += dump_tokens(derive_tokens(p, scheme));
    text += "\n";
  }
  if (a.out.empty())
    std::cout << text;
  else
    write_file(output(ctx, a.out), text);
}

struct LexiconCheckArgs {
  std::string path;
  std::string kind = "prior";
  double threshold = 0.2;
};

void cmd_lexicon_check(Context& ctx, const LexiconCheckArgs& a) {
  const Lexicon lex = load_lexicon(input(ctx, a.path), require_lexicon_kind(a.kind),
                                   a.threshold);
  long pos = 0, neg = 0, neutral = 0;
  for (const auto& [key, e] : lex.entries) {
    pos += e.prior == Prior::kPos;
    neg += e.prior == Prior::kNeg;
    neutral += e.prior == Prior::kNeutral;
  }
  std::cout << "kind        " << to_string(lex.kind) << "\n"
            << "entries     " << lex.entries.size() << "\n"
            << "subjective  " << lex.subjective_count() << "\n"
            << "positive    " << pos << "\n"
            << "negative    " << neg << "\n"
            << "neutral     " << neutral << "\n";
}

struct EmbedTrainArgs {
  std::string corpus;
  std::string scheme = "lemma_d3";
  std::string out;
  SkipgramConfig sg;
};

void cmd_embed_train(Context& ctx, EmbedTrainArgs a) {
  const Scheme scheme = require_scheme(a.scheme);
  a.sg.seed = component_seed(ctx, "skipgram");
  ctx.config = {{"scheme", to_string(scheme)}, {"dimension", a.sg.dimension},
                {"window", a.sg.window}, {"negatives", a.sg.negatives},
                {"epochs", a.sg.epochs}, {"initial_step", a.sg.initial_step},
                {"min_count", a.sg.min_count}};
  const Corpus corpus = load_corpus(input(ctx, a.corpus));
  std::vector<std::vector<std::string>> sentences;
  sentences.reserve(corpus.size());
  for (const Post& p : corpus) {
    std::vector<std::string> s;
    for (const Token& t : derive_tokens(p, scheme).tokens) s.push_back(t.repr);
    sentences.push_back(std::move(s));
  }
  EmbeddingTable table = train_skipgram(sentences, a.sg);
  write_file(output(ctx, a.out), serialize_embeddings(table));
  std::cout << "trained " << table.size() << " vectors of dimension "
            << table.dimension() << "\n";
}

void cmd_embed_import(Context& ctx, const std::string& in, const std::string& out) {
  const EmbeddingTable table = load_embeddings(input(ctx, in));
  if (table.duplicate_warnings > 0)
    std::cerr << "warning: " << table.duplicate_warnings
              << " duplicate words; the last vector of each was kept\n";
  write_file(output(ctx, out), serialize_embeddings(table));
  std::cout << "imported " << table.size() << " vectors of dimension "
            << table.dimension() << "\n";
}

struct ClusterArgs {
  std::string embeddings;
  int k = 10;
  int max_iters = 100;
  std::string out;
};

void cmd_cluster(Context& ctx, const ClusterArgs& a) {
  KMeansConfig cfg{a.k, component_seed(ctx, "kmeans"), a.max_iters};
  ctx.config = {{"k", a.k}, {"max_iters", a.max_iters}};
  const EmbeddingTable table = load_embeddings(input(ctx, a.embeddings));
  const ClusterModel model = kmeans_cluster(table, cfg);
  write_file(output(ctx, a.out), serialize_clusters(model));
  std::cout << "k " << model.k << "  words " << model.assignment.size()
            << "  inertia " << model.inertia() << "  iterations "
            << model.inertia_history.size() << "\n";
}

struct TrainArgs {
  std::string task;
  std::string scheme = "lemma_d3";
  std::string train;
  std::string out;
  bool predicted_targets = false;
  std::string target_model;
  FeatureArgs features;
};

void cmd_train(Context& ctx, const TrainArgs& a) {
  auto task = parse_task(a.task);
  if (!task) throw UsageError("--task must be target or sentiment");
  if (a.predicted_targets && a.target_model.empty())
    throw UsageError("--predicted-targets needs --target-model");
  ctx.config = a.features.to_json();
  ctx.config["task"] = a.task;
  ctx.config["scheme"] = a.scheme;
  ctx.config["predicted_targets"] = a.predicted_targets;
  ResourceSpec spec;
  PipelineConfig cfg =
      a.features.build(ctx, require_pipeline_scheme(a.scheme), spec);
  cfg.sentiment_on_predicted_targets = a.predicted_targets;
  const Corpus train = load_corpus(input(ctx, a.train));
  std::optional<CrfModel> target;
  if (a.predicted_targets) {
    target = load_model(input(ctx, a.target_model));
    if (target->task != Task::kTarget)
      throw UsageError("--target-model is not a target model");
  }
  CrfModel model = train_model(*task, train, cfg, target ? &*target : nullptr);
  model.metadata = model_metadata(cfg, *task, spec);
  save_model(output(ctx, a.out), model);
  std::cout << "trained " << to_string(*task) << " model: " << model.num_features()
            << " atoms, " << model.num_parameters() << " parameters\n";
}

// Pipeline config reconstructed from a model pair's metadata.
PipelineConfig config_from_models(Context& ctx, const PipelineModels& models) {
  PipelineConfig cfg;
  for (const CrfModel* m : {&models.target, &models.sentiment}) {
    if (m->metadata.empty())
      throw DataError("model has no metadata; it was not written by this tool");
    ModelDescription d = parse_model_metadata(m->metadata);
    for (const auto& [kind, path] : d.resources.lexicons) ctx.inputs.push_back(path);
    if (!d.resources.clusters.empty()) ctx.inputs.push_back(d.resources.clusters);
    const Resources res = load_resources(d.resources);
    d.features.lexicons = res.lexicons;
    d.features.clusters = res.clusters;
    if (m->task == Task::kTarget) {
      cfg.scheme = d.scheme;
      cfg.target_features = d.features;
    } else {
      cfg.sentiment_features = d.features;
      if (d.scheme == PipelineScheme::kCombinedD3Atb) cfg.scheme = d.scheme;
    }
  }
  return cfg;
}

struct PredictArgs {
  std::string target_model;
  std::string sentiment_model;
  std::string corpus;
  std::string out;
  std::string scheme;
  bool combined = false;
};

void cmd_predict(Context& ctx, const PredictArgs& a) {
  if (a.combined && !a.scheme.empty())
    throw UsageError("--scheme and --combined are mutually exclusive");
  ctx.config = {{"scheme", a.combined ? "combined" : a.scheme}};
  PipelineModels models{load_model(input(ctx, a.target_model)),
                        load_model(input(ctx, a.sentiment_model))};
  PipelineConfig cfg = config_from_models(ctx, models);
  // The requested scheme must agree with what the models were trained on.
  if (a.combined) cfg.scheme = PipelineScheme::kCombinedD3Atb;
  if (!a.scheme.empty()) cfg.scheme = require_pipeline_scheme(a.scheme);
  const Corpus corpus = load_corpus(input(ctx, a.corpus));
  const Predictions preds = predict_corpus(corpus, models, cfg);
  write_file(output(ctx, a.out), serialize_predictions(preds));
  long spans = 0;
  for (const Prediction& p : preds) spans += static_cast<long>(p.spans.size());
  std::cout << "predicted " << spans << " spans over " << preds.size() << " posts\n";
}

struct EvaluateArgs {
  std::string gold;
  std::string predictions;
  std::string report;
  bool overlap = false;
};

void cmd_evaluate(Context& ctx, const EvaluateArgs& a) {
  ctx.config = {{"match", a.overlap ? "mention_overlap" : "subset"}};
  const Corpus gold = load_corpus(input(ctx, a.gold));
  const Predictions preds = load_predictions(input(ctx, a.predictions));
  const EvalReport report =
      score(gold, preds, a.overlap ? MatchMode::kMentionOverlap : MatchMode::kSubset);
  print_report(report, "");
  if (!a.report.empty()) write_file(output(ctx, a.report), report_to_json(report));
}

struct BaselineArgs {
  std::string corpus;
  bool allnp = false;
  bool majority = false;
  std::string lexicon;
  std::string lexicon_kind = "prior";
  double threshold = 0.2;
  std::string out;
  std::string report;
};

void cmd_baseline(Context& ctx, const BaselineArgs& a) {
  if (a.majority && !a.lexicon.empty())
    throw UsageError("choose one of --majority and --lexicon");
  const bool majority = a.lexicon.empty();
  ctx.config = {{"target", "allnp"},
                {"sentiment", majority ? "majority" : "lexicon"},
                {"lexicon_kind", a.lexicon_kind},
                {"threshold", a.threshold}};
  const Corpus corpus = load_corpus(input(ctx, a.corpus));
  std::optional<Lexicon> lex;
  if (!a.lexicon.empty())
    lex = load_lexicon(input(ctx, a.lexicon), require_lexicon_kind(a.lexicon_kind),
                       a.threshold);
  const Predictions preds = baseline_predictions(
      corpus, majority ? SentimentBaseline::kMajority : SentimentBaseline::kLexicon,
      lex ? &*lex : nullptr);
  write_file(output(ctx, a.out), serialize_predictions(preds));
  const EvalReport report = score(corpus, preds);
  print_report(report, majority ? "all-NP + majority" : "all-NP + lexicon");
  if (!a.report.empty()) write_file(output(ctx, a.report), report_to_json(report));
}

struct SigtestArgs {
  std::string gold;
  std::string a;
  std::string b;
  int iters = 10000;
  std::string metrics = "all";
  std::string out;
};

void cmd_sigtest(Context& ctx, const SigtestArgs& s) {
  std::vector<Metric> metrics;
  if (s.metrics == "all") {
    metrics = {Metric::kTargetRecall, Metric::kTargetPrecision, Metric::kTargetF,
               Metric::kFPos, Metric::kFNeg, Metric::kAccSent, Metric::kFAll};
  } else {
    for (const std::string& name : split_list(s.metrics)) {
      auto m = parse_metric(name);
      if (!m) throw UsageError("unknown metric '" + name + "'");
      metrics.push_back(*m);
    }
  }
  if (s.iters < 1) throw UsageError("--iters must be at least 1");
  const std::uint64_t seed = ctx.seed;
  ctx.config = {{"iters", s.iters}, {"metrics", s.metrics}};
  const Corpus gold = load_corpus(input(ctx, s.gold));
  const Predictions pa = load_predictions(input(ctx, s.a));
  const Predictions pb = load_predictions(input(ctx, s.b));
  std::vector<SignificanceResult> results;
  for (Metric m : metrics)
    results.push_back(approx_randomization(pa, pb, gold, m, s.iters, seed));
  const std::string tsv = significance_tsv(results);
  std::cout << tsv;
  if (!s.out.empty()) write_file(output(ctx, s.out), tsv);
}

struct SweepArgs {
  std::string embeddings;
  std::string grid = "10,250,500,8000";
  std::string train;
  std::string dev;
  std::string scheme = "lemma_d3";
  std::string out_dir;
  int kmeans_iters = 100;
  FeatureArgs features;
};

void cmd_sweep_k(Context& ctx, SweepArgs a) {
  std::vector<int> grid;
  for (const std::string& k : split_list(a.grid)) {
    try {
      grid.push_back(std::stoi(k));
    } catch (const std::exception&) {
      throw UsageError("--grid values must be integers");
    }
  }
  if (grid.empty()) throw UsageError("--grid is empty");
  // Clusters on top of the best linguistic set when a lexicon is given.
  if (a.features.families == "basic" && !a.features.lexicons.empty())
    a.features.families = "best";
  ctx.config = a.features.to_json();
  ctx.config["grid"] = a.grid;
  ctx.config["scheme"] = a.scheme;
  ctx.config["kmeans_iters"] = a.kmeans_iters;
  ctx.manifest_path = ctx.manifest_path.empty()
                          ? (fs::path(a.out_dir) / "sweep.manifest.json").string()
                          : ctx.manifest_path;
  ResourceSpec spec;
  PipelineConfig cfg =
      a.features.build(ctx, require_pipeline_scheme(a.scheme), spec);
  cfg.target_features.families.insert(Family::kCluster);
  cfg.sentiment_features.families.insert(Family::kCluster);
  const EmbeddingTable table = load_embeddings(input(ctx, a.embeddings));
  const Corpus train = load_corpus(input(ctx, a.train));
  const Corpus dev = load_corpus(input(ctx, a.dev));
  const std::uint64_t kseed = component_seed(ctx, "kmeans");

  std::string tsv = "k\ttarget_recall\ttarget_precision\ttarget_f\tf_pos\tf_neg\tacc_sent\tf_all\n";
  for (int k : grid) {
    const std::string tag = "k" + std::to_string(k);
    auto clusters = std::make_shared<const ClusterModel>(
        kmeans_cluster(table, {k, kseed, a.kmeans_iters}));
    const std::string cpath =
        output(ctx, (fs::path(a.out_dir) / ("clusters_" + tag + ".tsv")).string());
    write_file(cpath, serialize_clusters(*clusters));
    cfg.target_features.clusters = clusters;
    cfg.sentiment_features.clusters = clusters;
    ResourceSpec kspec = spec;
    kspec.clusters = cpath;
    const PipelineModels models = train_pipeline(train, cfg, kspec);
    const Predictions preds = predict_corpus(dev, models, cfg);
    const EvalReport report = score(dev, preds);
    write_file(output(ctx, (fs::path(a.out_dir) / ("predictions_" + tag + ".tsv")).string()),
               serialize_predictions(preds));
    write_file(output(ctx, (fs::path(a.out_dir) / ("report_" + tag + ".json")).string()),
               report_to_json(report));
    print_report(report, "k = " + std::to_string(k));
    const Metrics& m = report.metrics;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d\t%.6f\t%.6f\t%.6f\t%.6f\t%.6f\t%.6f\t%.6f\n", k,
                  m.target_recall, m.target_precision, m.target_f, m.f_pos, m.f_neg,
                  m.acc_sent, m.f_all);
    tsv += buf;
  }
  write_file(output(ctx, (fs::path(a.out_dir) / "sweep.tsv").string()), tsv);
}

int replay(const std::string& manifest_path, const std::string& data_dir);

int dispatch(std::vector<std::string> args, Context ctx) {
  CLI::App app{"Targeted sentiment analysis: target and polarity CRFs over "
               "morphologically analyzed posts",
               "targsent"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);
  app.fallthrough();
  std::string data_dir = ctx.data_dir;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string manifest;
  app.add_option("--seed", seed, "master seed of every random component");
  app.add_option("--threads", threads, "worker cap; 0 uses all cores");
  app.add_option("--data-dir", data_dir,
                 std::string("directory relative paths resolve against (default $") +
                     kDataDirEnv + ")");
  app.add_option("--manifest", manifest, "where to write the run manifest");

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "generate a synthetic annotated corpus");
  c_synth->add_option("--out", synth.out, "corpus file")->required();
  c_synth->add_option("--posts", synth.posts, "number of posts");
  c_synth->add_option("--vocab-seed", synth.vocab_seed, "vocabulary seed (default --seed)");
  c_synth->add_option("--lexicon-dir", synth.lexicon_dir,
                      "also write the planted lexicon in all three formats");

  SplitArgs split_a;
  auto* c_split = app.add_subcommand("split", "train/dev/test partition");
  c_split->add_option("--corpus", split_a.corpus)->required();
  c_split->add_option("--out-dir", split_a.out_dir)->required();
  c_split->add_option("--ratios", split_a.ratios, "train,dev,test");
  c_split->add_flag("--random", split_a.random, "plain shuffle instead of per-domain");

  TokenizeArgs tok;
  auto* c_tok = app.add_subcommand("tokenize", "dump scheme tokens");
  c_tok->add_option("--corpus", tok.corpus)->required();
  c_tok->add_option("--scheme", tok.scheme, "surface | lemma | lemma_atb | lemma_d3");
  c_tok->add_option("--out", tok.out, "output file (default stdout)");

  LexiconCheckArgs lexc;
  auto* c_lex = app.add_subcommand("lexicon", "lexicon tools");
  c_lex->require_subcommand(1);
  auto* c_lex_check = c_lex->add_subcommand("check", "parse a lexicon and summarize it");
  c_lex_check->add_option("path", lexc.path)->required();
  c_lex_check->add_option("--kind", lexc.kind, "prior | scored | gloss");
  c_lex_check->add_option("--threshold", lexc.threshold);

  EmbedTrainArgs et;
  std::string ei_in, ei_out;
  auto* c_embed = app.add_subcommand("embed", "word embeddings");
  c_embed->require_subcommand(1);
  auto* c_embed_train = c_embed->add_subcommand("train", "skip-gram on a corpus");
  c_embed_train->add_option("--corpus", et.corpus)->required();
  c_embed_train->add_option("--scheme", et.scheme);
  c_embed_train->add_option("--out", et.out)->required();
  c_embed_train->add_option("--dim", et.sg.dimension);
  c_embed_train->add_option("--window", et.sg.window);
  c_embed_train->add_option("--negatives", et.sg.negatives);
  c_embed_train->add_option("--epochs", et.sg.epochs);
  c_embed_train->add_option("--min-count", et.sg.min_count);
  auto* c_embed_import = c_embed->add_subcommand("import", "validate a word2vec text file");
  c_embed_import->add_option("--in", ei_in)->required();
  c_embed_import->add_option("--out", ei_out)->required();

  ClusterArgs cl;
  auto* c_cluster = app.add_subcommand("cluster", "k-means over embeddings");
  c_cluster->add_option("--embeddings", cl.embeddings)->required();
  c_cluster->add_option("--k", cl.k)->required();
  c_cluster->add_option("--max-iters", cl.max_iters);
  c_cluster->add_option("--out", cl.out)->required();

  TrainArgs tr;
  auto* c_train = app.add_subcommand("train", "train one CRF");
  c_train->add_option("--task", tr.task, "target | sentiment")->required();
  c_train->add_option("--scheme", tr.scheme,
                      "surface | lemma | lemma_atb | lemma_d3 | combined");
  c_train->add_option("--train", tr.train, "training corpus")->required();
  c_train->add_option("--out", tr.out, "model file")->required();
  c_train->add_flag("--predicted-targets", tr.predicted_targets,
                    "sentiment: read target labels from --target-model");
  c_train->add_option("--target-model", tr.target_model);
  tr.features.add_to(c_train);

  PredictArgs pr;
  auto* c_predict = app.add_subcommand("predict", "pipelined target and sentiment prediction");
  c_predict->add_option("--target-model", pr.target_model)->required();
  c_predict->add_option("--sentiment-model", pr.sentiment_model)->required();
  c_predict->add_option("--corpus", pr.corpus)->required();
  c_predict->add_option("--out", pr.out)->required();
  c_predict->add_option("--scheme", pr.scheme, "must match the models");
  c_predict->add_flag("--combined", pr.combined, "D3 targets, ATB sentiment");

  EvaluateArgs ev;
  auto* c_eval = app.add_subcommand("evaluate", "score predictions");
  c_eval->add_option("--gold", ev.gold)->required();
  c_eval->add_option("--predictions", ev.predictions)->required();
  c_eval->add_option("--report", ev.report, "JSON report file");
  c_eval->add_flag("--overlap", ev.overlap, "provisional mention-overlap matching");

  BaselineArgs bl;
  auto* c_base = app.add_subcommand("baseline", "all-NP targets with a sentiment baseline");
  c_base->add_option("--corpus", bl.corpus)->required();
  c_base->add_flag("--allnp", bl.allnp, "all nouns and noun phrases as targets (default)");
  c_base->add_flag("--majority", bl.majority, "every target NEG");
  c_base->add_option("--lexicon", bl.lexicon, "lexicon vote per phrase");
  c_base->add_option("--lexicon-kind", bl.lexicon_kind);
  c_base->add_option("--threshold", bl.threshold);
  c_base->add_option("--out", bl.out, "predictions file")->required();
  c_base->add_option("--report", bl.report, "JSON report file");

  SigtestArgs sg;
  auto* c_sig = app.add_subcommand("sigtest", "approximate randomization test");
  c_sig->add_option("--gold", sg.gold)->required();
  c_sig->add_option("--a", sg.a, "system A predictions")->required();
  c_sig->add_option("--b", sg.b, "system B predictions")->required();
  c_sig->add_option("--iters", sg.iters, "shuffles");
  c_sig->add_option("--metric", sg.metrics, "all or comma-separated metric names");
  c_sig->add_option("--out", sg.out, "TSV file");

  SweepArgs sw;
  auto* c_sweep = app.add_subcommand("sweep-k", "metrics against the number of clusters");
  c_sweep->add_option("--embeddings", sw.embeddings)->required();
  c_sweep->add_option("--grid", sw.grid, "comma-separated k values");
  c_sweep->add_option("--train", sw.train)->required();
  c_sweep->add_option("--dev", sw.dev)->required();
  c_sweep->add_option("--scheme", sw.scheme);
  c_sweep->add_option("--out-dir", sw.out_dir)->required();
  c_sweep->add_option("--kmeans-iters", sw.kmeans_iters);
  sw.features.add_to(c_sweep);

  std::string replay_manifest;
  auto* c_replay = app.add_subcommand("replay", "re-run a manifest and verify its outputs");
  c_replay->add_option("manifest", replay_manifest)->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  ctx.data_dir = data_dir;
  ctx.seed = seed;
  ctx.threads = threads;
  if (!manifest.empty()) ctx.manifest_path = manifest;
  set_thread_count(threads);

  if (c_replay->parsed()) return replay(resolve(ctx, replay_manifest), ctx.data_dir);

  const auto start = std::chrono::steady_clock::now();
  if (c_synth->parsed()) {
    ctx.command = "synth";
    cmd_synth(ctx, synth);
  } else if (c_split->parsed()) {
    ctx.command = "split";
    cmd_split(ctx, split_a);
  } else if (c_tok->parsed()) {
    ctx.command = "tokenize";
    cmd_tokenize(ctx, tok);
  } else if (c_lex_check->parsed()) {
    ctx.command = "lexicon check";
    cmd_lexicon_check(ctx, lexc);
  } else if (c_embed_train->parsed()) {
    ctx.command = "embed train";
    cmd_embed_train(ctx, et);
  } else if (c_embed_import->parsed()) {
    ctx.command = "embed import";
    cmd_embed_import(ctx, ei_in, ei_out);
  } else if (c_cluster->parsed()) {
    ctx.command = "cluster";
    cmd_cluster(ctx, cl);
  } else if (c_train->parsed()) {
    ctx.command = "train";
    cmd_train(ctx, tr);
  } else if (c_predict->parsed()) {
    ctx.command = "predict";
    cmd_predict(ctx, pr);
  } else if (c_eval->parsed()) {
    ctx.command = "evaluate";
    cmd_evaluate(ctx, ev);
  } else if (c_base->parsed()) {
    ctx.command = "baseline";
    cmd_baseline(ctx, bl);
  } else if (c_sig->parsed()) {
    ctx.command = "sigtest";
    cmd_sigtest(ctx, sg);
  } else if (c_sweep->parsed()) {
    ctx.command = "sweep-k";
    cmd_sweep_k(ctx, sw);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(ctx, seconds);
  return kExitOk;
}

int guarded(const std::vector<std::string>& args, Context ctx) {
  try {
    return dispatch(args, std::move(ctx));
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}

int replay(const std::string& manifest_path, const std::string& data_dir) {
  json m;
  try {
    m = json::parse(read_file(manifest_path));
  } catch (const json::exception& e) {
    throw DataError(manifest_path + ": " + e.what());
  }
  std::vector<std::string> args;
  std::vector<std::pair<std::string, std::string>> expected;
  std::string wd;
  std::string recorded_dir = data_dir;
  try {
    args = m.at("args").get<std::vector<std::string>>();
    for (const auto& o : m.at("outputs"))
      expected.emplace_back(o.at("path").get<std::string>(),
                            o.at("fnv1a64").get<std::string>());
    wd = m.at("working_directory").get<std::string>();
    recorded_dir = m.at("data_dir").get<std::string>();
  } catch (const json::exception& e) {
    throw DataError(manifest_path + ": not a run manifest: " + e.what());
  }
  const fs::path cwd = fs::current_path();
  fs::current_path(wd);
  Context ctx;
  ctx.data_dir = recorded_dir;
  ctx.write_manifest = false;
  ctx.args = args;
  const int code = guarded(args, ctx);
  fs::current_path(cwd);
  if (code != kExitOk) return code;
  int mismatches = 0;
  for (const auto& [path, digest] : expected) {
    const std::string now = fs::exists(path) ? file_digest(path) : "missing";
    const bool same = now == digest;
    mismatches += !same;
    std::cout << (same ? "identical  " : "DIFFERENT  ") << path << "\n";
  }
  std::cout << (mismatches == 0 ? "replay reproduced all outputs\n"
                                : "replay found differing outputs\n");
  return mismatches == 0 ? kExitOk : kExitData;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  Context ctx;
  ctx.args = args;
  if (const char* dir = std::getenv(kDataDirEnv)) ctx.data_dir = dir;
  return guarded(args, ctx);
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace targsent::cli
