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

#include "targsent/features.hpp"

#include <algorithm>

#include "targsent/common.hpp"

namespace targsent {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::kLexical: return "lexical";
    case Family::kPos: return "pos";
    case Family::kLexiconSubj: return "lexicon_subj";
    case Family::kLexiconPol: return "lexicon_pol";
    case Family::kLexiconStrength: return "lexicon_strength";
    case Family::kDepRolePath: return "dep_role_path";
    case Family::kDepSentimentPath: return "dep_sentiment_path";
    case Family::kParentSentiment: return "parent_sentiment";
    case Family::kBpc: return "bpc";
    case Family::kNer: return "ner";
    case Family::kCluster: return "cluster";
  }
  return "lexical";
}

const std::vector<Family>& all_families() {
  static const std::vector<Family> kAll = {
      Family::kLexical,         Family::kPos,          Family::kLexiconSubj,
      Family::kLexiconPol,      Family::kLexiconStrength, Family::kDepRolePath,
      Family::kDepSentimentPath, Family::kParentSentiment, Family::kBpc,
      Family::kNer,             Family::kCluster};
  return kAll;
}

std::optional<Family> parse_family(std::string_view s) {
  for (Family f : all_families())
    if (to_string(f) == s) return f;
  return std::nullopt;
}

FeatureConfig FeatureConfig::basic() {
  FeatureConfig cfg;
  cfg.families = {Family::kLexical, Family::kPos};
  return cfg;
}

FeatureConfig FeatureConfig::best_linguistic() {
  FeatureConfig cfg;
  cfg.families = {Family::kLexical,         Family::kPos,
                  Family::kLexiconSubj,     Family::kLexiconPol,
                  Family::kDepRolePath,     Family::kDepSentimentPath,
                  Family::kParentSentiment, Family::kBpc,
                  Family::kNer};
  return cfg;
}

std::string coarse_dep_pos(std::string_view pos) {
  const std::string p = to_lower(pos);
  if (p == "nom" || p == "vrb" || p == "prop" || p == "prt" || p == "pnx" ||
      p == "vrb-pass")
    return p;
  if (p.rfind("verb", 0) == 0) return "vrb";
  if (p == "noun_prop") return "prop";
  if (p == "punc") return "pnx";
  if (p == "prep" || p == "conj" || p == "sub_conj" || p == "part" ||
      p.rfind("part_", 0) == 0 || p == "det" || p == "interj")
    return "prt";
  return "nom";
}

std::string DependencyPath::role_path() const {
  return child_pos + "_" + relation + "_" + parent_pos;
}

std::string DependencyPath::sentiment_path(Prior child, Prior parent) const {
  std::string out = child_pos + "(" + std::string(to_string(child)) + ")_" +
                    relation + "_" + parent_pos;
  if (parent_pos != "root") out += "(" + std::string(to_string(parent)) + ")";
  return out;
}

DependencyPath dependency_paths(const std::vector<WordAnalysis>& words, int word) {
  const int n = static_cast<int>(words.size());
  if (word < 0 || word >= n) throw UsageError("word index out of range");
  int cur = word;
  for (int steps = 0; cur != kRootHead; ++steps) {
    if (steps > n || cur < 0 || cur >= n)
      throw DataError("dependency head chain from word " + std::to_string(word) +
                      " does not reach ROOT");
    cur = words[cur].dep_head;
  }
  const WordAnalysis& w = words[word];
  DependencyPath path;
  path.child_pos = coarse_dep_pos(w.pos);
  path.relation = to_lower(w.dep_rel);
  path.parent_pos =
      w.dep_head == kRootHead ? "root" : coarse_dep_pos(words[w.dep_head].pos);
  return path;
}

DependencyPath dependency_paths(const Post& post, int word) {
  return dependency_paths(post.words, word);
}

namespace {

// One template's per-token values (nullopt: no atom at that position).
struct Column {
  std::string name;
  int window;
  std::vector<std::optional<std::string>> values;
};

std::string offset_string(int o) {
  if (o == 0) return "0";
  return (o > 0 ? "+" : "") + std::to_string(o);
}

Prior effective_prior(const std::optional<LexEntry>& e) {
  if (!e || !e->subjective) return Prior::kNeutral;
  return e->prior;
}

void check_resources(const FeatureConfig& cfg, bool sentiment) {
  if (cfg.window_default < 0 || cfg.window_dependency < 0)
    throw UsageError("feature windows must be non-negative");
  if (cfg.has(Family::kCluster) && !cfg.clusters)
    throw UsageError("cluster features enabled without a cluster model");
  const bool needs_lexicon =
      cfg.has(Family::kLexiconSubj) || cfg.has(Family::kParentSentiment) ||
      cfg.has(Family::kLexiconStrength) ||
      (sentiment && (cfg.has(Family::kLexiconPol) ||
                     cfg.has(Family::kDepSentimentPath)));
  if (needs_lexicon && cfg.lexicons.empty())
    throw UsageError("lexicon features enabled without a lexicon");
  std::set<LexiconKind> kinds;
  for (const auto& lex : cfg.lexicons) {
    if (!lex) throw UsageError("null lexicon in feature config");
    if (!kinds.insert(lex->kind).second)
      throw UsageError("at most one lexicon per kind is supported");
  }
}

std::vector<Column> build_columns(const TokenSequence& seq,
                                  const FeatureConfig& cfg,
                                  const LabelSequence* targets) {
  const bool sentiment = targets != nullptr;
  check_resources(cfg, sentiment);
  const std::size_t n = seq.size();
  const int wd = cfg.window_default;
  const int wp = cfg.window_dependency;
  std::vector<Column> cols;
  // Columns are referenced while later ones are added.
  cols.reserve(64);
  auto column = [&](std::string name, int window) -> Column& {
    cols.push_back({std::move(name), window, {}});
    cols.back().values.resize(n);
    return cols.back();
  };

  if (cfg.has(Family::kLexical)) {
    auto& c = column("repr", wd);
    for (std::size_t i = 0; i < n; ++i) c.values[i] = seq.tokens[i].repr;
  }
  if (cfg.has(Family::kPos)) {
    auto& c = column("pos", wd);
    for (std::size_t i = 0; i < n; ++i) c.values[i] = seq.tokens[i].pos;
  }
  if (cfg.has(Family::kBpc)) {
    auto& c = column("bpc", wd);
    for (std::size_t i = 0; i < n; ++i) c.values[i] = seq.word_of(i).bpc;
  }
  if (cfg.has(Family::kNer)) {
    auto& c = column("ner", wd);
    for (std::size_t i = 0; i < n; ++i) c.values[i] = seq.word_of(i).ner;
  }
  if (cfg.has(Family::kCluster)) {
    auto& c = column("cl", wd);
    for (std::size_t i = 0; i < n; ++i) {
      auto id = assign_cluster(*cfg.clusters, seq.tokens[i]);
      if (id) c.values[i] = std::to_string(*id);
    }
  }
  for (const auto& lex : cfg.lexicons) {
    const std::string kind(to_string(lex->kind));
    std::vector<std::optional<LexEntry>> hits(n);
    for (std::size_t i = 0; i < n; ++i) hits[i] = lookup(*lex, seq.tokens[i]);
    if (cfg.has(Family::kLexiconSubj)) {
      auto& c = column("subj_" + kind, wd);
      for (std::size_t i = 0; i < n; ++i)
        if (hits[i] && hits[i]->subjective) c.values[i] = "1";
    }
    if (sentiment && cfg.has(Family::kLexiconPol)) {
      auto& c = column("pol_" + kind, wd);
      for (std::size_t i = 0; i < n; ++i)
        if (hits[i] && hits[i]->subjective)
          c.values[i] = std::string(to_string(hits[i]->prior));
    }
    if (cfg.has(Family::kLexiconStrength) && lex->kind == LexiconKind::kGlossKeyed) {
      auto& c = column("strength_" + kind, wd);
      for (std::size_t i = 0; i < n; ++i)
        if (hits[i]) c.values[i] = hits[i]->strong ? "strong" : "weak";
    }
  }

  // Dependency families are word-level; clitic tokens inherit them.
  const bool dep_any = cfg.has(Family::kDepRolePath) ||
                       cfg.has(Family::kParentSentiment) ||
                       (sentiment && cfg.has(Family::kDepSentimentPath));
  if (dep_any) {
    const std::size_t nw = seq.words.size();
    std::vector<DependencyPath> paths;
    paths.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w)
      paths.push_back(dependency_paths(seq.words, static_cast<int>(w)));
    auto parent_of = [&](int w) -> const WordAnalysis* {
      const int h = seq.words[w].dep_head;
      return h == kRootHead ? nullptr : &seq.words[h];
    };
    if (cfg.has(Family::kDepRolePath)) {
      auto& role = column("role", wp);
      auto& path = column("deppath", wp);
      for (std::size_t i = 0; i < n; ++i) {
        const int w = seq.alignment[i];
        role.values[i] = seq.words[w].dep_rel;
        path.values[i] = paths[w].role_path();
      }
    }
    if (cfg.has(Family::kParentSentiment)) {
      for (const auto& lex : cfg.lexicons) {
        const std::string kind(to_string(lex->kind));
        auto& psubj = column("psubj_" + kind, wp);
        Column* ppol = sentiment ? &column("ppol_" + kind, wp) : nullptr;
        for (std::size_t i = 0; i < n; ++i) {
          const WordAnalysis* parent = parent_of(seq.alignment[i]);
          if (!parent) continue;
          auto e = lookup(*lex, *parent);
          if (!e || !e->subjective) continue;
          psubj.values[i] = "1";
          if (ppol) ppol->values[i] = std::string(to_string(e->prior));
        }
      }
    }
    if (sentiment && cfg.has(Family::kDepSentimentPath)) {
      const Lexicon& lex = *cfg.lexicons.front();
      auto& c = column("sentpath", wp);
      for (std::size_t i = 0; i < n; ++i) {
        const int w = seq.alignment[i];
        const WordAnalysis* parent = parent_of(w);
        const Prior child = effective_prior(lookup(lex, seq.words[w]));
        const Prior par = parent ? effective_prior(lookup(lex, *parent)) : Prior::kNeutral;
        c.values[i] = paths[w].sentiment_path(child, par);
      }
    }
  }

  if (sentiment) {
    auto& c = column("istarget", wd);
    for (std::size_t i = 0; i < n; ++i)
      c.values[i] = targets->labels[i] == label::kT ? "T" : "O";
  }
  return cols;
}

std::vector<FeatureVector> assemble(const std::vector<Column>& cols, std::size_t n) {
  std::vector<FeatureVector> out(n);
  const int len = static_cast<int>(n);
  for (int i = 0; i < len; ++i) {
    FeatureVector& fv = out[i];
    for (const Column& c : cols) {
      for (int o = -c.window; o <= c.window; ++o) {
        const int j = i + o;
        const std::string prefix = c.name + ":" + offset_string(o) + "=";
        if (j < 0)
          fv.push_back(prefix + "BOS");
        else if (j >= len)
          fv.push_back(prefix + "EOS");
        else if (c.values[j])
          fv.push_back(prefix + *c.values[j]);
      }
    }
    std::sort(fv.begin(), fv.end());
    fv.erase(std::unique(fv.begin(), fv.end()), fv.end());
  }
  return out;
}

}  // namespace

std::vector<FeatureVector> extract_target_features(const TokenSequence& seq,
                                                   const FeatureConfig& cfg) {
  return assemble(build_columns(seq, cfg, nullptr), seq.size());
}

std::vector<FeatureVector> extract_sentiment_features(
    const TokenSequence& seq, const LabelSequence& target_labels,
    const FeatureConfig& cfg) {
  if (target_labels.task != Task::kTarget || target_labels.size() != seq.size())
    throw UsageError("sentiment features need target labels aligned to the tokens");
  return assemble(build_columns(seq, cfg, &target_labels), seq.size());
}

std::string dump_features(const std::vector<FeatureVector>& features) {
  std::string out;
  for (const FeatureVector& fv : features) {
    out += join(fv, "\t");
    out += '\n';
  }
  return out;
}

}  // namespace targsent
