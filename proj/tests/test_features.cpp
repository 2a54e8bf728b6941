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

#include <algorithm>
#include <memory>
#include <set>

#include "fixtures.hpp"
#include "targsent/common.hpp"
#include "targsent/features.hpp"

using namespace targsent;
using namespace targsent::testing;

namespace {

// intaqad Al+dwlp mSr .   "criticized the state of Egypt"
Post criticism_post() {
  WordAnalysis verb = word("intaqad_1", "verb");
  WordAnalysis state = with_segments(word("dwlp_1", "noun", 0, "OBJ"),
                                     {pro("Al", "DET", true), stem("dwlp", "noun")});
  state.glosses = {"state"};
  WordAnalysis egypt = word("mSr", "noun_prop", 1, "IDF");
  egypt.bpc = "B-NP";
  egypt.ner = "B-LOC";
  state.bpc = "B-NP";
  verb.bpc = "B-VP";
  WordAnalysis dot = word(".", "punc", 0, "MOD");
  return post("f1", {verb, state, egypt, dot});
}

std::shared_ptr<const Lexicon> neg_lexicon() {
  return std::make_shared<Lexicon>(
      parse_lexicon("intaqad_1\tneg\n", LexiconKind::kPriorList));
}

bool has(const FeatureVector& fv, const std::string& atom) {
  return std::binary_search(fv.begin(), fv.end(), atom);
}

LabelSequence target_labels(std::vector<int> l) {
  return {Task::kTarget, std::move(l)};
}

FeatureConfig everything() {
  FeatureConfig cfg = FeatureConfig::best_linguistic();
  cfg.families.insert(Family::kLexiconStrength);
  cfg.lexicons = {neg_lexicon()};
  return cfg;
}

}  // namespace

TEST_CASE("definite article token is visible to its neighbor") {
  const TokenSequence seq = derive_tokens(criticism_post(), Scheme::kLemmaD3);
  REQUIRE(seq.tokens[1].repr == "Al+");
  const auto fv = extract_target_features(seq, FeatureConfig::basic());
  CHECK(has(fv[2], "pos:-1=DET"));
  CHECK(has(fv[2], "repr:0=dwlp_1"));
  CHECK(has(fv[0], "repr:-1=BOS"));
  CHECK(has(fv[0], "repr:-2=BOS"));
  CHECK(has(fv[4], "pos:+1=EOS"));
  CHECK_FALSE(has(fv[2], "repr:-2=BOS"));
}

TEST_CASE("all families off yields empty vectors") {
  const TokenSequence seq = derive_tokens(criticism_post(), Scheme::kLemma);
  FeatureConfig cfg;
  for (const auto& fv : extract_target_features(seq, cfg)) CHECK(fv.empty());
}

TEST_CASE("dependency paths") {
  const Post p = criticism_post();
  CHECK(dependency_paths(p, 1).role_path() == "nom_obj_vrb");
  CHECK(dependency_paths(p, 2).role_path() == "prop_idf_nom");
  CHECK(dependency_paths(p, 0).role_path() == "vrb_---_root");
  const Post idf = noun_post("n", {"a", "b"});
  Post nominal = idf;
  nominal.words[1].dep_rel = "IDF";
  CHECK(dependency_paths(nominal, 1).role_path() == "nom_idf_nom");
  CHECK(dependency_paths(p, 1).sentiment_path(Prior::kNeutral, Prior::kNeg) ==
        "nom(neutral)_obj_vrb(negative)");
  CHECK(dependency_paths(p, 0).sentiment_path(Prior::kNeg, Prior::kPos) ==
        "vrb(negative)_---_root");

  Post cyclic = noun_post("c", {"a", "b", "c"});
  cyclic.words[1].dep_head = 2;
  cyclic.words[2].dep_head = 1;
  CHECK_THROWS_AS(dependency_paths(cyclic, 1), DataError);
}

TEST_CASE("target features carry the dependency path and inherit it on clitics") {
  const TokenSequence seq = derive_tokens(criticism_post(), Scheme::kLemmaD3);
  FeatureConfig cfg = FeatureConfig::best_linguistic();
  cfg.lexicons = {neg_lexicon()};
  const auto fv = extract_target_features(seq, cfg);
  CHECK(has(fv[2], "deppath:0=nom_obj_vrb"));
  CHECK(has(fv[1], "deppath:0=nom_obj_vrb"));
  CHECK(has(fv[2], "role:0=OBJ"));
  CHECK(has(fv[2], "psubj_prior:0=1"));
  CHECK(has(fv[0], "subj_prior:0=1"));
  CHECK(has(fv[2], "subj_prior:-2=1"));
  CHECK(has(fv[3], "ner:0=B-LOC"));
  CHECK(has(fv[1], "bpc:0=B-NP"));
  CHECK(has(fv[1], "deppath:+4=EOS"));
  // Target features never read lexicon polarity.
  for (const auto& v : fv)
    for (const auto& a : v) {
      CHECK(a.rfind("pol_", 0) != 0);
      CHECK(a.rfind("ppol_", 0) != 0);
      CHECK(a.rfind("sentpath", 0) != 0);
      CHECK(a.rfind("istarget", 0) != 0);
    }
}

TEST_CASE("sentiment features add target indicator and polarity paths") {
  const TokenSequence seq = derive_tokens(criticism_post(), Scheme::kLemmaD3);
  FeatureConfig cfg = FeatureConfig::best_linguistic();
  cfg.lexicons = {neg_lexicon()};
  const auto fv =
      extract_sentiment_features(seq, target_labels({1, 0, 0, 0, 1}), cfg);
  CHECK(has(fv[2], "sentpath:0=nom(neutral)_obj_vrb(negative)"));
  CHECK(has(fv[0], "istarget:0=O"));
  CHECK(has(fv[0], "istarget:+2=T"));
  CHECK(has(fv[2], "istarget:0=T"));
  CHECK(has(fv[2], "ppol_prior:0=negative"));
  CHECK(has(fv[0], "pol_prior:0=negative"));
  CHECK_THROWS_AS(extract_sentiment_features(seq, target_labels({1, 0}), cfg),
                  UsageError);
}

TEST_CASE("missing resources are errors") {
  const TokenSequence seq = derive_tokens(criticism_post(), Scheme::kLemma);
  FeatureConfig cfg = FeatureConfig::basic();
  cfg.families.insert(Family::kCluster);
  CHECK_THROWS_AS(extract_target_features(seq, cfg), UsageError);
  cfg = FeatureConfig::best_linguistic();
  CHECK_THROWS_AS(extract_target_features(seq, cfg), UsageError);
  cfg = FeatureConfig::basic();
  cfg.window_default = -1;
  CHECK_THROWS_AS(extract_target_features(seq, cfg), UsageError);
}

TEST_CASE("cluster atoms skip unknown words") {
  const TokenSequence seq = derive_tokens(criticism_post(), Scheme::kLemmaD3);
  FeatureConfig cfg;
  cfg.families = {Family::kCluster};
  cfg.clusters = std::make_shared<ClusterModel>(parse_clusters("dwlp_1\t7\n"));
  const auto fv = extract_target_features(seq, cfg);
  CHECK(has(fv[2], "cl:0=7"));
  CHECK(has(fv[1], "cl:+1=7"));
  CHECK_FALSE(std::any_of(fv[0].begin(), fv[0].end(),
                          [](const std::string& a) { return a.rfind("cl:0=", 0) == 0; }));
}

TEST_CASE("removing a family removes exactly its atoms") {
  const TokenSequence seq = derive_tokens(criticism_post(), Scheme::kLemmaD3);
  const LabelSequence e = target_labels({1, 0, 0, 0, 1});
  const FeatureConfig full = everything();
  const auto all = extract_sentiment_features(seq, e, full);
  for (Family f : full.families) {
    FeatureConfig less = full;
    less.families.erase(f);
    const auto part = extract_sentiment_features(seq, e, less);
    const auto single = [&] {
      FeatureConfig only = full;
      only.families = {f};
      return extract_sentiment_features(seq, e, only);
    }();
    const auto base = [&] {
      FeatureConfig none = full;
      none.families.clear();
      return extract_sentiment_features(seq, e, none);
    }();
    for (std::size_t i = 0; i < seq.size(); ++i) {
      // all \ part == single \ base (the istarget atoms are always present).
      FeatureVector removed, own;
      std::set_difference(all[i].begin(), all[i].end(), part[i].begin(),
                          part[i].end(), std::back_inserter(removed));
      std::set_difference(single[i].begin(), single[i].end(), base[i].begin(),
                          base[i].end(), std::back_inserter(own));
      CHECK_MESSAGE(removed == own, to_string(f));
    }
  }
}

TEST_CASE("window symmetry and determinism") {
  const TokenSequence seq = derive_tokens(criticism_post(), Scheme::kLemmaD3);
  const LabelSequence e = target_labels({1, 0, 0, 0, 1});
  const FeatureConfig cfg = everything();
  const auto fv = extract_sentiment_features(seq, e, cfg);
  CHECK(fv == extract_sentiment_features(seq, e, cfg));
  // "x:+1=v" at i iff "x:0=v" at i+1, and "x:-1=v" at i+1 iff "x:0=v" at i.
  auto shifted = [](const FeatureVector& v, const std::string& from,
                    const std::string& to) {
    std::set<std::string> out;
    for (const std::string& a : v) {
      const auto colon = a.find(':');
      const auto eq = a.find('=');
      if (a.compare(colon + 1, eq - colon - 1, from) == 0)
        out.insert(a.substr(0, colon) + ":" + to + a.substr(eq));
    }
    return out;
  };
  for (std::size_t i = 0; i + 1 < fv.size(); ++i) {
    CHECK(shifted(fv[i], "+1", "0") == shifted(fv[i + 1], "0", "0"));
    CHECK(shifted(fv[i + 1], "-1", "0") == shifted(fv[i], "0", "0"));
  }
  for (const auto& v : fv) {
    CHECK(std::is_sorted(v.begin(), v.end()));
    CHECK(std::adjacent_find(v.begin(), v.end()) == v.end());
  }
}

TEST_CASE("feature dump is one line per position") {
  const std::string dump = dump_features({{"a:0=x", "b:0=y"}, {}});
  CHECK(dump == "a:0=x\tb:0=y\n\n");
}

TEST_CASE("family names round-trip") {
  for (Family f : all_families()) CHECK(parse_family(to_string(f)) == f);
  CHECK_FALSE(parse_family("ngrams").has_value());
}
