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

// Per-token feature atoms for the target and sentiment taggers.
//
// Atoms are strings of the form "template:offset=value", e.g. "pos:-1=DET"
// or "deppath:0=nom_obj_vrb". Offsets outside the sequence produce the
// boundary values BOS and EOS.

#ifndef TARGSENT_FEATURES_HPP_
#define TARGSENT_FEATURES_HPP_

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "targsent/clusters.hpp"
#include "targsent/lexicon.hpp"
#include "targsent/morpho.hpp"

namespace targsent {

enum class Family {
  kLexical,
  kPos,
  kLexiconSubj,
  kLexiconPol,
  kLexiconStrength,
  kDepRolePath,
  kDepSentimentPath,
  kParentSentiment,
  kBpc,
  kNer,
  kCluster,
};

std::string_view to_string(Family f);
std::optional<Family> parse_family(std::string_view s);
const std::vector<Family>& all_families();

struct FeatureConfig {
  int window_default = 2;
  int window_dependency = 4;
  std::set<Family> families;
  // At most one lexicon per kind; the first one also colors sentiment paths.
  std::vector<std::shared_ptr<const Lexicon>> lexicons;
  std::shared_ptr<const ClusterModel> clusters;
  // Conjoin every atom with the previous label (observation-dependent
  // transitions). Off: plain label-bigram transitions only.
  bool label_conjunctions = false;

  bool has(Family f) const { return families.count(f) > 0; }

  // Word form and POS only.
  static FeatureConfig basic();
  // Every linguistic family: lexicon, dependency, chunk and NER features.
  static FeatureConfig best_linguistic();
};

// Deduplicated, sorted atoms of one token.
using FeatureVector = std::vector<std::string>;

std::vector<FeatureVector> extract_target_features(const TokenSequence& seq,
                                                   const FeatureConfig& cfg);

// Adds the target-indicator atoms "istarget:o=T|O", lexicon polarity of the
// token and its parent, and sentiment-colored dependency paths.
std::vector<FeatureVector> extract_sentiment_features(
    const TokenSequence& seq, const LabelSequence& target_labels,
    const FeatureConfig& cfg);

// Coarse dependency tag ("nom", "vrb", "prop", "prt", "pnx") of an
// analyzer POS.
std::string coarse_dep_pos(std::string_view pos);

// Edge from a word to its dependency parent.
struct DependencyPath {
  std::string child_pos;
  std::string relation;
  std::string parent_pos;  // "root" for root words

  // "nom_obj_vrb"
  std::string role_path() const;
  // "nom(neutral)_obj_vrb(negative)"; root parents carry no polarity.
  std::string sentiment_path(Prior child, Prior parent) const;
};

// Throws DataError when the head chain from `word` never reaches ROOT.
DependencyPath dependency_paths(const std::vector<WordAnalysis>& words, int word);
DependencyPath dependency_paths(const Post& post, int word);

// Position per line, tab-separated atoms.
std::string dump_features(const std::vector<FeatureVector>& features);

}  // namespace targsent

#endif  // TARGSENT_FEATURES_HPP_
