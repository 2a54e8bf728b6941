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

// Linear-chain CRF: feature interning, penalized likelihood and gradient,
// L-BFGS training, masked decoding and a versioned binary model format.

#ifndef TARGSENT_CRF_HPP_
#define TARGSENT_CRF_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "targsent/chain.hpp"
#include "targsent/features.hpp"
#include "targsent/morpho.hpp"

namespace targsent {

inline constexpr std::uint32_t kModelFormatVersion = 1;

struct TrainConfig {
  double l2_sigma = 1.0;
  int max_iters = 300;
  double rel_tolerance = 1e-5;
  int lbfgs_memory = 10;
  int min_feature_count = 1;
  // Observation x previous-label weights in addition to label transitions.
  bool label_conjunctions = false;
};

// One labeled training sequence.
struct LabeledSequence {
  std::vector<FeatureVector> features;
  LabelSequence labels;
};

// Feature ids per position, after interning against a model's alphabet.
using InternedSequence = std::vector<std::vector<int>>;

struct CrfModel {
  Task task = Task::kTarget;
  std::vector<std::string> labels;
  std::vector<std::string> features;
  std::unordered_map<std::string, int> feature_index;
  Eigen::MatrixXd unary;       // features x labels
  Eigen::MatrixXd transition;  // labels x labels, (previous, current)
  Eigen::MatrixXd edge;        // features x labels^2, empty unless conjoined
  bool label_conjunctions = false;
  double l2_sigma = 1.0;
  // Free-form description of how inputs were built (scheme, feature config).
  std::string metadata;

  int num_labels() const { return static_cast<int>(labels.size()); }
  int num_features() const { return static_cast<int>(features.size()); }
  Eigen::Index num_parameters() const;

  // Parameters flattened as [unary | transition | edge], row-major blocks.
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& w);

  // Unseen atoms are dropped.
  InternedSequence intern(const std::vector<FeatureVector>& seq) const;
  ChainPotentials<double> potentials(const InternedSequence& seq) const;

  bool operator==(const CrfModel& o) const;
};

// Zero-weight model over a fixed alphabet.
CrfModel make_model(Task task, std::vector<std::string> features,
                    bool label_conjunctions = false, double l2_sigma = 1.0);

// Alphabet of atoms seen at least `min_count` times, sorted bytewise.
std::vector<std::string> build_alphabet(const std::vector<LabeledSequence>& data,
                                        int min_count);

struct ObjectiveValue {
  double value = 0.0;  // negative penalized log-likelihood
  Eigen::VectorXd gradient;
};

ObjectiveValue objective_and_gradient(const CrfModel& model,
                                      const std::vector<LabeledSequence>& data);
ObjectiveValue objective_and_gradient(
    const CrfModel& model, const std::vector<InternedSequence>& inputs,
    const std::vector<std::vector<int>>& labels);

ChainMarginals<double> forward_backward(const CrfModel& model,
                                        const std::vector<FeatureVector>& seq);

struct TrainResult {
  CrfModel model;
  std::vector<double> objective_history;
  int iterations = 0;
  bool converged = false;
};

TrainResult train_crf(Task task, const std::vector<LabeledSequence>& data,
                      const TrainConfig& config);

LabelSequence viterbi_decode(const CrfModel& model,
                             const std::vector<FeatureVector>& seq,
                             const LabelMask* mask = nullptr);

std::string serialize_model(const CrfModel& model);
CrfModel deserialize_model(std::string_view bytes);
void save_model(const std::string& path, const CrfModel& model);
CrfModel load_model(const std::string& path);

}  // namespace targsent

#endif  // TARGSENT_CRF_HPP_
