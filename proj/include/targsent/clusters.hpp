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

// Word vectors and K-Means cluster ids used as dense semantic features.

#ifndef TARGSENT_CLUSTERS_HPP_
#define TARGSENT_CLUSTERS_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "targsent/morpho.hpp"

namespace targsent {

template <typename Scalar>
using RowMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Vocabulary plus one row vector per word.
template <typename Scalar>
struct BasicEmbeddingTable {
  std::vector<std::string> words;
  RowMatrix<Scalar> vectors;
  std::unordered_map<std::string, int> index;
  // Token scheme the keys were produced with, when known.
  std::optional<Scheme> scheme;
  // Lines whose word repeated an earlier one (the later line wins).
  int duplicate_warnings = 0;

  int dimension() const { return static_cast<int>(vectors.cols()); }
  int size() const { return static_cast<int>(words.size()); }
  const Scalar* find(const std::string& w) const {
    auto it = index.find(w);
    return it == index.end() ? nullptr : vectors.row(it->second).data();
  }
};

using EmbeddingTable = BasicEmbeddingTable<double>;

// "<vocab_size> <dimension>" header, then "word v1 ... vd" per line.
EmbeddingTable parse_embeddings(const std::string& text);
EmbeddingTable load_embeddings(const std::string& path);
std::string serialize_embeddings(const EmbeddingTable& table);

struct SkipgramConfig {
  int dimension = 200;
  int window = 5;
  int negatives = 5;
  int epochs = 5;
  double initial_step = 0.025;
  int min_count = 1;
  std::uint64_t seed = 1;
};

// Vocabulary order used by the trainer: descending count, then bytewise.
std::vector<std::string> skipgram_vocabulary(
    const std::vector<std::vector<std::string>>& corpus, int min_count);

// The input vectors a run starts from.
RowMatrix<double> skipgram_initial_vectors(int vocab_size, int dimension,
                                           std::uint64_t seed);

// Skip-gram with negative sampling, single-threaded so runs are
// reproducible for a fixed seed.
EmbeddingTable train_skipgram(const std::vector<std::vector<std::string>>& corpus,
                              const SkipgramConfig& config);

struct ClusterModel {
  int k = 0;
  RowMatrix<double> centroids;  // k x d; empty when loaded from a TSV
  std::unordered_map<std::string, int> assignment;
  std::optional<Scheme> scheme;
  // Inertia after each centroid update.
  std::vector<double> inertia_history;

  double inertia() const {
    return inertia_history.empty() ? 0.0 : inertia_history.back();
  }
};

struct KMeansConfig {
  int k = 10;
  std::uint64_t seed = 1;
  int max_iters = 100;
};

// Lloyd iterations from distance-weighted seeding under Euclidean distance.
// The vocabulary is processed in bytewise order, so results do not depend
// on the order of rows in the table.
ClusterModel kmeans_cluster(const EmbeddingTable& table,
                            const KMeansConfig& config);

// Cluster id of a token keyed by its repr; nullopt for out-of-vocabulary.
std::optional<int> assign_cluster(const ClusterModel& model, const Token& token);

// "word<TAB>cluster_id" lines, sorted by word.
std::string serialize_clusters(const ClusterModel& model);
ClusterModel parse_clusters(const std::string& text);
ClusterModel load_clusters(const std::string& path);

// Sum of squared distances of rows to their nearest of the given centroids.
template <typename Derived, typename OtherDerived>
double nearest_inertia(const Eigen::MatrixBase<Derived>& points,
                       const Eigen::MatrixBase<OtherDerived>& centroids) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    total += (centroids.rowwise() - points.row(i)).rowwise().squaredNorm().minCoeff();
  }
  return total;
}

}  // namespace targsent

#endif  // TARGSENT_CLUSTERS_HPP_
