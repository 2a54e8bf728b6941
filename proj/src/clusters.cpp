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

#include "targsent/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <sstream>

#include "targsent/common.hpp"

namespace targsent {

EmbeddingTable parse_embeddings(const std::string& text) {
  std::vector<std::string> lines = split(text, '\n');
  if (lines.empty() || trim(lines[0]).empty())
    throw DataError("embeddings: missing '<vocab_size> <dimension>' header");
  long declared = -1, dim = -1;
  {
    std::istringstream hs{std::string(trim(lines[0]))};
    std::string extra;
    if (!(hs >> declared >> dim) || (hs >> extra) || declared < 0 || dim <= 0)
      throw DataError("embeddings line 1: malformed header '" + lines[0] + "'");
  }

  EmbeddingTable table;
  std::vector<std::vector<double>> rows;
  long seen = 0;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    std::string_view line = trim(lines[ln]);
    if (line.empty()) continue;
    ++seen;
    const std::string where = "embeddings line " + std::to_string(ln + 1) + ": ";
    std::istringstream ls{std::string(line)};
    std::string word;
    ls >> word;
    std::vector<double> v;
    std::string tok;
    while (ls >> tok) {
      char* end = nullptr;
      const double x = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size())
        throw DataError(where + "'" + tok + "' is not a number");
      if (!std::isfinite(x)) throw DataError(where + "non-finite component");
      v.push_back(x);
    }
    if (static_cast<long>(v.size()) != dim)
      throw DataError(where + "word '" + word + "' has " +
                      std::to_string(v.size()) + " components, expected " +
                      std::to_string(dim));
    auto it = table.index.find(word);
    if (it != table.index.end()) {
      ++table.duplicate_warnings;
      rows[it->second] = std::move(v);
      continue;
    }
    table.index.emplace(word, static_cast<int>(table.words.size()));
    table.words.push_back(word);
    rows.push_back(std::move(v));
  }
  if (seen != declared)
    throw DataError("embeddings: header declares " + std::to_string(declared) +
                    " words but " + std::to_string(seen) + " lines follow");
  table.vectors.resize(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (long c = 0; c < dim; ++c) table.vectors(r, c) = rows[r][c];
  return table;
}

EmbeddingTable load_embeddings(const std::string& path) {
  try {
    return parse_embeddings(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string serialize_embeddings(const EmbeddingTable& table) {
  std::string out = std::to_string(table.size()) + " " +
                    std::to_string(table.dimension()) + "\n";
  char buf[40];
  for (int r = 0; r < table.size(); ++r) {
    out += table.words[r];
    for (int c = 0; c < table.dimension(); ++c) {
      std::snprintf(buf, sizeof buf, " %.9g", table.vectors(r, c));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> skipgram_vocabulary(
    const std::vector<std::vector<std::string>>& corpus, int min_count) {
  std::map<std::string, long> counts;
  for (const auto& sentence : corpus)
    for (const auto& w : sentence) ++counts[w];
  std::vector<std::pair<std::string, long>> items;
  for (auto& [w, c] : counts)
    if (c >= min_count) items.emplace_back(w, c);
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> vocab;
  for (auto& [w, c] : items) vocab.push_back(w);
  return vocab;
}

RowMatrix<double> skipgram_initial_vectors(int vocab_size, int dimension,
                                           std::uint64_t seed) {
  Rng rng(derive_seed(seed, "skipgram.init"));
  RowMatrix<double> m(vocab_size, dimension);
  for (int r = 0; r < vocab_size; ++r)
    for (int c = 0; c < dimension; ++c)
      m(r, c) = (rng.uniform() - 0.5) / dimension;
  return m;
}

EmbeddingTable train_skipgram(const std::vector<std::vector<std::string>>& corpus,
                              const SkipgramConfig& config) {
  if (config.dimension <= 0 || config.window < 1 || config.negatives < 0 ||
      config.epochs < 0 || config.min_count < 1)
    throw UsageError("invalid skip-gram configuration");
  std::size_t total_tokens = 0;
  for (const auto& s : corpus) total_tokens += s.size();
  if (total_tokens == 0) throw UsageError("skip-gram corpus is empty");

  EmbeddingTable table;
  table.words = skipgram_vocabulary(corpus, config.min_count);
  if (table.words.empty())
    throw UsageError("no word reaches min_count " + std::to_string(config.min_count));
  for (std::size_t i = 0; i < table.words.size(); ++i)
    table.index.emplace(table.words[i], static_cast<int>(i));
  const int vocab = table.size();
  const int dim = config.dimension;

  std::vector<std::vector<int>> ids;
  std::vector<double> counts(vocab, 0.0);
  std::size_t train_words = 0;
  for (const auto& s : corpus) {
    std::vector<int> row;
    for (const auto& w : s) {
      auto it = table.index.find(w);
      if (it == table.index.end()) continue;
      row.push_back(it->second);
      counts[it->second] += 1.0;
    }
    train_words += row.size();
    ids.push_back(std::move(row));
  }

  // Noise distribution: unigram counts raised to 3/4.
  std::vector<double> noise_cdf(vocab);
  double acc = 0.0;
  for (int i = 0; i < vocab; ++i) {
    acc += std::pow(counts[i], 0.75);
    noise_cdf[i] = acc;
  }

  RowMatrix<double> input = skipgram_initial_vectors(vocab, dim, config.seed);
  RowMatrix<double> output = RowMatrix<double>::Zero(vocab, dim);
  Eigen::RowVectorXd grad(dim);
  Rng rng(derive_seed(config.seed, "skipgram.train"));

  const double schedule =
      static_cast<double>(config.epochs) * static_cast<double>(train_words) + 1.0;
  std::size_t processed = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (const auto& sentence : ids) {
      const int len = static_cast<int>(sentence.size());
      for (int i = 0; i < len; ++i, ++processed) {
        const double step = config.initial_step *
                            std::max(1e-4, 1.0 - static_cast<double>(processed) / schedule);
        const int reach = config.window - static_cast<int>(rng.index(config.window));
        const int center = sentence[i];
        for (int j = std::max(0, i - reach); j <= std::min(len - 1, i + reach); ++j) {
          if (j == i) continue;
          const int context = sentence[j];
          grad.setZero();
          for (int d = 0; d <= config.negatives; ++d) {
            int target = context;
            double label = 1.0;
            if (d > 0) {
              const double u = rng.uniform() * acc;
              target = static_cast<int>(
                  std::upper_bound(noise_cdf.begin(), noise_cdf.end(), u) -
                  noise_cdf.begin());
              target = std::min(target, vocab - 1);
              if (target == context) continue;
              label = 0.0;
            }
            const double f = input.row(center).dot(output.row(target));
            const double g = (label - 1.0 / (1.0 + std::exp(-f))) * step;
            grad += g * output.row(target);
            output.row(target) += g * input.row(center);
          }
          input.row(center) += grad;
        }
      }
    }
  }
  table.vectors = std::move(input);
  return table;
}

namespace {

// Nearest centroid, ties to the lowest index.
int nearest(const RowMatrix<double>& centroids, const Eigen::RowVectorXd& p,
            double* dist) {
  int best = 0;
  double best_d = (centroids.row(0) - p).squaredNorm();
  for (Eigen::Index c = 1; c < centroids.rows(); ++c) {
    const double d = (centroids.row(c) - p).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  if (dist) *dist = best_d;
  return best;
}

}  // namespace

ClusterModel kmeans_cluster(const EmbeddingTable& table,
                            const KMeansConfig& config) {
  const int n = table.size();
  const int k = config.k;
  if (k < 1 || k > n)
    throw UsageError("k = " + std::to_string(k) + " must lie in [1, " +
                     std::to_string(n) + "]");
  if (config.max_iters < 1) throw UsageError("max_iters must be positive");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return table.words[a] < table.words[b]; });
  RowMatrix<double> points(n, table.dimension());
  for (int i = 0; i < n; ++i) points.row(i) = table.vectors.row(order[i]);

  Rng rng(derive_seed(config.seed, "kmeans.init"));
  RowMatrix<double> centroids(k, points.cols());
  {
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    std::vector<bool> chosen(n, false);
    int pick = static_cast<int>(rng.index(n));
    for (int c = 0; c < k; ++c) {
      if (c > 0) {
        std::vector<double> w(n);
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
          w[i] = chosen[i] ? 0.0 : d2[i];
          total += w[i];
        }
        if (total > 0.0) {
          pick = static_cast<int>(rng.weighted(w));
        } else {
          // All remaining points coincide with a centroid: take any unchosen.
          std::vector<int> free;
          for (int i = 0; i < n; ++i)
            if (!chosen[i]) free.push_back(i);
          pick = free[rng.index(free.size())];
        }
      }
      chosen[pick] = true;
      centroids.row(c) = points.row(pick);
      for (int i = 0; i < n; ++i)
        d2[i] = std::min(d2[i], (points.row(i) - centroids.row(c)).squaredNorm());
    }
  }

  ClusterModel model;
  model.k = k;
  model.scheme = table.scheme;
  std::vector<int> assign(n, -1);
  std::vector<double> dist(n, 0.0);
  for (int iter = 0; iter < config.max_iters; ++iter) {
    bool changed = false;
    std::vector<int> next(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
      next[i] = nearest(centroids, points.row(i), &dist[i]);
    });

    // Repair empty clusters with the point farthest from its centroid.
    std::vector<int> sizes(k, 0);
    for (int c : next) ++sizes[c];
    for (int c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      int far = -1;
      for (int i = 0; i < n; ++i)
        if (sizes[next[i]] > 1 && (far < 0 || dist[i] > dist[far])) far = i;
      if (far < 0) break;
      --sizes[next[far]];
      next[far] = c;
      ++sizes[c];
      dist[far] = 0.0;
      centroids.row(c) = points.row(far);
    }

    for (int i = 0; i < n; ++i) changed = changed || next[i] != assign[i];
    assign = std::move(next);
    if (!changed) break;

    RowMatrix<double> sums = RowMatrix<double>::Zero(k, points.cols());
    for (int i = 0; i < n; ++i) sums.row(assign[i]) += points.row(i);
    for (int c = 0; c < k; ++c)
      centroids.row(c) = sums.row(c) / static_cast<double>(sizes[c]);

    double inertia = 0.0;
    for (int i = 0; i < n; ++i)
      inertia += (points.row(i) - centroids.row(assign[i])).squaredNorm();
    model.inertia_history.push_back(inertia);
  }

  model.centroids = std::move(centroids);
  for (int i = 0; i < n; ++i) model.assignment.emplace(table.words[order[i]], assign[i]);
  return model;
}

std::optional<int> assign_cluster(const ClusterModel& model, const Token& token) {
  auto it = model.assignment.find(token.repr);
  if (it == model.assignment.end()) return std::nullopt;
  return it->second;
}

std::string serialize_clusters(const ClusterModel& model) {
  std::vector<std::pair<std::string, int>> rows(model.assignment.begin(),
                                                model.assignment.end());
  std::sort(rows.begin(), rows.end());
  std::string out;
  for (const auto& [w, c] : rows) out += w + "\t" + std::to_string(c) + "\n";
  return out;
}

ClusterModel parse_clusters(const std::string& text) {
  ClusterModel model;
  std::size_t line_no = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++line_no;
    if (trim(raw).empty()) continue;
    auto cols = split(trim(raw), '\t');
    char* end = nullptr;
    const long id = cols.size() == 2 ? std::strtol(cols[1].c_str(), &end, 10) : -1;
    if (cols.size() != 2 || end != cols[1].c_str() + cols[1].size() || id < 0)
      throw DataError("clusters line " + std::to_string(line_no) +
                      ": expected 'word<TAB>cluster_id'");
    model.assignment[cols[0]] = static_cast<int>(id);
    model.k = std::max(model.k, static_cast<int>(id) + 1);
  }
  return model;
}

ClusterModel load_clusters(const std::string& path) {
  try {
    return parse_clusters(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace targsent
