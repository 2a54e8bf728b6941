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

// Shared plumbing: error types, seeded randomness, thread fan-out.

#ifndef TARGSENT_COMMON_HPP_
#define TARGSENT_COMMON_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace targsent {

// Malformed or inconsistent input data (files, corpora, models).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated an operation's precondition.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// 64-bit FNV-1a. Stable across platforms; used for seed derivation and
// input digests.
std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Per-component seed derived from a master seed and a component name.
std::uint64_t derive_seed(std::uint64_t master, std::string_view component);

// Seeded generator with platform-independent distributions. The standard
// <random> distributions are implementation-defined, so reproducible runs
// draw through these helpers only.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform();

  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[index(v.size())];
  }

  // Index drawn proportionally to non-negative weights.
  std::size_t weighted(const std::vector<double>& weights);

 private:
  std::mt19937_64 engine_;
};

// Worker cap shared by all parallel loops; 0 selects hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for i in [0, n) across worker threads. Work is handed out in
// contiguous blocks; callers needing bit-identical reductions must reduce
// per-index results in index order themselves.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

std::vector<std::string> split(std::string_view s, char delim);
std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Reads a whole file; throws DataError when it cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace targsent

#endif  // TARGSENT_COMMON_HPP_
