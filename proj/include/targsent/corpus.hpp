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

// Annotated posts: data model, line-oriented JSON I/O, validation,
// seeded splitting, and a synthetic corpus generator.

#ifndef TARGSENT_CORPUS_HPP_
#define TARGSENT_CORPUS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace targsent {

enum class Domain { kPolitics, kCulture, kSports, kSynthetic };

// Polarity annotated on a gold target span.
enum class Polarity { kPos, kNeg, kAmbig };

enum class SegmentKind { kProclitic, kStem, kEnclitic };

std::string_view to_string(Domain d);
std::string_view to_string(Polarity p);
std::string_view to_string(SegmentKind k);
std::optional<Domain> parse_domain(std::string_view s);
std::optional<Polarity> parse_polarity(std::string_view s);
std::optional<SegmentKind> parse_segment_kind(std::string_view s);

// Dependency head value marking the root of a tree.
inline constexpr int kRootHead = -1;

struct Segment {
  std::string form;
  std::string detailed_pos;
  SegmentKind kind = SegmentKind::kStem;
  bool is_definite_article = false;

  bool operator==(const Segment&) const = default;
};

struct WordAnalysis {
  std::string surface;
  std::string lemma;
  std::string pos;
  std::vector<Segment> segments;
  std::vector<std::string> glosses;
  std::string bpc = "O";
  std::string ner = "O";
  int dep_head = kRootHead;
  std::string dep_rel = "---";

  bool operator==(const WordAnalysis&) const = default;
};

struct TargetSpan {
  int first_word = 0;
  int last_word = 0;
  Polarity polarity = Polarity::kNeg;

  int length() const { return last_word - first_word + 1; }
  bool operator==(const TargetSpan&) const = default;
};

struct Post {
  std::string id;
  Domain domain = Domain::kSynthetic;
  std::vector<WordAnalysis> words;
  std::vector<TargetSpan> gold_targets;

  bool operator==(const Post&) const = default;
};

using Corpus = std::vector<Post>;

// Returns one human-readable description per violated invariant; empty when
// the post is well formed.
std::vector<std::string> validate_post(const Post& post);

// Canonical single-line JSON (sorted keys, no trailing newline).
std::string serialize_post(const Post& post);
// Parses one line. Throws DataError naming the offending field.
Post parse_post(std::string_view line);

// One post per line. Blank lines are skipped. Throws DataError naming the
// line number on malformed records, invalid posts and duplicate ids.
Corpus load_corpus(const std::string& path);
Corpus parse_corpus(std::string_view text);
std::string serialize_corpus(const Corpus& corpus);
void save_corpus(const std::string& path, const Corpus& corpus);

struct SplitRatios {
  double train = 0.8;
  double dev = 0.1;
  double test = 0.1;
};

struct CorpusSplit {
  Corpus train;
  Corpus dev;
  Corpus test;
};

// Deterministic partition. Split sizes are the rounded ratio shares of the
// whole corpus; with `stratified` every domain is spread proportionally
// across the three parts.
CorpusSplit split_corpus(const Corpus& corpus, const SplitRatios& ratios,
                         std::uint64_t seed, bool stratified = true);

}  // namespace targsent

#endif  // TARGSENT_CORPUS_HPP_
