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

#include "targsent/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "targsent/common.hpp"

namespace targsent {

using nlohmann::json;

std::string_view to_string(Domain d) {
  switch (d) {
    case Domain::kPolitics: return "politics";
    case Domain::kCulture: return "culture";
    case Domain::kSports: return "sports";
    case Domain::kSynthetic: return "synthetic";
  }
  return "synthetic";
}

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::kPos: return "POS";
    case Polarity::kNeg: return "NEG";
    case Polarity::kAmbig: return "AMBIG";
  }
  return "AMBIG";
}

std::string_view to_string(SegmentKind k) {
  switch (k) {
    case SegmentKind::kProclitic: return "PROCLITIC";
    case SegmentKind::kStem: return "STEM";
    case SegmentKind::kEnclitic: return "ENCLITIC";
  }
  return "STEM";
}

std::optional<Domain> parse_domain(std::string_view s) {
  for (Domain d : {Domain::kPolitics, Domain::kCulture, Domain::kSports,
                   Domain::kSynthetic})
    if (to_string(d) == s) return d;
  return std::nullopt;
}

std::optional<Polarity> parse_polarity(std::string_view s) {
  for (Polarity p : {Polarity::kPos, Polarity::kNeg, Polarity::kAmbig})
    if (to_string(p) == s) return p;
  return std::nullopt;
}

std::optional<SegmentKind> parse_segment_kind(std::string_view s) {
  for (SegmentKind k :
       {SegmentKind::kProclitic, SegmentKind::kStem, SegmentKind::kEnclitic})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

std::vector<std::string> validate_post(const Post& post) {
  std::vector<std::string> out;
  const int n = static_cast<int>(post.words.size());
  if (post.id.empty()) out.push_back("post id is empty");

  for (std::size_t t = 0; t < post.gold_targets.size(); ++t) {
    const TargetSpan& s = post.gold_targets[t];
    std::ostringstream where;
    where << "gold_targets[" << t << "] [" << s.first_word << ","
          << s.last_word << "]";
    if (s.first_word > s.last_word) {
      out.push_back(where.str() + ": first_word > last_word");
    } else if (s.first_word < 0 || s.last_word >= n) {
      out.push_back(where.str() + ": references a word outside [0," +
                    std::to_string(n) + ")");
    }
  }

  bool heads_ok = true;
  for (int i = 0; i < n; ++i) {
    const WordAnalysis& w = post.words[i];
    const std::string where = "words[" + std::to_string(i) + "]";
    if (w.dep_head != kRootHead && (w.dep_head < 0 || w.dep_head >= n)) {
      out.push_back(where + ": dep_head " + std::to_string(w.dep_head) +
                    " is neither a word index nor ROOT");
      heads_ok = false;
    } else if (w.dep_head == i) {
      out.push_back(where + ": word is its own dependency head");
      heads_ok = false;
    }

    int stems = 0;
    bool seen_stem = false;
    bool order_ok = true;
    for (const Segment& seg : w.segments) {
      if (seg.kind == SegmentKind::kStem) {
        ++stems;
        seen_stem = true;
      } else if (seg.kind == SegmentKind::kProclitic && seen_stem) {
        order_ok = false;
      } else if (seg.kind == SegmentKind::kEnclitic && !seen_stem) {
        order_ok = false;
      }
      if (seg.is_definite_article && seg.kind != SegmentKind::kProclitic)
        out.push_back(where + ": definite article segment '" + seg.form +
                      "' is not a proclitic");
    }
    if (stems != 1)
      out.push_back(where + ": expected exactly one STEM segment, found " +
                    std::to_string(stems));
    else if (!order_ok)
      out.push_back(where +
                    ": proclitics must precede and enclitics follow the stem");
  }

  if (heads_ok) {
    std::set<int> cyclic;
    for (int i = 0; i < n; ++i) {
      int cur = i;
      int steps = 0;
      while (cur != kRootHead && steps <= n) {
        cur = post.words[cur].dep_head;
        ++steps;
      }
      if (cur != kRootHead) cyclic.insert(i);
    }
    if (!cyclic.empty()) {
      std::vector<std::string> ids;
      for (int i : cyclic) ids.push_back(std::to_string(i));
      out.push_back("dependency heads never reach ROOT from words {" +
                    join(ids, ",") + "}");
    }
  }
  return out;
}

namespace {

json to_json(const Post& post) {
  json words = json::array();
  for (const WordAnalysis& w : post.words) {
    json segs = json::array();
    for (const Segment& s : w.segments) {
      segs.push_back({{"form", s.form},
                      {"detailed_pos", s.detailed_pos},
                      {"kind", to_string(s.kind)},
                      {"is_definite_article", s.is_definite_article}});
    }
    words.push_back({{"surface", w.surface},
                     {"lemma", w.lemma},
                     {"pos", w.pos},
                     {"segments", segs},
                     {"glosses", w.glosses},
                     {"bpc", w.bpc},
                     {"ner", w.ner},
                     {"dep_head", w.dep_head},
                     {"dep_rel", w.dep_rel}});
  }
  json targets = json::array();
  for (const TargetSpan& t : post.gold_targets) {
    targets.push_back({{"first_word", t.first_word},
                       {"last_word", t.last_word},
                       {"polarity", to_string(t.polarity)}});
  }
  return {{"id", post.id},
          {"domain", to_string(post.domain)},
          {"words", words},
          {"gold_targets", targets}};
}

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw DataError("field '" + path + "': expected object");
  auto it = obj.find(key);
  if (it == obj.end())
    throw DataError("field '" + path + "." + key + "': missing");
  return *it;
}

std::string get_string(const json& obj, const char* key,
                       const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_string())
    throw DataError("field '" + path + "." + key + "': expected string");
  return v.get<std::string>();
}

int get_int(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_number_integer())
    throw DataError("field '" + path + "." + key + "': expected integer");
  return v.get<int>();
}

bool get_bool(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_boolean())
    throw DataError("field '" + path + "." + key + "': expected boolean");
  return v.get<bool>();
}

const json& get_array(const json& obj, const char* key,
                      const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_array())
    throw DataError("field '" + path + "." + key + "': expected array");
  return v;
}

Post from_json(const json& j) {
  Post post;
  post.id = get_string(j, "id", "post");
  const std::string domain = get_string(j, "domain", "post");
  auto d = parse_domain(domain);
  if (!d) throw DataError("field 'post.domain': unknown domain '" + domain + "'");
  post.domain = *d;

  const json& words = get_array(j, "words", "post");
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::string path = "words[" + std::to_string(i) + "]";
    const json& jw = words[i];
    WordAnalysis w;
    w.surface = get_string(jw, "surface", path);
    w.lemma = get_string(jw, "lemma", path);
    w.pos = get_string(jw, "pos", path);
    w.bpc = get_string(jw, "bpc", path);
    w.ner = get_string(jw, "ner", path);
    w.dep_head = get_int(jw, "dep_head", path);
    w.dep_rel = get_string(jw, "dep_rel", path);
    const json& glosses = get_array(jw, "glosses", path);
    for (std::size_t g = 0; g < glosses.size(); ++g) {
      if (!glosses[g].is_string())
        throw DataError("field '" + path + ".glosses[" + std::to_string(g) +
                        "]': expected string");
      w.glosses.push_back(glosses[g].get<std::string>());
    }
    const json& segs = get_array(jw, "segments", path);
    for (std::size_t s = 0; s < segs.size(); ++s) {
      const std::string spath = path + ".segments[" + std::to_string(s) + "]";
      Segment seg;
      seg.form = get_string(segs[s], "form", spath);
      seg.detailed_pos = get_string(segs[s], "detailed_pos", spath);
      const std::string kind = get_string(segs[s], "kind", spath);
      auto k = parse_segment_kind(kind);
      if (!k)
        throw DataError("field '" + spath + ".kind': unknown kind '" + kind + "'");
      seg.kind = *k;
      seg.is_definite_article = get_bool(segs[s], "is_definite_article", spath);
      w.segments.push_back(std::move(seg));
    }
    post.words.push_back(std::move(w));
  }

  const json& targets = get_array(j, "gold_targets", "post");
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const std::string path = "gold_targets[" + std::to_string(t) + "]";
    TargetSpan span;
    span.first_word = get_int(targets[t], "first_word", path);
    span.last_word = get_int(targets[t], "last_word", path);
    const std::string pol = get_string(targets[t], "polarity", path);
    auto p = parse_polarity(pol);
    if (!p)
      throw DataError("field '" + path + ".polarity': unknown polarity '" +
                      pol + "'");
    span.polarity = *p;
    post.gold_targets.push_back(span);
  }
  return post;
}

}  // namespace

std::string serialize_post(const Post& post) { return to_json(post).dump(); }

Post parse_post(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
  return from_json(j);
}

Corpus parse_corpus(std::string_view text) {
  Corpus corpus;
  std::unordered_set<std::string> ids;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    Post post;
    try {
      post = parse_post(line);
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
    auto violations = validate_post(post);
    if (!violations.empty())
      throw DataError(where + "post '" + post.id + "': " + violations.front());
    if (!ids.insert(post.id).second)
      throw DataError(where + "duplicate post id '" + post.id + "'");
    corpus.push_back(std::move(post));
  }
  return corpus;
}

Corpus load_corpus(const std::string& path) {
  try {
    return parse_corpus(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string serialize_corpus(const Corpus& corpus) {
  std::string out;
  for (const Post& p : corpus) {
    out += serialize_post(p);
    out += '\n';
  }
  return out;
}

void save_corpus(const std::string& path, const Corpus& corpus) {
  write_file(path, serialize_corpus(corpus));
}

CorpusSplit split_corpus(const Corpus& corpus, const SplitRatios& ratios,
                         std::uint64_t seed, bool stratified) {
  const double r[3] = {ratios.train, ratios.dev, ratios.test};
  for (double x : r)
    if (x < 0.0 || !std::isfinite(x))
      throw UsageError("split ratios must be finite and non-negative");
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9)
    throw UsageError("split ratios must sum to 1");
  const int nonzero = (r[0] > 0) + (r[1] > 0) + (r[2] > 0);
  const std::size_t n = corpus.size();
  if (nonzero == 3 && n < 3)
    throw UsageError("corpus of " + std::to_string(n) +
                     " posts cannot fill three non-empty splits");

  std::size_t n_train = static_cast<std::size_t>(std::llround(r[0] * n));
  std::size_t n_dev = static_cast<std::size_t>(std::llround(r[1] * n));
  n_train = std::min(n_train, n);
  n_dev = std::min(n_dev, n - n_train);
  if (r[2] == 0.0) n_train = n - n_dev;
  if (r[2] == 0.0 && r[1] == 0.0) n_train = n;

  // Strata are shuffled independently, then interleaved by relative rank so
  // any contiguous slice of the order samples each domain proportionally.
  std::map<Domain, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < n; ++i)
    strata[stratified ? corpus[i].domain : Domain::kSynthetic].push_back(i);

  struct Keyed {
    double key;
    int domain;
    std::size_t index;
  };
  std::vector<Keyed> order;
  Rng rng(derive_seed(seed, "split"));
  for (auto& [domain, members] : strata) {
    rng.shuffle(members);
    const double m = static_cast<double>(members.size());
    for (std::size_t k = 0; k < members.size(); ++k)
      order.push_back({(static_cast<double>(k) + 0.5) / m,
                       static_cast<int>(domain), members[k]});
  }
  std::sort(order.begin(), order.end(), [](const Keyed& a, const Keyed& b) {
    if (a.key != b.key) return a.key < b.key;
    return a.domain < b.domain;
  });

  CorpusSplit out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Post& p = corpus[order[k].index];
    if (k < n_train)
      out.train.push_back(p);
    else if (k < n_train + n_dev)
      out.dev.push_back(p);
    else
      out.test.push_back(p);
  }
  return out;
}

}  // namespace targsent
