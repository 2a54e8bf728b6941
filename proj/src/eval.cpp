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

#include "targsent/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "targsent/common.hpp"

namespace targsent {

std::string serialize_predictions(const Predictions& preds) {
  std::string out;
  for (const Prediction& p : preds) {
    out += p.post_id;
    for (const TargetSpan& s : p.spans) {
      out += '\t';
      out += std::to_string(s.first_word) + ":" + std::to_string(s.last_word) +
             ":" + std::string(to_string(s.polarity));
    }
    out += '\n';
  }
  return out;
}

Predictions parse_predictions(std::string_view text) {
  Predictions out;
  std::size_t line_no = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++line_no;
    if (trim(raw).empty()) continue;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto cols = split(line, '\t');
    Prediction p;
    p.post_id = cols[0];
    const std::string where = "predictions line " + std::to_string(line_no) + ": ";
    if (p.post_id.empty()) throw DataError(where + "empty post id");
    for (std::size_t i = 1; i < cols.size(); ++i) {
      auto parts = split(cols[i], ':');
      if (parts.size() != 3) throw DataError(where + "bad span '" + cols[i] + "'");
      TargetSpan s;
      try {
        std::size_t used = 0;
        s.first_word = std::stoi(parts[0], &used);
        if (used != parts[0].size()) throw std::invalid_argument("");
        s.last_word = std::stoi(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw DataError(where + "bad span '" + cols[i] + "'");
      }
      auto pol = parse_polarity(parts[2]);
      if (!pol || *pol == Polarity::kAmbig)
        throw DataError(where + "span polarity must be POS or NEG in '" +
                        cols[i] + "'");
      if (s.first_word > s.last_word || s.first_word < 0)
        throw DataError(where + "inverted span '" + cols[i] + "'");
      s.polarity = *pol;
      p.spans.push_back(s);
    }
    out.push_back(std::move(p));
  }
  return out;
}

Predictions load_predictions(const std::string& path) {
  try {
    return parse_predictions(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

namespace {

bool contains(std::span<const std::string> hay, std::span<const std::string> needle) {
  if (needle.size() > hay.size()) return false;
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) !=
         hay.end();
}

// Length of the longest common contiguous run of tokens.
std::size_t common_run(std::span<const std::string> a, std::span<const std::string> b) {
  std::size_t best = 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
      best = std::max(best, cur[j]);
    }
    std::swap(prev, cur);
  }
  return best;
}

double ratio(long num, long den) {
  return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

bool subset_match(std::span<const std::string> pred,
                  std::span<const std::string> gold) {
  if (pred.empty() || gold.empty()) return false;
  return contains(gold, pred) || contains(pred, gold);
}

EvalCounts& EvalCounts::operator+=(const EvalCounts& o) {
  gold += o.gold;
  gold_recalled += o.gold_recalled;
  predicted += o.predicted;
  predicted_correct += o.predicted_correct;
  predicted_polar_scope += o.predicted_polar_scope;
  polar_gold += o.polar_gold;
  sent_pairs += o.sent_pairs;
  sent_correct += o.sent_correct;
  pos_predicted += o.pos_predicted;
  pos_gold += o.pos_gold;
  pos_correct += o.pos_correct;
  neg_predicted += o.neg_predicted;
  neg_gold += o.neg_gold;
  neg_correct += o.neg_correct;
  return *this;
}

PostAlignment align(const Post& post, const std::vector<TargetSpan>& predictions,
                    MatchMode mode) {
  PostAlignment a;
  a.post_id = post.id;
  const int n = static_cast<int>(post.words.size());
  std::vector<std::string> lemmas;
  lemmas.reserve(n);
  for (const WordAnalysis& w : post.words) lemmas.push_back(w.lemma);
  auto tokens = [&](const TargetSpan& s) {
    return std::span<const std::string>(lemmas).subspan(
        s.first_word, static_cast<std::size_t>(s.length()));
  };

  std::set<std::pair<int, int>> seen;
  for (const TargetSpan& s : predictions) {
    if (s.first_word < 0 || s.last_word >= n || s.first_word > s.last_word)
      throw DataError("post '" + post.id + "': predicted span [" +
                      std::to_string(s.first_word) + "," +
                      std::to_string(s.last_word) + "] is outside the post");
    if (seen.insert({s.first_word, s.last_word}).second)
      a.predictions.push_back(s);
  }
  std::stable_sort(a.predictions.begin(), a.predictions.end(),
                   [](const TargetSpan& x, const TargetSpan& y) {
                     return std::pair(x.first_word, x.last_word) <
                            std::pair(y.first_word, y.last_word);
                   });

  const auto& gold = post.gold_targets;
  const std::size_t np = a.predictions.size(), ng = gold.size();
  std::vector<std::vector<bool>> match(np, std::vector<bool>(ng, false));
  for (std::size_t p = 0; p < np; ++p) {
    for (std::size_t g = 0; g < ng; ++g) {
      auto pt = tokens(a.predictions[p]);
      auto gt = tokens(gold[g]);
      match[p][g] = mode == MatchMode::kSubset ? subset_match(pt, gt)
                                               : common_run(pt, gt) > 0;
    }
  }

  EvalCounts& c = a.counts;
  c.gold = static_cast<long>(ng);
  c.predicted = static_cast<long>(np);
  a.prediction_correct.assign(np, false);
  for (std::size_t p = 0; p < np; ++p) {
    for (std::size_t g = 0; g < ng; ++g)
      if (match[p][g]) a.prediction_correct[p] = true;
    c.predicted_correct += a.prediction_correct[p];
  }
  a.gold_recalled.assign(ng, false);
  a.gold_pairing.assign(ng, -1);
  for (std::size_t g = 0; g < ng; ++g) {
    std::size_t best_overlap = 0;
    for (std::size_t p = 0; p < np; ++p) {
      if (!match[p][g]) continue;
      a.gold_recalled[g] = true;
      const std::size_t ov = common_run(tokens(a.predictions[p]), tokens(gold[g]));
      if (a.gold_pairing[g] < 0 || ov > best_overlap) {
        best_overlap = ov;
        a.gold_pairing[g] = static_cast<int>(p);
      }
    }
    c.gold_recalled += a.gold_recalled[g];
    const Polarity gp = gold[g].polarity;
    if (gp == Polarity::kAmbig) {
      a.gold_pairing[g] = -1;
      continue;
    }
    ++c.polar_gold;
    if (!a.gold_recalled[g]) continue;
    const Polarity pp = a.predictions[a.gold_pairing[g]].polarity;
    ++c.sent_pairs;
    c.sent_correct += pp == gp;
    c.pos_gold += gp == Polarity::kPos;
    c.neg_gold += gp == Polarity::kNeg;
    c.pos_predicted += pp == Polarity::kPos;
    c.neg_predicted += pp == Polarity::kNeg;
    c.pos_correct += pp == Polarity::kPos && gp == Polarity::kPos;
    c.neg_correct += pp == Polarity::kNeg && gp == Polarity::kNeg;
  }

  // Predictions that match only ambiguous targets have no scoreable
  // polarity and leave the end-to-end precision denominator.
  long ambiguous_only = 0;
  for (std::size_t p = 0; p < np; ++p) {
    bool any = false, polar = false;
    for (std::size_t g = 0; g < ng; ++g) {
      if (!match[p][g]) continue;
      any = true;
      polar = polar || gold[g].polarity != Polarity::kAmbig;
    }
    ambiguous_only += any && !polar;
  }
  c.predicted_polar_scope = c.predicted - ambiguous_only;
  return a;
}

Metrics metrics_from_counts(const EvalCounts& c) {
  Metrics m;
  m.target_recall = ratio(c.gold_recalled, c.gold);
  m.precision_undefined = c.predicted == 0;
  m.target_precision = ratio(c.predicted_correct, c.predicted);
  m.target_f = harmonic(m.target_precision, m.target_recall);
  m.f_pos = harmonic(ratio(c.pos_correct, c.pos_predicted),
                     ratio(c.pos_correct, c.pos_gold));
  m.f_neg = harmonic(ratio(c.neg_correct, c.neg_predicted),
                     ratio(c.neg_correct, c.neg_gold));
  m.acc_sent = ratio(c.sent_correct, c.sent_pairs);
  m.f_all = harmonic(ratio(c.sent_correct, c.predicted_polar_scope),
                     ratio(c.sent_correct, c.polar_gold));
  return m;
}

namespace {

std::unordered_map<std::string, const Prediction*> index_predictions(
    const Corpus& gold, const Predictions& predictions) {
  std::unordered_map<std::string, const Post*> posts;
  for (const Post& p : gold) posts.emplace(p.id, &p);
  std::unordered_map<std::string, const Prediction*> out;
  for (const Prediction& p : predictions) {
    if (!posts.count(p.post_id))
      throw DataError("prediction for unknown post id '" + p.post_id + "'");
    if (!out.emplace(p.post_id, &p).second)
      throw DataError("duplicate prediction entry for post '" + p.post_id + "'");
  }
  return out;
}

}  // namespace

EvalReport score(const Corpus& gold, const Predictions& predictions,
                 MatchMode mode) {
  const auto by_id = index_predictions(gold, predictions);
  EvalReport report;
  report.posts.resize(gold.size());
  parallel_for(gold.size(), [&](std::size_t i) {
    auto it = by_id.find(gold[i].id);
    static const std::vector<TargetSpan> kNone;
    report.posts[i] = align(gold[i], it == by_id.end() ? kNone : it->second->spans, mode);
  });
  for (const PostAlignment& a : report.posts) report.counts += a.counts;
  report.metrics = metrics_from_counts(report.counts);
  return report;
}

std::string report_to_json(const EvalReport& report, int indent) {
  using nlohmann::json;
  const Metrics& m = report.metrics;
  const EvalCounts& c = report.counts;
  json j;
  j["metrics"] = {{"target_recall", m.target_recall},
                  {"target_precision", m.target_precision},
                  {"target_f", m.target_f},
                  {"f_pos", m.f_pos},
                  {"f_neg", m.f_neg},
                  {"acc_sent", m.acc_sent},
                  {"f_all", m.f_all}};
  j["counts"] = {{"gold", c.gold},
                 {"gold_recalled", c.gold_recalled},
                 {"predicted", c.predicted},
                 {"predicted_correct", c.predicted_correct},
                 {"predicted_polar_scope", c.predicted_polar_scope},
                 {"polar_gold", c.polar_gold},
                 {"sent_pairs", c.sent_pairs},
                 {"sent_correct", c.sent_correct},
                 {"pos_predicted", c.pos_predicted},
                 {"pos_gold", c.pos_gold},
                 {"pos_correct", c.pos_correct},
                 {"neg_predicted", c.neg_predicted},
                 {"neg_gold", c.neg_gold},
                 {"neg_correct", c.neg_correct},
                 {"precision_undefined", m.precision_undefined}};
  json posts = json::array();
  for (const PostAlignment& a : report.posts) {
    json preds = json::array();
    for (std::size_t p = 0; p < a.predictions.size(); ++p)
      preds.push_back({{"first_word", a.predictions[p].first_word},
                       {"last_word", a.predictions[p].last_word},
                       {"polarity", to_string(a.predictions[p].polarity)},
                       {"correct", static_cast<bool>(a.prediction_correct[p])}});
    json golds = json::array();
    for (std::size_t g = 0; g < a.gold_recalled.size(); ++g)
      golds.push_back({{"index", g},
                       {"recalled", static_cast<bool>(a.gold_recalled[g])},
                       {"paired_prediction", a.gold_pairing[g]}});
    posts.push_back({{"id", a.post_id}, {"predictions", preds}, {"gold", golds}});
  }
  j["posts"] = posts;
  return j.dump(indent) + "\n";
}

std::string report_table(const EvalReport& report, std::string_view title) {
  const Metrics& m = report.metrics;
  std::ostringstream out;
  char buf[160];
  if (!title.empty()) out << title << "\n";
  out << "          Target                 | Sentiment\n";
  out << "  Recall  Precision  F-score     | F-pos   F-neg   Acc-sent  F-all\n";
  std::snprintf(buf, sizeof buf,
                "  %6.1f  %9.1f  %7.1f     | %5.1f   %5.1f   %8.1f  %5.1f\n",
                100 * m.target_recall, 100 * m.target_precision, 100 * m.target_f,
                100 * m.f_pos, 100 * m.f_neg, 100 * m.acc_sent, 100 * m.f_all);
  out << buf;
  if (m.precision_undefined) out << "  (no predictions: precision undefined, shown as 0)\n";
  return out.str();
}

Predictions gold_as_predictions(const Corpus& corpus) {
  Predictions out;
  for (const Post& p : corpus) {
    Prediction pred{p.id, p.gold_targets};
    for (TargetSpan& s : pred.spans)
      if (s.polarity == Polarity::kAmbig) s.polarity = Polarity::kNeg;
    out.push_back(std::move(pred));
  }
  return out;
}

std::vector<TargetSpan> baseline_all_np(const Post& post) {
  std::vector<TargetSpan> spans;
  const int n = static_cast<int>(post.words.size());
  int w = 0;
  while (w < n) {
    const std::string& tag = post.words[w].bpc;
    const bool np_start = tag == "B-NP" || tag == "I-NP";
    if (np_start) {
      int end = w + 1;
      while (end < n && post.words[end].bpc == "I-NP") ++end;
      spans.push_back({w, end - 1, Polarity::kNeg});
      w = end;
      continue;
    }
    if (to_lower(post.words[w].pos).rfind("noun", 0) == 0)
      spans.push_back({w, w, Polarity::kNeg});
    ++w;
  }
  return spans;
}

std::vector<TargetSpan> baseline_sentiment(const Post& post,
                                           std::vector<TargetSpan> spans,
                                           SentimentBaseline variant,
                                           const Lexicon* lex) {
  if (variant == SentimentBaseline::kLexicon && lex == nullptr)
    throw UsageError("the lexicon baseline needs a lexicon");
  for (TargetSpan& s : spans)
    s.polarity = variant == SentimentBaseline::kMajority
                     ? Polarity::kNeg
                     : phrase_polarity(post, s, *lex);
  return spans;
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::kTargetRecall: return "target_recall";
    case Metric::kTargetPrecision: return "target_precision";
    case Metric::kTargetF: return "target_f";
    case Metric::kFPos: return "f_pos";
    case Metric::kFNeg: return "f_neg";
    case Metric::kAccSent: return "acc_sent";
    case Metric::kFAll: return "f_all";
  }
  return "f_all";
}

std::optional<Metric> parse_metric(std::string_view s) {
  for (Metric m : {Metric::kTargetRecall, Metric::kTargetPrecision,
                   Metric::kTargetF, Metric::kFPos, Metric::kFNeg,
                   Metric::kAccSent, Metric::kFAll})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

double metric_value(const Metrics& m, Metric which) {
  switch (which) {
    case Metric::kTargetRecall: return m.target_recall;
    case Metric::kTargetPrecision: return m.target_precision;
    case Metric::kTargetF: return m.target_f;
    case Metric::kFPos: return m.f_pos;
    case Metric::kFNeg: return m.f_neg;
    case Metric::kAccSent: return m.acc_sent;
    case Metric::kFAll: return m.f_all;
  }
  return 0.0;
}

double randomization_p_value(const std::vector<double>& null_deltas,
                             double delta_observed) {
  const double threshold = std::abs(delta_observed) - 1e-12;
  long hits = 0;
  for (double d : null_deltas) hits += std::abs(d) >= threshold;
  return static_cast<double>(hits + 1) / static_cast<double>(null_deltas.size() + 1);
}

SignificanceResult approx_randomization(const Predictions& a,
                                        const Predictions& b,
                                        const Corpus& gold, Metric metric,
                                        int iterations, std::uint64_t seed) {
  if (iterations < 1) throw UsageError("randomization needs at least one iteration");
  const auto ia = index_predictions(gold, a);
  const auto ib = index_predictions(gold, b);
  std::set<std::string> ids_a, ids_b;
  for (const auto& [id, p] : ia) ids_a.insert(id);
  for (const auto& [id, p] : ib) ids_b.insert(id);
  if (ids_a != ids_b)
    throw DataError("the two systems do not cover the same posts");

  const std::size_t n = gold.size();
  std::vector<EvalCounts> ca(n), cb(n);
  static const std::vector<TargetSpan> kNone;
  for (std::size_t i = 0; i < n; ++i) {
    auto pa = ia.find(gold[i].id);
    auto pb = ib.find(gold[i].id);
    ca[i] = align(gold[i], pa == ia.end() ? kNone : pa->second->spans).counts;
    cb[i] = align(gold[i], pb == ib.end() ? kNone : pb->second->spans).counts;
  }
  auto delta_of = [&](const std::vector<bool>& swap) {
    EvalCounts sa, sb;
    for (std::size_t i = 0; i < n; ++i) {
      sa += swap[i] ? cb[i] : ca[i];
      sb += swap[i] ? ca[i] : cb[i];
    }
    return metric_value(metrics_from_counts(sa), metric) -
           metric_value(metrics_from_counts(sb), metric);
  };

  SignificanceResult r;
  r.metric = metric;
  r.iterations = iterations;
  r.seed = seed;
  r.delta_observed = delta_of(std::vector<bool>(n, false));
  r.null_deltas.assign(static_cast<std::size_t>(iterations), 0.0);
  const std::uint64_t base = derive_seed(seed, "approx_randomization");
  parallel_for(static_cast<std::size_t>(iterations), [&](std::size_t it) {
    Rng rng(mix64(base + it));
    std::vector<bool> swap(n);
    for (std::size_t i = 0; i < n; ++i) swap[i] = (rng.next() >> 63) != 0;
    r.null_deltas[it] = std::abs(delta_of(swap));
  });
  r.p_value = randomization_p_value(r.null_deltas, r.delta_observed);
  return r;
}

std::string significance_tsv(const std::vector<SignificanceResult>& results) {
  std::string out = "metric\tdelta_observed\tp\tR\tseed\n";
  char buf[128];
  for (const auto& r : results) {
    std::snprintf(buf, sizeof buf, "%s\t%.6f\t%.6g\t%d\t%llu\n",
                  std::string(to_string(r.metric)).c_str(), r.delta_observed,
                  r.p_value, r.iterations,
                  static_cast<unsigned long long>(r.seed));
    out += buf;
  }
  return out;
}

}  // namespace targsent
