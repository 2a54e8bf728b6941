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

#include "targsent/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "targsent/common.hpp"

namespace targsent {

namespace {

struct Lemma {
  std::string stem;   // surface stem form
  std::string lemma;  // lemma id
  std::string gloss;
  std::string ner = "O";
};

struct Opinion {
  std::string stem;
  std::string gloss;
  Prior prior;
  bool strong;
};

const std::vector<Opinion>& opinion_verbs() {
  static const std::vector<Opinion> v = {
      {"ayyad", "support", Prior::kPos, true},
      {"madaH", "praise", Prior::kPos, true},
      {"dAfaE", "defend", Prior::kPos, false},
      {"rah~ab", "welcome", Prior::kPos, false},
      {"{intaqad", "criticize", Prior::kNeg, true},
      {"dAn", "condemn", Prior::kNeg, true},
      {"hAjam", "attack", Prior::kNeg, false},
      {"rafaD", "reject", Prior::kNeg, false},
  };
  return v;
}

const std::vector<Opinion>& opinion_adjectives() {
  static const std::vector<Opinion> v = {
      {"jamiyl", "beautiful", Prior::kPos, false},
      {"EaZiym", "great", Prior::kPos, true},
      {"Eadil", "fair", Prior::kPos, false},
      {"fAsid", "corrupt", Prior::kNeg, true},
      {"say~i}", "bad", Prior::kNeg, false},
      {"DaEiyf", "weak", Prior::kNeg, false},
  };
  return v;
}

// Opinion-bearing but two-sided; kept out of every lexicon.
const std::vector<Lemma>& ambivalent_verbs() {
  static const std::vector<Lemma> v = {
      {"nAqa$", "nAqa$_1", "discuss"},
      {"*akar", "*akar_1", "mention"},
      {"tanAwal", "tanAwal_1", "address"},
  };
  return v;
}

const std::vector<Lemma>& neutral_verbs() {
  static const std::vector<Lemma> v = {
      {"qAl", "qAl_1", "say"},
      {"katab", "katab_1", "write"},
      {">aEolan", ">aEolan_1", "announce"},
      {"{ilotaqaY", "{ilotaqaY_1", "meet"},
      {"zAr", "zAr_1", "visit"},
  };
  return v;
}

struct Vocabulary {
  std::vector<Lemma> nouns;
  std::vector<Lemma> proper;
  std::vector<Lemma> adjectives;
};

std::string pseudo_word(Rng& rng, int syllables, const char* onsets,
                        const char* vowels) {
  const std::string on(onsets), vo(vowels);
  std::string out;
  for (int i = 0; i < syllables; ++i) {
    out += on[rng.index(on.size())];
    out += vo[rng.index(vo.size())];
  }
  out += on[rng.index(on.size())];
  return out;
}

// Distinct invented lemmas; glosses are pseudo-English words.
std::vector<Lemma> invent(Rng& rng, int count, std::set<std::string>& used,
                          const std::string& suffix) {
  std::vector<Lemma> out;
  while (static_cast<int>(out.size()) < count) {
    Lemma l;
    l.stem = pseudo_word(rng, 2 + static_cast<int>(rng.index(2)), "bdfjklmnrstwyzqhx",
                         "aiuAw");
    if (!used.insert(l.stem).second) continue;
    l.lemma = l.stem + suffix;
    l.gloss = pseudo_word(rng, 2, "bcdfglmnprstvz", "aeiou");
    out.push_back(std::move(l));
  }
  return out;
}

Vocabulary make_vocabulary(std::uint64_t vocab_seed) {
  Rng rng(derive_seed(vocab_seed, "synth.vocab"));
  std::set<std::string> used;
  for (const auto& o : opinion_verbs()) used.insert(o.stem);
  for (const auto& o : opinion_adjectives()) used.insert(o.stem);
  for (const auto& l : ambivalent_verbs()) used.insert(l.stem);
  for (const auto& l : neutral_verbs()) used.insert(l.stem);
  Vocabulary v;
  v.nouns = invent(rng, 150, used, "_1");
  v.proper = invent(rng, 24, used, "");
  for (std::size_t i = 0; i < v.proper.size(); ++i)
    v.proper[i].ner = i % 2 == 0 ? "B-PER" : "B-LOC";
  v.adjectives = invent(rng, 16, used, "_1");
  return v;
}

class PostBuilder {
 public:
  PostBuilder(Rng& rng, const Vocabulary& vocab, const SynthConfig& cfg)
      : rng_(rng), vocab_(vocab), cfg_(cfg) {}

  Post finish(std::string id) {
    post_.id = std::move(id);
    post_.domain = Domain::kSynthetic;
    return std::move(post_);
  }

  int size() const { return static_cast<int>(post_.words.size()); }

  int add_verb(const std::string& stem, const std::string& lemma,
               const std::string& gloss, bool conj) {
    WordAnalysis w;
    if (conj) w.segments.push_back({"w", "conj", SegmentKind::kProclitic, false});
    w.segments.push_back({stem, "verb", SegmentKind::kStem, false});
    w.surface = (conj ? "w" : "") + stem;
    w.lemma = lemma;
    w.pos = "verb";
    w.glosses = {gloss};
    w.dep_head = kRootHead;
    w.dep_rel = "---";
    return push(std::move(w));
  }

  int add_opinion_adjective(const Opinion& o, int head, const std::string& rel) {
    WordAnalysis w;
    w.segments.push_back({o.stem, "adj", SegmentKind::kStem, false});
    w.surface = o.stem;
    w.lemma = o.stem + "_1";
    w.pos = "adj";
    w.glosses = {o.gloss};
    w.dep_head = head;
    w.dep_rel = rel;
    return push(std::move(w));
  }

  void add_punct(int head) {
    WordAnalysis w;
    const char* p = rng_.bernoulli(0.8) ? "." : "\xd8\x8c";
    w.segments.push_back({p, "punc", SegmentKind::kStem, false});
    w.surface = p;
    w.lemma = p;
    w.pos = "punc";
    w.glosses = {p};
    w.dep_head = head;
    w.dep_rel = "MOD";
    push(std::move(w));
  }

  // Noun phrase of a head noun, optional genitive noun and optional plain
  // adjective, chunked as one NP. Returns the word span.
  TargetSpan add_np(bool target, int head, const std::string& rel,
                    const std::string& prep) {
    const double def = target ? cfg_.definite_target_rate
                              : cfg_.definite_distractor_rate;
    const double encl = target ? cfg_.enclitic_target_rate
                               : cfg_.enclitic_distractor_rate;
    const double r = rng_.uniform();
    const bool definite = r < def;
    const bool enclitic = !definite && r < def + encl;
    const bool proper = !target && prep.empty() && rng_.bernoulli(0.25);
    const Lemma& noun = proper ? rng_.pick(vocab_.proper) : fresh_noun();

    TargetSpan span;
    span.first_word = size();
    const int h = push(noun_word(noun, proper ? "noun_prop" : "noun", definite,
                                 enclitic, prep, head, rel));
    if (!proper && rng_.bernoulli(target ? 0.35 : 0.2))
      push(noun_word(fresh_noun(), "noun", false, false, "", h, "IDF"));
    if (!proper && rng_.bernoulli(0.25))
      push(noun_word(rng_.pick(vocab_.adjectives), "adj", definite, false, "", h,
                     "MOD"));
    span.last_word = size() - 1;
    for (int i = span.first_word; i <= span.last_word; ++i)
      post_.words[i].bpc = i == span.first_word ? "B-NP" : "I-NP";
    return span;
  }

  void set_head(int word, int head) { post_.words[word].dep_head = head; }

  void add_target(TargetSpan span, Polarity p) {
    span.polarity = p;
    post_.gold_targets.push_back(span);
  }

 private:
  int push(WordAnalysis w) {
    post_.words.push_back(std::move(w));
    return size() - 1;
  }

  // Nouns never repeat inside a post, so distractors cannot match targets.
  const Lemma& fresh_noun() {
    for (;;) {
      const Lemma& l = rng_.pick(vocab_.nouns);
      if (used_.insert(l.lemma).second) return l;
    }
  }

  WordAnalysis noun_word(const Lemma& l, const std::string& pos, bool definite,
                         bool enclitic, const std::string& prep, int head,
                         const std::string& rel) {
    WordAnalysis w;
    if (!prep.empty())
      w.segments.push_back({prep, "prep", SegmentKind::kProclitic, false});
    if (definite) w.segments.push_back({"Al", "det", SegmentKind::kProclitic, true});
    w.segments.push_back({l.stem, pos, SegmentKind::kStem, false});
    if (enclitic)
      w.segments.push_back({"hm", "poss_pron_3MP", SegmentKind::kEnclitic, false});
    w.surface = prep + (definite ? "Al" : "") + l.stem + (enclitic ? "hm" : "");
    w.lemma = l.lemma;
    w.pos = pos;
    w.glosses = {l.gloss};
    w.ner = l.ner;
    w.dep_head = head;
    w.dep_rel = rel;
    return w;
  }

  Rng& rng_;
  const Vocabulary& vocab_;
  const SynthConfig& cfg_;
  Post post_;
  std::set<std::string> used_;
};

const char* random_prep(Rng& rng) { return rng.bernoulli(0.5) ? "b" : "l"; }

// Shuffled decks with the configured mix keep small corpora close to it.
class PolarityDeck {
 public:
  PolarityDeck(Rng& rng, const SynthConfig& cfg) : rng_(rng), cfg_(cfg) {}

  Polarity draw() {
    if (deck_.empty()) refill();
    const Polarity p = deck_.back();
    deck_.pop_back();
    return p;
  }

 private:
  void refill() {
    constexpr int kSize = 200;
    const int pos = static_cast<int>(std::lround(cfg_.pos_rate * kSize));
    const int neg = static_cast<int>(std::lround(cfg_.neg_rate * kSize));
    deck_.assign(static_cast<std::size_t>(pos), Polarity::kPos);
    deck_.insert(deck_.end(), static_cast<std::size_t>(neg), Polarity::kNeg);
    deck_.resize(std::max<std::size_t>(kSize, deck_.size()), Polarity::kAmbig);
    rng_.shuffle(deck_);
  }

  Rng& rng_;
  const SynthConfig& cfg_;
  std::vector<Polarity> deck_;
};

template <typename T>
const T& pick_with_prior(Rng& rng, const std::vector<T>& options, Prior p) {
  std::vector<const T*> matching;
  for (const T& o : options)
    if (o.prior == p) matching.push_back(&o);
  return *matching[rng.index(matching.size())];
}

// Clause with one opinion target; the opinion word governs the target.
void target_clause(PostBuilder& b, Rng& rng, const SynthConfig& cfg,
                   PolarityDeck& deck, bool conj) {
  const Polarity pol = deck.draw();
  const bool hidden = rng.bernoulli(cfg.hidden_rate);
  const Prior prior = pol == Polarity::kPos ? Prior::kPos : Prior::kNeg;

  if (!hidden && pol != Polarity::kAmbig && rng.bernoulli(0.35)) {
    // Nominal sentence: target followed by an opinion adjective predicate.
    const Opinion& adj = pick_with_prior(rng, opinion_adjectives(), prior);
    TargetSpan t = b.add_np(true, kRootHead, "SBJ", "");
    const int root = b.add_opinion_adjective(adj, kRootHead, "---");
    b.set_head(t.first_word, root);
    b.add_target(t, pol);
    if (rng.bernoulli(0.5)) b.add_np(false, root, "MOD", random_prep(rng));
    b.add_punct(root);
    return;
  }

  int verb;
  if (pol == Polarity::kAmbig) {
    const Lemma& v = rng.pick(ambivalent_verbs());
    verb = b.add_verb(v.stem, v.lemma, v.gloss, conj);
  } else {
    const Opinion& v = pick_with_prior(rng, opinion_verbs(), prior);
    verb = b.add_verb(v.stem, v.stem + "_1", v.gloss, conj);
  }
  if (hidden) {
    b.add_np(false, verb, "SBJ", "");
    b.add_np(false, verb, "MOD", random_prep(rng));
    b.add_target(b.add_np(true, verb, "OBJ", ""), pol);
  } else {
    b.add_target(b.add_np(true, verb, "OBJ", ""), pol);
    if (rng.bernoulli(0.7)) b.add_np(false, verb, "MOD", random_prep(rng));
  }
  b.add_punct(verb);
}

// Clause without opinion: reporting verb with plain arguments.
void neutral_clause(PostBuilder& b, Rng& rng, bool conj) {
  const Lemma& v = rng.pick(neutral_verbs());
  const int verb = b.add_verb(v.stem, v.lemma, v.gloss, conj);
  b.add_np(false, verb, "SBJ", "");
  b.add_np(false, verb, "OBJ", "");
  if (rng.bernoulli(0.5)) b.add_np(false, verb, "MOD", random_prep(rng));
  b.add_punct(verb);
}

}  // namespace

std::pair<Corpus, Lexicon> generate_synthetic(const SynthConfig& config) {
  if (config.n_posts < 1) throw UsageError("n_posts must be at least 1");
  const Vocabulary vocab = make_vocabulary(config.vocab_seed);
  Rng rng(derive_seed(config.seed, "synth.posts"));
  PolarityDeck deck(rng, config);
  Corpus corpus;
  corpus.reserve(static_cast<std::size_t>(config.n_posts));
  for (int i = 0; i < config.n_posts; ++i) {
    PostBuilder b(rng, vocab, config);
    const int clauses = 2 + static_cast<int>(rng.index(3));
    // First clause always carries a target so every post has one.
    for (int c = 0; c < clauses; ++c) {
      const bool conj = c > 0 && rng.bernoulli(0.5);
      if (c == 0 || rng.bernoulli(0.6))
        target_clause(b, rng, config, deck, conj);
      else
        neutral_clause(b, rng, conj);
    }
    char id[32];
    std::snprintf(id, sizeof id, "syn-%06d", i + 1);
    corpus.push_back(b.finish(id));
  }
  return {std::move(corpus), synthetic_lexicons(config).prior_list};
}

SynthLexicons synthetic_lexicons(const SynthConfig& config) {
  SynthLexicons out;
  out.prior_list.kind = LexiconKind::kPriorList;
  out.scored.kind = LexiconKind::kScored;
  out.gloss_keyed.kind = LexiconKind::kGlossKeyed;
  auto add = [&](const Opinion& o) {
    const bool pos = o.prior == Prior::kPos;
    out.prior_list.entries[o.stem + "_1"] = LexEntry{o.prior, true, 0, 0, false};
    const double hi = o.strong ? 0.75 : 0.5;
    const double lo = 0.125;
    out.scored.entries[o.stem + "_1"] =
        classify_scored(pos ? hi : lo, pos ? lo : hi, out.scored.threshold);
    out.gloss_keyed.entries[o.gloss] = LexEntry{o.prior, true, 0, 0, o.strong};
  };
  for (const Opinion& o : opinion_verbs()) add(o);
  for (const Opinion& o : opinion_adjectives()) add(o);
  // Objective filler so the scored lexicon exercises its threshold.
  for (const Lemma& v : neutral_verbs()) {
    out.scored.entries[v.lemma] = classify_scored(0.0625, 0.0, out.scored.threshold);
    out.gloss_keyed.entries[v.gloss] = LexEntry{Prior::kNeutral, true, 0, 0, false};
  }
  (void)config;
  return out;
}

}  // namespace targsent
