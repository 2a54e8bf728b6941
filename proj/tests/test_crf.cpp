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

#include <cmath>

#include "crf_oracles.hpp"
#include "targsent/chain.hpp"
#include "targsent/common.hpp"
#include "targsent/crf.hpp"
#include "targsent/lbfgs.hpp"

using namespace targsent;
using namespace targsent::testing;

namespace {

LabeledSequence labeled(std::vector<FeatureVector> f, Task task, std::vector<int> y) {
  return {std::move(f), {task, std::move(y)}};
}

// Label T iff atom "key" is present; plenty of distractor atoms.
std::vector<LabeledSequence> separable_task(Rng& rng, int n) {
  std::vector<LabeledSequence> data;
  for (int s = 0; s < n; ++s) {
    LabeledSequence seq;
    seq.labels.task = Task::kTarget;
    const int len = 3 + static_cast<int>(rng.uniform() * 6);
    for (int t = 0; t < len; ++t) {
      const bool on = rng.bernoulli(0.3);
      FeatureVector fv = {"noise=" + std::to_string(static_cast<int>(rng.uniform() * 8))};
      if (on) fv.push_back("key=1");
      std::sort(fv.begin(), fv.end());
      seq.features.push_back(fv);
      seq.labels.labels.push_back(on ? label::kT : label::kO);
    }
    data.push_back(std::move(seq));
  }
  return data;
}

}  // namespace

TEST_CASE("log partition and Viterbi agree with enumeration") {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int L = 2 + trial % 2;
    const int T = 1 + trial % 4;
    const CrfModel m = random_model(rng, L, 6, trial % 3 == 0);
    const InternedSequence x = random_input(rng, T, 6);
    const Enumeration e = enumerate(m, x);
    const auto pot = m.potentials(x);
    const auto fb = forward_backward(pot);
    CHECK(std::abs(fb.log_z - e.log_z) < 1e-10);
    CHECK(viterbi(pot) == e.best);
    CHECK(std::exp(fb.log_z) >= std::exp(e.best_score));
    for (int t = 0; t < T; ++t) {
      CHECK(std::abs(fb.node.row(t).sum() - 1.0) < 1e-10);
      for (int y = 0; y < L; ++y) CHECK(std::abs(fb.node(t, y) - e.node[t][y]) < 1e-10);
    }
    for (const auto& xi : fb.edge) CHECK(std::abs(xi.sum() - 1.0) < 1e-10);
  }
}

TEST_CASE("forward-backward special cases") {
  Rng rng(3);
  CrfModel m = random_model(rng, 3, 4, false);
  const InternedSequence one = {{0, 2}};
  const auto pot = m.potentials(one);
  const Eigen::RowVectorXd u = pot.unary.row(0);
  const Eigen::RowVectorXd soft = (u.array() - log_sum_exp(u)).exp();
  CHECK((forward_backward(pot).node.row(0) - soft).cwiseAbs().maxCoeff() < 1e-12);

  m.set_parameters(Eigen::VectorXd::Zero(m.num_parameters()));
  const auto uni = forward_backward(m.potentials({{0}, {1}, {2, 3}}));
  CHECK((uni.node.array() - 1.0 / 3).abs().maxCoeff() < 1e-12);
  CHECK(uni.log_z == doctest::Approx(3 * std::log(3.0)));
}

TEST_CASE("objective trivial values") {
  Rng rng(4);
  CrfModel one = random_model(rng, 1, 3, false, 1.0, 2.0);
  const auto v = objective_and_gradient(one, {{{0, 1}}}, {{0}});
  CHECK(v.value == doctest::Approx(one.parameters().squaredNorm() / 8.0).epsilon(1e-12));

  CrfModel zero = random_model(rng, 3, 5, false);
  zero.set_parameters(Eigen::VectorXd::Zero(zero.num_parameters()));
  const auto z = objective_and_gradient(zero, {random_input(rng, 4, 5)}, {{0, 2, 1, 1}});
  CHECK(z.value == doctest::Approx(4 * std::log(3.0)).epsilon(1e-12));

  const CrfModel m = random_model(rng, 3, 5, false);
  const InternedSequence x = random_input(rng, 4, 5);
  const std::vector<int> y = {2, 0, 1, 1};
  const Enumeration e = enumerate(m, x);
  const double expect = e.log_z - raw_score(m, x, y) +
                        m.parameters().squaredNorm() / (2 * m.l2_sigma * m.l2_sigma);
  CHECK(std::abs(objective_and_gradient(m, {x}, {y}).value - expect) < 1e-8);

  CHECK_THROWS_AS(objective_and_gradient(m, {x}, {{0, 1, 5, 0}}), UsageError);
  CHECK_THROWS_AS(objective_and_gradient(m, std::vector<InternedSequence>{},
                                         std::vector<std::vector<int>>{}),
                  UsageError);
}

TEST_CASE("analytic gradient matches central differences") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int L = 1 + trial % 3;
    const int F = 5 + trial;
    const CrfModel m = random_model(rng, L, F, trial % 2 == 1);
    std::vector<InternedSequence> xs;
    std::vector<std::vector<int>> ys;
    for (int s = 0; s < 3; ++s) {
      const int T = 1 + static_cast<int>(rng.uniform() * 5);
      xs.push_back(random_input(rng, T, F));
      ys.push_back(random_labels(rng, T, L));
    }
    const Eigen::VectorXd g = objective_and_gradient(m, xs, ys).gradient;
    CHECK(max_relative_error(g, finite_difference_gradient(m, xs, ys)) < 1e-4);
  }
}

TEST_CASE("masked Viterbi respects its mask") {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const int L = 2 + trial % 2;
    const int T = 1 + trial % 5;
    const CrfModel m = random_model(rng, L, 5, false, 3.0);
    const InternedSequence x = random_input(rng, T, 5);
    LabelMask mask(T);
    for (auto& bits : mask) {
      do bits = static_cast<std::uint32_t>(rng.uniform() * (1u << L));
      while (bits == 0);
    }
    const auto pot = m.potentials(x);
    const std::vector<int> y = viterbi(pot, &mask);
    // Exhaustive best among allowed labelings.
    double best = -1e300;
    std::vector<int> arg, cur(T, 0);
    while (true) {
      bool ok = true;
      for (int t = 0; t < T; ++t) ok = ok && (mask[t] >> cur[t] & 1u);
      if (ok && raw_score(m, x, cur) > best) {
        best = raw_score(m, x, cur);
        arg = cur;
      }
      int t = T - 1;
      while (t >= 0 && ++cur[t] == L) cur[t--] = 0;
      if (t < 0) break;
    }
    CHECK(y == arg);
  }
}

TEST_CASE("Viterbi mask edge cases") {
  Rng rng(2);
  const CrfModel m = random_model(rng, 3, 4, false, 2.0);
  const auto pot = m.potentials({{0}, {1}, {2}});
  const LabelMask single = {1u << 2, 1u << 0, 1u << 1};
  CHECK(viterbi(pot, &single) == std::vector<int>{2, 0, 1});
  const LabelMask empty = {1u, 0u, 1u};
  CHECK_THROWS(viterbi(pot, &empty));

  // Target/sentiment constraint: T -> {P,N}, O -> {NEUTRAL}.
  const std::vector<int> e = {label::kT, label::kO, label::kT};
  LabelMask constraint;
  for (int t : e)
    constraint.push_back(t == label::kT ? (1u << label::kP | 1u << label::kN)
                                        : 1u << label::kNeutral);
  const std::vector<int> s = viterbi(pot, &constraint);
  for (std::size_t i = 0; i < e.size(); ++i)
    CHECK((e[i] == label::kT) == (s[i] != label::kNeutral));

  CrfModel flat = m;
  flat.set_parameters(Eigen::VectorXd::Zero(flat.num_parameters()));
  CHECK(viterbi(flat.potentials({{0}, {1}})) == std::vector<int>{0, 0});
}

TEST_CASE("training learns a separable task") {
  Rng rng(5);
  const auto data = separable_task(rng, 60);
  TrainConfig cfg;
  const TrainResult r = train_crf(Task::kTarget, data, cfg);
  int right = 0, total = 0;
  for (const auto& s : data) {
    const LabelSequence y = viterbi_decode(r.model, s.features);
    for (std::size_t t = 0; t < y.size(); ++t) {
      right += y.labels[t] == s.labels.labels[t];
      ++total;
    }
  }
  CHECK(right >= 0.99 * total);
  for (std::size_t i = 1; i < r.objective_history.size(); ++i)
    CHECK(r.objective_history[i] <= r.objective_history[i - 1]);
  CHECK(train_crf(Task::kTarget, data, cfg).model == r.model);

  TrainConfig none = cfg;
  none.max_iters = 0;
  const CrfModel z = train_crf(Task::kTarget, data, none).model;
  CHECK(z.parameters().isZero());
  CHECK(z.num_features() == r.model.num_features());
}

TEST_CASE("rare atoms are dropped before training") {
  const std::vector<LabeledSequence> data = {
      labeled({{"a", "b"}, {"a"}}, Task::kTarget, {0, 1}),
      labeled({{"a", "c"}}, Task::kTarget, {1})};
  CHECK(build_alphabet(data, 1) == std::vector<std::string>{"a", "b", "c"});
  CHECK(build_alphabet(data, 2) == std::vector<std::string>{"a"});
  TrainConfig cfg;
  cfg.min_feature_count = 2;
  CHECK(train_crf(Task::kTarget, data, cfg).model.features ==
        std::vector<std::string>{"a"});
  CHECK_THROWS_AS(train_crf(Task::kSentiment, data, cfg), UsageError);
  CHECK_THROWS_AS(train_crf(Task::kTarget, {}, cfg), UsageError);
}

TEST_CASE("unseen atoms are ignored at prediction") {
  const CrfModel m = make_model(Task::kTarget, {"a", "b"});
  const InternedSequence x = m.intern({{"a", "zzz"}, {"b"}, {"q"}});
  CHECK(x == InternedSequence{{0}, {1}, {}});
}

TEST_CASE("model serialization") {
  Rng rng(6);
  const auto data = separable_task(rng, 20);
  CrfModel m = train_crf(Task::kTarget, data, TrainConfig{}).model;
  m.metadata = R"({"scheme":"lemma"})";
  const std::string bytes = serialize_model(m);
  const CrfModel back = deserialize_model(bytes);
  CHECK(back == m);
  for (const auto& s : data)
    CHECK(viterbi_decode(back, s.features) == viterbi_decode(m, s.features));

  CHECK_THROWS_AS(deserialize_model(bytes.substr(0, bytes.size() / 2)), DataError);
  CHECK_THROWS_AS(deserialize_model(bytes.substr(0, 5)), DataError);
  std::string newer = bytes;
  newer[8] = static_cast<char>(kModelFormatVersion + 1);
  CHECK_THROWS_WITH_AS(deserialize_model(newer), doctest::Contains("newer"), DataError);
  std::string flipped = bytes;
  flipped[bytes.size() - 20] ^= 0x40;
  CHECK_THROWS_AS(deserialize_model(flipped), DataError);
  CHECK_THROWS_AS(deserialize_model("NOTAMODELFILE"), DataError);

  CrfModel conj = make_model(Task::kSentiment, {"x", "y"}, true, 0.5);
  conj.set_parameters(Eigen::VectorXd::LinSpaced(conj.num_parameters(), -1, 1));
  CHECK(deserialize_model(serialize_model(conj)) == conj);
}

TEST_CASE("L-BFGS minimizes a quadratic and a Rosenbrock valley") {
  const Objective quad = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    const Eigen::Vector3d c(1, -2, 3);
    const Eigen::Vector3d s(1, 10, 100);
    g = 2 * s.cwiseProduct(x - c);
    return s.dot((x - c).cwiseAbs2());
  };
  LbfgsConfig cfg;
  cfg.rel_tolerance = 1e-12;
  const LbfgsResult q = lbfgs_minimize(quad, Eigen::Vector3d::Zero(), cfg);
  CHECK((q.x - Eigen::Vector3d(1, -2, 3)).norm() < 1e-4);
  for (std::size_t i = 1; i < q.history.size(); ++i) CHECK(q.history[i] <= q.history[i - 1]);

  const Objective rosen = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    const double a = 1 - x(0), b = x(1) - x(0) * x(0);
    g.resize(2);
    g(0) = -2 * a - 400 * x(0) * b;
    g(1) = 200 * b;
    return a * a + 100 * b * b;
  };
  cfg.max_iters = 500;
  const LbfgsResult r = lbfgs_minimize(rosen, Eigen::Vector2d(-1.2, 1), cfg);
  CHECK((r.x - Eigen::Vector2d(1, 1)).norm() < 1e-3);
}

TEST_CASE("L-BFGS reports a failed line search") {
  // Gradient points the wrong way, so no step decreases the value.
  const Objective bad = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    g = -2 * x;
    return x.squaredNorm();
  };
  CHECK_THROWS_AS(lbfgs_minimize(bad, Eigen::Vector2d(1, 1), LbfgsConfig{}), DataError);
}
