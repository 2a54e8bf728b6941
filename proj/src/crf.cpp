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

#include "targsent/crf.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>

#include "targsent/common.hpp"
#include "targsent/lbfgs.hpp"

namespace targsent {

Eigen::Index CrfModel::num_parameters() const {
  const Eigen::Index F = num_features(), L = num_labels();
  return F * L + L * L + (label_conjunctions ? F * L * L : 0);
}

Eigen::VectorXd CrfModel::parameters() const {
  const Eigen::Index F = num_features(), L = num_labels();
  Eigen::VectorXd w(num_parameters());
  Eigen::Index k = 0;
  for (Eigen::Index f = 0; f < F; ++f)
    for (Eigen::Index y = 0; y < L; ++y) w(k++) = unary(f, y);
  for (Eigen::Index a = 0; a < L; ++a)
    for (Eigen::Index b = 0; b < L; ++b) w(k++) = transition(a, b);
  if (label_conjunctions)
    for (Eigen::Index f = 0; f < F; ++f)
      for (Eigen::Index c = 0; c < L * L; ++c) w(k++) = edge(f, c);
  return w;
}

void CrfModel::set_parameters(const Eigen::VectorXd& w) {
  if (w.size() != num_parameters())
    throw UsageError("parameter vector has the wrong length");
  const Eigen::Index F = num_features(), L = num_labels();
  unary.resize(F, L);
  transition.resize(L, L);
  edge.resize(label_conjunctions ? F : 0, L * L);
  Eigen::Index k = 0;
  for (Eigen::Index f = 0; f < F; ++f)
    for (Eigen::Index y = 0; y < L; ++y) unary(f, y) = w(k++);
  for (Eigen::Index a = 0; a < L; ++a)
    for (Eigen::Index b = 0; b < L; ++b) transition(a, b) = w(k++);
  if (label_conjunctions)
    for (Eigen::Index f = 0; f < F; ++f)
      for (Eigen::Index c = 0; c < L * L; ++c) edge(f, c) = w(k++);
}

InternedSequence CrfModel::intern(const std::vector<FeatureVector>& seq) const {
  InternedSequence out(seq.size());
  for (std::size_t t = 0; t < seq.size(); ++t) {
    for (const std::string& atom : seq[t]) {
      auto it = feature_index.find(atom);
      if (it != feature_index.end()) out[t].push_back(it->second);
    }
  }
  return out;
}

ChainPotentials<double> CrfModel::potentials(const InternedSequence& seq) const {
  const Eigen::Index T = static_cast<Eigen::Index>(seq.size());
  const Eigen::Index L = num_labels();
  ChainPotentials<double> pot;
  pot.unary = Eigen::MatrixXd::Zero(T, L);
  for (Eigen::Index t = 0; t < T; ++t)
    for (int f : seq[t]) pot.unary.row(t) += unary.row(f);
  pot.edges.reserve(T > 0 ? T - 1 : 0);
  for (Eigen::Index t = 1; t < T; ++t) {
    Eigen::MatrixXd e = transition;
    if (label_conjunctions) {
      for (int f : seq[t])
        for (Eigen::Index a = 0; a < L; ++a)
          for (Eigen::Index b = 0; b < L; ++b) e(a, b) += edge(f, a * L + b);
    }
    pot.edges.push_back(std::move(e));
  }
  return pot;
}

bool CrfModel::operator==(const CrfModel& o) const {
  return task == o.task && labels == o.labels && features == o.features &&
         label_conjunctions == o.label_conjunctions && l2_sigma == o.l2_sigma &&
         metadata == o.metadata && unary == o.unary &&
         transition == o.transition && edge == o.edge;
}

CrfModel make_model(Task task, std::vector<std::string> features,
                    bool label_conjunctions, double l2_sigma) {
  CrfModel m;
  m.task = task;
  m.labels = label_names(task);
  m.features = std::move(features);
  for (std::size_t i = 0; i < m.features.size(); ++i)
    m.feature_index.emplace(m.features[i], static_cast<int>(i));
  m.label_conjunctions = label_conjunctions;
  m.l2_sigma = l2_sigma;
  m.set_parameters(Eigen::VectorXd::Zero(m.num_parameters()));
  return m;
}

std::vector<std::string> build_alphabet(const std::vector<LabeledSequence>& data,
                                        int min_count) {
  std::map<std::string, int> counts;
  for (const auto& seq : data)
    for (const auto& fv : seq.features)
      for (const auto& atom : fv) ++counts[atom];
  std::vector<std::string> out;
  for (const auto& [atom, c] : counts)
    if (c >= min_count) out.push_back(atom);
  return out;
}

namespace {

constexpr std::size_t kReductionBlocks = 16;

void check_labels(const CrfModel& model, const std::vector<int>& labels,
                  std::size_t length, std::size_t index) {
  if (labels.size() != length)
    throw UsageError("sequence " + std::to_string(index) +
                     ": label count differs from token count");
  for (int y : labels)
    if (y < 0 || y >= model.num_labels())
      throw UsageError("sequence " + std::to_string(index) +
                       ": label outside the model alphabet");
}

}  // namespace

ObjectiveValue objective_and_gradient(
    const CrfModel& model, const std::vector<InternedSequence>& inputs,
    const std::vector<std::vector<int>>& labels) {
  if (inputs.empty()) throw UsageError("objective over an empty data set");
  if (inputs.size() != labels.size())
    throw UsageError("inputs and labels differ in count");
  const Eigen::Index P = model.num_parameters();
  const int L = model.num_labels();
  const Eigen::Index trans_off = static_cast<Eigen::Index>(model.num_features()) * L;
  const Eigen::Index edge_off = trans_off + static_cast<Eigen::Index>(L) * L;

  const std::size_t n = inputs.size();
  const std::size_t blocks = std::min(kReductionBlocks, n);
  std::vector<double> block_value(blocks, 0.0);
  std::vector<Eigen::VectorXd> block_grad(blocks);

  parallel_for(blocks, [&](std::size_t b) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(P);
    double value = 0.0;
    const std::size_t lo = b * n / blocks, hi = (b + 1) * n / blocks;
    for (std::size_t i = lo; i < hi; ++i) {
      const InternedSequence& x = inputs[i];
      const std::vector<int>& y = labels[i];
      check_labels(model, y, x.size(), i);
      if (x.empty()) continue;
      const ChainPotentials<double> pot = model.potentials(x);
      const ChainMarginals<double> m = forward_backward(pot);
      const double nll = m.log_z - path_score(pot, y);
      if (!std::isfinite(nll))
        throw DataError("non-finite likelihood at sequence " + std::to_string(i));
      value += nll;
      for (std::size_t t = 0; t < x.size(); ++t) {
        for (int f : x[t]) {
          const Eigen::Index base = static_cast<Eigen::Index>(f) * L;
          for (int c = 0; c < L; ++c) g(base + c) += m.node(t, c);
          g(base + y[t]) -= 1.0;
        }
        if (t == 0) continue;
        const Eigen::MatrixXd& xi = m.edge[t - 1];
        for (int a = 0; a < L; ++a)
          for (int c = 0; c < L; ++c) g(trans_off + a * L + c) += xi(a, c);
        g(trans_off + y[t - 1] * L + y[t]) -= 1.0;
        if (model.label_conjunctions) {
          for (int f : x[t]) {
            const Eigen::Index base = edge_off + static_cast<Eigen::Index>(f) * L * L;
            for (int a = 0; a < L; ++a)
              for (int c = 0; c < L; ++c) g(base + a * L + c) += xi(a, c);
            g(base + y[t - 1] * L + y[t]) -= 1.0;
          }
        }
      }
    }
    block_value[b] = value;
    block_grad[b] = std::move(g);
  });

  ObjectiveValue out;
  out.gradient = Eigen::VectorXd::Zero(P);
  for (std::size_t b = 0; b < blocks; ++b) {
    out.value += block_value[b];
    out.gradient += block_grad[b];
  }
  const Eigen::VectorXd w = model.parameters();
  const double inv_var = 1.0 / (model.l2_sigma * model.l2_sigma);
  out.value += 0.5 * inv_var * w.squaredNorm();
  out.gradient += inv_var * w;
  if (!std::isfinite(out.value)) throw DataError("non-finite objective value");
  return out;
}

ObjectiveValue objective_and_gradient(const CrfModel& model,
                                      const std::vector<LabeledSequence>& data) {
  std::vector<InternedSequence> inputs;
  std::vector<std::vector<int>> labels;
  for (const auto& s : data) {
    inputs.push_back(model.intern(s.features));
    labels.push_back(s.labels.labels);
  }
  return objective_and_gradient(model, inputs, labels);
}

ChainMarginals<double> forward_backward(const CrfModel& model,
                                        const std::vector<FeatureVector>& seq) {
  return forward_backward(model.potentials(model.intern(seq)));
}

TrainResult train_crf(Task task, const std::vector<LabeledSequence>& data,
                      const TrainConfig& config) {
  if (data.empty()) throw UsageError("training data is empty");
  if (!(config.l2_sigma > 0.0) || config.max_iters < 0 ||
      !(config.rel_tolerance > 0.0) || config.lbfgs_memory < 1 ||
      config.min_feature_count < 1)
    throw UsageError("invalid training configuration");
  for (const auto& s : data)
    if (s.labels.task != task)
      throw UsageError("training labels belong to a different task");

  TrainResult result;
  result.model = make_model(task, build_alphabet(data, config.min_feature_count),
                            config.label_conjunctions, config.l2_sigma);
  CrfModel& model = result.model;

  std::vector<InternedSequence> inputs;
  std::vector<std::vector<int>> labels;
  inputs.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    inputs.push_back(model.intern(data[i].features));
    labels.push_back(data[i].labels.labels);
    check_labels(model, labels.back(), inputs.back().size(), i);
  }
  if (config.max_iters == 0) return result;

  CrfModel scratch = model;
  Objective f = [&](const Eigen::VectorXd& w, Eigen::VectorXd& grad) {
    scratch.set_parameters(w);
    ObjectiveValue v = objective_and_gradient(scratch, inputs, labels);
    grad = std::move(v.gradient);
    return v.value;
  };
  LbfgsConfig lc;
  lc.max_iters = config.max_iters;
  lc.rel_tolerance = config.rel_tolerance;
  lc.memory = config.lbfgs_memory;
  LbfgsResult r = lbfgs_minimize(f, model.parameters(), lc);
  model.set_parameters(r.x);
  result.objective_history = std::move(r.history);
  result.iterations = r.iterations;
  result.converged = r.converged;
  return result;
}

LabelSequence viterbi_decode(const CrfModel& model,
                             const std::vector<FeatureVector>& seq,
                             const LabelMask* mask) {
  LabelSequence out;
  out.task = model.task;
  out.labels = viterbi(model.potentials(model.intern(seq)), mask);
  return out;
}

namespace {

constexpr char kMagic[8] = {'T', 'S', 'C', 'R', 'F', 'M', 'D', 'L'};

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    buf_.append(static_cast<const char*>(p), n);
  }
  void u8(std::uint8_t v) { bytes(&v, 1); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    u64(v);
  }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  std::string& buffer() { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string_view b) : buf_(b) {}
  void need(std::size_t n) const {
    if (buf_.size() - pos_ < n) throw DataError("model file is truncated");
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(buf_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  double f64() {
    const std::uint64_t v = u64();
    double d;
    std::memcpy(&d, &v, 8);
    return d;
  }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(buf_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }

 private:
  std::string_view buf_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_model(const CrfModel& model) {
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.u32(kModelFormatVersion);
  w.u8(model.task == Task::kTarget ? 0 : 1);
  w.u8(model.label_conjunctions ? 1 : 0);
  w.f64(model.l2_sigma);
  w.u32(static_cast<std::uint32_t>(model.labels.size()));
  for (const auto& l : model.labels) w.str(l);
  w.u32(static_cast<std::uint32_t>(model.features.size()));
  for (const auto& f : model.features) w.str(f);
  w.str(model.metadata);
  const Eigen::VectorXd params = model.parameters();
  w.u64(static_cast<std::uint64_t>(params.size()));
  for (Eigen::Index i = 0; i < params.size(); ++i) w.f64(params(i));
  w.u64(fnv1a64(w.buffer()));
  return std::move(w.buffer());
}

CrfModel deserialize_model(std::string_view bytes) {
  Reader r(bytes);
  r.need(sizeof kMagic);
  if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
    throw DataError("not a targsent model file (bad magic)");
  for (std::size_t i = 0; i < sizeof kMagic; ++i) r.u8();
  const std::uint32_t version = r.u32();
  if (version > kModelFormatVersion)
    throw DataError("model format version " + std::to_string(version) +
                    " is newer than the supported version " +
                    std::to_string(kModelFormatVersion));
  if (version == 0) throw DataError("model format version 0 is invalid");
  const std::uint8_t task = r.u8();
  if (task > 1) throw DataError("model file has an unknown task tag");
  const bool conj = r.u8() != 0;
  const double sigma = r.f64();
  std::vector<std::string> labels(r.u32());
  for (auto& l : labels) l = r.str();
  const std::uint32_t nf = r.u32();
  std::vector<std::string> features;
  features.reserve(std::min<std::uint32_t>(nf, 1u << 20));
  for (std::uint32_t i = 0; i < nf; ++i) features.push_back(r.str());

  CrfModel model = make_model(task == 0 ? Task::kTarget : Task::kSentiment,
                              std::move(features), conj, sigma);
  if (labels != model.labels) throw DataError("model label alphabet mismatch");
  model.metadata = r.str();
  const std::uint64_t np = r.u64();
  if (np != static_cast<std::uint64_t>(model.num_parameters()))
    throw DataError("model parameter count does not match its alphabets");
  Eigen::VectorXd params(static_cast<Eigen::Index>(np));
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    params(i) = r.f64();
    if (!std::isfinite(params(i))) throw DataError("model has non-finite weights");
  }
  const std::size_t body = r.pos();
  const std::uint64_t checksum = r.u64();
  if (checksum != fnv1a64(bytes.substr(0, body)))
    throw DataError("model checksum mismatch (corrupt file)");
  if (r.pos() != bytes.size()) throw DataError("trailing bytes after model");
  model.set_parameters(params);
  return model;
}

void save_model(const std::string& path, const CrfModel& model) {
  write_file(path, serialize_model(model));
}

CrfModel load_model(const std::string& path) {
  try {
    return deserialize_model(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace targsent
