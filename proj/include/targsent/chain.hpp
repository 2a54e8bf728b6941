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

// Log-space inference over linear-chain potentials: partition function,
// forward-backward marginals, path scores and (masked) Viterbi decoding.

#ifndef TARGSENT_CHAIN_HPP_
#define TARGSENT_CHAIN_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace targsent {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Scores of one sequence. unary(t, y) scores label y at position t;
// edges[t - 1](y', y) scores the transition y' -> y into position t.
template <typename Scalar>
struct ChainPotentials {
  DenseMatrix<Scalar> unary;
  std::vector<DenseMatrix<Scalar>> edges;

  Eigen::Index length() const { return unary.rows(); }
  Eigen::Index labels() const { return unary.cols(); }
};

template <typename Scalar>
struct ChainMarginals {
  Scalar log_z = 0;
  DenseMatrix<Scalar> node;               // T x L, rows sum to 1
  std::vector<DenseMatrix<Scalar>> edge;  // T-1 matrices, each sums to 1
};

// Allowed labels per position as bitsets; bit y set means label y allowed.
using LabelMask = std::vector<std::uint32_t>;

template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Scalar m = v.maxCoeff();
  if (!std::isfinite(static_cast<double>(m))) return m;
  return m + std::log((v.array() - m).exp().sum());
}

template <typename Scalar>
Scalar path_score(const ChainPotentials<Scalar>& pot, const std::vector<int>& y) {
  Scalar s = 0;
  for (Eigen::Index t = 0; t < pot.length(); ++t) {
    s += pot.unary(t, y[t]);
    if (t > 0) s += pot.edges[t - 1](y[t - 1], y[t]);
  }
  return s;
}

// Forward recursion in log space; returns log alpha (T x L).
template <typename Scalar>
DenseMatrix<Scalar> forward_scores(const ChainPotentials<Scalar>& pot) {
  const Eigen::Index T = pot.length(), L = pot.labels();
  DenseMatrix<Scalar> alpha(T, L);
  if (T == 0) return alpha;
  alpha.row(0) = pot.unary.row(0);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> col(L);
  for (Eigen::Index t = 1; t < T; ++t) {
    for (Eigen::Index y = 0; y < L; ++y) {
      col = alpha.row(t - 1).transpose() + pot.edges[t - 1].col(y);
      alpha(t, y) = log_sum_exp(col) + pot.unary(t, y);
    }
  }
  return alpha;
}

template <typename Scalar>
DenseMatrix<Scalar> backward_scores(const ChainPotentials<Scalar>& pot) {
  const Eigen::Index T = pot.length(), L = pot.labels();
  DenseMatrix<Scalar> beta = DenseMatrix<Scalar>::Zero(T, L);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> row(L);
  for (Eigen::Index t = T - 2; t >= 0; --t) {
    for (Eigen::Index y = 0; y < L; ++y) {
      row = pot.edges[t].row(y).transpose() + pot.unary.row(t + 1).transpose() +
            beta.row(t + 1).transpose();
      beta(t, y) = log_sum_exp(row);
    }
  }
  return beta;
}

template <typename Scalar>
Scalar log_partition(const ChainPotentials<Scalar>& pot) {
  if (pot.length() == 0) return 0;
  return log_sum_exp(forward_scores(pot).row(pot.length() - 1));
}

template <typename Scalar>
ChainMarginals<Scalar> forward_backward(const ChainPotentials<Scalar>& pot) {
  const Eigen::Index T = pot.length(), L = pot.labels();
  ChainMarginals<Scalar> m;
  m.node.resize(T, L);
  if (T == 0) return m;
  const DenseMatrix<Scalar> alpha = forward_scores(pot);
  const DenseMatrix<Scalar> beta = backward_scores(pot);
  m.log_z = log_sum_exp(alpha.row(T - 1));
  m.node = (alpha + beta).array() - m.log_z;
  m.node = m.node.array().exp();
  m.edge.reserve(T > 0 ? T - 1 : 0);
  for (Eigen::Index t = 1; t < T; ++t) {
    DenseMatrix<Scalar> e(L, L);
    for (Eigen::Index a = 0; a < L; ++a)
      for (Eigen::Index b = 0; b < L; ++b)
        e(a, b) = std::exp(alpha(t - 1, a) + pot.edges[t - 1](a, b) +
                           pot.unary(t, b) + beta(t, b) - m.log_z);
    m.edge.push_back(std::move(e));
  }
  return m;
}

// Max-score labeling restricted to the mask (when given). Ties go to the
// lowest label index, both for predecessors and for the final label.
template <typename Scalar>
std::vector<int> viterbi(const ChainPotentials<Scalar>& pot,
                         const LabelMask* mask = nullptr) {
  const Eigen::Index T = pot.length(), L = pot.labels();
  if (L > 32) throw std::invalid_argument("viterbi: at most 32 labels");
  std::vector<int> best(T);
  if (T == 0) return best;
  if (mask && static_cast<Eigen::Index>(mask->size()) != T)
    throw std::invalid_argument("viterbi: mask length differs from sequence");
  const Scalar kNegInf = -std::numeric_limits<Scalar>::infinity();
  auto allowed = [&](Eigen::Index t, Eigen::Index y) {
    return !mask || ((*mask)[t] >> y & 1u);
  };
  if (mask) {
    const std::uint32_t full = L == 32 ? ~0u : ((1u << L) - 1u);
    for (Eigen::Index t = 0; t < T; ++t)
      if (((*mask)[t] & full) == 0)
        throw std::invalid_argument("viterbi: empty allowed-label set at position " +
                                    std::to_string(t));
  }
  DenseMatrix<Scalar> delta(T, L);
  Eigen::MatrixXi back(T, L);
  for (Eigen::Index y = 0; y < L; ++y)
    delta(0, y) = allowed(0, y) ? pot.unary(0, y) : kNegInf;
  for (Eigen::Index t = 1; t < T; ++t) {
    for (Eigen::Index y = 0; y < L; ++y) {
      back(t, y) = 0;
      if (!allowed(t, y)) {
        delta(t, y) = kNegInf;
        continue;
      }
      Scalar top = kNegInf;
      int arg = -1;
      for (Eigen::Index p = 0; p < L; ++p) {
        if (delta(t - 1, p) == kNegInf) continue;
        const Scalar s = delta(t - 1, p) + pot.edges[t - 1](p, y);
        if (arg < 0 || s > top) {
          top = s;
          arg = static_cast<int>(p);
        }
      }
      back(t, y) = std::max(arg, 0);
      delta(t, y) = top + pot.unary(t, y);
    }
  }
  int arg = -1;
  Scalar top = kNegInf;
  for (Eigen::Index y = 0; y < L; ++y) {
    if (delta(T - 1, y) == kNegInf) continue;
    if (arg < 0 || delta(T - 1, y) > top) {
      top = delta(T - 1, y);
      arg = static_cast<int>(y);
    }
  }
  best[T - 1] = std::max(arg, 0);
  for (Eigen::Index t = T - 1; t > 0; --t) best[t - 1] = back(t, best[t]);
  return best;
}

}  // namespace targsent

#endif  // TARGSENT_CHAIN_HPP_
