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

#include "targsent/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include "targsent/common.hpp"

namespace targsent {

namespace {

struct Correction {
  Eigen::VectorXd s, y;
  double rho;
};

// Two-loop recursion: returns -H g.
Eigen::VectorXd direction(const std::deque<Correction>& mem,
                          const Eigen::VectorXd& g) {
  Eigen::VectorXd q = g;
  std::vector<double> alpha(mem.size());
  for (std::size_t i = mem.size(); i-- > 0;) {
    alpha[i] = mem[i].rho * mem[i].s.dot(q);
    q -= alpha[i] * mem[i].y;
  }
  if (!mem.empty()) {
    const Correction& last = mem.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t i = 0; i < mem.size(); ++i) {
    const double beta = mem[i].rho * mem[i].y.dot(q);
    q += (alpha[i] - beta) * mem[i].s;
  }
  return -q;
}

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& f, Eigen::VectorXd x0,
                           const LbfgsConfig& config) {
  LbfgsResult result;
  result.x = std::move(x0);
  Eigen::VectorXd g;
  result.value = f(result.x, g);
  result.history.push_back(result.value);
  if (!std::isfinite(result.value))
    throw DataError("objective is not finite at the starting point");

  std::deque<Correction> mem;
  int quiet = 0;
  std::ostringstream trace;
  Eigen::VectorXd x_new, g_new;
  for (int iter = 0; iter < config.max_iters; ++iter) {
    const double gnorm = g.norm();
    if (gnorm <= 1e-10 * std::max(1.0, result.x.norm())) {
      result.converged = true;
      break;
    }
    Eigen::VectorXd d = direction(mem, g);
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      mem.clear();
      d = -g;
      slope = -g.squaredNorm();
    }
    double step = mem.empty() ? 1.0 / gnorm : 1.0;

    bool accepted = false;
    double value_new = 0.0;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      for (int b = 0; b < config.max_backtracks; ++b) {
        x_new = result.x + step * d;
        value_new = f(x_new, g_new);
        if (std::isfinite(value_new) &&
            value_new <= result.value + 1e-4 * step * slope) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted && !mem.empty()) {
        // Retry once along steepest descent.
        mem.clear();
        d = -g;
        slope = -g.squaredNorm();
        step = 1.0 / gnorm;
      } else {
        break;
      }
    }
    trace << "iter " << iter << " f=" << result.value << " |g|=" << gnorm
          << " step=" << step << "\n";
    if (!accepted) {
      // Stationary up to rounding: nothing left to gain.
      if (gnorm <= 1e-6 * std::max(1.0, std::abs(result.value))) {
        result.converged = true;
        break;
      }
      throw DataError("line search failed to decrease the objective\n" +
                      trace.str());
    }

    Correction c{x_new - result.x, g_new - g, 0.0};
    const double sy = c.s.dot(c.y);
    if (sy > 1e-12 * c.y.squaredNorm()) {
      c.rho = 1.0 / sy;
      mem.push_back(std::move(c));
      if (static_cast<int>(mem.size()) > config.memory) mem.pop_front();
    }

    const double decrease =
        (result.value - value_new) / std::max(1.0, std::abs(value_new));
    result.x = x_new;
    g = g_new;
    result.value = value_new;
    result.history.push_back(value_new);
    result.iterations = iter + 1;
    quiet = decrease < config.rel_tolerance ? quiet + 1 : 0;
    if (quiet >= config.patience) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace targsent
