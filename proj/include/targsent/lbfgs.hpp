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

// Limited-memory BFGS minimization with a backtracking Armijo line search.

#ifndef TARGSENT_LBFGS_HPP_
#define TARGSENT_LBFGS_HPP_

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace targsent {

struct LbfgsConfig {
  int max_iters = 300;
  // Stop once the relative decrease stays below this for `patience` steps.
  double rel_tolerance = 1e-5;
  int patience = 3;
  int memory = 10;
  int max_backtracks = 40;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  // Objective at the start and after every accepted step.
  std::vector<double> history;
};

// value = f(x, grad); grad is resized by the callee.
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

// Throws DataError (with the iteration trace) when the line search cannot
// make progress from a point that is not yet stationary.
LbfgsResult lbfgs_minimize(const Objective& f, Eigen::VectorXd x0,
                           const LbfgsConfig& config);

}  // namespace targsent

#endif  // TARGSENT_LBFGS_HPP_
