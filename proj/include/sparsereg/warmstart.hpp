// Copyright 2026 The sparsereg Authors.
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

#pragma once

#include <limits>

#include <Eigen/Dense>

#include "sparsereg/dataset.hpp"

namespace sparsereg {

// Step rule of the dual ascent.
//
// diminishing:    alpha += a / sqrt(t) * g with a = 1 / (1 + gamma * max_j ||X_j||^2)
//                 and g = Y - alpha - gamma * sum_{j in T} X_j (X_j' alpha).
// preconditioned: the same supergradient g premultiplied by
//                 (I + gamma * X_T X_T')^{-1} (Woodbury, k x k), tried at unit
//                 step and halvings; falls back to the diminishing step when no
//                 trial improves the objective.
enum class AscentRule { diminishing, preconditioned };

struct RelaxationOptions {
  int iters = 500;
  AscentRule rule = AscentRule::preconditioned;
  int stall_window = 50;
  double stall_tol = 1e-9;
  double time_limit_s = std::numeric_limits<double>::infinity();
};

struct RelaxationResult {
  Eigen::VectorXd alpha;
  double lower_bound = 0.0;
  int iterations = 0;
};

// f(alpha) = -0.5 a'a + Y'a - (gamma/2) * (sum of the k largest (X_j' a)^2).
// Concave; every value is a lower bound on the continuous relaxation and hence
// on the best subset loss.
double relaxation_objective(const Dataset& data, double gamma, int k, const Eigen::VectorXd& alpha);

// Maximizes f by supergradient ascent and returns the best iterate seen.
RelaxationResult solve_dual_relaxation(const Dataset& data, double gamma, int k,
                                       const RelaxationOptions& options = {});

// Indicator of the k largest (X_j' alpha)^2; ties go to the lower index.
Support warm_start_support(const Eigen::VectorXd& alpha, const Dataset& data, int k);

// Indices of the k largest entries of `scores`, ties to the lower index.
Support top_k(const Eigen::VectorXd& scores, int k);

}  // namespace sparsereg
