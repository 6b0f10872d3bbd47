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

#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "sparsereg/dataset.hpp"

namespace sparsereg {

// Loss c(s), subgradient and dual vector at a binary support.
//
//   alpha  = Y - X_s (I_k / gamma + X_s' X_s)^{-1} X_s' Y
//   c      = 0.5 * Y' alpha
//   grad_j = -(gamma / 2) * (X_j' alpha)^2        for every j in [p]
//
// Every gradient component is <= 0: adding a column never increases c.
struct LossEval {
  double c = 0.0;
  Eigen::VectorXd grad;
  Eigen::VectorXd alpha;
};

// Evaluates the loss through the k x k capacitance matrix (Cholesky), never
// forming an n x n matrix. Cost O(k^3 + nk^2 + np). The empty support is legal.
LossEval loss_and_gradient(const Dataset& data, double gamma, const Support& s);

// c(s) alone, without the O(np) gradient.
double ridge_loss(const Dataset& data, double gamma, const Support& s);

// Reference evaluator: 0.5 * Y' (I_n + gamma * sum_j s_j X_j X_j')^{-1} Y for a
// relaxed selection s in [0,1]^p, by dense Cholesky. O(n^3); tests only.
double ridge_loss_dense(const Dataset& data, double gamma, const Eigen::VectorXd& s);

// Dense dual vector (I_n + gamma * sum_j s_j X_j X_j')^{-1} Y.
Eigen::VectorXd dual_vector_dense(const Dataset& data, double gamma, const Eigen::VectorXd& s);

// Ridge coefficients on the support: (I_k / gamma + X_s' X_s)^{-1} X_s' Y,
// scattered into a length-p vector that is exactly zero off the support.
Eigen::VectorXd ridge_refit(const Dataset& data, double gamma, const Support& s);

// (1 / 2gamma) ||w||^2 + 0.5 ||Y - X w||^2.
double ridge_primal_objective(const Dataset& data, double gamma, const Eigen::VectorXd& w);

// Dual objective -(gamma/2) a' K a - 0.5 a'a + Y'a with K = sum_{j in s} X_j X_j'.
double ridge_dual_objective(const Dataset& data, double gamma, const Support& s,
                            const Eigen::VectorXd& alpha);

// Number of supports with size <= k over p columns, saturating at UINT64_MAX.
std::uint64_t count_supports_up_to(int p, int k);

struct EnumerationResult {
  Support support;
  double value = 0.0;
  std::uint64_t evaluated = 0;
};

// Brute-force minimum of c over all supports of size <= k. Ties resolve to the
// lexicographically smallest index list. Refuses (std::length_error, message
// carries the count) when the number of candidates exceeds `max_candidates`.
EnumerationResult enumerate_optimal(const Dataset& data, double gamma, int k,
                                    std::uint64_t max_candidates = 1000000);

// Same search for the penalized objective c(s) + lambda0 * |s| over all 2^p
// supports.
EnumerationResult enumerate_penalized(const Dataset& data, double gamma, double lambda0,
                                      std::uint64_t max_candidates = 1000000);

}  // namespace sparsereg
