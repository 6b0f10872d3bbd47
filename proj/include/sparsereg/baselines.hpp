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
#include <vector>

#include <Eigen/Dense>

#include "sparsereg/dataset.hpp"

namespace sparsereg {

struct CdOptions {
  int max_iter = 10000;  // full coordinate sweeps
  double cd_tol = 1e-9;
};

struct CdResult {
  Eigen::VectorXd w;
  bool converged = false;
  int sweeps = 0;
};

// Cyclic coordinate descent with soft thresholding on
//
//   0.5 ||Y - X w||^2 + (1 / 2gamma) ||w||^2 + lambda1 ||w||_1.
//
// gamma = +inf gives the Lasso. Converged means a full sweep moved no
// coordinate by more than cd_tol.
CdResult elastic_net_cd(const Dataset& data, double gamma, double lambda1,
                        const CdOptions& options = {}, const Eigen::VectorXd* warm = nullptr);

double elastic_net_objective(const Dataset& data, double gamma, double lambda1, const Eigen::VectorXd& w);

// Largest coordinate move a single soft-threshold update would make at w.
double coordinate_residual(const Dataset& data, double gamma, double lambda1, const Eigen::VectorXd& w);

struct PathConfig {
  std::vector<double> lambda_grid;  // strictly decreasing, positive
  int max_iter = 10000;
  double cd_tol = 1e-9;

  void validate() const;
};

// `count` log-spaced levels from ||X'Y||_inf down to ratio * ||X'Y||_inf.
PathConfig default_path(const Dataset& data, int count = 100, double ratio = 1e-4);

struct LassoKResult {
  Eigen::VectorXd w;
  double lambda1 = 0.0;
  int nonzeros = 0;
  bool exact = true;      // false: no path point had exactly k nonzeros
  bool converged = true;  // every path point reached cd_tol
};

// Walks the warm-started Lasso path and returns the least regularized point
// with exactly k nonzeros; otherwise the point whose support size is closest
// to k (ties to the larger lambda1) with `exact` cleared.
LassoKResult lasso_k_sparse(const Dataset& data, int k, const PathConfig& path);

}  // namespace sparsereg
