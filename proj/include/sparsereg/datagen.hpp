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

#include <Eigen/Dense>

#include "sparsereg/dataset.hpp"

namespace sparsereg {

struct SyntheticSpec {
  int n = 0;
  int p = 0;
  int k = 0;
  double rho = 0.0;       // Sigma(i, j) = rho^|i - j|
  double snr_sqrt = 1.0;  // ||X w_true|| / ||E||
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticInstance {
  Dataset data;
  Eigen::VectorXd w_true;  // +-1 on the support, 0 elsewhere
  Support support_true;
  Eigen::VectorXi signs;   // sign of w_true on support_true, in index order
  double sigma2_effective = 0.0;  // ||E||^2 / n = ||X w_true||^2 / (n * SNR)
};

// x_1 = z_1, x_j = rho * x_{j-1} + sqrt(1 - rho^2) * z_j, in place over z.
void ar1_transform(double rho, Eigen::Ref<Eigen::VectorXd> z);

// Rows are iid N(0, Sigma), drawn through the AR(1) recursion
//   x_1 = z_1,  x_j = rho * x_{j-1} + sqrt(1 - rho^2) * z_j,
// which has exactly this covariance. The support is uniform without
// replacement with uniform signs; the noise is rescaled so that
// ||X w_true|| / ||E|| equals snr_sqrt. Deterministic in the spec.
SyntheticInstance generate(const SyntheticSpec& spec);

struct Thresholds {
  double n0 = 0.0;  // 2k log p / log(2k / sigma^2 + 1)
  double n1 = 0.0;  // (2k + sigma^2) log(p - k)
};

// Requires p > k and sigma2 >= 0; sigma2 = 0 gives n0 = 0 (its limit).
Thresholds theoretical_thresholds(int k, int p, double sigma2);

}  // namespace sparsereg
