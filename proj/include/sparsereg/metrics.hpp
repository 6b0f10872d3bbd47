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
#include <vector>

#include "sparsereg/dataset.hpp"
#include "sparsereg/solver.hpp"

namespace sparsereg {

struct RecoveryScore {
  double accuracy_pct = 0.0;     // 100 |true ∩ found| / k_true
  double false_alarm_pct = 0.0;  // 100 |found \ true| / |found|, 0 for an empty found set
};

RecoveryScore support_metrics(const Support& found, const Support& truth, int k_true);

// ||Y - X w||^2 / n.
double mean_squared_error(const Dataset& data, const Eigen::VectorXd& w);

struct CvOptions {
  std::vector<double> gamma_grid;
  std::vector<int> k_values;
  int folds = 5;
  std::uint64_t seed = 0;
  SolveConfig solver;
  bool reuse_cuts = true;  // share one cut pool across k within a (gamma, fold)
};

struct CvCell {
  double gamma = 0.0;
  int k = 0;
  double mean_error = 0.0;
  std::vector<double> fold_errors;
  bool any_time_limit = false;
};

struct CvResult {
  int k = 0;
  double gamma = 0.0;
  std::vector<CvCell> table;  // gamma-major, then k in the given order
  std::vector<int> fold_of;   // fold index of each row
};

// Seeded shuffle, then contiguous blocks: fold f holds shuffled positions
// [f n / folds, (f + 1) n / folds).
std::vector<int> assign_folds(int n, int folds, std::uint64_t seed);

// Validation error ||Y_val - X_val w||^2 / n_val averaged over folds for every
// (gamma, k). The minimizer wins; ties go to the smaller k, then the larger
// gamma. Time-limited solves keep their incumbent and flag the cell.
CvResult cross_validate_k(const Dataset& data, const CvOptions& options);

// Default gamma grid {0.01, 0.1, 1, 10} / sqrt(n).
std::vector<double> default_gamma_grid(int n);

}  // namespace sparsereg
