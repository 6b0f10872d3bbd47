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

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sparsereg/dataset.hpp"
#include "sparsereg/master.hpp"
#include "sparsereg/warmstart.hpp"

namespace sparsereg {

enum class WarmStart { dual_relaxation, lasso, given, none };

const char* to_string(WarmStart warm);

struct SolveConfig {
  // Absolute eta-vs-c(s) tolerance; defaults to 1e-6 * (1 + 0.5 ||Y||^2).
  std::optional<double> tol;
  double time_limit_s = 600.0;
  std::size_t max_cuts = std::numeric_limits<std::size_t>::max();
  // Branch-and-bound node budget summed over all master solves. Unlike the
  // wall-clock limit it makes truncated solves reproducible.
  std::int64_t max_nodes = std::numeric_limits<std::int64_t>::max();
  MasterMode mode = MasterMode::single_tree;
  WarmStart warm_start = WarmStart::dual_relaxation;
  Support given_support;  // used with WarmStart::given
  RelaxationOptions relaxation;
  int root_bound_iters = 200;
  int node_bound_iters = 60;
  // Best-improvement local search on the warm start before branching: swap
  // one selected coordinate for one of the `local_search_candidates`
  // unselected coordinates with the steepest loss gradient (plus single
  // additions and, when penalized, removals). 0 rounds disables it.
  int local_search_rounds = 50;
  int local_search_candidates = 32;

  void validate() const;
  double tolerance_for(const Dataset& data) const;
};

// One outer iteration of the multi-tree loop, or the final state of a
// single-tree solve.
struct CutLoopStep {
  double eta = 0.0;          // master value
  double loss = 0.0;         // c(s_t) + penalty * |s_t|
  double lower_bound = 0.0;  // certified global lower bound so far
  double upper_bound = 0.0;  // best value found so far
};

struct SolveResult {
  Support support;
  Eigen::VectorXd coefficients;  // length p, zero off the support
  double objective = 0.0;        // c(support) (+ lambda0 * |support| when penalized)
  double lower_bound = 0.0;
  std::size_t cuts = 0;
  std::int64_t nodes = 0;
  double wall_time_s = 0.0;
  Status status = Status::optimal;
  std::vector<CutLoopStep> history;
  bool duplicate_cut = false;
};

// Best subset ridge regression with |support| <= k by outer approximation.
// `shared_pool`, when given, supplies previously generated cuts for the same
// (data, gamma) and receives the new ones.
SolveResult solve_cardinality(const Dataset& data, double gamma, int k, const SolveConfig& config,
                              CutPool* shared_pool = nullptr);

// min over s in {0,1}^p of c(s) + lambda0 * |s|.
SolveResult solve_penalized(const Dataset& data, double gamma, double lambda0,
                            const SolveConfig& config, CutPool* shared_pool = nullptr);

}  // namespace sparsereg
