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

#include "sparsereg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sparsereg/rng.hpp"

namespace sparsereg {

RecoveryScore support_metrics(const Support& found, const Support& truth, int k_true) {
  if (k_true < 1) throw std::invalid_argument("support_metrics: k_true must be >= 1");
  int hits = 0;
  for (int j : found)
    if (truth.contains(j)) ++hits;
  RecoveryScore score;
  score.accuracy_pct = 100.0 * hits / k_true;
  score.false_alarm_pct = found.empty() ? 0.0 : 100.0 * (found.size() - hits) / found.size();
  return score;
}

double mean_squared_error(const Dataset& data, const Eigen::VectorXd& w) {
  return (data.Y - data.X * w).squaredNorm() / data.n();
}

std::vector<double> default_gamma_grid(int n) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  return {0.01 * scale, 0.1 * scale, 1.0 * scale, 10.0 * scale};
}

std::vector<int> assign_folds(int n, int folds, std::uint64_t seed) {
  if (folds < 2 || folds > n) throw std::invalid_argument("assign_folds: need 2 <= folds <= n");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  CounterRng rng(seed, 0xcf);
  for (int i = n - 1; i > 0; --i) {
    const auto j = rng.below(static_cast<std::uint64_t>(i + 1));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  std::vector<int> fold_of(static_cast<std::size_t>(n));
  for (int f = 0; f < folds; ++f) {
    const int lo = static_cast<int>(static_cast<std::int64_t>(f) * n / folds);
    const int hi = static_cast<int>(static_cast<std::int64_t>(f + 1) * n / folds);
    for (int pos = lo; pos < hi; ++pos) fold_of[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] = f;
  }
  return fold_of;
}

CvResult cross_validate_k(const Dataset& data, const CvOptions& options) {
  data.validate();
  if (options.gamma_grid.empty()) throw std::invalid_argument("cross_validate_k: empty gamma grid");
  if (options.k_values.empty()) throw std::invalid_argument("cross_validate_k: empty k range");
  for (int k : options.k_values)
    if (k < 1 || k > data.p()) throw std::invalid_argument("cross_validate_k: k outside [1, p]");

  CvResult result;
  result.fold_of = assign_folds(data.n(), options.folds, options.seed);
  std::vector<Dataset> train(static_cast<std::size_t>(options.folds));
  std::vector<Dataset> valid(static_cast<std::size_t>(options.folds));
  for (int f = 0; f < options.folds; ++f) {
    std::vector<int> in, out;
    for (int i = 0; i < data.n(); ++i) (result.fold_of[static_cast<std::size_t>(i)] == f ? out : in).push_back(i);
    train[static_cast<std::size_t>(f)] = data.subset_rows(in);
    valid[static_cast<std::size_t>(f)] = data.subset_rows(out);
  }

  for (double gamma : options.gamma_grid) {
    std::vector<CvCell> cells;
    for (int k : options.k_values) cells.push_back(CvCell{gamma, k, 0.0, {}, false});
    for (int f = 0; f < options.folds; ++f) {
      const Dataset& tr = train[static_cast<std::size_t>(f)];
      const Dataset& va = valid[static_cast<std::size_t>(f)];
      CutPool pool(data.p());
      for (CvCell& cell : cells) {
        const int k = std::min(cell.k, tr.p());
        const SolveResult fit = solve_cardinality(tr, gamma, k, options.solver,
                                                  options.reuse_cuts ? &pool : nullptr);
        cell.fold_errors.push_back(mean_squared_error(va, fit.coefficients));
        cell.any_time_limit = cell.any_time_limit || fit.status == Status::time_limit;
      }
    }
    for (CvCell& cell : cells) {
      cell.mean_error = std::accumulate(cell.fold_errors.begin(), cell.fold_errors.end(), 0.0) /
                        static_cast<double>(cell.fold_errors.size());
      result.table.push_back(std::move(cell));
    }
  }

  const CvCell* best = nullptr;
  for (const CvCell& cell : result.table) {
    if (!best || cell.mean_error < best->mean_error ||
        (cell.mean_error == best->mean_error &&
         (cell.k < best->k || (cell.k == best->k && cell.gamma > best->gamma)))) {
      best = &cell;
    }
  }
  result.k = best->k;
  result.gamma = best->gamma;
  return result;
}

}  // namespace sparsereg
