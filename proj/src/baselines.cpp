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

#include "sparsereg/baselines.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace sparsereg {
namespace {

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

double ridge_weight(double gamma) { return std::isinf(gamma) ? 0.0 : 1.0 / gamma; }

}  // namespace

CdResult elastic_net_cd(const Dataset& data, double gamma, double lambda1, const CdOptions& options,
                        const Eigen::VectorXd* warm) {
  if (!(lambda1 > 0.0)) throw std::invalid_argument("elastic_net_cd: lambda1 must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("elastic_net_cd: gamma must be positive");
  const int p = data.p();
  const double ridge = ridge_weight(gamma);
  const Eigen::VectorXd col_norm2 = data.X.colwise().squaredNorm();

  CdResult out;
  out.w = warm ? *warm : Eigen::VectorXd::Zero(p);
  Eigen::VectorXd residual = data.Y - data.X * out.w;
  for (out.sweeps = 0; out.sweeps < options.max_iter;) {
    ++out.sweeps;
    double max_move = 0.0;
    for (int j = 0; j < p; ++j) {
      const double denom = col_norm2(j) + ridge;
      if (denom == 0.0) continue;
      const double old = out.w(j);
      const double z = data.X.col(j).dot(residual) + col_norm2(j) * old;
      const double updated = soft_threshold(z, lambda1) / denom;
      if (updated != old) {
        residual.noalias() -= (updated - old) * data.X.col(j);
        out.w(j) = updated;
        max_move = std::max(max_move, std::abs(updated - old));
      }
    }
    if (max_move <= options.cd_tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

double elastic_net_objective(const Dataset& data, double gamma, double lambda1, const Eigen::VectorXd& w) {
  return 0.5 * (data.Y - data.X * w).squaredNorm() + 0.5 * ridge_weight(gamma) * w.squaredNorm() +
         lambda1 * w.lpNorm<1>();
}

double coordinate_residual(const Dataset& data, double gamma, double lambda1, const Eigen::VectorXd& w) {
  const Eigen::VectorXd residual = data.Y - data.X * w;
  const double ridge = ridge_weight(gamma);
  double worst = 0.0;
  for (int j = 0; j < data.p(); ++j) {
    const double norm2 = data.X.col(j).squaredNorm();
    if (norm2 + ridge == 0.0) continue;
    const double z = data.X.col(j).dot(residual) + norm2 * w(j);
    worst = std::max(worst, std::abs(soft_threshold(z, lambda1) / (norm2 + ridge) - w(j)));
  }
  return worst;
}

void PathConfig::validate() const {
  if (lambda_grid.empty()) throw std::invalid_argument("lasso path: empty lambda grid");
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] > 0.0)) throw std::invalid_argument("lasso path: levels must be positive");
    if (i > 0 && !(lambda_grid[i] < lambda_grid[i - 1]))
      throw std::invalid_argument("lasso path: grid must be strictly decreasing");
  }
  if (!(cd_tol > 0.0)) throw std::invalid_argument("lasso path: cd_tol must be positive");
}

PathConfig default_path(const Dataset& data, int count, double ratio) {
  PathConfig path;
  double top = (data.X.transpose() * data.Y).cwiseAbs().maxCoeff();
  if (!(top > 0.0)) top = 1.0;
  const double log_top = std::log(top);
  const double log_bottom = std::log(top * ratio);
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    path.lambda_grid.push_back(std::exp(log_top + t * (log_bottom - log_top)));
  }
  return path;
}

LassoKResult lasso_k_sparse(const Dataset& data, int k, const PathConfig& path) {
  path.validate();
  if (k < 0) throw std::invalid_argument("lasso_k_sparse: k must be >= 0");
  if (k == 0) return {Eigen::VectorXd::Zero(data.p()), path.lambda_grid.front(), 0, true, true};
  const CdOptions options{path.max_iter, path.cd_tol};
  const double inf = std::numeric_limits<double>::infinity();

  Eigen::VectorXd w = Eigen::VectorXd::Zero(data.p());
  LassoKResult exact_hit;
  bool have_exact = false;
  LassoKResult closest;
  int closest_gap = std::numeric_limits<int>::max();
  bool all_converged = true;
  for (double lambda1 : path.lambda_grid) {
    CdResult step = elastic_net_cd(data, inf, lambda1, options, &w);
    all_converged = all_converged && step.converged;
    w = std::move(step.w);
    const int nnz = static_cast<int>((w.array() != 0.0).count());
    if (nnz == k) {
      // Later grid points are less regularized, so keep overwriting.
      exact_hit = {w, lambda1, nnz, true, true};
      have_exact = true;
    }
    const int gap = std::abs(nnz - k);
    if (gap < closest_gap) {
      closest_gap = gap;
      closest = {w, lambda1, nnz, false, true};
    }
  }
  LassoKResult out = have_exact ? exact_hit : closest;
  out.converged = all_converged;
  return out;
}

}  // namespace sparsereg
