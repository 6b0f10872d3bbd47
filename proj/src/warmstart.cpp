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

#include "sparsereg/warmstart.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace sparsereg {
namespace {

struct Evaluation {
  double value = 0.0;
  Eigen::VectorXd proj;  // X' alpha
  Support top;
};

Evaluation evaluate(const Dataset& data, double gamma, int k, const Eigen::VectorXd& alpha) {
  Evaluation e;
  e.proj.noalias() = data.X.transpose() * alpha;
  const Eigen::VectorXd scores = e.proj.array().square();
  e.top = top_k(scores, k);
  double topk = 0.0;
  for (int j : e.top) topk += scores(j);
  e.value = -0.5 * alpha.squaredNorm() + data.Y.dot(alpha) - 0.5 * gamma * topk;
  return e;
}

}  // namespace

Support top_k(const Eigen::VectorXd& scores, int k) {
  const int p = static_cast<int>(scores.size());
  k = std::clamp(k, 0, p);
  std::vector<int> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), 0);
  auto larger = [&](int a, int b) { return scores(a) > scores(b) || (scores(a) == scores(b) && a < b); };
  std::nth_element(order.begin(), order.begin() + k, order.end(), larger);
  order.resize(static_cast<std::size_t>(k));
  return Support(std::move(order));
}

double relaxation_objective(const Dataset& data, double gamma, int k, const Eigen::VectorXd& alpha) {
  return evaluate(data, gamma, k, alpha).value;
}

RelaxationResult solve_dual_relaxation(const Dataset& data, double gamma, int k,
                                       const RelaxationOptions& options) {
  if (options.iters < 1) throw std::invalid_argument("solve_dual_relaxation: iters must be >= 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("solve_dual_relaxation: gamma must be positive");
  if (k < 0 || k > data.p()) throw std::invalid_argument("solve_dual_relaxation: k outside [0, p]");

  const double max_col_norm2 = data.X.colwise().squaredNorm().maxCoeff();
  const double base_step = 1.0 / (1.0 + gamma * max_col_norm2);

  Eigen::VectorXd alpha = data.Y;
  Evaluation current = evaluate(data, gamma, k, alpha);
  RelaxationResult best{alpha, current.value, 0};
  int stalled = 0;
  const auto started = std::chrono::steady_clock::now();

  for (int t = 1; t <= options.iters; ++t) {
    best.iterations = t;
    Eigen::VectorXd g = data.Y - alpha;
    for (int j : current.top) g.noalias() -= (gamma * current.proj(j)) * data.X.col(j);

    bool moved = false;
    if (options.rule == AscentRule::preconditioned && !current.top.empty()) {
      const Eigen::MatrixXd XT = select_columns(data.X, current.top);
      Eigen::MatrixXd cap = XT.transpose() * XT;
      cap.diagonal().array() += 1.0 / gamma;
      const Eigen::VectorXd dir = g - XT * Eigen::LLT<Eigen::MatrixXd>(cap).solve(XT.transpose() * g);
      for (double theta = 1.0; theta >= 0.125; theta *= 0.5) {
        Eigen::VectorXd trial = alpha + theta * dir;
        Evaluation e = evaluate(data, gamma, k, trial);
        if (e.value > current.value) {
          alpha = std::move(trial);
          current = std::move(e);
          moved = true;
          break;
        }
      }
    } else if (options.rule == AscentRule::preconditioned) {
      // k = 0: f is a smooth quadratic maximized at alpha = Y.
      alpha = data.Y;
      current = evaluate(data, gamma, k, alpha);
      moved = true;
    }
    if (!moved) {
      alpha += (base_step / std::sqrt(static_cast<double>(t))) * g;
      current = evaluate(data, gamma, k, alpha);
    }

    if (current.value > best.lower_bound + options.stall_tol * (1.0 + std::abs(best.lower_bound))) {
      stalled = 0;
    } else {
      ++stalled;
    }
    if (current.value > best.lower_bound) {
      best.lower_bound = current.value;
      best.alpha = alpha;
    }
    if (stalled >= options.stall_window) break;
    if (std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count() >= options.time_limit_s) break;
  }
  return best;
}

Support warm_start_support(const Eigen::VectorXd& alpha, const Dataset& data, int k) {
  if (alpha.size() != data.n()) throw std::invalid_argument("warm_start_support: alpha must have length n");
  const Eigen::VectorXd proj = data.X.transpose() * alpha;
  return top_k(proj.array().square().matrix(), k);
}

}  // namespace sparsereg
