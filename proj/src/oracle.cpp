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

#include "sparsereg/oracle.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sparsereg {
namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("gamma must be positive and finite");
}

// Solves (I_k / gamma + X_s' X_s) z = X_s' Y. Returns z (length |s|).
Eigen::VectorXd capacitance_solve(const Dataset& data, double gamma, const Eigen::MatrixXd& Xs) {
  Eigen::MatrixXd cap = Xs.transpose() * Xs;
  cap.diagonal().array() += 1.0 / gamma;
  Eigen::LLT<Eigen::MatrixXd> llt(cap);
  if (llt.info() != Eigen::Success) throw std::runtime_error("capacitance matrix not positive definite");
  Eigen::VectorXd rhs = Xs.transpose() * data.Y;
  return llt.solve(rhs);
}

Eigen::MatrixXd dense_system(const Dataset& data, double gamma, const Eigen::VectorXd& s) {
  if (s.size() != data.p()) throw std::invalid_argument("relaxed selection must have length p");
  if (!s.allFinite()) throw std::invalid_argument("relaxed selection contains non-finite entries");
  if ((s.array() < 0.0).any() || (s.array() > 1.0).any())
    throw std::invalid_argument("relaxed selection entries must lie in [0,1]");
  // I + gamma * X diag(s) X'
  Eigen::MatrixXd scaled = data.X * s.cwiseSqrt().asDiagonal();
  Eigen::MatrixXd m = gamma * (scaled * scaled.transpose());
  m.diagonal().array() += 1.0;
  return m;
}

// Visits every combination of `size` indices out of p in lexicographic order.
void for_each_combination(int p, int size, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> comb(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) comb[static_cast<std::size_t>(i)] = i;
  if (size > p) return;
  while (true) {
    fn(comb);
    int i = size - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == p - size + i) --i;
    if (i < 0) return;
    ++comb[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < size; ++j)
      comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace

LossEval loss_and_gradient(const Dataset& data, double gamma, const Support& s) {
  check_gamma(gamma);
  s.check_range(data.p());
  LossEval out;
  if (s.empty()) {
    out.alpha = data.Y;
  } else {
    const Eigen::MatrixXd Xs = select_columns(data.X, s);
    const Eigen::VectorXd z = capacitance_solve(data, gamma, Xs);
    out.alpha = data.Y - Xs * z;
  }
  out.c = std::max(0.0, 0.5 * data.Y.dot(out.alpha));
  out.grad.noalias() = data.X.transpose() * out.alpha;
  out.grad = (-0.5 * gamma) * out.grad.array().square();
  return out;
}

double ridge_loss(const Dataset& data, double gamma, const Support& s) {
  check_gamma(gamma);
  s.check_range(data.p());
  if (s.empty()) return 0.5 * data.Y.squaredNorm();
  const Eigen::MatrixXd Xs = select_columns(data.X, s);
  const Eigen::VectorXd z = capacitance_solve(data, gamma, Xs);
  return std::max(0.0, 0.5 * data.Y.dot(data.Y - Xs * z));
}

double ridge_loss_dense(const Dataset& data, double gamma, const Eigen::VectorXd& s) {
  data.validate();
  check_gamma(gamma);
  Eigen::LLT<Eigen::MatrixXd> llt(dense_system(data, gamma, s));
  return 0.5 * data.Y.dot(llt.solve(data.Y));
}

Eigen::VectorXd dual_vector_dense(const Dataset& data, double gamma, const Eigen::VectorXd& s) {
  check_gamma(gamma);
  Eigen::LLT<Eigen::MatrixXd> llt(dense_system(data, gamma, s));
  return llt.solve(data.Y);
}

Eigen::VectorXd ridge_refit(const Dataset& data, double gamma, const Support& s) {
  check_gamma(gamma);
  s.check_range(data.p());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(data.p());
  if (s.empty()) return w;
  const Eigen::MatrixXd Xs = select_columns(data.X, s);
  const Eigen::VectorXd z = capacitance_solve(data, gamma, Xs);
  for (int i = 0; i < s.size(); ++i) w(s[static_cast<std::size_t>(i)]) = z(i);
  return w;
}

double ridge_primal_objective(const Dataset& data, double gamma, const Eigen::VectorXd& w) {
  return 0.5 / gamma * w.squaredNorm() + 0.5 * (data.Y - data.X * w).squaredNorm();
}

double ridge_dual_objective(const Dataset& data, double gamma, const Support& s,
                            const Eigen::VectorXd& alpha) {
  double kernel_term = 0.0;
  for (int j : s) {
    const double proj = data.X.col(j).dot(alpha);
    kernel_term += proj * proj;
  }
  return -0.5 * gamma * kernel_term - 0.5 * alpha.squaredNorm() + data.Y.dot(alpha);
}

std::uint64_t count_supports_up_to(int p, int k) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // C(p, 0)
  for (int size = 0; size <= std::min(k, p); ++size) {
    if (size > 0) {
      // C(p, size) = C(p, size-1) * (p - size + 1) / size, exact in integers.
      const unsigned __int128 next = static_cast<unsigned __int128>(binom) *
                                     static_cast<unsigned>(p - size + 1) / static_cast<unsigned>(size);
      if (next > kMax) return kMax;
      binom = static_cast<std::uint64_t>(next);
    }
    if (total > kMax - binom) return kMax;
    total += binom;
  }
  return total;
}

namespace {

EnumerationResult enumerate_impl(const Dataset& data, double gamma, int max_size, double lambda0,
                                 std::uint64_t max_candidates) {
  data.validate();
  check_gamma(gamma);
  const std::uint64_t count = count_supports_up_to(data.p(), max_size);
  if (count > max_candidates) {
    std::ostringstream msg;
    msg << "enumerate_optimal: refusing to evaluate " << count << " supports (limit "
        << max_candidates << ")";
    throw std::length_error(msg.str());
  }
  EnumerationResult best;
  best.value = std::numeric_limits<double>::infinity();
  bool have = false;
  for (int size = 0; size <= std::min(max_size, data.p()); ++size) {
    for_each_combination(data.p(), size, [&](const std::vector<int>& comb) {
      Support s(comb);
      const double v = loss_and_gradient(data, gamma, s).c + lambda0 * size;
      ++best.evaluated;
      if (!have || v < best.value || (v == best.value && s < best.support)) {
        best.value = v;
        best.support = std::move(s);
        have = true;
      }
    });
  }
  return best;
}

}  // namespace

EnumerationResult enumerate_optimal(const Dataset& data, double gamma, int k,
                                    std::uint64_t max_candidates) {
  if (k < 0) throw std::invalid_argument("enumerate_optimal: k must be >= 0");
  return enumerate_impl(data, gamma, k, 0.0, max_candidates);
}

EnumerationResult enumerate_penalized(const Dataset& data, double gamma, double lambda0,
                                      std::uint64_t max_candidates) {
  if (!(lambda0 >= 0.0)) throw std::invalid_argument("enumerate_penalized: lambda0 must be >= 0");
  return enumerate_impl(data, gamma, data.p(), lambda0, max_candidates);
}

}  // namespace sparsereg
