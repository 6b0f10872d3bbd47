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

#include "sparsereg/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "sparsereg/baselines.hpp"
#include "sparsereg/oracle.hpp"

namespace sparsereg {

const char* to_string(WarmStart warm) {
  switch (warm) {
    case WarmStart::dual_relaxation: return "dual";
    case WarmStart::lasso: return "lasso";
    case WarmStart::given: return "given";
    case WarmStart::none: return "none";
  }
  return "unknown";
}

void SolveConfig::validate() const {
  if (tol && !(*tol > 0.0)) throw std::invalid_argument("solve config: tol must be positive");
  if (!(time_limit_s > 0.0)) throw std::invalid_argument("solve config: time_limit must be positive");
  if (max_cuts < 1) throw std::invalid_argument("solve config: max_cuts must be >= 1");
  if (max_nodes < 1) throw std::invalid_argument("solve config: max_nodes must be >= 1");
  if (local_search_rounds < 0 || local_search_candidates < 0)
    throw std::invalid_argument("solve config: local search settings must be >= 0");
}

double SolveConfig::tolerance_for(const Dataset& data) const {
  return tol ? *tol : 1e-6 * (1.0 + 0.5 * data.Y.squaredNorm());
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Warm-start support. `bound` receives a certified lower bound on the optimum
// when the warm start produces one (the dual relaxation), else stays 0.
Support initial_support(const Dataset& data, double gamma, int k, double lambda0, bool penalized,
                        const SolveConfig& config, double remaining_s, double& bound) {
  switch (config.warm_start) {
    case WarmStart::none:
      return Support{};
    case WarmStart::given: {
      config.given_support.check_range(data.p());
      if (!penalized && config.given_support.size() > k)
        throw std::invalid_argument("given warm start exceeds the sparsity budget");
      return config.given_support;
    }
    case WarmStart::lasso: {
      const int budget = penalized ? std::min(data.p(), data.n()) : k;
      const LassoKResult lasso = lasso_k_sparse(data, budget, default_path(data));
      Eigen::VectorXd magnitude = lasso.w.cwiseAbs();
      Support nonzero = top_k(magnitude, budget);
      std::vector<int> kept;
      for (int j : nonzero)
        if (lasso.w(j) != 0.0) kept.push_back(j);
      return Support(std::move(kept));
    }
    case WarmStart::dual_relaxation: {
      RelaxationOptions options = config.relaxation;
      options.time_limit_s = std::min(options.time_limit_s, remaining_s);
      if (!penalized) {
        const RelaxationResult relax = solve_dual_relaxation(data, gamma, k, options);
        bound = std::max(bound, relax.lower_bound);
        return warm_start_support(relax.alpha, data, k);
      }
      // Penalized: keep the coordinates whose linearized loss reduction at the
      // relaxed dual point exceeds the penalty.
      // The full-budget relaxation bounds c(s) for every s, and the penalty is nonnegative.
      const RelaxationResult relax = solve_dual_relaxation(data, gamma, data.p(), options);
      bound = std::max(bound, relax.lower_bound);
      const Eigen::VectorXd proj = data.X.transpose() * relax.alpha;
      std::vector<int> picked;
      for (int j = 0; j < data.p(); ++j)
        if (0.5 * gamma * proj(j) * proj(j) > lambda0) picked.push_back(j);
      return Support(std::move(picked));
    }
  }
  return Support{};
}

// One-exchange descent from `start`. Every accepted support is pooled.
Incumbent local_search(const Dataset& data, double gamma, const Incumbent& from, int k, double lambda0,
                       bool penalized, const SolveConfig& config, CutPool& pool,
                       const std::function<LossEval(const Support&)>& oracle,
                       const std::function<bool()>& out_of_time) {
  Incumbent best = from;
  const int p = pool.p();
  auto cost = [&](const Support& s, double c) { return c + lambda0 * s.size(); };
  auto value_of = [&](const Support& s) {
    if (const Cut* known = pool.find(s)) return cost(s, known->value);
    return cost(s, ridge_loss(data, gamma, s));
  };
  for (int round = 0; round < config.local_search_rounds && !out_of_time(); ++round) {
    const Cut* here = pool.find(best.s);
    const Eigen::VectorXd grad = here ? here->grad : oracle(best.s).grad;
    std::vector<int> outside;
    for (int j = 0; j < p; ++j)
      if (!best.s.contains(j)) outside.push_back(j);
    const std::size_t m = std::min(outside.size(), static_cast<std::size_t>(config.local_search_candidates));
    std::partial_sort(outside.begin(), outside.begin() + static_cast<std::ptrdiff_t>(m), outside.end(),
                      [&](int a, int b) { return grad(a) < grad(b) || (grad(a) == grad(b) && a < b); });
    outside.resize(m);

    std::vector<Support> moves;
    const std::vector<int> inside(best.s.begin(), best.s.end());
    for (int in : outside) {
      if (best.s.size() < k) {
        std::vector<int> grown = inside;
        grown.push_back(in);
        moves.emplace_back(std::move(grown));
      }
      for (std::size_t o = 0; o < inside.size(); ++o) {
        std::vector<int> swapped = inside;
        swapped[o] = in;
        moves.emplace_back(std::move(swapped));
      }
    }
    if (penalized)
      for (std::size_t o = 0; o < inside.size(); ++o) {
        std::vector<int> shrunk = inside;
        shrunk.erase(shrunk.begin() + static_cast<std::ptrdiff_t>(o));
        moves.emplace_back(std::move(shrunk));
      }

    Incumbent step = best;
    for (const Support& s : moves) {
      if (out_of_time()) break;
      const double v = value_of(s);
      if (v < step.value || (v == step.value && s < step.s)) step = {s, v};
    }
    if (!(step.value < best.value - 1e-12 * (1.0 + std::abs(best.value)))) break;
    if (!pool.find(step.s)) pool.add(oracle(step.s), step.s);
    best = step;
  }
  return best;
}

SolveResult finish(const Dataset& data, double gamma, double lambda0, const Support& s,
                   Clock::time_point start) {
  SolveResult result;
  result.support = s;
  result.coefficients = ridge_refit(data, gamma, s);
  result.objective = loss_and_gradient(data, gamma, s).c + lambda0 * s.size();
  result.wall_time_s = seconds_since(start);
  return result;
}

SolveResult solve_impl(const Dataset& data, double gamma, int k, double lambda0, bool penalized,
                       const SolveConfig& config, CutPool* shared_pool) {
  const auto start = Clock::now();
  data.validate();
  config.validate();
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be positive and finite");
  if (shared_pool && shared_pool->p() != data.p())
    throw std::invalid_argument("shared cut pool was built for a different p");

  if (data.Y.squaredNorm() == 0.0) {
    // Every support has zero loss; report the empty model.
    SolveResult result = finish(data, gamma, lambda0, Support{}, start);
    result.lower_bound = 0.0;
    result.history.push_back({0.0, 0.0, 0.0, 0.0});
    return result;
  }

  const double tol = config.tolerance_for(data);
  CutPool local_pool(data.p());
  CutPool& pool = shared_pool ? *shared_pool : local_pool;
  const std::size_t pool_before = pool.size();
  auto oracle = [&](const Support& s) { return loss_and_gradient(data, gamma, s); };
  auto cost = [&](const Support& s, double c) { return c + lambda0 * s.size(); };

  // Warm start: the first cut.
  double relaxation_bound = 0.0;  // c(s) >= 0 always
  const Support s1 = initial_support(data, gamma, k, lambda0, penalized, config,
                                     config.time_limit_s - seconds_since(start), relaxation_bound);
  Incumbent incumbent;
  if (const Cut* known = pool.find(s1)) {
    incumbent = {s1, cost(s1, known->value)};
  } else {
    const LossEval eval = oracle(s1);
    pool.add(eval, s1);
    incumbent = {s1, cost(s1, eval.c)};
  }
  // Reused pools may already hold better supports.
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const Cut& cut = pool[i];
    if (!penalized && cut.anchor.size() > k) continue;
    const double v = cost(cut.anchor, cut.value);
    if (v < incumbent.value || (v == incumbent.value && cut.anchor < incumbent.s))
      incumbent = {cut.anchor, v};
  }

  incumbent = local_search(data, gamma, incumbent, k, lambda0, penalized, config, pool, oracle,
                           [&] { return seconds_since(start) >= config.time_limit_s; });

  MasterLimits limits;
  limits.tol = tol;
  limits.root_bound_iters = config.root_bound_iters;
  limits.node_bound_iters = config.node_bound_iters;

  std::vector<CutLoopStep> history;
  double lower_bound = relaxation_bound;
  std::int64_t nodes = 0;
  bool limited = false;
  bool duplicate = false;
  const std::size_t cut_cap = config.max_cuts == std::numeric_limits<std::size_t>::max()
                                  ? config.max_cuts
                                  : pool_before + config.max_cuts;

  if (config.mode == MasterMode::single_tree) {
    limits.time_limit_s = std::max(0.0, config.time_limit_s - seconds_since(start));
    limits.max_nodes = config.max_nodes;
    limits.max_pool_size = cut_cap;
    const MasterSolution ms = solve_master(pool, k, incumbent, oracle, MasterMode::single_tree, limits, lambda0);
    nodes = ms.nodes_explored;
    limited = ms.status == Status::time_limit;
    incumbent = {ms.s, ms.eta};
    lower_bound = std::max(lower_bound, ms.lower_bound);
    history.push_back({ms.eta, ms.eta, lower_bound, ms.eta});
  } else {
    while (true) {
      const double remaining = config.time_limit_s - seconds_since(start);
      if (remaining <= 0.0 || nodes >= config.max_nodes || pool.size() >= cut_cap) {
        limited = true;
        break;
      }
      limits.time_limit_s = remaining;
      limits.max_nodes = config.max_nodes - nodes;
      const MasterSolution ms = solve_master(pool, k, std::nullopt, {}, MasterMode::multi_tree, limits, lambda0);
      nodes += ms.nodes_explored;
      lower_bound = std::max(lower_bound, std::min(ms.lower_bound, incumbent.value));
      if (ms.status == Status::time_limit) {
        history.push_back({ms.eta, incumbent.value, lower_bound, incumbent.value});
        limited = true;
        break;
      }
      double c_t;
      if (const Cut* known = pool.find(ms.s)) {
        c_t = cost(ms.s, known->value);
      } else {
        const LossEval eval = oracle(ms.s);
        if (!pool.add(eval, ms.s)) duplicate = true;
        c_t = cost(ms.s, eval.c);
      }
      if (c_t < incumbent.value || (c_t == incumbent.value && ms.s < incumbent.s)) incumbent = {ms.s, c_t};
      history.push_back({ms.eta, c_t, lower_bound, incumbent.value});
      if (ms.eta >= c_t - tol) break;
    }
  }
  duplicate = duplicate || pool.duplicate_seen();

  SolveResult result = finish(data, gamma, lambda0, incumbent.s, start);
  result.lower_bound = std::min(lower_bound, result.objective);
  result.cuts = pool.size() - pool_before;
  result.nodes = nodes;
  // A limit that stops the search after the gap is already closed still
  // leaves a certified optimum.
  result.status = limited && result.objective - result.lower_bound > tol ? Status::time_limit : Status::optimal;
  result.history = std::move(history);
  result.duplicate_cut = duplicate;
  return result;
}

}  // namespace

SolveResult solve_cardinality(const Dataset& data, double gamma, int k, const SolveConfig& config,
                              CutPool* shared_pool) {
  if (k < 1 || k > data.p()) throw std::invalid_argument("solve_cardinality: k must lie in [1, p]");
  return solve_impl(data, gamma, k, 0.0, false, config, shared_pool);
}

SolveResult solve_penalized(const Dataset& data, double gamma, double lambda0,
                            const SolveConfig& config, CutPool* shared_pool) {
  if (!(lambda0 >= 0.0) || !std::isfinite(lambda0))
    throw std::invalid_argument("solve_penalized: lambda0 must be nonnegative and finite");
  return solve_impl(data, gamma, data.p(), lambda0, true, config, shared_pool);
}

}  // namespace sparsereg
