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

#include "sparsereg/master.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace sparsereg {

const char* to_string(Status status) {
  return status == Status::optimal ? "optimal" : "time_limit";
}

const char* to_string(MasterMode mode) {
  return mode == MasterMode::single_tree ? "single_tree" : "multi_tree";
}

bool CutPool::add(const LossEval& eval, const Support& anchor) {
  if (eval.grad.size() != p_) throw std::invalid_argument("cut gradient length differs from pool p");
  anchor.check_range(p_);
  if (index_.count(anchor)) {
    duplicate_seen_ = true;
    return false;
  }
  Cut cut;
  cut.anchor = anchor;
  cut.value = eval.c;
  cut.grad = eval.grad;
  double dot = 0.0;
  for (int j : anchor) dot += eval.grad(j);
  cut.constant = eval.c - dot;
  index_.emplace(anchor, cuts_.size());
  for (int j = 0; j < p_; ++j) by_coord_[static_cast<std::size_t>(j)].push_back(eval.grad(j));
  constants_.push_back(cut.constant);
  cuts_.push_back(std::move(cut));
  return true;
}

const Cut* CutPool::find(const Support& anchor) const {
  auto it = index_.find(anchor);
  return it == index_.end() ? nullptr : &cuts_[it->second];
}

double CutPool::evaluate(std::size_t i, const Support& s) const {
  const Cut& cut = cuts_[i];
  double v = cut.constant;
  for (int j : s) v += cut.grad(j);
  return v;
}

void CutPool::evaluate_all(const Support& s, std::vector<double>& out) const {
  out = constants_;
  const std::size_t T = out.size();
  for (int j : s) {
    const double* slope = by_coord_[static_cast<std::size_t>(j)].data();
    for (std::size_t i = 0; i < T; ++i) out[i] += slope[i];
  }
}

double CutPool::pooled_max(const Support& s) const {
  std::vector<double> values;
  evaluate_all(s, values);
  double best = -std::numeric_limits<double>::infinity();
  for (double v : values) best = std::max(best, v);
  return best;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Euclidean projection onto the unit simplex.
void project_to_simplex(std::vector<double>& v) {
  std::vector<double> sorted(v);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - t > 0.0) theta = t;
  }
  for (double& x : v) x = std::max(0.0, x - theta);
}

// Per-node view of the fixings.
struct NodeLayout {
  std::vector<int> ones;
  std::vector<int> free;
  int slots = 0;  // how many free coordinates may still be selected
  bool single_point = false;
};

NodeLayout layout_of(const Node& node, int p, int k) {
  NodeLayout layout;
  std::vector<char> state(static_cast<std::size_t>(p), 0);
  for (int j : node.fixed_one) state[static_cast<std::size_t>(j)] = 1;
  for (int j : node.fixed_zero) state[static_cast<std::size_t>(j)] = 2;
  layout.ones = node.fixed_one;
  for (int j = 0; j < p; ++j)
    if (state[static_cast<std::size_t>(j)] == 0) layout.free.push_back(j);
  layout.slots = k - static_cast<int>(node.fixed_one.size());
  layout.single_point = layout.free.empty() || layout.slots == 0;
  return layout;
}

// min over the relaxed node polytope of (coef + penalty)' s; the minimizer is
// integral. `chosen` receives the selected coordinates (sorted).
double inner_minimum(const Eigen::VectorXd& coef, double penalty, const NodeLayout& layout,
                     std::vector<int>& scratch, std::vector<int>& chosen) {
  double value = 0.0;
  for (int j : layout.ones) value += coef(j) + penalty;
  scratch.clear();
  for (int j : layout.free)
    if (coef(j) + penalty < 0.0) scratch.push_back(j);
  const auto slots = static_cast<std::size_t>(std::max(layout.slots, 0));
  auto more_negative = [&](int a, int b) {
    return coef(a) < coef(b) || (coef(a) == coef(b) && a < b);
  };
  if (scratch.size() > slots) {
    std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(slots),
                     scratch.end(), more_negative);
    scratch.resize(slots);
  }
  for (int j : scratch) value += coef(j) + penalty;
  chosen.assign(layout.ones.begin(), layout.ones.end());
  chosen.insert(chosen.end(), scratch.begin(), scratch.end());
  std::sort(chosen.begin(), chosen.end());
  return value;
}

Eigen::VectorXd aggregate_gradient(const CutPool& pool, const std::vector<std::size_t>& active,
                                   const std::vector<double>& weights) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(pool.p());
  for (std::size_t a = 0; a < active.size(); ++a)
    if (weights[a] > 0.0) d.noalias() += weights[a] * pool[active[a]].grad;
  return d;
}

// Cut values at s for the listed cuts.
void evaluate_active(const CutPool& pool, const std::vector<std::size_t>& active, const std::vector<int>& s,
                     std::vector<double>& out) {
  out.resize(active.size());
  const std::vector<double>& constants = pool.constants();
  for (std::size_t a = 0; a < active.size(); ++a) out[a] = constants[active[a]];
  for (int j : s) {
    const std::vector<double>& slope = pool.slopes(j);
    for (std::size_t a = 0; a < active.size(); ++a) out[a] += slope[active[a]];
  }
}

// Working set and starting multipliers (aligned with the set, on the simplex).
void initial_weights(const CutPool& pool, const std::vector<double>& warm, const NodeLayout& layout,
                     double penalty, std::size_t cap, std::vector<std::size_t>& active, std::vector<double>& w) {
  const std::size_t T = pool.size();
  const std::size_t W = std::min(std::max<std::size_t>(cap, 1), T);
  active.clear();
  std::vector<double> start;
  double total = 0.0;
  for (std::size_t i = 0; i < std::min(T, warm.size()); ++i)
    if (warm[i] > 0.0) {
      active.push_back(i);
      start.push_back(warm[i]);
      total += warm[i];
    }
  const std::size_t first_new = std::min(T, warm.size());
  if (total <= 0.0) {
    active.clear();
    start.clear();
  }
  const std::size_t seeded = active.size();
  for (std::size_t i = T; i-- > first_new && active.size() < W;) active.push_back(i);
  if (active.empty()) active.push_back(T - 1);

  if (seeded > 0) {
    // Cuts added after the warm start get a small share so the ascent can see them.
    const std::size_t fresh = active.size() - seeded;
    const double keep = fresh ? 0.9 : 1.0;
    w.assign(active.size(), 0.0);
    for (std::size_t a = 0; a < seeded; ++a) w[a] = keep * start[a] / total;
    for (std::size_t a = seeded; a < active.size(); ++a) w[a] = 0.1 / static_cast<double>(fresh);
  } else {
    w.assign(active.size(), 1.0 / static_cast<double>(active.size()));
  }
  if (active.size() >= W || active.size() == T) return;

  // Fill the set with the cuts that are tightest at the current inner minimizer.
  std::vector<int> scratch, chosen;
  inner_minimum(aggregate_gradient(pool, active, w), penalty, layout, scratch, chosen);
  std::vector<double> values;
  pool.evaluate_all(Support(chosen), values);
  std::vector<char> taken(T, 0);
  for (std::size_t i : active) taken[i] = 1;
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < T; ++i)
    if (!taken[i]) rest.push_back(i);
  const std::size_t extra = std::min(W - active.size(), rest.size());
  std::partial_sort(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(extra), rest.end(),
                    [&](std::size_t a, std::size_t b) { return values[a] > values[b] || (values[a] == values[b] && a > b); });
  for (std::size_t e = 0; e < extra; ++e) {
    active.push_back(rest[e]);
    w.push_back(0.0);
  }
}

}  // namespace

NodeBoundResult node_bound(const CutPool& pool, const Node& node, int k, const BoundOptions& options) {
  if (pool.empty()) throw std::invalid_argument("node_bound: empty cut pool");
  NodeBoundResult result;
  if (static_cast<int>(node.fixed_one.size()) > k) {
    result.infeasible = true;
    result.bound = kInf;
    return result;
  }
  const NodeLayout layout = layout_of(node, pool.p(), k);
  const double floor_value = options.penalty * static_cast<double>(layout.ones.size());
  std::vector<int> scratch;
  std::vector<int> chosen;

  if (layout.single_point) {
    // One feasible point: the bound is the pooled max itself.
    Support s(layout.ones);
    double best = -kInf;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const double v = pool.evaluate(i, s);
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    result.weights.assign(pool.size(), 0.0);
    result.weights[arg] = 1.0;
    result.aggregate = pool[arg].grad;
    result.candidate = std::move(s);
    result.bound = std::max(best + floor_value, floor_value);
    return result;
  }

  std::vector<std::size_t> active;
  std::vector<double> weights;
  initial_weights(pool, node.weights, layout, options.penalty, options.working_set, active, weights);
  std::vector<double> best_weights;
  std::vector<double> step_dir;
  double step_scale = 2.0;
  int stalled = 0;
  for (int iter = 0; iter < std::max(1, options.max_iters); ++iter) {
    Eigen::VectorXd d = aggregate_gradient(pool, active, weights);
    double value = inner_minimum(d, options.penalty, layout, scratch, chosen);
    for (std::size_t a = 0; a < active.size(); ++a) value += weights[a] * pool.constants()[active[a]];

    if (value > result.bound) {
      result.bound = value;
      best_weights = weights;
      result.candidate = Support(chosen);
      result.aggregate = std::move(d);
      stalled = 0;
    } else if (++stalled >= 5) {
      step_scale *= 0.5;
      stalled = 0;
    }
    if (result.bound >= options.target - options.tol) break;
    if (step_scale < 1e-6 || active.size() == 1) break;

    // Supergradient: the affine value of each cut at the inner minimizer.
    evaluate_active(pool, active, chosen, step_dir);
    const double mean = std::accumulate(step_dir.begin(), step_dir.end(), 0.0) / static_cast<double>(active.size());
    double norm2 = 0.0;
    for (double h : step_dir) norm2 += (h - mean) * (h - mean);
    if (norm2 <= 1e-300) break;  // every cut ties at the minimizer: weights are optimal
    const double gap = std::isfinite(options.target)
                           ? std::max(options.target - value, 1e-12 * (1.0 + std::abs(value)))
                           : 1e-2 * (1.0 + std::abs(value));
    const double step = step_scale * gap / norm2;
    for (std::size_t a = 0; a < weights.size(); ++a) weights[a] += step * step_dir[a];
    project_to_simplex(weights);
  }
  result.weights.assign(pool.size(), 0.0);
  for (std::size_t a = 0; a < active.size(); ++a) result.weights[active[a]] = best_weights[a];
  result.bound = std::max(result.bound, floor_value);
  return result;
}

double lagrangian_bound(const CutPool& pool, const Node& node, int k, const std::vector<double>& weights,
                        double penalty) {
  if (static_cast<int>(node.fixed_one.size()) > k) return kInf;
  const NodeLayout layout = layout_of(node, pool.p(), k);
  std::vector<std::size_t> active;
  std::vector<double> w;
  for (std::size_t i = 0; i < std::min(weights.size(), pool.size()); ++i)
    if (weights[i] != 0.0) {
      active.push_back(i);
      w.push_back(weights[i]);
    }
  std::vector<int> scratch, chosen;
  double value = inner_minimum(aggregate_gradient(pool, active, w), penalty, layout, scratch, chosen);
  for (std::size_t a = 0; a < active.size(); ++a) value += w[a] * pool.constants()[active[a]];
  return value;
}

namespace {

struct QueueEntry {
  double bound;
  int depth;
  std::uint64_t seq;
  std::size_t slot;
};

// Best-first by bound; ties go to the deeper node, then to the older one.
struct QueueOrder {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.seq > b.seq;
  }
};

int branching_index(const Eigen::VectorXd& aggregate, const Node& node, int p) {
  std::vector<char> fixed(static_cast<std::size_t>(p), 0);
  for (int j : node.fixed_one) fixed[static_cast<std::size_t>(j)] = 1;
  for (int j : node.fixed_zero) fixed[static_cast<std::size_t>(j)] = 1;
  int best = -1;
  double best_mag = -1.0;
  for (int j = 0; j < p; ++j) {
    if (fixed[static_cast<std::size_t>(j)]) continue;
    const double mag = std::abs(aggregate(j));
    if (mag > best_mag) {
      best_mag = mag;
      best = j;
    }
  }
  return best;
}

std::vector<int> with_index(std::vector<int> v, int j) {
  v.insert(std::upper_bound(v.begin(), v.end(), j), j);
  return v;
}

}  // namespace

MasterSolution solve_master(CutPool& pool, int k, const std::optional<Incumbent>& incumbent,
                            const OracleCallback& oracle, MasterMode mode,
                            const MasterLimits& limits, double penalty) {
  if (pool.empty()) throw std::invalid_argument("solve_master: the cut pool must hold at least one cut");
  if (k < 0) throw std::invalid_argument("solve_master: k must be >= 0");
  if (mode == MasterMode::single_tree && !oracle)
    throw std::invalid_argument("solve_master: single_tree mode needs an oracle callback");
  const int p = pool.p();
  k = std::min(k, p);
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  MasterSolution out;
  const std::size_t pool_size_at_entry = pool.size();
  Incumbent best;
  auto value_of = [&](const Support& s) -> double {
    if (mode == MasterMode::multi_tree) return std::max(pool.pooled_max(s), 0.0) + penalty * s.size();
    const Cut* cut = pool.find(s);
    return cut->value + penalty * s.size();
  };
  auto offer = [&](const Support& s, double value) {
    if (value < best.value || (value == best.value && s < best.s)) {
      best.s = s;
      best.value = value;
    }
  };
  if (incumbent) {
    if (mode == MasterMode::multi_tree) {
      offer(incumbent->s, value_of(incumbent->s));
    } else if (pool.find(incumbent->s)) {
      offer(incumbent->s, value_of(incumbent->s));
    } else {
      offer(incumbent->s, incumbent->value);
    }
  }

  std::vector<Node> slots;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> queue;
  std::uint64_t seq = 0;
  auto push = [&](Node node) {
    const QueueEntry entry{node.bound, node.depth, seq++, slots.size()};
    slots.push_back(std::move(node));
    queue.push(entry);
  };
  push(Node{});

  double pruned_min = kInf;
  bool hit_limit = false;
  double open_min_at_stop = kInf;

  while (!queue.empty()) {
    if (out.nodes_explored >= limits.max_nodes || pool.size() >= limits.max_pool_size ||
        elapsed() > limits.time_limit_s) {
      hit_limit = true;
      break;
    }
    const QueueEntry top = queue.top();
    queue.pop();
    Node node = std::move(slots[top.slot]);
    slots[top.slot] = Node{};
    if (node.bound >= best.value - limits.tol) {
      // Best-first: everything still queued is at least as large.
      pruned_min = std::min(pruned_min, node.bound);
      while (!queue.empty()) {
        pruned_min = std::min(pruned_min, queue.top().bound);
        queue.pop();
      }
      break;
    }
    ++out.nodes_explored;

    BoundOptions options;
    options.max_iters = node.depth == 0 ? limits.root_bound_iters : limits.node_bound_iters;
    options.tol = limits.tol;
    options.penalty = penalty;

    NodeBoundResult bound;
    bool pruned = false;
    for (int round = 0;; ++round) {
      options.target = best.value;
      bound = node_bound(pool, node, k, options);
      if (bound.infeasible) {
        pruned = true;
        break;
      }
      node.bound = std::max(node.bound, bound.bound);
      node.weights = bound.weights;
      if (node.bound >= best.value - limits.tol) {
        pruned_min = std::min(pruned_min, node.bound);
        pruned = true;
        break;
      }
      const Support& candidate = bound.candidate;
      if (mode == MasterMode::single_tree && !pool.find(candidate)) {
        const LossEval eval = oracle(candidate);
        pool.add(eval, candidate);
        offer(candidate, eval.c + penalty * candidate.size());
        if (round + 1 < limits.max_lazy_rounds) continue;
      } else {
        offer(candidate, value_of(candidate));
      }
      if (node.bound >= best.value - limits.tol) {
        pruned_min = std::min(pruned_min, node.bound);
        pruned = true;
      }
      break;
    }
    if (pruned) continue;

    const int j = branching_index(bound.aggregate, node, p);
    if (j < 0 || static_cast<int>(node.fixed_one.size()) >= k) {
      // Single feasible point whose value is already offered.
      pruned_min = std::min(pruned_min, node.bound);
      continue;
    }
    Node one;
    one.fixed_one = with_index(node.fixed_one, j);
    one.fixed_zero = node.fixed_zero;
    one.bound = node.bound;
    one.depth = node.depth + 1;
    one.weights = node.weights;
    Node zero;
    zero.fixed_one = node.fixed_one;
    zero.fixed_zero = with_index(node.fixed_zero, j);
    zero.bound = node.bound;
    zero.depth = node.depth + 1;
    zero.weights = std::move(node.weights);
    push(std::move(one));
    push(std::move(zero));
  }
  if (hit_limit) {
    while (!queue.empty()) {
      open_min_at_stop = std::min(open_min_at_stop, queue.top().bound);
      queue.pop();
    }
  }

  out.s = best.s;
  out.eta = best.value;
  out.cuts_added = pool.size() - pool_size_at_entry;
  out.status = hit_limit ? Status::time_limit : Status::optimal;
  out.lower_bound = std::min({best.value, pruned_min, open_min_at_stop});
  return out;
}

}  // namespace sparsereg
