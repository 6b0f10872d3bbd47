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
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "sparsereg/dataset.hpp"
#include "sparsereg/oracle.hpp"

namespace sparsereg {

enum class Status { optimal, time_limit };
enum class MasterMode { multi_tree, single_tree };

const char* to_string(Status status);
const char* to_string(MasterMode mode);

// Affine minorant of the loss anchored at a binary support:
//   eta >= value + grad' (s - anchor) = constant + grad' s.
struct Cut {
  Support anchor;
  double value = 0.0;
  Eigen::VectorXd grad;
  double constant = 0.0;  // value - grad' anchor
};

// Append-only collection of cuts with at most one cut per anchor. Cuts do not
// depend on the sparsity budget, so a pool may be shared by solves that differ
// only in k or in the l0 penalty.
class CutPool {
 public:
  explicit CutPool(int p) : p_(p), by_coord_(static_cast<std::size_t>(p)) {}

  // Returns false and raises duplicate_seen() when the anchor is already
  // pooled; with exact cuts this only happens under numerical trouble.
  bool add(const LossEval& eval, const Support& anchor);

  const Cut* find(const Support& anchor) const;

  int p() const { return p_; }
  std::size_t size() const { return cuts_.size(); }
  bool empty() const { return cuts_.empty(); }
  const Cut& operator[](std::size_t i) const { return cuts_[i]; }
  bool duplicate_seen() const { return duplicate_seen_; }

  // value_i + grad_i' (s - anchor_i) for cut i.
  double evaluate(std::size_t i, const Support& s) const;
  // max_i of the above; -inf for an empty pool.
  double pooled_max(const Support& s) const;
  // Values of every cut at s, in pool order.
  void evaluate_all(const Support& s, std::vector<double>& out) const;

  // Slope of every cut along coordinate j, in pool order.
  const std::vector<double>& slopes(int j) const { return by_coord_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& constants() const { return constants_; }

 private:
  int p_;
  std::deque<Cut> cuts_;
  std::vector<std::vector<double>> by_coord_;
  std::vector<double> constants_;
  std::unordered_map<Support, std::size_t, SupportHash> index_;
  bool duplicate_seen_ = false;
};

// Branch-and-bound node. Index sets are sorted, 0-based and disjoint.
struct Node {
  std::vector<int> fixed_one;
  std::vector<int> fixed_zero;
  double bound = -std::numeric_limits<double>::infinity();
  int depth = 0;
  std::vector<double> weights;  // Lagrange multipliers over cuts, warm start
};

struct BoundOptions {
  int max_iters = 60;
  // Ascent stops once the bound reaches target - tol (the node is pruned).
  double target = std::numeric_limits<double>::infinity();
  double tol = 0.0;
  // Linear cost added to every selected coordinate (l0 penalty).
  double penalty = 0.0;
  // Multipliers outside a working set of at most this many cuts stay at zero,
  // which keeps the bound valid and its cost independent of the pool size.
  // The set holds the warm-started cuts, cuts newer than the warm start, and
  // the cuts tightest at the warm start's inner minimizer.
  std::size_t working_set = 256;
};

struct NodeBoundResult {
  double bound = -std::numeric_limits<double>::infinity();
  bool infeasible = false;
  std::vector<double> weights;  // multipliers attaining `bound`
  Support candidate;            // integral inner minimizer at `weights`
  Eigen::VectorXd aggregate;    // sum_i weights_i grad_i
};

// Lower bound on min over {s in {0,1}^p : |s| <= k, fixings} of the pooled
// max (plus penalty * |s|), from the Lagrangian
//
//   L(w) = sum_i w_i constant_i + min_s (sum_i w_i grad_i + penalty)' s,
//
// over weights w in the unit simplex. The inner minimum over the relaxed
// node polytope is closed form: fixed-one coordinates pay their coefficient
// and up to k - |fixed_one| of the most negative free coefficients are taken.
// Any w yields a valid bound; projected supergradient ascent with a Polyak
// step toward options.target improves it.
NodeBoundResult node_bound(const CutPool& pool, const Node& node, int k,
                           const BoundOptions& options = {});

// L(weights) for the given multipliers, without any ascent. `weights` must
// have one entry per pooled cut; missing trailing entries count as zero.
double lagrangian_bound(const CutPool& pool, const Node& node, int k, const std::vector<double>& weights,
                        double penalty = 0.0);

struct MasterLimits {
  double time_limit_s = std::numeric_limits<double>::infinity();
  std::int64_t max_nodes = std::numeric_limits<std::int64_t>::max();
  std::size_t max_pool_size = std::numeric_limits<std::size_t>::max();
  double tol = 1e-6;
  int root_bound_iters = 200;
  int node_bound_iters = 60;
  int max_lazy_rounds = 50;
};

struct Incumbent {
  Support s;
  double value = std::numeric_limits<double>::infinity();
};

struct MasterSolution {
  Support s;
  double eta = std::numeric_limits<double>::infinity();
  double lower_bound = -std::numeric_limits<double>::infinity();
  std::int64_t nodes_explored = 0;
  std::size_t cuts_added = 0;
  Status status = Status::optimal;
};

using OracleCallback = std::function<LossEval(const Support&)>;

// multi_tree: exact minimizer of max(0, pooled max) + penalty * |s| over
// |s| <= k; the callback is not used and `eta` is that value at `s`.
//
// single_tree: every integral candidate produced by a node bound that is not
// yet pooled is sent to the callback, its cut is appended to the pool and the
// node is bounded again. On optimal return `s` is a global minimizer of
// c(s) + penalty * |s| to within limits.tol and `eta` is that value.
//
// Throws std::invalid_argument on an empty pool.
MasterSolution solve_master(CutPool& pool, int k, const std::optional<Incumbent>& incumbent,
                            const OracleCallback& oracle, MasterMode mode,
                            const MasterLimits& limits, double penalty = 0.0);

}  // namespace sparsereg
