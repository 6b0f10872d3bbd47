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

// Acceptance suite. Prints one PASS/FAIL line per criterion, with indented
// detail lines underneath, and exits nonzero when any criterion fails.
//
//   acceptance [--only 1,2,7] [--workdir DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sparsereg/datagen.hpp"
#include "sparsereg/experiment.hpp"
#include "sparsereg/features.hpp"
#include "sparsereg/metrics.hpp"
#include "sparsereg/oracle.hpp"
#include "sparsereg/rng.hpp"
#include "sparsereg/solver.hpp"
#include "sparsereg/warmstart.hpp"
#include "test_helpers.hpp"

using namespace sparsereg;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;
  void fail(const std::string& why) {
    pass = false;
    details.push_back("FAIL: " + why);
  }
  void note(const std::string& line) { details.push_back(line); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct SmallInstance {
  Dataset data;
  int k;
  double gamma;
};

// Instances shared by criteria 1 and 6.
std::vector<SmallInstance> exactness_instances() {
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<int> nd(5, 30), pd(4, 12), kd(1, 3);
  const double gammas[] = {0.1, 1.0, 10.0};
  std::vector<SmallInstance> out;
  for (int i = 0; i < 50; ++i) {
    const int n = nd(rng), p = pd(rng), k = std::min(kd(rng), p);
    out.push_back({testing::random_dataset(rng, n, p), k, gammas[i % 3]});
  }
  return out;
}

SolveConfig exact_config() {
  SolveConfig c;
  c.tol = 1e-12;
  c.time_limit_s = 60.0;
  return c;
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  int worst = -1;
  double worst_rel = 0.0;
  const std::vector<SmallInstance> instances = exactness_instances();
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const SmallInstance& inst = instances[i];
    const EnumerationResult e = enumerate_optimal(inst.data, inst.gamma, inst.k);
    const SolveResult r = solve_cardinality(inst.data, inst.gamma, inst.k, exact_config());
    const double rel = testing::rel_diff(r.objective, e.value);
    const double attained = testing::rel_diff(loss_and_gradient(inst.data, inst.gamma, r.support).c, e.value);
    if (rel > worst_rel) {
      worst_rel = rel;
      worst = static_cast<int>(i);
    }
    if (rel > 1e-8) o.fail(fmt("instance %zu objective off by %.3g relative", i, rel));
    if (attained > 1e-8 || r.support.size() > inst.k) o.fail(fmt("instance %zu support does not attain the optimum", i));
    if (r.status != Status::optimal) o.fail(fmt("instance %zu not certified optimal", i));
  }
  const double secs = since(t0);
  if (secs >= 60.0) o.fail(fmt("runtime %.1f s >= 60 s", secs));
  o.note(fmt("50 instances, worst relative objective error %.3g (instance %d), %.2f s", worst_rel, worst, secs));
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::mt19937_64 rng(20260102);
  std::uniform_int_distribution<int> nd(6, 25), pd(3, 8);
  std::uniform_real_distribution<double> lam(0.05, 3.0);
  const double gammas[] = {0.1, 1.0, 10.0};
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int n = nd(rng), p = pd(rng);
    const Dataset d = testing::random_dataset(rng, n, p);
    const double gamma = gammas[i % 3], lambda0 = lam(rng);
    double best = 1e300;
    testing::for_each_subset(p, p, [&](const Support& s) { best = std::min(best, ridge_loss(d, gamma, s) + lambda0 * s.size()); });
    const SolveResult r = solve_penalized(d, gamma, lambda0, exact_config());
    const double rel = testing::rel_diff(r.objective, best);
    worst = std::max(worst, rel);
    if (rel > 1e-8) o.fail(fmt("instance %d off by %.3g relative", i, rel));
  }
  o.note(fmt("20 instances, worst relative error %.3g", worst));
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::mt19937_64 rng(20260103);
  std::uniform_int_distribution<int> nd(1, 50), pd(1, 20);
  std::uniform_real_distribution<double> lg(-2.0, 2.0);
  double worst_primal = 0.0, worst_dual = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = nd(rng), p = pd(rng);
    const Dataset d = testing::random_dataset(rng, n, p);
    const double gamma = std::pow(10.0, lg(rng));
    const Support s = testing::random_support(rng, p);
    Eigen::VectorXd relaxed = Eigen::VectorXd::Zero(p);
    for (int j : s) relaxed(j) = 1.0;
    const LossEval e = loss_and_gradient(d, gamma, s);
    worst_primal = std::max(worst_primal, testing::rel_diff(e.c, ridge_loss_dense(d, gamma, relaxed)));
    worst_dual = std::max(worst_dual, testing::rel_diff(ridge_dual_objective(d, gamma, s, e.alpha), e.c));
  }
  if (worst_primal > 1e-10) o.fail(fmt("capacitance vs dense loss %.3g > 1e-10", worst_primal));
  if (worst_dual > 1e-8) o.fail(fmt("dual value %.3g > 1e-8", worst_dual));
  o.note(fmt("100 instances, capacitance vs dense %.3g, dual value %.3g", worst_primal, worst_dual));
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::mt19937_64 rng(20260104);
  std::uniform_int_distribution<int> nd(5, 30), pd(2, 10);
  std::uniform_real_distribution<double> interior(0.05, 0.95), lg(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int n = nd(rng), p = pd(rng);
    const Dataset d = testing::random_dataset(rng, n, p);
    const double gamma = std::pow(10.0, lg(rng));
    for (int t = 0; t < 20; ++t) {
      Eigen::VectorXd s(p);
      for (int j = 0; j < p; ++j) s(j) = interior(rng);
      const Eigen::VectorXd proj = d.X.transpose() * dual_vector_dense(d, gamma, s);
      const Eigen::VectorXd analytic = -0.5 * gamma * proj.array().square().matrix();
      Eigen::VectorXd fd(p);
      for (int j = 0; j < p; ++j) {
        const double h = 1e-5;
        Eigen::VectorXd up = s, down = s;
        up(j) += h;
        down(j) -= h;
        fd(j) = (ridge_loss_dense(d, gamma, up) - ridge_loss_dense(d, gamma, down)) / (2 * h);
      }
      const double rel = (fd - analytic).norm() / std::max(analytic.norm(), 1e-300);
      worst = std::max(worst, rel);
    }
  }
  if (worst > 1e-4) o.fail(fmt("worst relative gradient error %.3g > 1e-4", worst));
  o.note(fmt("20 instances x 20 relaxed points, worst relative error %.3g", worst));
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(20260105);
  int violations = 0;
  double worst_slack = 1e300;
  for (int i = 0; i < 1000; ++i) {
    if (i % 100 == 0) rng.discard(1);
    const Dataset d = testing::random_dataset(rng, 20, 12);
    const Support s = testing::random_support(rng, 12), anchor = testing::random_support(rng, 12);
    const LossEval at = loss_and_gradient(d, 1.0, anchor);
    double linear = at.c;
    for (int j = 0; j < 12; ++j) linear += at.grad(j) * ((s.contains(j) ? 1.0 : 0.0) - (anchor.contains(j) ? 1.0 : 0.0));
    const double slack = loss_and_gradient(d, 1.0, s).c - linear;
    worst_slack = std::min(worst_slack, slack);
    if (slack < -1e-9) ++violations;
  }
  if (violations) o.fail(fmt("%d violations", violations));
  o.note(fmt("1000 pairs, %d violations, smallest slack %.3g", violations, worst_slack));
  return o;
}

Outcome criterion6() {
  Outcome o;
  double worst_excess = -1e300, worst_gap = 0.0;
  for (const SmallInstance& inst : exactness_instances()) {
    const double opt = enumerate_optimal(inst.data, inst.gamma, inst.k).value;
    const RelaxationResult r = solve_dual_relaxation(inst.data, inst.gamma, inst.k);
    worst_excess = std::max(worst_excess, r.lower_bound - opt);
    if (r.lower_bound > opt + 1e-9) o.fail(fmt("bound %.12g exceeds optimum %.12g", r.lower_bound, opt));

    const int p = inst.data.p();
    RelaxationOptions full;
    full.iters = 5000;
    const RelaxationResult all = solve_dual_relaxation(inst.data, inst.gamma, p, full);
    const double ridge = ridge_loss_dense(inst.data, inst.gamma, Eigen::VectorXd::Ones(p));
    worst_gap = std::max(worst_gap, std::abs(ridge - all.lower_bound));
    if (std::abs(ridge - all.lower_bound) > 1e-4) o.fail(fmt("k = p bound %.10g vs ridge %.10g", all.lower_bound, ridge));
    if (all.iterations > 5000) o.fail("more than 5000 iterations");
  }
  o.note(fmt("largest bound - optimum %.3g; largest |ridge - bound| at k = p %.3g", worst_excess, worst_gap));
  return o;
}

SweepSpec phase_sweep() {
  SweepSpec s;
  for (int n = 20; n <= 150; n += 10) s.n.push_back(n);
  s.p = {200};
  s.k = {5};
  s.rho = {0.0};
  s.snr_sqrt = {20.0};
  s.replications = 20;
  s.seed = 2026;
  s.run_exact = true;
  s.run_lasso = true;
  s.gamma_scale = 1.0;
  s.gamma_per_sqrt_n = true;
  s.time_limit_s = 60.0;
  s.max_nodes = 2000;
  return s;
}

fs::path fresh(const fs::path& p) {
  fs::remove(p);
  fs::remove(summary_path_for(p.string()));
  return p;
}

// Smallest grid n from which every larger grid n has mean A% = 100.
int onset(const std::map<int, double>& mean_accuracy) {
  int at = -1;
  for (auto it = mean_accuracy.rbegin(); it != mean_accuracy.rend(); ++it) {
    if (it->second < 100.0) break;
    at = it->first;
  }
  return at;
}

Outcome criterion7(const fs::path& dir) {
  Outcome o;
  const auto t0 = Clock::now();
  const fs::path out = fresh(dir / "phase_transition.csv");
  run_experiment(phase_sweep(), out.string());
  const std::vector<ExperimentRow> rows = read_experiment_rows(out.string());
  std::map<std::string, std::map<int, std::vector<const ExperimentRow*>>> by;
  for (const ExperimentRow& r : rows) by[r.method][r.n].push_back(&r);
  std::map<int, double> exact_acc, lasso_acc, exact_time;
  for (auto& [n, list] : by["exact"]) {
    double a = 0, t = 0;
    for (const ExperimentRow* r : list) {
      a += r->accuracy_pct;
      t += r->wall_time_s;
    }
    exact_acc[n] = a / list.size();
    exact_time[n] = t / list.size();
  }
  for (auto& [n, list] : by["lasso"]) {
    double a = 0;
    for (const ExperimentRow* r : list) a += r->accuracy_pct;
    lasso_acc[n] = a / list.size();
  }
  for (auto& [n, a] : exact_acc) {
    int limited = 0;
    for (const ExperimentRow* r : by["exact"][n]) limited += r->status != "optimal";
    o.note(fmt("n=%3d exact A%%=%6.2f time=%7.3f s limited=%2d/20 | lasso A%%=%6.2f", n, a, exact_time[n], limited, lasso_acc[n]));
  }
  if (rows.size() != 14u * 20u * 2u) o.fail(fmt("expected 560 rows, found %zu", rows.size()));
  for (auto& [n, a] : exact_acc) {
    if (n >= 80 && a < 95.0) o.fail(fmt("exact mean A%% %.2f < 95 at n = %d", a, n));
    if (n <= 30 && a > 50.0) o.fail(fmt("exact mean A%% %.2f > 50 at n = %d", a, n));
  }
  double hardest = 0.0, slow_after = 0.0;
  int hardest_n = 0;
  for (auto& [n, t] : exact_time) {
    if (n < 80 && t > hardest) {
      hardest = t;
      hardest_n = n;
    }
    if (n >= 80) slow_after = std::max(slow_after, t);
  }
  if (slow_after > 0.2 * hardest)
    o.fail(fmt("slowest mean time for n >= 80 (%.3f s) exceeds 20%% of the hardest point (%.3f s at n = %d)", slow_after, hardest, hardest_n));
  const int exact_onset = onset(exact_acc), lasso_onset = onset(lasso_acc);
  const bool lasso_ok = lasso_onset < 0 || (exact_onset >= 0 && lasso_onset >= exact_onset);
  if (!lasso_ok) o.fail(fmt("lasso onset n = %d precedes exact onset n = %d", lasso_onset, exact_onset));
  o.note(fmt("exact onset n = %d, lasso onset n = %s, hardest point n = %d (%.3f s), slowest n >= 80 %.3f s, sweep %.0f s",
             exact_onset, lasso_onset < 0 ? "none" : std::to_string(lasso_onset).c_str(), hardest_n, hardest, slow_after,
             since(t0)));
  const Thresholds th = theoretical_thresholds(5, 200, 0.0);
  o.note(fmt("n1 = %.1f at this scale (noiseless limit)", th.n1));
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto t0 = Clock::now();
  const int n = 200, p = 20;
  std::vector<double> accs, fas;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CounterRng rx(seed, 101), re(seed, 102);
    Eigen::MatrixXd X(n, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < p; ++j) X(i, j) = rx.normal();
    Eigen::VectorXd S(n), E(n);
    for (int i = 0; i < n; ++i) {
      const double x1 = X(i, 0), x2 = X(i, 1), x3 = X(i, 2), x4 = X(i, 3);
      S(i) = 3 * std::sqrt(std::abs(x4)) - 2 * x2 * x2 + 4 * std::tanh(2 * x3) + 3 * std::cos(2 * M_PI * x2) - 2 * x1;
      E(i) = re.normal();
    }
    E *= S.norm() / (20.0 * E.norm());
    const FeatureExpansion f = expand_features(X);
    const Dataset d(f.psi_x, S + E);
    const Support truth{FeatureExpansion::column_of(3, Transform::sqrt_abs), FeatureExpansion::column_of(1, Transform::square),
                        FeatureExpansion::column_of(2, Transform::tanh_2), FeatureExpansion::column_of(0, Transform::identity)};
    CvOptions cv;
    cv.gamma_grid = default_gamma_grid(n);
    for (int k = 1; k <= 10; ++k) cv.k_values.push_back(k);
    cv.folds = 5;
    cv.seed = seed;
    cv.solver.time_limit_s = 60.0;
    cv.solver.max_nodes = 300;
    const CvResult chosen = cross_validate_k(d, cv);
    const SolveResult fit = solve_cardinality(d, chosen.gamma, chosen.k, cv.solver);
    const RecoveryScore score = support_metrics(fit.support, truth, 4);
    accs.push_back(score.accuracy_pct);
    fas.push_back(score.false_alarm_pct);
    std::string names;
    for (int j : fit.support) names += f.names[static_cast<std::size_t>(j)] + " ";
    o.note(fmt("seed %d: k*=%d gamma*=%.4g A%%=%.0f F%%=%.0f [%s]", static_cast<int>(seed), chosen.k, chosen.gamma,
               score.accuracy_pct, score.false_alarm_pct, names.c_str()));
  }
  std::sort(accs.begin(), accs.end());
  std::sort(fas.begin(), fas.end());
  const double secs = since(t0);
  o.note(fmt("median (A%%, F%%) = (%.0f, %.0f) against {sqrt|X4|, X2^2, tanh(2*X3), X1}; %.0f s", accs[2], fas[2], secs));
  if (accs[2] != 100.0) o.fail(fmt("median A%% %.0f != 100", accs[2]));
  if (fas[2] != 0.0) o.fail(fmt("median F%% %.0f != 0", fas[2]));
  if (secs > 900.0) o.fail(fmt("runtime %.0f s > 15 min", secs));
  return o;
}

Outcome criterion9() {
  Outcome o;
  const SyntheticInstance inst = generate({.n = 2000, .p = 5000, .k = 10, .rho = 0.1, .snr_sqrt = 20.0, .seed = 9});
  const double gamma = 1.0 / std::sqrt(2000.0);
  SolveConfig full;
  full.time_limit_s = 600.0;
  const SolveResult r = solve_cardinality(inst.data, gamma, 10, full);
  const RecoveryScore score = support_metrics(r.support, inst.support_true, 10);
  o.note(fmt("full run: status %s, %.2f s, objective %.10g, lower bound %.10g, cuts %zu, nodes %ld, A%%=%.0f", to_string(r.status),
             r.wall_time_s, r.objective, r.lower_bound, r.cuts, static_cast<long>(r.nodes), score.accuracy_pct));
  if (r.status != Status::optimal) o.fail("not optimal within 10 min");
  if (r.wall_time_s > 600.0) o.fail("over 10 min");

  SolveConfig capped;
  capped.time_limit_s = 2.0;
  const SolveResult c = solve_cardinality(inst.data, gamma, 10, capped);
  const double tol = full.tolerance_for(inst.data);
  o.note(fmt("2 s cap: status %s, %.2f s, objective %.10g, lower bound %.10g", to_string(c.status), c.wall_time_s, c.objective,
             c.lower_bound));
  if (!std::isfinite(c.objective) || !std::isfinite(c.lower_bound)) o.fail("non-finite certificate");
  if (c.lower_bound > c.objective + tol) o.fail("lower bound above objective");
  if (c.lower_bound > r.objective + tol) o.fail("lower bound above the optimum");
  if (c.objective < r.objective - tol) o.fail("objective below the optimum");
  if (c.support.size() > 10) o.fail("infeasible incumbent");
  if (c.status == Status::optimal && c.objective - c.lower_bound > tol) o.fail("optimal status without a closed gap");
  return o;
}

Outcome criterion10(const fs::path& dir) {
  Outcome o;
  const fs::path first = dir / "phase_transition.csv";
  if (!fs::exists(first)) run_experiment(phase_sweep(), fresh(first).string());
  const fs::path second = fresh(dir / "phase_transition_rerun.csv");
  run_experiment(phase_sweep(), second.string());
  const std::vector<ExperimentRow> a = read_experiment_rows(first.string()), b = read_experiment_rows(second.string());
  if (a.size() != b.size()) o.fail(fmt("row counts differ: %zu vs %zu", a.size(), b.size()));
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    const bool same = a[i].key() == b[i].key() && a[i].accuracy_pct == b[i].accuracy_pct &&
                      a[i].false_alarm_pct == b[i].false_alarm_pct && a[i].support == b[i].support;
    mismatches += !same;
  }
  if (mismatches) o.fail(fmt("%zu rows differ", mismatches));
  o.note(fmt("%zu rows compared, %zu mismatches in A%%/F%%/support", a.size(), mismatches));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparsereg acceptance suite"};
  std::vector<int> only;
  std::string workdir = "acceptance_out";
  app.add_option("--only", only, "criteria to run (default: all)")->delimiter(',')->check(CLI::Range(1, 10));
  app.add_option("--workdir", workdir, "directory for sweep outputs");
  CLI11_PARSE(app, argc, argv);
  const fs::path dir = workdir;
  fs::create_directories(dir);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"exactness vs brute force", criterion1},
      {"penalized exactness", criterion2},
      {"loss identities", criterion3},
      {"gradient check", criterion4},
      {"cut validity", criterion5},
      {"relaxation bound", criterion6},
      {"phase transition", [&] { return criterion7(dir); }},
      {"nonlinear recovery", criterion8},
      {"scalability smoke", criterion9},
      {"determinism", [&] { return criterion10(dir); }},
  };
  const std::set<int> selected(only.begin(), only.end());
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = Clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome.fail(std::string("exception: ") + e.what());
    }
    failures += !outcome.pass;
    std::printf("%s criterion %d: %s (%.1f s)\n", outcome.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), since(t0));
    for (const std::string& line : outcome.details) std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
  }
  return failures ? 1 : 0;
}
