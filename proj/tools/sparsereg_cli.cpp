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

// Command-line front end: solve, gen, experiment, cv.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparsereg/csv.hpp"
#include "sparsereg/datagen.hpp"
#include "sparsereg/experiment.hpp"
#include "sparsereg/features.hpp"
#include "sparsereg/metrics.hpp"
#include "sparsereg/solver.hpp"

namespace {

using json = nlohmann::json;
using namespace sparsereg;

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

void write_json(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << doc.dump(2) << '\n';
}

MasterMode parse_mode(const std::string& s) {
  return s == "multi" ? MasterMode::multi_tree : MasterMode::single_tree;
}

WarmStart parse_warm(const std::string& s) {
  if (s == "lasso") return WarmStart::lasso;
  if (s == "none") return WarmStart::none;
  return WarmStart::dual_relaxation;
}

struct SolveArgs {
  std::string x, y, out;
  int k = 0;
  double gamma = 0.0;
  std::optional<double> penalized;
  std::string mode = "single";
  std::optional<double> tol;
  double time_limit = 600.0;
  std::optional<std::int64_t> max_nodes;
  std::string warm = "dual";
  bool expand = false;
  bool standardize = false;
};

int run_solve(const SolveArgs& a) {
  Dataset data(csv::read_matrix(a.x), csv::read_vector(a.y));
  std::optional<FeatureExpansion> lifted;
  if (a.expand) {
    lifted = expand_features(data.X, a.standardize);
    data.X = lifted->psi_x;
  }
  data.validate();

  SolveConfig config;
  config.tol = a.tol;
  config.time_limit_s = a.time_limit;
  if (a.max_nodes) config.max_nodes = *a.max_nodes;
  config.mode = parse_mode(a.mode);
  config.warm_start = parse_warm(a.warm);

  const SolveResult res = a.penalized ? solve_penalized(data, a.gamma, *a.penalized, config)
                                      : solve_cardinality(data, a.gamma, a.k, config);

  json doc;
  doc["objective"] = res.objective;
  doc["lower_bound"] = res.lower_bound;
  doc["support"] = res.support.one_based();
  doc["coefficients"] = to_std(res.coefficients);
  doc["cuts"] = res.cuts;
  doc["nodes"] = res.nodes;
  doc["wall_time_s"] = res.wall_time_s;
  doc["status"] = to_string(res.status);
  if (lifted) {
    std::vector<std::string> names;
    for (int j : res.support) names.push_back(lifted->names[static_cast<std::size_t>(j)]);
    doc["support_names"] = names;
  }
  json cfg;
  cfg["x"] = a.x;
  cfg["y"] = a.y;
  cfg["gamma"] = a.gamma;
  if (a.penalized) cfg["penalized"] = *a.penalized; else cfg["k"] = a.k;
  cfg["mode"] = to_string(config.mode);
  cfg["tol"] = config.tolerance_for(data);
  cfg["time_limit_s"] = a.time_limit;
  cfg["warm"] = to_string(config.warm_start);
  cfg["expand_features"] = a.expand;
  doc["config"] = cfg;
  write_json(a.out, doc);
  std::cerr << "objective " << res.objective << " lower_bound " << res.lower_bound << " status "
            << to_string(res.status) << " support " << res.support.to_string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact sparse ridge regression by outer approximation"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance");
  solve_cmd->add_option("--x", solve.x, "Design matrix CSV (no header)")->required();
  solve_cmd->add_option("--y", solve.y, "Response CSV, one value per line")->required();
  solve_cmd->add_option("--k", solve.k, "Sparsity budget");
  solve_cmd->add_option("--gamma", solve.gamma, "Ridge weight gamma > 0")->required();
  solve_cmd->add_option("--penalized", solve.penalized, "l0 penalty lambda (replaces --k)");
  solve_cmd->add_option("--mode", solve.mode, "single|multi")->check(CLI::IsMember({"single", "multi"}));
  solve_cmd->add_option("--tol", solve.tol, "Absolute convergence tolerance");
  solve_cmd->add_option("--time-limit", solve.time_limit, "Seconds");
  solve_cmd->add_option("--max-nodes", solve.max_nodes, "Branch-and-bound node budget");
  solve_cmd->add_option("--warm", solve.warm, "dual|lasso|none")->check(CLI::IsMember({"dual", "lasso", "none"}));
  solve_cmd->add_flag("--expand-features", solve.expand, "Lift X through the nonlinear dictionary");
  solve_cmd->add_flag("--standardize", solve.standardize, "Unit-variance lifted columns");
  solve_cmd->add_option("--out", solve.out, "result.json")->required();

  SyntheticSpec gen;
  std::string prefix;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic instance");
  gen_cmd->add_option("--n", gen.n)->required();
  gen_cmd->add_option("--p", gen.p)->required();
  gen_cmd->add_option("--k", gen.k)->required();
  gen_cmd->add_option("--rho", gen.rho);
  gen_cmd->add_option("--snr-sqrt", gen.snr_sqrt)->required();
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--out-prefix", prefix, "Writes <prefix>X.csv, <prefix>Y.csv, <prefix>truth.json")->required();

  std::string spec_path, runs_path;
  int jobs = 1;
  bool quiet = false;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a phase-transition sweep");
  exp_cmd->add_option("--spec", spec_path, "sweep.json")->required();
  exp_cmd->add_option("--out", runs_path, "runs.csv")->required();
  exp_cmd->add_option("--jobs", jobs, "Worker threads");
  exp_cmd->add_flag("--quiet", quiet);

  std::string cv_x, cv_y, cv_out;
  int k_min = 1, k_max = 1, folds = 5;
  std::vector<double> gamma_grid;
  std::uint64_t cv_seed = 0;
  double cv_time_limit = 60.0;
  std::optional<std::int64_t> cv_nodes;
  bool cv_expand = false;
  auto* cv_cmd = app.add_subcommand("cv", "Cross-validate k (and gamma)");
  cv_cmd->add_option("--x", cv_x)->required();
  cv_cmd->add_option("--y", cv_y)->required();
  cv_cmd->add_option("--k-min", k_min)->required();
  cv_cmd->add_option("--k-max", k_max)->required();
  cv_cmd->add_option("--folds", folds);
  cv_cmd->add_option("--gamma-grid", gamma_grid, "Defaults to {0.01,0.1,1,10}/sqrt(n)");
  cv_cmd->add_option("--seed", cv_seed);
  cv_cmd->add_option("--time-limit", cv_time_limit, "Per-solve seconds");
  cv_cmd->add_option("--max-nodes", cv_nodes, "Per-solve node budget");
  cv_cmd->add_flag("--expand-features", cv_expand);
  cv_cmd->add_option("--out", cv_out, "cv.json")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      if (!solve.penalized && solve.k < 1) throw std::invalid_argument("solve: --k or --penalized is required");
      return run_solve(solve);
    }
    if (*gen_cmd) {
      const SyntheticInstance inst = generate(gen);
      csv::write_matrix(prefix + "X.csv", inst.data.X);
      csv::write_vector(prefix + "Y.csv", inst.data.Y);
      json truth;
      truth["support"] = inst.support_true.one_based();
      truth["signs"] = std::vector<int>(inst.signs.data(), inst.signs.data() + inst.signs.size());
      truth["n"] = gen.n;
      truth["p"] = gen.p;
      truth["k"] = gen.k;
      truth["rho"] = gen.rho;
      truth["snr_sqrt"] = gen.snr_sqrt;
      truth["seed"] = gen.seed;
      truth["sigma2_effective"] = inst.sigma2_effective;
      write_json(prefix + "truth.json", truth);
      return 0;
    }
    if (*exp_cmd) {
      const SweepSpec spec = SweepSpec::from_file(spec_path);
      const ExperimentReport report = run_experiment(spec, runs_path, jobs, quiet ? nullptr : &std::cerr);
      std::cerr << report.new_rows << " new rows; summary in " << report.summary_path << '\n';
      return 0;
    }
    if (*cv_cmd) {
      Dataset data(csv::read_matrix(cv_x), csv::read_vector(cv_y));
      if (cv_expand) data.X = expand_features(data.X).psi_x;
      CvOptions options;
      options.gamma_grid = gamma_grid.empty() ? default_gamma_grid(data.n()) : gamma_grid;
      for (int k = k_min; k <= k_max; ++k) options.k_values.push_back(k);
      options.folds = folds;
      options.seed = cv_seed;
      options.solver.time_limit_s = cv_time_limit;
      if (cv_nodes) options.solver.max_nodes = *cv_nodes;
      const CvResult cv = cross_validate_k(data, options);
      json doc;
      doc["k"] = cv.k;
      doc["gamma"] = cv.gamma;
      json table = json::array();
      for (const CvCell& cell : cv.table) {
        table.push_back({{"gamma", cell.gamma},
                         {"k", cell.k},
                         {"mean_error", cell.mean_error},
                         {"fold_errors", cell.fold_errors},
                         {"time_limited", cell.any_time_limit}});
      }
      doc["table"] = table;
      doc["folds"] = folds;
      doc["seed"] = cv_seed;
      write_json(cv_out, doc);
      std::cerr << "selected k=" << cv.k << " gamma=" << cv.gamma << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
