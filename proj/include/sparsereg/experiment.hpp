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

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "sparsereg/datagen.hpp"
#include "sparsereg/master.hpp"

namespace sparsereg {

// A sweep is the Cartesian product of the listed values, each point repeated
// `replications` times with its own derived seed.
struct SweepSpec {
  std::vector<int> n, p, k;
  std::vector<double> rho, snr_sqrt;
  int replications = 1;
  std::uint64_t seed = 0;
  bool run_exact = true;
  bool run_lasso = false;
  // gamma = gamma_scale / sqrt(n) when gamma_per_sqrt_n, else gamma_scale.
  double gamma_scale = 1.0;
  bool gamma_per_sqrt_n = true;
  double time_limit_s = 60.0;
  std::int64_t max_nodes = std::numeric_limits<std::int64_t>::max();
  MasterMode mode = MasterMode::single_tree;

  // Accepts scalars or arrays for n, p, k, rho, snr_sqrt. See README for keys.
  static SweepSpec from_json_text(const std::string& text);
  static SweepSpec from_file(const std::string& path);
  void validate() const;
  double gamma_for(int n_samples) const;
};

struct ExperimentRow {
  std::uint64_t seed = 0;
  int replication = 0;
  int n = 0, p = 0, k_true = 0, k_used = 0;
  double rho = 0.0, snr_sqrt = 0.0, gamma = 0.0;
  std::string method;  // "exact" | "lasso"
  double accuracy_pct = 0.0, false_alarm_pct = 0.0;
  double objective = 0.0, lower_bound = 0.0, wall_time_s = 0.0;
  std::string status;
  std::int64_t cuts = 0, nodes = 0;
  std::vector<int> support;       // 1-based
  std::vector<int> true_support;  // 1-based

  std::string key() const;
  std::string to_csv() const;
  static ExperimentRow from_csv(const std::vector<std::string>& fields);
};

const std::string& experiment_header();

struct SummaryRow {
  std::string method;
  int n = 0, p = 0, k = 0;
  double rho = 0.0, snr_sqrt = 0.0;
  int count = 0, optimal = 0;
  double accuracy_mean = 0.0, accuracy_std = 0.0;
  double false_alarm_mean = 0.0, false_alarm_std = 0.0;
  double time_mean = 0.0, time_std = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<ExperimentRow>& rows);

struct ExperimentReport {
  std::vector<ExperimentRow> rows;  // everything in the output file, sweep order
  std::size_t new_rows = 0;
  std::string summary_path;
};

std::vector<ExperimentRow> read_experiment_rows(const std::string& path);
std::string summary_path_for(const std::string& out_csv);

// Generates, solves and scores every (point, replication) not already present
// in `out_csv`, appending rows in sweep order, then rewrites the companion
// summary CSV. Rows are computed by `jobs` workers and committed in order by a
// single writer.
ExperimentReport run_experiment(const SweepSpec& spec, const std::string& out_csv, int jobs = 1,
                                std::ostream* log = nullptr);

}  // namespace sparsereg
