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

#include "sparsereg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "sparsereg/baselines.hpp"
#include "sparsereg/csv.hpp"
#include "sparsereg/metrics.hpp"
#include "sparsereg/oracle.hpp"
#include "sparsereg/rng.hpp"
#include "sparsereg/solver.hpp"

namespace sparsereg {
namespace {

using json = nlohmann::json;

template <typename T>
std::vector<T> scalar_or_list(const json& doc, const char* key) {
  if (!doc.contains(key)) throw std::invalid_argument(std::string("sweep spec: missing '") + key + "'");
  const json& v = doc.at(key);
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

std::string join_indices(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + std::to_string(v[i]);
  return out;
}

std::vector<int> split_indices(const std::string& s) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ';'))
    if (!item.empty()) out.push_back(std::stoi(item));
  return out;
}

std::uint64_t point_hash(int n, int p, int k, double rho, double snr) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(n));
  h = mix64(h ^ static_cast<std::uint64_t>(p));
  h = mix64(h ^ static_cast<std::uint64_t>(k));
  h = mix64(h ^ std::bit_cast<std::uint64_t>(rho));
  return mix64(h ^ std::bit_cast<std::uint64_t>(snr));
}

}  // namespace

SweepSpec SweepSpec::from_json_text(const std::string& text) {
  const json doc = json::parse(text);
  SweepSpec spec;
  spec.n = scalar_or_list<int>(doc, "n");
  spec.p = scalar_or_list<int>(doc, "p");
  spec.k = scalar_or_list<int>(doc, "k");
  spec.rho = doc.contains("rho") ? scalar_or_list<double>(doc, "rho") : std::vector<double>{0.0};
  spec.snr_sqrt = scalar_or_list<double>(doc, "snr_sqrt");
  spec.replications = doc.value("replications", 1);
  spec.seed = doc.value("seed", std::uint64_t{0});
  if (doc.contains("methods")) {
    spec.run_exact = spec.run_lasso = false;
    for (const auto& m : doc.at("methods")) {
      const auto name = m.get<std::string>();
      if (name == "exact") spec.run_exact = true;
      else if (name == "lasso") spec.run_lasso = true;
      else throw std::invalid_argument("sweep spec: unknown method '" + name + "'");
    }
  }
  if (doc.contains("gamma")) {
    const json& g = doc.at("gamma");
    if (g.is_number()) {
      spec.gamma_scale = g.get<double>();
      spec.gamma_per_sqrt_n = false;
    } else {
      spec.gamma_scale = g.value("scale", 1.0);
      const std::string rule = g.value("rule", std::string("inv_sqrt_n"));
      if (rule == "inv_sqrt_n") spec.gamma_per_sqrt_n = true;
      else if (rule == "fixed") spec.gamma_per_sqrt_n = false;
      else throw std::invalid_argument("sweep spec: unknown gamma rule '" + rule + "'");
    }
  }
  spec.time_limit_s = doc.value("time_limit_s", 60.0);
  if (doc.contains("max_nodes")) spec.max_nodes = doc.at("max_nodes").get<std::int64_t>();
  const std::string mode = doc.value("mode", std::string("single"));
  if (mode == "single") spec.mode = MasterMode::single_tree;
  else if (mode == "multi") spec.mode = MasterMode::multi_tree;
  else throw std::invalid_argument("sweep spec: mode must be 'single' or 'multi'");
  spec.validate();
  return spec;
}

SweepSpec SweepSpec::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sweep spec " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

void SweepSpec::validate() const {
  if (n.empty() || p.empty() || k.empty() || rho.empty() || snr_sqrt.empty())
    throw std::invalid_argument("sweep spec: every swept list needs at least one value");
  if (replications < 1) throw std::invalid_argument("sweep spec: replications must be >= 1");
  for (int nv : n)
    if (nv < 1) throw std::invalid_argument("sweep spec: n must be >= 1");
  for (double r : rho)
    if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("sweep spec: rho must lie in [0, 1)");
  for (double s : snr_sqrt)
    if (!(s > 0.0)) throw std::invalid_argument("sweep spec: snr_sqrt must be positive");
  for (int pv : p)
    for (int kv : k)
      if (kv < 1 || kv >= pv) throw std::invalid_argument("sweep spec: need 1 <= k < p for every (p, k)");
  if (!run_exact && !run_lasso) throw std::invalid_argument("sweep spec: no method selected");
  if (!(gamma_scale > 0.0)) throw std::invalid_argument("sweep spec: gamma must be positive");
  if (!(time_limit_s > 0.0)) throw std::invalid_argument("sweep spec: time_limit_s must be positive");
  if (max_nodes < 1) throw std::invalid_argument("sweep spec: max_nodes must be >= 1");
}

double SweepSpec::gamma_for(int n_samples) const {
  return gamma_per_sqrt_n ? gamma_scale / std::sqrt(static_cast<double>(n_samples)) : gamma_scale;
}

const std::string& experiment_header() {
  static const std::string header =
      "seed,replication,n,p,k_true,k_used,rho,snr_sqrt,gamma,method,accuracy_pct,false_alarm_pct,"
      "objective,lower_bound,wall_time_s,status,cuts,nodes,support,true_support";
  return header;
}

std::string ExperimentRow::key() const {
  std::ostringstream out;
  out << method << '|' << seed << '|' << replication << '|' << n << '|' << p << '|' << k_true << '|'
      << csv::format_double(rho) << '|' << csv::format_double(snr_sqrt);
  return out.str();
}

std::string ExperimentRow::to_csv() const {
  std::ostringstream out;
  out << seed << ',' << replication << ',' << n << ',' << p << ',' << k_true << ',' << k_used << ','
      << csv::format_double(rho) << ',' << csv::format_double(snr_sqrt) << ','
      << csv::format_double(gamma) << ',' << method << ',' << csv::format_double(accuracy_pct) << ','
      << csv::format_double(false_alarm_pct) << ',' << csv::format_double(objective) << ','
      << csv::format_double(lower_bound) << ',' << csv::format_double(wall_time_s) << ',' << status
      << ',' << cuts << ',' << nodes << ',' << csv::quote(join_indices(support)) << ','
      << csv::quote(join_indices(true_support));
  return out.str();
}

ExperimentRow ExperimentRow::from_csv(const std::vector<std::string>& f) {
  if (f.size() != 20) throw std::runtime_error("experiment csv: expected 20 fields per row");
  ExperimentRow r;
  r.seed = std::stoull(f[0]);
  r.replication = std::stoi(f[1]);
  r.n = std::stoi(f[2]);
  r.p = std::stoi(f[3]);
  r.k_true = std::stoi(f[4]);
  r.k_used = std::stoi(f[5]);
  r.rho = std::stod(f[6]);
  r.snr_sqrt = std::stod(f[7]);
  r.gamma = std::stod(f[8]);
  r.method = f[9];
  r.accuracy_pct = std::stod(f[10]);
  r.false_alarm_pct = std::stod(f[11]);
  r.objective = std::stod(f[12]);
  r.lower_bound = std::stod(f[13]);
  r.wall_time_s = std::stod(f[14]);
  r.status = f[15];
  r.cuts = std::stoll(f[16]);
  r.nodes = std::stoll(f[17]);
  r.support = split_indices(f[18]);
  r.true_support = split_indices(f[19]);
  return r;
}

std::vector<ExperimentRow> read_experiment_rows(const std::string& path) {
  std::vector<ExperimentRow> rows;
  std::ifstream in(path);
  if (!in) return rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (header) {
      header = false;
      continue;
    }
    rows.push_back(ExperimentRow::from_csv(csv::split_record(line)));
  }
  return rows;
}

std::string summary_path_for(const std::string& out_csv) {
  const std::string ext = ".csv";
  if (out_csv.size() > ext.size() && out_csv.compare(out_csv.size() - ext.size(), ext.size(), ext) == 0)
    return out_csv.substr(0, out_csv.size() - ext.size()) + ".summary.csv";
  return out_csv + ".summary.csv";
}

std::vector<SummaryRow> summarize(const std::vector<ExperimentRow>& rows) {
  std::vector<SummaryRow> out;
  std::map<std::string, std::size_t> slot;
  std::vector<std::vector<const ExperimentRow*>> groups;
  for (const ExperimentRow& r : rows) {
    std::ostringstream key;
    key << r.method << '|' << r.n << '|' << r.p << '|' << r.k_true << '|' << csv::format_double(r.rho)
        << '|' << csv::format_double(r.snr_sqrt);
    auto [it, inserted] = slot.emplace(key.str(), groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(&r);
  }
  auto mean_std = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    const double sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
    return std::pair{mean, sd};
  };
  for (const auto& g : groups) {
    SummaryRow s;
    s.method = g[0]->method;
    s.n = g[0]->n;
    s.p = g[0]->p;
    s.k = g[0]->k_true;
    s.rho = g[0]->rho;
    s.snr_sqrt = g[0]->snr_sqrt;
    s.count = static_cast<int>(g.size());
    std::vector<double> acc, fa, t;
    for (const ExperimentRow* r : g) {
      acc.push_back(r->accuracy_pct);
      fa.push_back(r->false_alarm_pct);
      t.push_back(r->wall_time_s);
      if (r->status == "optimal") ++s.optimal;
    }
    std::tie(s.accuracy_mean, s.accuracy_std) = mean_std(acc);
    std::tie(s.false_alarm_mean, s.false_alarm_std) = mean_std(fa);
    std::tie(s.time_mean, s.time_std) = mean_std(t);
    out.push_back(s);
  }
  return out;
}

namespace {

struct Task {
  int n, p, k;
  double rho, snr;
  int replication;
  std::uint64_t seed;
  bool need_exact, need_lasso;
};

std::vector<ExperimentRow> run_task(const SweepSpec& spec, const Task& task) {
  SyntheticSpec syn{task.n, task.p, task.k, task.rho, task.snr, task.seed};
  const SyntheticInstance inst = generate(syn);
  const double gamma = spec.gamma_for(task.n);
  const int k_used = std::min(task.k, task.p);

  ExperimentRow base;
  base.seed = task.seed;
  base.replication = task.replication;
  base.n = task.n;
  base.p = task.p;
  base.k_true = task.k;
  base.k_used = k_used;
  base.rho = task.rho;
  base.snr_sqrt = task.snr;
  base.gamma = gamma;
  base.true_support = inst.support_true.one_based();

  std::vector<ExperimentRow> rows;
  if (task.need_exact) {
    SolveConfig config;
    config.time_limit_s = spec.time_limit_s;
    config.max_nodes = spec.max_nodes;
    config.mode = spec.mode;
    const SolveResult res = solve_cardinality(inst.data, gamma, k_used, config);
    ExperimentRow row = base;
    row.method = "exact";
    const RecoveryScore score = support_metrics(res.support, inst.support_true, task.k);
    row.accuracy_pct = score.accuracy_pct;
    row.false_alarm_pct = score.false_alarm_pct;
    row.objective = res.objective;
    row.lower_bound = res.lower_bound;
    row.wall_time_s = res.wall_time_s;
    row.status = to_string(res.status);
    row.cuts = static_cast<std::int64_t>(res.cuts);
    row.nodes = res.nodes;
    row.support = res.support.one_based();
    rows.push_back(std::move(row));
  }
  if (task.need_lasso) {
    const auto start = std::chrono::steady_clock::now();
    const LassoKResult lasso = lasso_k_sparse(inst.data, k_used, default_path(inst.data));
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::vector<int> nz;
    for (int j = 0; j < task.p; ++j)
      if (lasso.w(j) != 0.0) nz.push_back(j);
    const Support found(nz);
    ExperimentRow row = base;
    row.method = "lasso";
    const RecoveryScore score = support_metrics(found, inst.support_true, task.k);
    row.accuracy_pct = score.accuracy_pct;
    row.false_alarm_pct = score.false_alarm_pct;
    row.objective = loss_and_gradient(inst.data, gamma, found).c;
    row.lower_bound = 0.0;
    row.wall_time_s = elapsed;
    row.status = lasso.exact ? "exact_k" : "nearest_k";
    row.support = found.one_based();
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_summary(const std::string& path, const std::vector<SummaryRow>& summary) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "method,n,p,k,rho,snr_sqrt,count,optimal,accuracy_mean,accuracy_std,false_alarm_mean,"
         "false_alarm_std,wall_time_mean,wall_time_std\n";
  for (const SummaryRow& s : summary) {
    out << s.method << ',' << s.n << ',' << s.p << ',' << s.k << ',' << csv::format_double(s.rho) << ','
        << csv::format_double(s.snr_sqrt) << ',' << s.count << ',' << s.optimal << ','
        << csv::format_double(s.accuracy_mean) << ',' << csv::format_double(s.accuracy_std) << ','
        << csv::format_double(s.false_alarm_mean) << ',' << csv::format_double(s.false_alarm_std) << ','
        << csv::format_double(s.time_mean) << ',' << csv::format_double(s.time_std) << '\n';
  }
}

}  // namespace

ExperimentReport run_experiment(const SweepSpec& spec, const std::string& out_csv, int jobs, std::ostream* log) {
  spec.validate();
  if (jobs < 1) jobs = 1;

  std::vector<ExperimentRow> existing = read_experiment_rows(out_csv);
  std::set<std::string> done;
  for (const ExperimentRow& r : existing) done.insert(r.key());

  std::vector<Task> tasks;
  for (int n : spec.n)
    for (int p : spec.p)
      for (int k : spec.k)
        for (double rho : spec.rho)
          for (double snr : spec.snr_sqrt)
            for (int rep = 0; rep < spec.replications; ++rep) {
              Task t{n, p, k, rho, snr, rep, derive_seed(spec.seed, point_hash(n, p, k, rho, snr),
                                                         static_cast<std::uint64_t>(rep)),
                     false, false};
              ExperimentRow probe;
              probe.seed = t.seed;
              probe.replication = rep;
              probe.n = n;
              probe.p = p;
              probe.k_true = k;
              probe.rho = rho;
              probe.snr_sqrt = snr;
              probe.method = "exact";
              t.need_exact = spec.run_exact && !done.count(probe.key());
              probe.method = "lasso";
              t.need_lasso = spec.run_lasso && !done.count(probe.key());
              if (t.need_exact || t.need_lasso) tasks.push_back(t);
            }

  const bool fresh = existing.empty() && !std::filesystem::exists(out_csv);
  std::ofstream out(out_csv, std::ios::app);
  if (!out) throw std::runtime_error("cannot write " + out_csv);
  if (fresh || std::filesystem::file_size(out_csv) == 0) out << experiment_header() << '\n';

  std::vector<std::optional<std::vector<ExperimentRow>>> results(tasks.size());
  std::mutex mu;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      std::vector<ExperimentRow> rows;
      try {
        rows = run_task(spec, tasks[i]);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
      {
        std::lock_guard lock(mu);
        results[i] = std::move(rows);
      }
      ready.notify_all();
    }
  };

  std::vector<std::thread> pool;
  const int workers = std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(tasks.size(), 1)));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);

  ExperimentReport report;
  std::vector<ExperimentRow> fresh_rows;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    std::vector<ExperimentRow> rows;
    {
      std::unique_lock lock(mu);
      ready.wait(lock, [&] { return results[i].has_value(); });
      rows = std::move(*results[i]);
      results[i].reset();
    }
    for (const ExperimentRow& r : rows) {
      out << r.to_csv() << '\n';
      if (log) {
        *log << r.method << " n=" << r.n << " p=" << r.p << " k=" << r.k_true << " rep=" << r.replication
             << " A%=" << r.accuracy_pct << " F%=" << r.false_alarm_pct << " t=" << r.wall_time_s << "s "
             << r.status << '\n';
      }
      fresh_rows.push_back(r);
    }
    out.flush();
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  report.new_rows = fresh_rows.size();
  report.rows = std::move(existing);
  report.rows.insert(report.rows.end(), fresh_rows.begin(), fresh_rows.end());
  report.summary_path = summary_path_for(out_csv);
  write_summary(report.summary_path, summarize(report.rows));
  return report;
}

}  // namespace sparsereg
