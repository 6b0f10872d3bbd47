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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "sparsereg/csv.hpp"
#include "sparsereg/metrics.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "sparsereg_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(SPARSEREG_CLI) + " " + args + " > " + (workdir() / "log.txt").string() + " 2>&1";
  return std::system(cmd.c_str());
}

json load(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

}  // namespace

TEST_CASE("generate then solve end to end") {
  const fs::path prefix = workdir() / "inst_";
  REQUIRE(run("gen --n 60 --p 25 --k 3 --rho 0.1 --snr-sqrt 10 --seed 4 --out-prefix " + prefix.string()) == 0);
  const Eigen::MatrixXd X = sparsereg::csv::read_matrix(prefix.string() + "X.csv");
  const Eigen::VectorXd Y = sparsereg::csv::read_vector(prefix.string() + "Y.csv");
  CHECK(X.rows() == 60);
  CHECK(X.cols() == 25);
  CHECK(Y.size() == 60);
  const json truth = load(prefix.string() + "truth.json");
  REQUIRE(truth["support"].size() == 3);
  REQUIRE(truth["signs"].size() == 3);

  const fs::path out = workdir() / "result.json";
  REQUIRE(run("solve --x " + prefix.string() + "X.csv --y " + prefix.string() + "Y.csv --k 3 --gamma 0.5 --out " +
              out.string()) == 0);
  const json r = load(out);
  for (const char* key : {"objective", "lower_bound", "support", "coefficients", "cuts", "nodes", "wall_time_s", "status", "config"})
    CHECK(r.contains(key));
  CHECK(r["status"] == "optimal");
  CHECK(r["coefficients"].size() == 25);
  CHECK(r["support"].get<std::vector<int>>() == truth["support"].get<std::vector<int>>());
  CHECK(r["objective"].get<double>() - r["lower_bound"].get<double>() >= -1e-9);
  CHECK(r["config"]["k"] == 3);

  const fs::path pen = workdir() / "pen.json";
  REQUIRE(run("solve --x " + prefix.string() + "X.csv --y " + prefix.string() + "Y.csv --gamma 0.5 --penalized 5 --mode multi --out " +
              pen.string()) == 0);
  CHECK(load(pen)["status"] == "optimal");

  const fs::path lifted = workdir() / "lifted.json";
  REQUIRE(run("solve --x " + prefix.string() + "X.csv --y " + prefix.string() + "Y.csv --k 2 --gamma 0.5 --expand-features --max-nodes 300 --out " +
              lifted.string()) == 0);
  const json l = load(lifted);
  CHECK(l["coefficients"].size() == 200);
  CHECK(l["support_names"].size() == l["support"].size());
}

TEST_CASE("cross validation and experiment commands") {
  const fs::path prefix = workdir() / "cv_";
  REQUIRE(run("gen --n 50 --p 10 --k 2 --rho 0 --snr-sqrt 50 --seed 1 --out-prefix " + prefix.string()) == 0);
  const fs::path cv = workdir() / "cv.json";
  REQUIRE(run("cv --x " + prefix.string() + "X.csv --y " + prefix.string() + "Y.csv --k-min 1 --k-max 4 --folds 5 --gamma-grid 1 10 --out " +
              cv.string()) == 0);
  const json c = load(cv);
  CHECK(c["k"] == 2);
  CHECK(c["table"].size() == 8);

  const fs::path spec = workdir() / "sweep.json";
  std::ofstream(spec) << R"({"n":[20,40],"p":10,"k":2,"rho":0,"snr_sqrt":5,"replications":2,"seed":1,"methods":["exact","lasso"]})";
  const fs::path runs = workdir() / "runs.csv";
  REQUIRE(run("experiment --spec " + spec.string() + " --out " + runs.string() + " --jobs 2 --quiet") == 0);
  CHECK(fs::exists(workdir() / "runs.summary.csv"));
  std::ifstream in(runs);
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == 1 + 2 * 2 * 2);
}

TEST_CASE("bad invocations fail cleanly") {
  CHECK(run("solve --x /nonexistent.csv --y /nonexistent.csv --k 1 --gamma 1 --out /tmp/x.json") != 0);
  CHECK(run("solve --k 1") != 0);
  CHECK(run("frobnicate") != 0);
}
