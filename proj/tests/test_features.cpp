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

#include <cmath>
#include <random>

#include "sparsereg/features.hpp"
#include "sparsereg/solver.hpp"
#include "test_helpers.hpp"

using namespace sparsereg;

TEST_CASE("dictionary at one and at zero") {
  const FeatureExpansion one = expand_features(Eigen::MatrixXd::Ones(1, 1));
  const double expected_one[] = {1.0, 1.0, 0.0, 1.0, 1.0, 1.0, std::sin(1.0), std::tanh(2.0)};
  for (int g = 0; g < 8; ++g) CHECK(one.psi_x(0, g) == doctest::Approx(expected_one[g]).epsilon(1e-12));
  CHECK(one.psi_x(0, 6) == doctest::Approx(0.84147).epsilon(1e-5));
  CHECK(one.psi_x(0, 7) == doctest::Approx(0.96403).epsilon(1e-5));

  const FeatureExpansion zero = expand_features(Eigen::MatrixXd::Zero(1, 1));
  const double expected_zero[] = {0.0, 0.0, std::log(1e-12), 0.0, 0.0, 1.0, 0.0, 0.0};
  for (int g = 0; g < 8; ++g) CHECK(zero.psi_x(0, g) == doctest::Approx(expected_zero[g]).epsilon(1e-12));
  CHECK(zero.psi_x.allFinite());
}

TEST_CASE("lifted layout and names") {
  std::mt19937_64 rng(81);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd X(7, 4);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 4; ++j) X(i, j) = normal(rng);
  const FeatureExpansion f = expand_features(X);
  CHECK(f.psi_x.rows() == 7);
  CHECK(f.psi_x.cols() == 32);
  CHECK(f.names.size() == 32);
  CHECK(f.source_columns == 4);
  for (int c = 0; c < 32; ++c) {
    CHECK(f.find(f.names[static_cast<std::size_t>(c)]) == c);
    const int j = FeatureExpansion::source_of(c);
    const Transform g = FeatureExpansion::transform_of(c);
    CHECK(FeatureExpansion::column_of(j, g) == c);
    for (int i = 0; i < 7; ++i) CHECK(f.psi_x(i, c) == apply_transform(g, X(i, j)));
  }
  CHECK(f.names[FeatureExpansion::column_of(2, Transform::tanh_2)] == "tanh(2*X3)");
  CHECK(f.names[FeatureExpansion::column_of(3, Transform::sqrt_abs)] == "sqrt|X4|");
  CHECK(f.names[FeatureExpansion::column_of(1, Transform::square)] == "X2^2");
  CHECK(f.names[FeatureExpansion::column_of(0, Transform::identity)] == "X1");
  CHECK_FALSE(f.find("X9").has_value());
}

TEST_CASE("optional standardization") {
  std::mt19937_64 rng(82);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd X(50, 3);
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 3; ++j) X(i, j) = 3.0 * normal(rng);
  X.col(2).setConstant(0.0);
  const FeatureExpansion s = expand_features(X, true);
  for (int c = 0; c < 16; ++c) {
    const Eigen::VectorXd col = s.psi_x.col(c);
    const double var = (col.array() - col.mean()).square().sum() / 49.0;
    CHECK(var == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(s.psi_x.col(FeatureExpansion::column_of(2, Transform::cos_10pi)).isConstant(1.0));
}

TEST_CASE("solving on lifted features is an ordinary solve") {
  std::mt19937_64 rng(83);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd X(60, 3);
  for (int i = 0; i < 60; ++i)
    for (int j = 0; j < 3; ++j) X(i, j) = normal(rng);
  Eigen::VectorXd Y(60);
  for (int i = 0; i < 60; ++i) Y(i) = std::tanh(2 * X(i, 1)) + X(i, 2) * X(i, 2) + 0.01 * normal(rng);
  const FeatureExpansion f = expand_features(X);
  Eigen::MatrixXd manual(60, 24);
  for (int c = 0; c < 24; ++c)
    for (int i = 0; i < 60; ++i) manual(i, c) = apply_transform(FeatureExpansion::transform_of(c), X(i, FeatureExpansion::source_of(c)));
  SolveConfig cfg;
  cfg.tol = 1e-10;
  const SolveResult a = solve_cardinality(Dataset(f.psi_x, Y), 10.0, 2, cfg);
  const SolveResult b = solve_cardinality(Dataset(manual, Y), 10.0, 2, cfg);
  CHECK(a.support == b.support);
  CHECK(a.objective == b.objective);
  CHECK(a.support == Support{FeatureExpansion::column_of(1, Transform::tanh_2), FeatureExpansion::column_of(2, Transform::square)});
}
