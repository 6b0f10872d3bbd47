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

#include "sparsereg/features.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sparsereg {

double apply_transform(Transform g, double x) {
  switch (g) {
    case Transform::identity: return x;
    case Transform::sqrt_abs: return std::sqrt(std::abs(x));
    case Transform::log_abs: return std::log(std::max(std::abs(x), kLogFloor));
    case Transform::square: return x * x;
    case Transform::cube: return x * x * x;
    case Transform::cos_10pi: return std::cos(10.0 * std::numbers::pi * x);
    case Transform::sin: return std::sin(x);
    case Transform::tanh_2: return std::tanh(2.0 * x);
  }
  return x;
}

std::string transform_label(Transform g, const std::string& var) {
  switch (g) {
    case Transform::identity: return var;
    case Transform::sqrt_abs: return "sqrt|" + var + "|";
    case Transform::log_abs: return "log|" + var + "|";
    case Transform::square: return var + "^2";
    case Transform::cube: return var + "^3";
    case Transform::cos_10pi: return "cos(10pi*" + var + ")";
    case Transform::sin: return "sin(" + var + ")";
    case Transform::tanh_2: return "tanh(2*" + var + ")";
  }
  return var;
}

std::optional<int> FeatureExpansion::find(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

FeatureExpansion expand_features(const Eigen::MatrixXd& X, bool standardize) {
  if (!X.allFinite()) throw std::invalid_argument("expand_features: X contains non-finite entries");
  FeatureExpansion out;
  out.source_columns = static_cast<int>(X.cols());
  out.psi_x.resize(X.rows(), X.cols() * kTransformCount);
  for (int j = 0; j < X.cols(); ++j) {
    const std::string var = "X" + std::to_string(j + 1);
    for (int t = 0; t < kTransformCount; ++t) {
      const auto g = static_cast<Transform>(t);
      const int col = FeatureExpansion::column_of(j, g);
      out.psi_x.col(col) = X.col(j).unaryExpr([g](double x) { return apply_transform(g, x); });
      out.names.push_back(transform_label(g, var));
    }
  }
  if (standardize && X.rows() > 1) {
    for (Eigen::Index c = 0; c < out.psi_x.cols(); ++c) {
      const double mean = out.psi_x.col(c).mean();
      const double var = (out.psi_x.col(c).array() - mean).square().sum() / static_cast<double>(X.rows() - 1);
      if (var > 0.0) out.psi_x.col(c) /= std::sqrt(var);
    }
  }
  return out;
}

}  // namespace sparsereg
