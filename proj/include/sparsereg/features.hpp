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

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sparsereg {

// Transformations applied to every source column, in column order.
enum class Transform { identity, sqrt_abs, log_abs, square, cube, cos_10pi, sin, tanh_2 };

inline constexpr int kTransformCount = 8;
inline constexpr double kLogFloor = 1e-12;  // log|x| is evaluated at max(|x|, kLogFloor)

double apply_transform(Transform g, double x);
std::string transform_label(Transform g, const std::string& var);  // e.g. "tanh(2*X3)"

struct FeatureExpansion {
  Eigen::MatrixXd psi_x;           // n x 8p
  std::vector<std::string> names;  // one label per column
  int source_columns = 0;

  // Lifted column of transform g applied to source column j (0-based).
  static int column_of(int j, Transform g) { return j * kTransformCount + static_cast<int>(g); }
  static int source_of(int column) { return column / kTransformCount; }
  static Transform transform_of(int column) { return static_cast<Transform>(column % kTransformCount); }

  std::optional<int> find(const std::string& name) const;
};

// Lifted column 8j + t holds transform t of source column j; labels use
// 1-based source names "X1".."Xp". `standardize` rescales every lifted column
// to unit sample variance (constant columns are left unscaled).
FeatureExpansion expand_features(const Eigen::MatrixXd& X, bool standardize = false);

}  // namespace sparsereg
