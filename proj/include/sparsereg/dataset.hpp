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
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sparsereg {

// Response Y (length n) and design X (n x p). Eigen stores X column-major,
// which is the access pattern of every hot loop in this library.
struct Dataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd Y;

  Dataset() = default;
  Dataset(Eigen::MatrixXd x, Eigen::VectorXd y);

  int n() const { return static_cast<int>(X.rows()); }
  int p() const { return static_cast<int>(X.cols()); }

  // Throws std::invalid_argument on empty, mismatched or non-finite data.
  void validate() const;

  // Rows selected by `rows`, in the given order.
  Dataset subset_rows(const std::vector<int>& rows) const;
};

// A binary selection s in {0,1}^p, held as a strictly increasing list of
// 0-based column indices. User-facing I/O converts to 1-based at the boundary.
class Support {
 public:
  Support() = default;
  explicit Support(std::vector<int> indices);
  Support(std::initializer_list<int> indices);

  static Support from_one_based(const std::vector<int>& indices);
  static Support from_mask(const std::vector<char>& mask);

  const std::vector<int>& indices() const { return idx_; }
  std::vector<int> one_based() const;
  std::vector<char> mask(int p) const;

  int size() const { return static_cast<int>(idx_.size()); }
  bool empty() const { return idx_.empty(); }
  bool contains(int j) const;
  int operator[](std::size_t i) const { return idx_[i]; }

  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }

  // Throws if any index falls outside [0, p).
  void check_range(int p) const;

  std::string to_string() const;  // "{1,4,7}" (1-based)

  friend bool operator==(const Support&, const Support&) = default;
  friend auto operator<=>(const Support& a, const Support& b) { return a.idx_ <=> b.idx_; }

 private:
  std::vector<int> idx_;
};

struct SupportHash {
  std::size_t operator()(const Support& s) const noexcept;
};

// Columns of X listed in `s`, as an n x |s| matrix.
Eigen::MatrixXd select_columns(const Eigen::MatrixXd& X, const Support& s);

}  // namespace sparsereg
