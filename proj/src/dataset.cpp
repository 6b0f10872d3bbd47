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

#include "sparsereg/dataset.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sparsereg {

Dataset::Dataset(Eigen::MatrixXd x, Eigen::VectorXd y) : X(std::move(x)), Y(std::move(y)) {}

void Dataset::validate() const {
  if (X.rows() < 1 || X.cols() < 1) throw std::invalid_argument("dataset: X must be at least 1x1");
  if (Y.size() != X.rows()) {
    std::ostringstream msg;
    msg << "dataset: Y has " << Y.size() << " entries but X has " << X.rows() << " rows";
    throw std::invalid_argument(msg.str());
  }
  if (!X.allFinite()) throw std::invalid_argument("dataset: X contains non-finite entries");
  if (!Y.allFinite()) throw std::invalid_argument("dataset: Y contains non-finite entries");
}

Dataset Dataset::subset_rows(const std::vector<int>& rows) const {
  Dataset out;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), X.cols());
  out.Y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.X.row(static_cast<Eigen::Index>(r)) = X.row(rows[r]);
    out.Y(static_cast<Eigen::Index>(r)) = Y(rows[r]);
  }
  return out;
}

Support::Support(std::vector<int> indices) : idx_(std::move(indices)) {
  std::sort(idx_.begin(), idx_.end());
  if (std::adjacent_find(idx_.begin(), idx_.end()) != idx_.end())
    throw std::invalid_argument("support: duplicate index");
  if (!idx_.empty() && idx_.front() < 0) throw std::invalid_argument("support: negative index");
}

Support::Support(std::initializer_list<int> indices) : Support(std::vector<int>(indices)) {}

Support Support::from_one_based(const std::vector<int>& indices) {
  std::vector<int> zero(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 1) throw std::invalid_argument("support: 1-based index must be >= 1");
    zero[i] = indices[i] - 1;
  }
  return Support(std::move(zero));
}

Support Support::from_mask(const std::vector<char>& mask) {
  Support s;
  for (std::size_t j = 0; j < mask.size(); ++j)
    if (mask[j]) s.idx_.push_back(static_cast<int>(j));
  return s;
}

std::vector<int> Support::one_based() const {
  std::vector<int> out(idx_);
  for (int& j : out) ++j;
  return out;
}

std::vector<char> Support::mask(int p) const {
  std::vector<char> m(static_cast<std::size_t>(p), 0);
  for (int j : idx_) m[static_cast<std::size_t>(j)] = 1;
  return m;
}

bool Support::contains(int j) const { return std::binary_search(idx_.begin(), idx_.end(), j); }

void Support::check_range(int p) const {
  if (!idx_.empty() && idx_.back() >= p) {
    std::ostringstream msg;
    msg << "support: index " << idx_.back() + 1 << " exceeds p = " << p;
    throw std::invalid_argument(msg.str());
  }
}

std::string Support::to_string() const {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < idx_.size(); ++i) out << (i ? "," : "") << idx_[i] + 1;
  out << '}';
  return out.str();
}

std::size_t SupportHash::operator()(const Support& s) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (int j : s) {
    h ^= static_cast<std::size_t>(j) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h ^ static_cast<std::size_t>(s.size());
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& X, const Support& s) {
  Eigen::MatrixXd out(X.rows(), s.size());
  for (int i = 0; i < s.size(); ++i) out.col(i) = X.col(s[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace sparsereg
