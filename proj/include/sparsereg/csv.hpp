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

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sparsereg::csv {

// RFC 4180 record splitting: quoted fields, doubled quotes, CRLF tolerated.
// Records spanning lines are not supported.
std::vector<std::string> split_record(const std::string& line);

std::string quote(const std::string& field);  // quotes only when needed

std::string format_double(double x);  // shortest round-trip representation

// Headerless numeric grid; every record must have the same width.
Eigen::MatrixXd read_matrix(const std::string& path);
// One value per record (a single-record row vector is accepted as well).
Eigen::VectorXd read_vector(const std::string& path);

void write_matrix(const std::string& path, const Eigen::MatrixXd& m);
void write_vector(const std::string& path, const Eigen::VectorXd& v);

}  // namespace sparsereg::csv
