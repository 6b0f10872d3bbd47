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

#include "sparsereg/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sparsereg::csv {

std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  std::size_t end = line.size();
  if (end > 0 && line[end - 1] == '\r') --end;
  for (std::size_t i = 0; i < end; ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < end && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  if (quoted) throw std::runtime_error("csv: unterminated quoted field");
  fields.push_back(std::move(field));
  return fields;
}

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

double parse_number(const std::string& raw, const std::string& path, std::size_t record) {
  std::size_t b = raw.find_first_not_of(" \t");
  std::size_t e = raw.find_last_not_of(" \t");
  if (b == std::string::npos) {
    std::ostringstream msg;
    msg << path << ": empty field in record " << record;
    throw std::runtime_error(msg.str());
  }
  const char* first = raw.data() + b;
  const char* last = raw.data() + e + 1;
  if (*first == '+') ++first;
  double value = 0.0;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    std::ostringstream msg;
    msg << path << ": bad number '" << raw << "' in record " << record;
    throw std::runtime_error(msg.str());
  }
  return value;
}

std::vector<std::vector<double>> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t record = 0;
  while (std::getline(in, line)) {
    ++record;
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    for (const std::string& field : split_record(line)) row.push_back(parse_number(field, path, record));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Eigen::MatrixXd read_matrix(const std::string& path) {
  const auto rows = read_records(path);
  if (rows.empty()) throw std::runtime_error("csv: " + path + " holds no records");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) {
      std::ostringstream msg;
      msg << path << ": record " << i + 1 << " has " << rows[i].size() << " fields, expected "
          << rows[0].size();
      throw std::runtime_error(msg.str());
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

Eigen::VectorXd read_vector(const std::string& path) {
  const Eigen::MatrixXd m = read_matrix(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw std::runtime_error("csv: " + path + " is not a vector");
}

void write_matrix(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("csv: cannot write " + path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << "\r\n";
  }
}

void write_vector(const std::string& path, const Eigen::VectorXd& v) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("csv: cannot write " + path);
  for (Eigen::Index i = 0; i < v.size(); ++i) out << format_double(v(i)) << "\r\n";
}

}  // namespace sparsereg::csv
