// Copyright 2026 The coil-link Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coillink/result_table.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace coillink {

void validate(const ResultTable& table) {
  if (table.header.empty()) throw std::invalid_argument("result table needs a header");
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) {
      throw std::invalid_argument("result table row width differs from header");
    }
  }
}

std::string format_double(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

namespace {

bool needs_quoting(const std::string& cell) {
  return cell.find_first_of(",\"\n\r") != std::string::npos;
}

std::string csv_cell(const std::string& cell) {
  if (!needs_quoting(cell)) return cell;
  std::string quoted = "\"";
  for (char c : cell) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

std::string to_csv(const ResultTable& table) {
  validate(table);
  std::ostringstream out;
  for (size_t i = 0; i < table.header.size(); ++i) {
    if (i) out << ',';
    out << csv_cell(table.header[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << csv_cell(row[i]);
    }
    out << '\n';
  }
  return out.str();
}

std::string to_text(const ResultTable& table) {
  validate(table);
  std::vector<size_t> widths(table.header.size(), 0);
  for (size_t i = 0; i < table.header.size(); ++i) {
    widths[i] = table.header[i].size();
  }
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      widths[i] = std::max(widths[i], row[i].size());
    }
  }
  std::ostringstream out;
  const auto emit = [&](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out << "  ";
      out << cells[i];
      if (i + 1 < cells.size()) {
        out << std::string(widths[i] - cells[i].size(), ' ');
      }
    }
    out << '\n';
  };
  emit(table.header);
  for (const auto& row : table.rows) emit(row);
  return out.str();
}

}  // namespace coillink
