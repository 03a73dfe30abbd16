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

#pragma once

#include <string>
#include <vector>

namespace coillink {

/// Column-ordered records with a header row. Cells are preformatted strings
/// so emission is deterministic and byte-identical across runs.
struct ResultTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void validate(const ResultTable& table);

/// Fixed 12-significant-digit formatting used for every numeric cell.
std::string format_double(double value);

/// RFC-4180-style CSV: CRLF-free newlines, cells quoted only when they
/// contain a comma, quote or newline.
std::string to_csv(const ResultTable& table);

/// Renders the table for terminals, padding columns to equal width.
std::string to_text(const ResultTable& table);

}  // namespace coillink
