// Copyright 2026 The treegopt Authors
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

#ifndef TREEGOPT_MPS_H_
#define TREEGOPT_MPS_H_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "treegopt/model.h"

namespace treegopt {

class MpsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MpsExport {
  std::string text;
  // Original name -> MPS name, for every mangled row or column.
  std::vector<std::pair<std::string, std::string>> renamed;
  std::vector<std::string> column_names;  // MPS names in column order
  std::vector<std::string> row_names;     // MPS names in row order
};

// Fixed-format MPS with deterministic ordering. Names longer than eight
// characters or outside [A-Za-z0-9_.] are replaced by C<n> / R<n>.
// Numbers are written in shortest round-trip form and may exceed the
// twelve-character field. The objective constant is the negated RHS of
// the objective row.
MpsExport ExportMps(const LinearModel& model, const std::string& name = "TREEGOPT");

// Reads fixed or free MPS (whitespace separated fields, no spaces in names).
LinearModel ImportMps(const std::string& text);

struct ExternalOptions {
  // Command template with {input} and {output} placeholders.
  std::string command;
  // Directory for the MPS and solution files; a fresh temporary directory
  // when empty. Kept when the solve fails.
  std::string work_dir;
  double feasibility_tol = 1e-7;
};

// Solution file: "status <word>", "objective <value>", then one
// "<column> <value>" line per column, using the MPS names.
SolveResult ExternalSolve(const MilpInstance& instance, const ExternalOptions& options);

}  // namespace treegopt

#endif  // TREEGOPT_MPS_H_
