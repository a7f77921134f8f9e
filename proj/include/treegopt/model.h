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

// Linear and mixed-integer linear models shared by the encoder and the
// solvers.

#ifndef TREEGOPT_MODEL_H_
#define TREEGOPT_MODEL_H_

#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace treegopt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// min c.x + offset  s.t.  row.lower <= a_r.x <= row.upper,  lb <= x <= ub.
struct LinearModel {
  struct Row {
    std::string name;
    std::vector<std::pair<int, double>> terms;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
  };

  std::vector<std::string> col_names;
  std::vector<double> col_lower;
  std::vector<double> col_upper;
  std::vector<double> cost;
  std::vector<bool> integer;
  double cost_offset = 0.0;
  std::vector<Row> rows;

  int num_cols() const { return static_cast<int>(col_names.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int AddColumn(std::string name, double lower, double upper, double cost = 0.0,
                bool is_integer = false);
  int AddRow(std::string name, std::vector<std::pair<int, double>> terms, double lower,
             double upper);

  double Objective(std::span<const double> x) const;
  double RowActivity(int r, std::span<const double> x) const;
  // Largest absolute violation over column bounds and rows.
  double MaxViolation(std::span<const double> x) const;
  // Largest distance of an integer column from the nearest integer.
  double MaxIntegrality(std::span<const double> x) const;
};

using LpInstance = LinearModel;

// Where an auxiliary MILP column came from.
struct Provenance {
  enum class Kind { kOriginal, kLeafCopy, kLeafIndicator, kLeafValue, kAggregate };
  Kind kind = Kind::kOriginal;
  std::string source;  // constraint or objective name
  int leaf = -1;       // 1-based preorder node id of the tree leaf
  int component = -1;  // position within the active variables
};

// A MILP plus its disjunction structure: every group holds binary columns
// constrained by sum == 1, used for pick-a-leaf branching.
struct MilpInstance {
  LinearModel model;
  std::vector<std::vector<int>> sos1_groups;
  std::vector<Provenance> provenance;  // one per column
  int num_original = 0;                // leading columns are problem variables
  int objective_column = -1;           // f* column when the objective is approximated
  std::vector<std::string> omitted;    // box-redundant constraints left out
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kError };

const char* ToString(SolveStatus status);

struct SolveResult {
  SolveStatus status = SolveStatus::kError;
  std::vector<double> x;
  double objective = std::numeric_limits<double>::quiet_NaN();
  // Best proven lower bound (MILP); equals objective for LP/QP optima.
  double bound = -std::numeric_limits<double>::infinity();
  int iterations = 0;
  int nodes = 0;
  std::string message;

  bool ok() const { return status == SolveStatus::kOptimal; }
};

}  // namespace treegopt

#endif  // TREEGOPT_MODEL_H_
