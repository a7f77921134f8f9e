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

#include "treegopt/model.h"

#include <algorithm>
#include <cmath>

namespace treegopt {

int LinearModel::AddColumn(std::string name, double lower, double upper, double c,
                           bool is_integer) {
  col_names.push_back(std::move(name));
  col_lower.push_back(lower);
  col_upper.push_back(upper);
  cost.push_back(c);
  integer.push_back(is_integer);
  return num_cols() - 1;
}

int LinearModel::AddRow(std::string name, std::vector<std::pair<int, double>> terms,
                        double lower, double upper) {
  rows.push_back(Row{std::move(name), std::move(terms), lower, upper});
  return num_rows() - 1;
}

double LinearModel::Objective(std::span<const double> x) const {
  double v = cost_offset;
  for (int j = 0; j < num_cols(); ++j) v += cost[j] * x[j];
  return v;
}

double LinearModel::RowActivity(int r, std::span<const double> x) const {
  double v = 0.0;
  for (const auto& [j, a] : rows[r].terms) v += a * x[j];
  return v;
}

double LinearModel::MaxViolation(std::span<const double> x) const {
  double worst = 0.0;
  for (int j = 0; j < num_cols(); ++j) {
    worst = std::max({worst, col_lower[j] - x[j], x[j] - col_upper[j]});
  }
  for (int r = 0; r < num_rows(); ++r) {
    const double a = RowActivity(r, x);
    worst = std::max({worst, rows[r].lower - a, a - rows[r].upper});
  }
  return worst;
}

double LinearModel::MaxIntegrality(std::span<const double> x) const {
  double worst = 0.0;
  for (int j = 0; j < num_cols(); ++j) {
    if (integer[j]) worst = std::max(worst, std::fabs(x[j] - std::round(x[j])));
  }
  return worst;
}

const char* ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kIterationLimit:
      return "iteration-limit";
    case SolveStatus::kError:
      return "error";
  }
  return "error";
}

}  // namespace treegopt
