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

// Problem files in JSON.
//
//   {
//     "name": "demo",
//     "variables": [{"name": "x1", "lb": 0, "ub": 2, "integer": false}, ...],
//     "linear": [{"name": "l1", "coeffs": {"x1": 1, "x2": -1},
//                 "sense": ">=", "rhs": 0}, ...],
//     "nonlinear": [{"name": "g1", "expr": "log(x2 + 1) - x3", "sense": ">="},
//                   {"name": "g2", "blackbox": "demo_g1",
//                    "vars": ["x1", "x2", "x3"], "sense": ">="}, ...],
//     "objective": {"linear": {"x1": 10}, "constant": 0} | {"expr": "..."},
//     "best_known": {"objective": 2994.355, "point": {...}, "source": "..."}
//   }
//
// Missing or null bounds are infinite. Nonlinear senses compare the body
// against zero; "<=" bodies are negated. "separable": true asks for the
// regression-tree treatment of an affine-plus-nonlinear body. The problem is
// minimized.

#ifndef TREEGOPT_PROBLEM_IO_H_
#define TREEGOPT_PROBLEM_IO_H_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "treegopt/problem.h"

namespace treegopt {

// Input error carrying a 1-based line and column when known (0 otherwise).
class ProblemFormatError : public std::runtime_error {
 public:
  ProblemFormatError(const std::string& source, int line, int column, const std::string& what);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct BestKnown {
  double objective = 0.0;
  std::map<std::string, double> point;
  std::vector<double> printed_point;  // as tabulated, possibly rounded
  std::string source;
};

struct LoadedProblem {
  StandardFormProblem problem;  // as written; not yet standardized
  std::optional<BestKnown> best_known;
};

LoadedProblem ParseProblem(const std::string& text, const std::string& source = "<string>");
LoadedProblem LoadProblem(const std::string& path);

nlohmann::ordered_json ProblemToJson(const StandardFormProblem& problem);

}  // namespace treegopt

#endif  // TREEGOPT_PROBLEM_IO_H_
