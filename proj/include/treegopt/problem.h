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

// Global optimization problems in standard form:
//
//   min f(x)  s.t.  g_i(x) >= 0,  h_j(x) = 0,  A x >= b,  C x = d,
//                   lb <= x <= ub,  some x integral.
//
// Linear rows are kept apart from the nonlinear constraints, which are the
// only ones approximated by trees.

#ifndef TREEGOPT_PROBLEM_H_
#define TREEGOPT_PROBLEM_H_

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "treegopt/expression.h"
#include "treegopt/model.h"

namespace treegopt {


struct Variable {
  std::string name;
  double lower = -kInf;
  double upper = kInf;
  bool integral = false;

  bool bounded() const { return std::isfinite(lower) && std::isfinite(upper); }
};

// Opaque constraint body; receives the values of the declared active
// variables, in order.
using BlackBoxFn = std::function<double(std::span<const double>)>;

enum class ConstraintSense { kGreaterEqualZero, kEqualZero };

struct NonlinearConstraint {
  std::string name;
  ConstraintSense sense = ConstraintSense::kGreaterEqualZero;
  std::optional<Expression> body;  // explicit constraints
  BlackBoxFn black_box;            // black-box constraints
  std::string black_box_id;
  std::vector<int> active_vars;  // sorted global variable indices
  // Detected a.x + b + r(x) split of an explicit body.
  std::optional<SeparableSplit> separable;
  // Approximate a.x + b >= -r(x) with a regression tree over r instead of
  // classifying the whole body.
  bool use_regressor = false;

  bool is_explicit() const { return body.has_value(); }
  // Evaluates at a full-length point. Throws DomainError.
  double Evaluate(std::span<const double> x) const;
};

// a.x >= rhs (inequality list) or a.x == rhs (equality list).
struct LinearRow {
  std::string name;
  std::vector<std::pair<int, double>> terms;
  double rhs = 0.0;

  double Activity(std::span<const double> x) const;
};

struct Objective {
  AffineForm linear;                // used when `nonlinear` is empty
  std::optional<Expression> nonlinear;

  bool is_linear() const { return !nonlinear.has_value(); }
  double Evaluate(std::span<const double> x) const;
};

struct StandardFormProblem {
  std::string name;
  std::vector<Variable> variables;
  std::vector<LinearRow> inequalities;
  std::vector<LinearRow> equalities;
  std::vector<NonlinearConstraint> nonlinear;
  Objective objective;

  int num_vars() const { return static_cast<int>(variables.size()); }
  std::vector<std::string> VariableNames() const;
  int VariableIndex(const std::string& name) const;  // -1 if absent
  std::vector<double> LowerBounds() const;
  std::vector<double> UpperBounds() const;
  // Indices of variables used by nonlinear constraints or a nonlinear
  // objective.
  std::vector<int> NonlinearVariables() const;
};

// Builds a nonlinear constraint from an explicit body, filling active
// variables and the separable split.
NonlinearConstraint MakeConstraint(std::string name, Expression body,
                                   ConstraintSense sense = ConstraintSense::kGreaterEqualZero);

NonlinearConstraint MakeBlackBoxConstraint(std::string name, std::string id, BlackBoxFn fn,
                                           std::vector<int> active_vars,
                                           ConstraintSense sense);

// Moves syntactically affine constraint bodies into the linear rows and a
// syntactically affine objective into the linear objective. Total and
// idempotent.
StandardFormProblem Standardize(StandardFormProblem problem);

class BoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Interval {
  double lower = -kInf;
  double upper = kInf;
};

// Range of x_k over the linear rows and declared boxes (LP relaxation,
// integrality ignored). Never wider than the declared bounds. Throws
// BoundError if a direction is unbounded and undeclared, or the rows are
// infeasible.
Interval TightenBounds(const StandardFormProblem& problem, int k);

// Applies TightenBounds to every variable of a nonlinear constraint or
// objective. Returns the updated problem.
StandardFormProblem BoundNonlinearVariables(StandardFormProblem problem);

// Registry of named black-box constraint functions usable from problem files.
class BlackBoxRegistry {
 public:
  static BlackBoxRegistry& Global();
  void Register(const std::string& id, BlackBoxFn fn);
  const BlackBoxFn* Find(const std::string& id) const;

 private:
  BlackBoxRegistry();
  std::map<std::string, BlackBoxFn> functions_;
};

}  // namespace treegopt

#endif  // TREEGOPT_PROBLEM_H_
