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

#ifndef TREEGOPT_REPAIR_H_
#define TREEGOPT_REPAIR_H_

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "treegopt/problem.h"

namespace treegopt {

struct PgdParams {
  double gamma = 1e6;    // infeasibility penalty
  double beta = 1e4;     // projection distance penalty
  double alpha = 1e-3;   // step size
  double r = 2.0;        // step decay
  int max_iters = 100;   // T
  double epsilon = 1e-4; // objective improvement tolerance
  double phi = 1e-8;     // tightness tolerance
  // Hold lambda and mu at zero unless that step subproblem is infeasible.
  // False solves the fully relaxed subproblem every time.
  bool hard_first = true;
};

// Variable ranges; unbounded variables get max(upper) - min(lower) over the
// finite bounds (1 when there are none).
Eigen::VectorXd VariableRanges(const StandardFormProblem& problem);

// Exact gradient of an expression over a full-width point, one seeded
// forward pass per variable the expression uses. Throws DomainError.
Eigen::VectorXd ExpressionGradient(const Expression& expr, std::span<const double> x);

struct Gradient {
  Eigen::VectorXd value;      // full width
  bool approximate = false;   // central differences
};

// Forward-mode AD for explicit bodies; central differences with step
// 1e-6 * range for black boxes. Throws DomainError.
Gradient ConstraintGradient(const NonlinearConstraint& c, std::span<const double> x,
                            const Eigen::VectorXd& ranges);

Eigen::VectorXd ObjectiveGradient(const Objective& objective, std::span<const double> x);

// Linearization g(x*) + grad.d (>= 0, or == 0 for equalities) with the
// relaxation variable it carries.
struct LinearizedConstraint {
  int index = -1;  // position in problem.nonlinear
  bool equality = false;
  double value = 0.0;
  Eigen::VectorXd gradient;
  // Inequalities: true when g(x*) < 0, adding lambda >= 0 to the row.
  // Equalities: always true; rows grad.d + h + mu >= 0 and grad.d + h <= mu.
  bool relaxed = false;
};

LinearizedConstraint Linearize(const NonlinearConstraint& c, int index, double value,
                               const Eigen::VectorXd& gradient, double phi);

// kRestore is a projection step without the objective term, taken when a
// projection step failed to halve the violation.
enum class PgdMode { kDescent, kProject, kRestore };

struct PgdStep {
  Eigen::VectorXd step;             // d
  std::vector<double> lambda;       // per relaxed inequality, in order
  std::vector<double> mu;           // per equality, in order
  SolveStatus status = SolveStatus::kError;
  std::string message;
  bool relaxation_used = false;
};

// One step subproblem around x. Integer variables stay fixed. Descent mode
// bounds ||d / range||^2 by alpha exp(-r t / T); projection mode drops the
// ball and adds beta ||d / range||^2 to the objective. With hard_first the
// relaxation variables are held at zero unless that subproblem is
// infeasible: a finite gamma otherwise leaves violations of order
// multiplier / (2 gamma), far above phi.
PgdStep SolveStep(const StandardFormProblem& problem, std::span<const double> x,
                  const Eigen::VectorXd& objective_gradient,
                  const std::vector<LinearizedConstraint>& rows, const Eigen::VectorXd& ranges,
                  PgdMode mode, int t, const PgdParams& params);

struct ViolationReport {
  std::vector<std::string> names;  // nonlinear then linear constraints
  std::vector<double> values;      // signed: g(x), h(x), a.x - b
  std::vector<bool> equality;
  double max_violation = 0.0;      // includes variable bounds and integrality
  bool feasible = false;           // max_violation <= tolerance
  int worst = -1;                  // index into names, -1 when none violated
};

// Evaluates every original constraint; domain errors count as violation
// 1e10.
ViolationReport CheckSolution(const StandardFormProblem& problem, std::span<const double> x,
                              double tolerance);

struct PgdTraceRow {
  int iteration = 0;
  PgdMode mode = PgdMode::kDescent;
  double objective = 0.0;
  double max_violation = 0.0;
  double step_norm = 0.0;  // ||d / range||
};

struct RepairResult {
  std::vector<double> x;
  double objective = 0.0;
  double max_violation = 0.0;
  bool feasible = false;
  bool converged = false;
  int iterations = 0;
  std::vector<PgdTraceRow> trace;
  std::vector<std::string> warnings;
};

RepairResult Repair(const StandardFormProblem& problem, std::span<const double> x0,
                    const PgdParams& params = {});

void WriteTraceCsv(std::ostream& out, const std::vector<PgdTraceRow>& trace);

const char* ToString(PgdMode mode);

}  // namespace treegopt

#endif  // TREEGOPT_REPAIR_H_
