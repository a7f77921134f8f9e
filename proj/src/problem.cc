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

#include "treegopt/problem.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "treegopt/model.h"
#include "treegopt/simplex.h"

namespace treegopt {

double NonlinearConstraint::Evaluate(std::span<const double> x) const {
  if (body) return body->Evaluate<double>(x);
  std::vector<double> local(active_vars.size());
  for (size_t i = 0; i < active_vars.size(); ++i) local[i] = x[active_vars[i]];
  const double v = black_box(local);
  if (!std::isfinite(v)) throw DomainError("non-finite black-box value", black_box_id);
  return v;
}

double LinearRow::Activity(std::span<const double> x) const {
  double v = 0.0;
  for (const auto& [j, a] : terms) v += a * x[j];
  return v;
}

double Objective::Evaluate(std::span<const double> x) const {
  if (nonlinear) return nonlinear->Evaluate<double>(x);
  return linear.Evaluate(x);
}

std::vector<std::string> StandardFormProblem::VariableNames() const {
  std::vector<std::string> names;
  names.reserve(variables.size());
  for (const auto& v : variables) names.push_back(v.name);
  return names;
}

int StandardFormProblem::VariableIndex(const std::string& name) const {
  for (int i = 0; i < num_vars(); ++i) {
    if (variables[i].name == name) return i;
  }
  return -1;
}

std::vector<double> StandardFormProblem::LowerBounds() const {
  std::vector<double> lb;
  for (const auto& v : variables) lb.push_back(v.lower);
  return lb;
}

std::vector<double> StandardFormProblem::UpperBounds() const {
  std::vector<double> ub;
  for (const auto& v : variables) ub.push_back(v.upper);
  return ub;
}

std::vector<int> StandardFormProblem::NonlinearVariables() const {
  std::set<int> used;
  for (const auto& c : nonlinear) used.insert(c.active_vars.begin(), c.active_vars.end());
  if (objective.nonlinear) {
    for (int k : objective.nonlinear->Variables()) used.insert(k);
  }
  return {used.begin(), used.end()};
}

NonlinearConstraint MakeConstraint(std::string name, Expression body, ConstraintSense sense) {
  NonlinearConstraint c;
  c.name = std::move(name);
  c.sense = sense;
  c.active_vars = body.Variables();
  c.separable = SplitSeparable(body);
  c.body = std::move(body);
  return c;
}

NonlinearConstraint MakeBlackBoxConstraint(std::string name, std::string id, BlackBoxFn fn,
                                           std::vector<int> active_vars,
                                           ConstraintSense sense) {
  NonlinearConstraint c;
  c.name = std::move(name);
  c.sense = sense;
  c.black_box = std::move(fn);
  c.black_box_id = std::move(id);
  c.active_vars = std::move(active_vars);
  return c;
}

StandardFormProblem Standardize(StandardFormProblem problem) {
  std::vector<NonlinearConstraint> kept;
  for (auto& c : problem.nonlinear) {
    std::optional<AffineForm> affine;
    if (c.body) affine = ExtractAffine(*c.body);
    if (!affine) {
      kept.push_back(std::move(c));
      continue;
    }
    LinearRow row;
    row.name = c.name;
    for (const auto& [j, a] : affine->coeffs) {
      if (a != 0.0) row.terms.emplace_back(j, a);
    }
    row.rhs = -affine->constant;
    if (c.sense == ConstraintSense::kEqualZero) {
      problem.equalities.push_back(std::move(row));
    } else {
      problem.inequalities.push_back(std::move(row));
    }
  }
  problem.nonlinear = std::move(kept);
  if (problem.objective.nonlinear) {
    if (auto affine = ExtractAffine(*problem.objective.nonlinear)) {
      problem.objective.linear = *affine;
      problem.objective.nonlinear.reset();
    }
  }
  return problem;
}

namespace {

LinearModel RelaxationModel(const StandardFormProblem& problem) {
  LinearModel model;
  for (const auto& v : problem.variables) model.AddColumn(v.name, v.lower, v.upper);
  for (const auto& row : problem.inequalities) {
    model.AddRow(row.name, row.terms, row.rhs, kInf);
  }
  for (const auto& row : problem.equalities) {
    model.AddRow(row.name, row.terms, row.rhs, row.rhs);
  }
  return model;
}

}  // namespace

Interval TightenBounds(const StandardFormProblem& problem, int k) {
  const Variable& var = problem.variables.at(k);
  LinearModel model = RelaxationModel(problem);
  Interval result{var.lower, var.upper};
  for (double direction : {1.0, -1.0}) {
    model.cost.assign(model.num_cols(), 0.0);
    model.cost[k] = direction;
    const SolveResult r = SolveLp(model);
    const bool lower = direction > 0;
    if (r.status == SolveStatus::kInfeasible) {
      throw BoundError("linear constraints are infeasible while bounding '" + var.name + "'");
    }
    if (r.status == SolveStatus::kUnbounded || !r.ok()) {
      const double declared = lower ? var.lower : var.upper;
      if (!std::isfinite(declared)) {
        throw BoundError("variable '" + var.name + "' has no " +
                         (lower ? "lower" : "upper") +
                         " bound and the linear constraints do not bound it");
      }
      continue;
    }
    const double value = r.x[k];
    if (lower) {
      result.lower = std::max(result.lower, value);
    } else {
      result.upper = std::min(result.upper, value);
    }
  }
  if (result.lower > result.upper) {
    // Round-off on a fixed variable; collapse to the midpoint.
    const double mid = 0.5 * (result.lower + result.upper);
    result.lower = result.upper = mid;
  }
  return result;
}

StandardFormProblem BoundNonlinearVariables(StandardFormProblem problem) {
  for (int k : problem.NonlinearVariables()) {
    Interval iv = TightenBounds(problem, k);
    Variable& v = problem.variables[k];
    if (v.integral) {
      iv.lower = std::ceil(iv.lower - 1e-9);
      iv.upper = std::floor(iv.upper + 1e-9);
    }
    v.lower = iv.lower;
    v.upper = iv.upper;
  }
  return problem;
}

BlackBoxRegistry& BlackBoxRegistry::Global() {
  static BlackBoxRegistry registry;
  return registry;
}

void BlackBoxRegistry::Register(const std::string& id, BlackBoxFn fn) {
  functions_[id] = std::move(fn);
}

const BlackBoxFn* BlackBoxRegistry::Find(const std::string& id) const {
  auto it = functions_.find(id);
  return it == functions_.end() ? nullptr : &it->second;
}

BlackBoxRegistry::BlackBoxRegistry() {
  // Opaque versions of the demo constraints, over (x1, x2, x3) and
  // (x1, x2, x3, x6). Domain errors surface as NaN.
  Register("demo_g1", [](std::span<const double> v) {
    const double a = v[1] + 1.0;
    const double b = v[0] - v[1] + 1.0;
    if (a <= 0.0 || b <= 0.0) return std::nan("");
    return 0.8 * std::log(a) + 0.96 * std::log(b) - 0.8 * v[2];
  });
  Register("demo_g2", [](std::span<const double> v) {
    const double a = v[1] + 1.0;
    const double b = v[0] - v[1] + 1.0;
    if (a <= 0.0 || b <= 0.0) return std::nan("");
    return std::log(a) + 1.2 * std::log(b) - v[2] - 2.0 * v[3] + 2.0;
  });
  // Unit disk feasibility: 1 - x^2 - y^2.
  Register("disk", [](std::span<const double> v) { return 1.0 - v[0] * v[0] - v[1] * v[1]; });
}

}  // namespace treegopt
