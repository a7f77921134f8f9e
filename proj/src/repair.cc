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

#include "treegopt/repair.h"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "treegopt/dual.h"
#include "treegopt/qp.h"

namespace treegopt {
namespace {

constexpr double kDomainViolation = 1e10;

double RowViolation(double activity, double rhs, bool equality) {
  return equality ? std::fabs(activity - rhs) : std::max(0.0, rhs - activity);
}

struct Evaluation {
  std::vector<double> values;  // per nonlinear constraint
  std::vector<bool> domain_error;
};

Evaluation EvaluateAll(const StandardFormProblem& p, std::span<const double> x) {
  Evaluation e;
  for (const auto& c : p.nonlinear) {
    try {
      e.values.push_back(c.Evaluate(x));
      e.domain_error.push_back(false);
    } catch (const DomainError&) {
      e.values.push_back(-kDomainViolation);
      e.domain_error.push_back(true);
    }
  }
  return e;
}

bool Violated(const NonlinearConstraint& c, double v, double phi) {
  return c.sense == ConstraintSense::kEqualZero ? std::fabs(v) > phi : v < -phi;
}

}  // namespace

const char* ToString(PgdMode mode) {
  switch (mode) {
    case PgdMode::kDescent: return "descent";
    case PgdMode::kProject: return "project";
    case PgdMode::kRestore: return "restore";
  }
  return "?";
}

Eigen::VectorXd VariableRanges(const StandardFormProblem& problem) {
  const int n = problem.num_vars();
  double hi = -kInf, lo = kInf;
  for (const auto& v : problem.variables) {
    if (std::isfinite(v.upper)) hi = std::max(hi, v.upper);
    if (std::isfinite(v.lower)) lo = std::min(lo, v.lower);
  }
  const double fallback = (std::isfinite(hi) && std::isfinite(lo) && hi > lo) ? hi - lo : 1.0;
  Eigen::VectorXd r(n);
  for (int k = 0; k < n; ++k) {
    const auto& v = problem.variables[k];
    r[k] = v.bounded() && v.upper > v.lower ? v.upper - v.lower : fallback;
  }
  return r;
}

Eigen::VectorXd ExpressionGradient(const Expression& expr, std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  std::vector<Dual> point(x.begin(), x.end());
  for (int k : expr.Variables()) {
    point[k].deriv = 1.0;
    g[k] = expr.Evaluate<Dual>(point).deriv;
    point[k].deriv = 0.0;
  }
  return g;
}

Gradient ConstraintGradient(const NonlinearConstraint& c, std::span<const double> x,
                            const Eigen::VectorXd& ranges) {
  Gradient g;
  if (c.is_explicit()) {
    g.value = ExpressionGradient(*c.body, x);
    return g;
  }
  g.approximate = true;
  g.value = Eigen::VectorXd::Zero(static_cast<int>(x.size()));
  std::vector<double> y(x.begin(), x.end());
  for (int k : c.active_vars) {
    const double h = 1e-6 * ranges[k];
    y[k] = x[k] + h;
    const double up = c.Evaluate(y);
    y[k] = x[k] - h;
    const double down = c.Evaluate(y);
    y[k] = x[k];
    g.value[k] = (up - down) / (2 * h);
  }
  return g;
}

Eigen::VectorXd ObjectiveGradient(const Objective& objective, std::span<const double> x) {
  if (objective.nonlinear) return ExpressionGradient(*objective.nonlinear, x);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<int>(x.size()));
  for (const auto& [k, a] : objective.linear.coeffs) g[k] += a;
  return g;
}

LinearizedConstraint Linearize(const NonlinearConstraint& c, int index, double value,
                               const Eigen::VectorXd& gradient, double phi) {
  (void)phi;  // both infeasible branches carry lambda
  LinearizedConstraint l;
  l.index = index;
  l.equality = c.sense == ConstraintSense::kEqualZero;
  l.value = value;
  l.gradient = gradient;
  l.relaxed = l.equality || value < 0.0;
  return l;
}

namespace {

PgdStep SolveStepWith(const StandardFormProblem& problem, std::span<const double> x,
                      const Eigen::VectorXd& objective_gradient,
                      const std::vector<LinearizedConstraint>& rows,
                      const Eigen::VectorXd& ranges, PgdMode mode, int t,
                      const PgdParams& params, bool allow_relaxation) {
  const int n = problem.num_vars();
  int relaxed_ineq = 0, equalities = 0;
  for (const auto& r : rows) {
    if (r.equality) {
      ++equalities;
    } else if (r.relaxed) {
      ++relaxed_ineq;
    }
  }
  const int m = n + relaxed_ineq + equalities;
  QpInstance qp;
  qp.hessian = Eigen::MatrixXd::Zero(m, m);
  qp.linear = Eigen::VectorXd::Zero(m);
  LinearModel& lm = qp.constraints;
  for (int k = 0; k < n; ++k) {
    const auto& v = problem.variables[k];
    if (v.integral) {
      lm.AddColumn("d" + std::to_string(k), 0.0, 0.0);
    } else {
      lm.AddColumn("d" + std::to_string(k), v.lower - x[k], v.upper - x[k]);
    }
    qp.linear[k] = objective_gradient[k];
    if (mode != PgdMode::kDescent) qp.hessian(k, k) = 2 * params.beta / (ranges[k] * ranges[k]);
  }
  for (int j = n; j < m; ++j) {
    lm.AddColumn(j < n + relaxed_ineq ? "lambda" : "mu", 0.0, allow_relaxation ? kInf : 0.0);
    qp.hessian(j, j) = 2 * params.gamma;
  }
  auto grad_terms = [&](const Eigen::VectorXd& g) {
    std::vector<std::pair<int, double>> terms;
    for (int k = 0; k < n; ++k) {
      if (g[k] != 0.0) terms.emplace_back(k, g[k]);
    }
    return terms;
  };
  int next_lambda = n, next_mu = n + relaxed_ineq;
  for (const auto& r : rows) {
    auto terms = grad_terms(r.gradient);
    if (r.equality) {
      const int mu = next_mu++;
      auto lower = terms;
      lower.emplace_back(mu, 1.0);
      lm.AddRow("h_lo", std::move(lower), -r.value, kInf);  // grad.d + h + mu >= 0
      terms.emplace_back(mu, -1.0);
      lm.AddRow("h_up", std::move(terms), -kInf, -r.value);  // grad.d + h - mu <= 0
    } else {
      if (r.relaxed) terms.emplace_back(next_lambda++, 1.0);
      lm.AddRow("g", std::move(terms), -r.value, kInf);
    }
  }
  // Linear rows hold exactly at x + d.
  for (const auto& row : problem.inequalities) {
    lm.AddRow(row.name, row.terms, row.rhs - row.Activity(x), kInf);
  }
  for (const auto& row : problem.equalities) {
    const double rhs = row.rhs - row.Activity(x);
    lm.AddRow(row.name, row.terms, rhs, rhs);
  }
  if (mode == PgdMode::kDescent) {
    QpInstance::Ball ball;
    ball.weights = Eigen::VectorXd::Zero(m);
    for (int k = 0; k < n; ++k) ball.weights[k] = 1.0 / ranges[k];
    ball.radius_sq = params.alpha * std::exp(-params.r * t / params.max_iters);
    qp.ball = ball;
  }
  const QpResult res = SolveQp(qp);
  PgdStep step;
  step.status = res.status;
  step.message = res.message;
  if (res.x.empty()) return step;
  step.step = Eigen::Map<const Eigen::VectorXd>(res.x.data(), n);
  step.lambda.assign(res.x.begin() + n, res.x.begin() + n + relaxed_ineq);
  step.mu.assign(res.x.begin() + n + relaxed_ineq, res.x.end());
  step.relaxation_used = allow_relaxation;
  return step;
}

}  // namespace

PgdStep SolveStep(const StandardFormProblem& problem, std::span<const double> x,
                  const Eigen::VectorXd& objective_gradient,
                  const std::vector<LinearizedConstraint>& rows, const Eigen::VectorXd& ranges,
                  PgdMode mode, int t, const PgdParams& params) {
  if (params.hard_first) {
    PgdStep hard = SolveStepWith(problem, x, objective_gradient, rows, ranges, mode, t, params, false);
    if (hard.status == SolveStatus::kOptimal) return hard;
  }
  return SolveStepWith(problem, x, objective_gradient, rows, ranges, mode, t, params, true);
}

ViolationReport CheckSolution(const StandardFormProblem& problem, std::span<const double> x,
                              double tolerance) {
  ViolationReport r;
  double worst = 0.0;
  auto add = [&](const std::string& name, double value, bool equality, double violation) {
    r.names.push_back(name);
    r.values.push_back(value);
    r.equality.push_back(equality);
    if (violation > worst) {
      worst = violation;
      r.worst = static_cast<int>(r.names.size()) - 1;
    }
  };
  const Evaluation e = EvaluateAll(problem, x);
  for (size_t i = 0; i < problem.nonlinear.size(); ++i) {
    const bool eq = problem.nonlinear[i].sense == ConstraintSense::kEqualZero;
    const double v = e.values[i];
    add(problem.nonlinear[i].name, v, eq, e.domain_error[i] ? kDomainViolation : RowViolation(v, 0.0, eq));
  }
  for (const auto& row : problem.inequalities) {
    const double v = row.Activity(x) - row.rhs;
    add(row.name, v, false, RowViolation(v, 0.0, false));
  }
  for (const auto& row : problem.equalities) {
    const double v = row.Activity(x) - row.rhs;
    add(row.name, v, true, RowViolation(v, 0.0, true));
  }
  double bounds = 0.0;
  for (int k = 0; k < problem.num_vars(); ++k) {
    const auto& v = problem.variables[k];
    bounds = std::max({bounds, v.lower - x[k], x[k] - v.upper});
    if (v.integral) bounds = std::max(bounds, std::fabs(x[k] - std::round(x[k])));
  }
  r.max_violation = std::max(worst, bounds);
  r.feasible = r.max_violation <= tolerance;
  if (worst <= tolerance) r.worst = -1;
  return r;
}

RepairResult Repair(const StandardFormProblem& problem, std::span<const double> x0,
                    const PgdParams& params) {
  const int n = problem.num_vars();
  const Eigen::VectorXd ranges = VariableRanges(problem);
  RepairResult out;
  std::vector<double> x(x0.begin(), x0.end());
  // Snap integers and clip into the box.
  for (int k = 0; k < n; ++k) {
    const auto& v = problem.variables[k];
    if (v.integral) x[k] = std::round(x[k]) + 0.0;  // no negative zero
    x[k] = std::clamp(x[k], v.lower, v.upper);
  }

  std::vector<double> best_feasible, best_any;
  double best_feasible_f = kInf, best_any_violation = kInf, best_any_f = kInf;
  bool previous_feasible = false;
  double previous_f = 0.0;
  PgdMode previous_mode = PgdMode::kDescent;
  double previous_violation = kInf;

  for (int t = 0;; ++t) {
    const Evaluation e = EvaluateAll(problem, x);
    const ViolationReport report = CheckSolution(problem, x, params.phi);
    const double f = problem.objective.Evaluate(x);
    if (report.feasible && f < best_feasible_f) {
      best_feasible_f = f;
      best_feasible = x;
    }
    if (report.max_violation < best_any_violation ||
        (report.max_violation == best_any_violation && f < best_any_f)) {
      best_any_violation = report.max_violation;
      best_any_f = f;
      best_any = x;
    }
    out.iterations = t;
    if (t > 0 && report.feasible && previous_feasible && std::fabs(f - previous_f) < params.epsilon) {
      out.converged = true;
      break;
    }
    if (t >= params.max_iters) break;
    previous_feasible = report.feasible;
    previous_f = f;

    bool violated = false;
    for (size_t i = 0; i < problem.nonlinear.size(); ++i) {
      violated = violated || e.domain_error[i] || Violated(problem.nonlinear[i], e.values[i], params.phi);
    }
    // The objective term of a projection step moves along the surface; when
    // its curvature error keeps the violation above phi, project without it.
    PgdMode mode = violated ? PgdMode::kProject : PgdMode::kDescent;
    if (violated && previous_mode != PgdMode::kDescent &&
        report.max_violation > 0.5 * previous_violation) {
      mode = PgdMode::kRestore;
    }
    previous_mode = mode;
    previous_violation = report.max_violation;

    std::vector<LinearizedConstraint> rows;
    for (size_t i = 0; i < problem.nonlinear.size(); ++i) {
      if (e.domain_error[i]) continue;
      const auto& c = problem.nonlinear[i];
      Gradient g;
      try {
        g = ConstraintGradient(c, x, ranges);
      } catch (const DomainError&) {
        // Move inward by 1e-9 of the range and retry once.
        std::vector<double> y = x;
        for (int k : c.active_vars) {
          const auto& v = problem.variables[k];
          const double mid = std::isfinite(v.lower) && std::isfinite(v.upper) ? 0.5 * (v.lower + v.upper) : x[k];
          y[k] += 1e-9 * ranges[k] * (mid > x[k] ? 1 : mid < x[k] ? -1 : 0);
        }
        try {
          g = ConstraintGradient(c, y, ranges);
        } catch (const DomainError&) {
          out.warnings.push_back("iteration " + std::to_string(t) + ": no gradient for " + c.name);
          continue;
        }
      }
      rows.push_back(Linearize(c, static_cast<int>(i), e.values[i], g.value, params.phi));
    }
    Eigen::VectorXd grad_f;
    try {
      grad_f = ObjectiveGradient(problem.objective, x);
    } catch (const DomainError&) {
      out.warnings.push_back("iteration " + std::to_string(t) + ": no objective gradient");
      grad_f = Eigen::VectorXd::Zero(n);
    }
    if (mode == PgdMode::kRestore) grad_f = Eigen::VectorXd::Zero(n);
    const PgdStep step = SolveStep(problem, x, grad_f, rows, ranges, mode, t, params);
    if (step.step.size() == 0) {
      out.warnings.push_back("iteration " + std::to_string(t) + ": step subproblem " +
                             ToString(step.status) + " " + step.message);
      out.trace.push_back({t, mode, f, report.max_violation, 0.0});
      break;
    }
    if (step.status != SolveStatus::kOptimal) {
      out.warnings.push_back("iteration " + std::to_string(t) + ": step subproblem " +
                             ToString(step.status) + ", using its best iterate");
    }
    for (int k = 0; k < n; ++k) {
      const auto& v = problem.variables[k];
      x[k] = v.integral ? x[k] : std::clamp(x[k] + step.step[k], v.lower, v.upper);
    }
    out.trace.push_back({t, mode, f, report.max_violation, step.step.cwiseQuotient(ranges).norm()});
  }

  out.feasible = !best_feasible.empty();
  out.x = out.feasible ? best_feasible : best_any;
  out.objective = problem.objective.Evaluate(out.x);
  out.max_violation = CheckSolution(problem, out.x, params.phi).max_violation;
  return out;
}

void WriteTraceCsv(std::ostream& out, const std::vector<PgdTraceRow>& trace) {
  out << "iteration,mode,objective,max_violation,step_norm\n";
  out << std::setprecision(17);
  for (const auto& r : trace) {
    out << r.iteration << ',' << ToString(r.mode) << ',' << r.objective << ',' << r.max_violation
        << ',' << r.step_norm << '\n';
  }
}

}  // namespace treegopt
