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

#include "treegopt/qp.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "treegopt/simplex.h"

namespace treegopt {
namespace {

// a.x >= b, or a.x == b.
struct Halfspace {
  Eigen::VectorXd a;
  double b = 0.0;
  bool equality = false;
};

std::vector<Halfspace> CollectHalfspaces(const LinearModel& m) {
  const int n = m.num_cols();
  std::vector<Halfspace> out;
  auto add = [&](const Eigen::VectorXd& a, double lo, double hi) {
    if (lo == hi) {
      out.push_back({a, lo, true});
      return;
    }
    if (std::isfinite(lo)) out.push_back({a, lo, false});
    if (std::isfinite(hi)) out.push_back({-a, -hi, false});
  };
  for (const auto& row : m.rows) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    for (const auto& [j, v] : row.terms) a[j] += v;
    add(a, row.lower, row.upper);
  }
  for (int j = 0; j < n; ++j) {
    add(Eigen::VectorXd::Unit(n, j), m.col_lower[j], m.col_upper[j]);
  }
  return out;
}

double Objective(const Eigen::MatrixXd& g, const Eigen::VectorXd& c, const Eigen::VectorXd& x) {
  return 0.5 * x.dot(g * x) + c.dot(x);
}

double ActivityTol(const Halfspace& h) { return 1e-9 * std::max(1.0, std::fabs(h.b)); }

// Primal active-set method from a feasible point.
class ActiveSetSolver {
 public:
  ActiveSetSolver(const std::vector<Halfspace>& cons, const QpOptions& opt)
      : cons_(cons), opt_(opt) {}

  SolveStatus Solve(const Eigen::MatrixXd& g, const Eigen::VectorXd& c, Eigen::VectorXd& x,
                    std::vector<double>* trace, int* iterations) {
    const int n = static_cast<int>(x.size());
    std::vector<int> working;
    // Equalities first, then active inequalities, kept linearly independent.
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < static_cast<int>(cons_.size()); ++i) {
        const Halfspace& h = cons_[i];
        if (h.equality != (pass == 0)) continue;
        if (std::fabs(h.a.dot(x) - h.b) > ActivityTol(h)) continue;
        working.push_back(i);
        if (Rank(working, n) < static_cast<int>(working.size())) working.pop_back();
      }
    }
    if (trace) trace->push_back(Objective(g, c, x));
    for (int iter = 0; iter < opt_.max_iterations; ++iter) {
      if (iterations) ++*iterations;
      const Eigen::VectorXd grad = g * x + c;
      const int k = static_cast<int>(working.size());
      Eigen::MatrixXd aw(n, k);
      for (int t = 0; t < k; ++t) aw.col(t) = cons_[working[t]].a;
      // Null-space step.
      Eigen::MatrixXd z;
      if (k == 0) {
        z = Eigen::MatrixXd::Identity(n, n);
      } else {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(aw);
        const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
        z = q.rightCols(n - k);
      }
      Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
      if (z.cols() > 0) {
        const Eigen::MatrixXd reduced = z.transpose() * g * z;
        const Eigen::VectorXd rhs = -z.transpose() * grad;
        p = z * reduced.ldlt().solve(rhs);
      }
      const double scale = std::max(1.0, x.lpNorm<Eigen::Infinity>());
      if (p.lpNorm<Eigen::Infinity>() <= opt_.tolerance * scale) {
        if (k == 0) return SolveStatus::kOptimal;
        const Eigen::VectorXd mu = aw.colPivHouseholderQr().solve(grad);
        int drop = -1;
        double worst = -opt_.tolerance * std::max(1.0, grad.lpNorm<Eigen::Infinity>());
        for (int t = 0; t < k; ++t) {
          if (cons_[working[t]].equality) continue;
          if (mu[t] < worst) {
            worst = mu[t];
            drop = t;
          }
        }
        if (drop < 0) return SolveStatus::kOptimal;
        working.erase(working.begin() + drop);
        continue;
      }
      double step = 1.0;
      int block = -1;
      const double pnorm = p.norm();
      for (int i = 0; i < static_cast<int>(cons_.size()); ++i) {
        const Halfspace& h = cons_[i];
        if (h.equality) continue;
        if (std::find(working.begin(), working.end(), i) != working.end()) continue;
        const double ap = h.a.dot(p);
        if (ap >= -1e-14 * h.a.norm() * pnorm) continue;
        const double t = std::max(0.0, (h.b - h.a.dot(x)) / ap);
        if (t < step) {
          step = t;
          block = i;
        }
      }
      x += step * p;
      if (block >= 0) working.push_back(block);
      if (trace) trace->push_back(Objective(g, c, x));
    }
    return SolveStatus::kIterationLimit;
  }

 private:
  int Rank(const std::vector<int>& rows, int n) const {
    Eigen::MatrixXd a(rows.size(), n);
    for (size_t t = 0; t < rows.size(); ++t) a.row(t) = cons_[rows[t]].a.transpose();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(1e-10);
    return static_cast<int>(qr.rank());
  }

  const std::vector<Halfspace>& cons_;
  const QpOptions& opt_;
};

}  // namespace

QpResult SolveQp(const QpInstance& qp, const QpOptions& options) {
  QpResult result;
  const int n = qp.constraints.num_cols();
  // Feasible starting vertex.
  LinearModel feas = qp.constraints;
  feas.cost.assign(n, 0.0);
  feas.cost_offset = 0.0;
  const SolveResult start = SolveLp(feas);
  if (start.status == SolveStatus::kInfeasible) {
    result.status = SolveStatus::kInfeasible;
    result.message = "constraints are infeasible";
    return result;
  }
  if (!start.ok()) {
    result.status = SolveStatus::kError;
    result.message = "no feasible starting point";
    return result;
  }
  const std::vector<Halfspace> cons = CollectHalfspaces(qp.constraints);
  ActiveSetSolver solver(cons, options);

  Eigen::MatrixXd g = qp.hessian;
  const double diag = g.diagonal().cwiseAbs().maxCoeff();
  g.diagonal().array() += options.regularization * std::max(1.0, diag);

  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(start.x.data(), n);
  auto solve_with = [&](double eta, Eigen::VectorXd& point, std::vector<double>* trace) {
    Eigen::MatrixXd ge = g;
    if (qp.ball && eta > 0) ge.diagonal() += 2.0 * eta * qp.ball->weights.cwiseAbs2();
    return solver.Solve(ge, qp.linear, point, trace, &result.iterations);
  };
  auto ball_value = [&](const Eigen::VectorXd& point) {
    return (qp.ball->weights.cwiseProduct(point)).squaredNorm();
  };

  std::vector<double> trace;
  SolveStatus status = solve_with(0.0, x, &trace);
  double eta = 0.0;
  if (qp.ball && ball_value(x) > qp.ball->radius_sq * (1 + 1e-12)) {
    const double rho = qp.ball->radius_sq;
    double lo = 0.0;
    double hi = 1.0;
    Eigen::VectorXd x_hi = x;
    int grow = 0;
    while (true) {
      x_hi = x;
      status = solve_with(hi, x_hi, nullptr);
      if (ball_value(x_hi) <= rho || ++grow > 200) break;
      lo = hi;
      hi *= 4.0;
    }
    if (ball_value(x_hi) > rho * (1 + 1e-9)) {
      result.status = SolveStatus::kInfeasible;
      result.message = "ball row cannot be met with the linear rows";
      return result;
    }
    for (int it = 0; it < options.max_bisections; ++it) {
      if (hi - lo <= 1e-14 * hi) break;
      if (ball_value(x_hi) >= rho * (1 - 1e-12)) break;
      const double mid = 0.5 * (lo + hi);
      Eigen::VectorXd x_mid = x_hi;
      const SolveStatus s = solve_with(mid, x_mid, nullptr);
      if (ball_value(x_mid) > rho) {
        lo = mid;
      } else {
        hi = mid;
        x_hi = x_mid;
        status = s;
      }
    }
    // Rerun the final solve from the feasible start to record its trace.
    trace.clear();
    Eigen::VectorXd x_final = Eigen::Map<const Eigen::VectorXd>(start.x.data(), n);
    status = solve_with(hi, x_final, &trace);
    x = ball_value(x_final) <= rho * (1 + 1e-12) ? x_final : x_hi;
    eta = hi;
  }
  result.status = status;
  result.x.assign(x.data(), x.data() + n);
  result.objective = 0.5 * x.dot(qp.hessian * x) + qp.linear.dot(x) + qp.offset;
  result.bound = result.objective;
  result.trace = std::move(trace);
  result.ball_multiplier = eta;
  return result;
}

}  // namespace treegopt
