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

#include "treegopt/simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace treegopt {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-11;
constexpr double kRelativePivotTol = 1e-9;
constexpr double kDualPivotTol = 1e-9;

}  // namespace

DenseSimplex::DenseSimplex(const LinearModel& model, LpOptions options) : opt_(options) {
  n_ = model.num_cols();
  m_ = model.num_rows();
  const int total = n_ + m_;
  matrix_ = Eigen::MatrixXd::Zero(m_, total);
  for (int r = 0; r < m_; ++r) {
    for (const auto& [j, a] : model.rows[r].terms) matrix_(r, j) += a;
    matrix_(r, n_ + r) = -1.0;
  }
  cost_ = Eigen::VectorXd::Zero(total);
  lb_.resize(total);
  ub_.resize(total);
  for (int j = 0; j < n_; ++j) {
    cost_[j] = model.cost[j];
    lb_[j] = model.col_lower[j];
    ub_[j] = model.col_upper[j];
  }
  for (int r = 0; r < m_; ++r) {
    lb_[n_ + r] = model.rows[r].lower;
    ub_[n_ + r] = model.rows[r].upper;
  }
  offset_ = model.cost_offset;

  basis_.resize(m_);
  position_.assign(total, -1);
  for (int r = 0; r < m_; ++r) {
    basis_[r] = n_ + r;
    position_[n_ + r] = r;
  }
  tableau_ = -matrix_;
  x_ = Eigen::VectorXd::Zero(total);
  for (int j = 0; j < n_; ++j) PlaceNonbasic(j);
  for (int r = 0; r < m_; ++r) {
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += matrix_(r, j) * x_[j];
    x_[n_ + r] = s;
  }
  reduced_ = Eigen::VectorXd::Zero(total);
}

void DenseSimplex::PlaceNonbasic(int j) {
  if (std::isfinite(lb_[j])) {
    x_[j] = lb_[j];
  } else if (std::isfinite(ub_[j])) {
    x_[j] = ub_[j];
  } else {
    x_[j] = 0.0;
  }
}

void DenseSimplex::SetColumnBounds(int j, double lower, double upper) {
  const double old_lb = lb_[j];
  const double old_ub = ub_[j];
  lb_[j] = lower;
  ub_[j] = upper;
  if (position_[j] >= 0) return;
  const double old = x_[j];
  double next;
  if (old == old_ub && old != old_lb && std::isfinite(upper)) {
    next = upper;
  } else if (std::isfinite(lower)) {
    next = lower;
  } else if (std::isfinite(upper)) {
    next = upper;
  } else {
    next = 0.0;
  }
  const double delta = next - old;
  if (delta == 0.0) return;
  x_[j] = next;
  for (int r = 0; r < m_; ++r) x_[basis_[r]] -= tableau_(r, j) * delta;
}

double DenseSimplex::Infeasibility(int var) const {
  const double v = x_[var];
  const double tol_lo = opt_.feasibility_tol * std::max(1.0, std::fabs(lb_[var]));
  const double tol_hi = opt_.feasibility_tol * std::max(1.0, std::fabs(ub_[var]));
  if (v < lb_[var] - tol_lo) return lb_[var] - v;
  if (v > ub_[var] + tol_hi) return v - ub_[var];
  return 0.0;
}

bool DenseSimplex::PrimalFeasible() const {
  for (int r = 0; r < m_; ++r) {
    if (Infeasibility(basis_[r]) > 0.0) return false;
  }
  return true;
}

void DenseSimplex::ComputeReducedCosts(Phase phase) {
  Eigen::VectorXd cb(m_);
  for (int r = 0; r < m_; ++r) {
    const int b = basis_[r];
    if (phase == Phase::kTwo) {
      cb[r] = cost_[b];
    } else {
      const double v = x_[b];
      const double inf = Infeasibility(b);
      cb[r] = inf == 0.0 ? 0.0 : (v < lb_[b] ? -1.0 : 1.0);
    }
  }
  reduced_.noalias() = -tableau_.transpose() * cb;
  if (phase == Phase::kTwo) reduced_ += cost_;
  for (int r = 0; r < m_; ++r) reduced_[basis_[r]] = 0.0;
}

bool DenseSimplex::DualFeasible() const {
  const double tol = opt_.optimality_tol * 10;
  for (int j = 0; j < n_ + m_; ++j) {
    if (position_[j] >= 0 || lb_[j] == ub_[j]) continue;
    const double d = reduced_[j];
    const bool at_lb = std::isfinite(lb_[j]) && x_[j] == lb_[j];
    const bool at_ub = std::isfinite(ub_[j]) && x_[j] == ub_[j];
    if (at_lb && d < -tol) return false;
    if (at_ub && d > tol) return false;
    if (!at_lb && !at_ub && std::fabs(d) > tol) return false;
  }
  return true;
}

void DenseSimplex::Pivot(int row, int col) {
  const double piv = tableau_(row, col);
  tableau_.row(row) /= piv;
  Eigen::VectorXd column = tableau_.col(col);
  column[row] = 0.0;
  tableau_.noalias() -= column * tableau_.row(row);
  tableau_.col(col).setZero();
  tableau_(row, col) = 1.0;
  position_[basis_[row]] = -1;
  basis_[row] = col;
  position_[col] = row;
  ++iterations_;
  ++total_iterations_;
  if (++since_refactor_ >= opt_.refactor_interval) {
    since_refactor_ = 0;
    // Refactor only when the basic values have drifted from the system.
    Eigen::VectorXd residual = matrix_ * x_;
    if (residual.lpNorm<Eigen::Infinity>() > 1e-9 * std::max(1.0, x_.lpNorm<Eigen::Infinity>())) {
      Refactor();
    }
  }
}

void DenseSimplex::Refactor() {
  Eigen::MatrixXd b(m_, m_);
  for (int r = 0; r < m_; ++r) b.col(r) = matrix_.col(basis_[r]);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
  tableau_ = lu.solve(matrix_);
  for (int r = 0; r < m_; ++r) {
    tableau_.col(basis_[r]).setZero();
    tableau_(r, basis_[r]) = 1.0;
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
  for (int j = 0; j < n_ + m_; ++j) {
    if (position_[j] < 0 && x_[j] != 0.0) rhs += matrix_.col(j) * x_[j];
  }
  Eigen::VectorXd xb = -lu.solve(rhs);
  for (int r = 0; r < m_; ++r) x_[basis_[r]] = xb[r];
  since_refactor_ = 0;
}

DenseSimplex::Outcome DenseSimplex::RunPrimal() {
  int degenerate_run = 0;
  int stalls = 0;
  const int total = n_ + m_;
  while (true) {
    if (iterations_ >= opt_.max_iterations) return Outcome::kLimit;
    const Phase phase = PrimalFeasible() ? Phase::kTwo : Phase::kOne;
    ComputeReducedCosts(phase);
    const bool bland = degenerate_run > opt_.degenerate_limit;

    int enter = -1;
    double sigma = 0.0;
    double best = 0.0;
    for (int j = 0; j < total; ++j) {
      if (position_[j] >= 0 || lb_[j] == ub_[j]) continue;
      const double d = reduced_[j];
      const bool can_inc = x_[j] < ub_[j];
      const bool can_dec = x_[j] > lb_[j];
      double score = 0.0;
      double s = 0.0;
      if (d < -opt_.optimality_tol && can_inc) {
        score = -d;
        s = 1.0;
      } else if (d > opt_.optimality_tol && can_dec) {
        score = d;
        s = -1.0;
      } else {
        continue;
      }
      if (bland) {
        enter = j;
        sigma = s;
        break;
      }
      if (score > best) {
        best = score;
        enter = j;
        sigma = s;
      }
    }
    if (enter < 0) return phase == Phase::kOne ? Outcome::kInfeasible : Outcome::kOptimal;

    // Harris two-pass ratio test: bound the step with every limit relaxed
    // by the feasibility tolerance, then pivot on the largest element among
    // rows whose exact limit fits under that bound.
    const double flip = (std::isfinite(lb_[enter]) && std::isfinite(ub_[enter]))
                            ? ub_[enter] - lb_[enter]
                            : kInfinity;
    struct Candidate {
      int row;
      double alpha;
      double limit;
      double target;
    };
    std::vector<Candidate> candidates;
    double relaxed_min = kInfinity;
    // Entries this small next to the column's largest are round-off.
    const double pivot_tol =
        std::max(kPivotTol, kRelativePivotTol * tableau_.col(enter).lpNorm<Eigen::Infinity>());
    for (int r = 0; r < m_; ++r) {
      const double a = -sigma * tableau_(r, enter);
      if (std::fabs(a) < pivot_tol) continue;
      const int b = basis_[r];
      const double v = x_[b];
      const double lo = lb_[b];
      const double hi = ub_[b];
      double limit = kInfinity;
      double target = 0.0;
      const double inf = phase == Phase::kOne ? Infeasibility(b) : 0.0;
      if (inf > 0.0 && v < lo) {
        if (a > 0) {
          limit = (lo - v) / a;
          target = lo;
        }
      } else if (inf > 0.0 && v > hi) {
        if (a < 0) {
          limit = (v - hi) / -a;
          target = hi;
        }
      } else if (a < 0 && std::isfinite(lo)) {
        limit = std::max(0.0, v - lo) / -a;
        target = lo;
      } else if (a > 0 && std::isfinite(hi)) {
        limit = std::max(0.0, hi - v) / a;
        target = hi;
      }
      if (!std::isfinite(limit)) continue;
      const double slack = opt_.feasibility_tol * std::max(1.0, std::fabs(target));
      relaxed_min = std::min(relaxed_min, limit + slack / std::fabs(a));
      candidates.push_back({r, a, limit, target});
    }
    double theta = flip;
    int leave = -1;
    double leave_target = 0.0;
    if (!(flip <= relaxed_min)) {
      double best_alpha = 0.0;
      for (const Candidate& c : candidates) {
        if (c.limit > relaxed_min) continue;
        bool take = leave < 0;
        if (!take) {
          take = bland ? basis_[c.row] < basis_[leave] : std::fabs(c.alpha) > best_alpha;
        }
        if (take) {
          leave = c.row;
          best_alpha = std::fabs(c.alpha);
          theta = c.limit;
          leave_target = c.target;
        }
      }
    }
    if (!std::isfinite(theta)) {
      if (phase == Phase::kTwo) return Outcome::kUnbounded;
      // Phase one cannot be unbounded; the tableau has drifted.
      if (++stalls > 3) return Outcome::kInfeasible;
      Refactor();
      continue;
    }
    degenerate_run = theta <= 1e-12 ? degenerate_run + 1 : 0;
    if (bland) ++bland_pivots_;

    x_[enter] += sigma * theta;
    for (int r = 0; r < m_; ++r) x_[basis_[r]] += -sigma * tableau_(r, enter) * theta;
    if (leave < 0) {
      x_[enter] = sigma > 0 ? ub_[enter] : lb_[enter];
      ++iterations_;
      ++total_iterations_;
      continue;
    }
    x_[basis_[leave]] = leave_target;
    Pivot(leave, enter);
  }
}

DenseSimplex::Outcome DenseSimplex::RunDual() {
  ComputeReducedCosts(Phase::kTwo);
  const int total = n_ + m_;
  while (true) {
    if (iterations_ >= opt_.max_iterations) return Outcome::kLimit;
    int leave = -1;
    double worst = 0.0;
    for (int r = 0; r < m_; ++r) {
      const double inf = Infeasibility(basis_[r]);
      if (inf > worst) {
        worst = inf;
        leave = r;
      }
    }
    if (leave < 0) return Outcome::kOptimal;
    const int b = basis_[leave];
    const double dir = x_[b] < lb_[b] ? 1.0 : -1.0;
    const double target = dir > 0 ? lb_[b] : ub_[b];

    int enter = -1;
    double sigma = 0.0;
    double best_ratio = kInfinity;
    double best_pivot = 0.0;
    const double pivot_tol =
        std::max(kDualPivotTol, kRelativePivotTol * tableau_.row(leave).lpNorm<Eigen::Infinity>());
    for (int j = 0; j < total; ++j) {
      if (position_[j] >= 0 || lb_[j] == ub_[j]) continue;
      const double t = tableau_(leave, j);
      if (std::fabs(t) < pivot_tol) continue;
      const double s = (t * dir < 0) ? 1.0 : -1.0;
      if (s > 0 && !(x_[j] < ub_[j])) continue;
      if (s < 0 && !(x_[j] > lb_[j])) continue;
      const double ratio = std::fabs(reduced_[j]) / std::fabs(t);
      if (ratio < best_ratio - 1e-12 ||
          (ratio <= best_ratio + 1e-12 && std::fabs(t) > std::fabs(best_pivot))) {
        best_ratio = ratio;
        best_pivot = t;
        enter = j;
        sigma = s;
      }
    }
    if (enter < 0) return Outcome::kInfeasible;

    const double theta = std::fabs(target - x_[b]) / std::fabs(best_pivot);
    x_[enter] += sigma * theta;
    for (int r = 0; r < m_; ++r) x_[basis_[r]] += -sigma * tableau_(r, enter) * theta;
    x_[b] = target;
    const double dj = reduced_[enter];
    Pivot(leave, enter);
    reduced_.noalias() -= dj * tableau_.row(leave).transpose();
    for (int r = 0; r < m_; ++r) reduced_[basis_[r]] = 0.0;
  }
}

SolveResult DenseSimplex::Solve() {
  iterations_ = 0;
  Outcome outcome;
  bool warm = false;
  if (solved_once_) {
    ComputeReducedCosts(Phase::kTwo);
    warm = DualFeasible();
  }
  outcome = warm ? RunDual() : RunPrimal();
  if (warm && outcome == Outcome::kOptimal) {
    // The dual pass keeps only approximate dual feasibility; finish primal.
    outcome = RunPrimal();
  }
  for (int attempt = 0; outcome == Outcome::kOptimal && attempt < 3; ++attempt) {
    Eigen::VectorXd residual = matrix_ * x_;
    const double scale = std::max(1.0, x_.lpNorm<Eigen::Infinity>());
    if (residual.lpNorm<Eigen::Infinity>() <= 1e-9 * scale && PrimalFeasible()) break;
    Refactor();
    outcome = RunPrimal();
  }

  SolveResult result;
  result.iterations = iterations_;
  switch (outcome) {
    case Outcome::kOptimal:
      result.status = SolveStatus::kOptimal;
      break;
    case Outcome::kInfeasible:
      result.status = SolveStatus::kInfeasible;
      break;
    case Outcome::kUnbounded:
      result.status = SolveStatus::kUnbounded;
      break;
    case Outcome::kLimit:
      result.status = SolveStatus::kIterationLimit;
      break;
  }
  solved_once_ = outcome == Outcome::kOptimal;
  result.x.assign(x_.data(), x_.data() + n_);
  if (result.status == SolveStatus::kOptimal) {
    result.objective = offset_ + cost_.head(n_).dot(x_.head(n_));
    result.bound = result.objective;
  }
  return result;
}

SolveResult SolveLp(const LinearModel& model, const LpOptions& options) {
  DenseSimplex simplex(model, options);
  return simplex.Solve();
}

}  // namespace treegopt
