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

// Dense bounded-variable simplex.
//
// Every row r gets a logical column s_r = a_r.x bounded by the row range, so
// the working system is [A  -I] (x, s) = 0 with all variables boxed. The
// first solve runs a composite primal phase 1 / phase 2 from the all-logical
// basis; after bound changes the solver re-optimizes with the dual simplex
// from the last optimal basis, which is what branch-and-bound relies on.
// Dantzig pricing falls back to Bland's rule after a run of degenerate
// pivots.

#ifndef TREEGOPT_SIMPLEX_H_
#define TREEGOPT_SIMPLEX_H_

#include <vector>

#include <Eigen/Dense>

#include "treegopt/model.h"

namespace treegopt {

struct LpOptions {
  int max_iterations = 100000;
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  int refactor_interval = 100;
  int degenerate_limit = 50;  // consecutive degenerate pivots before Bland
};

class DenseSimplex {
 public:
  explicit DenseSimplex(const LinearModel& model, LpOptions options = {});

  int num_cols() const { return n_; }
  int num_rows() const { return m_; }

  void SetColumnBounds(int j, double lower, double upper);
  double column_lower(int j) const { return lb_[j]; }
  double column_upper(int j) const { return ub_[j]; }

  SolveResult Solve();

  // Pivots performed since construction.
  int total_iterations() const { return total_iterations_; }
  // Number of pivots taken under Bland's rule.
  int bland_pivots() const { return bland_pivots_; }

 private:
  enum class Phase { kOne, kTwo };
  enum class Outcome { kOptimal, kInfeasible, kUnbounded, kLimit };

  Outcome RunPrimal();
  Outcome RunDual();
  bool DualFeasible() const;
  bool PrimalFeasible() const;
  void ComputeReducedCosts(Phase phase);
  void Pivot(int row, int col);
  void Refactor();
  void PlaceNonbasic(int j);
  double Infeasibility(int var) const;

  LpOptions opt_;
  int n_ = 0;  // structural columns
  int m_ = 0;  // rows
  Eigen::MatrixXd matrix_;   // [A  -I]
  Eigen::MatrixXd tableau_;  // B^-1 [A  -I]
  Eigen::VectorXd cost_;
  Eigen::VectorXd lb_, ub_;
  Eigen::VectorXd x_;
  Eigen::VectorXd reduced_;
  std::vector<int> basis_;     // basic variable per row
  std::vector<int> position_;  // row of a basic variable, -1 if nonbasic
  double offset_ = 0.0;
  bool solved_once_ = false;
  int since_refactor_ = 0;
  int iterations_ = 0;
  int total_iterations_ = 0;
  int bland_pivots_ = 0;
};

SolveResult SolveLp(const LinearModel& model, const LpOptions& options = {});

}  // namespace treegopt

#endif  // TREEGOPT_SIMPLEX_H_
