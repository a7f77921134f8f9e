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

// Convex quadratic programs
//
//   min 1/2 x'Gx + c'x  s.t.  row.lower <= a_r.x <= row.upper,
//                             lb <= x <= ub,  optionally ||W x||^2 <= rho,
//
// with G positive semidefinite and W diagonal. The polyhedral part is solved
// by a primal active-set method started from a simplex vertex, so the
// objective is non-increasing along the iterates. A PSD G is regularized by
// a tiny multiple of the identity. The ball row is handled exactly through
// its multiplier: the solver bisects on eta >= 0 in G + 2 eta W'W until the
// ball is satisfied with complementarity.

#ifndef TREEGOPT_QP_H_
#define TREEGOPT_QP_H_

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "treegopt/model.h"

namespace treegopt {

struct QpInstance {
  Eigen::MatrixXd hessian;  // G
  Eigen::VectorXd linear;   // c
  double offset = 0.0;
  // Column bounds and rows; the cost fields are ignored.
  LinearModel constraints;
  struct Ball {
    Eigen::VectorXd weights;  // diagonal of W
    double radius_sq = 0.0;   // rho
  };
  std::optional<Ball> ball;
};

struct QpOptions {
  int max_iterations = 2000;      // active-set iterations per polyhedral solve
  double tolerance = 1e-10;       // stationarity and activity tolerance
  double regularization = 1e-10;  // relative to max |G_ii|, at least absolute
  int max_bisections = 200;
};

struct QpResult : SolveResult {
  // Objective after each active-set iteration of the final polyhedral solve.
  std::vector<double> trace;
  double ball_multiplier = 0.0;  // eta
};

QpResult SolveQp(const QpInstance& qp, const QpOptions& options = {});

}  // namespace treegopt

#endif  // TREEGOPT_QP_H_
