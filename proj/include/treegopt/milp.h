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

// Branch and bound for MILPs built by the encoder.
//
// Nodes share one dense simplex state and re-optimize with the dual simplex
// after their bound changes. Disjunction groups (binary columns with
// sum == 1) are branched first by splitting the ordered group where the
// relaxation's cumulative mass crosses one half; the remaining integer
// columns use most-fractional branching.

#ifndef TREEGOPT_MILP_H_
#define TREEGOPT_MILP_H_

#include "treegopt/model.h"
#include "treegopt/simplex.h"

namespace treegopt {

struct MilpOptions {
  int max_nodes = 200000;
  double time_limit_seconds = 120.0;
  double absolute_gap = 1e-6;
  double integrality_tol = 1e-6;
  LpOptions lp;
};

// status kOptimal: proven within the gap. kIterationLimit: budget exhausted;
// x holds the incumbent if one was found and `bound` the best open bound.
SolveResult SolveMilp(const MilpInstance& instance, const MilpOptions& options = {});

// Reference solver: every combination of one column per group set to 1 and
// every integer value of the remaining integer columns, each solved as an LP.
// Intended for small instances.
SolveResult SolveMilpByEnumeration(const MilpInstance& instance);

}  // namespace treegopt

#endif  // TREEGOPT_MILP_H_
