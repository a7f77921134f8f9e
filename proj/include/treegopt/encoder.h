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

// Disjunctive mixed-integer linear encodings of trained trees.
//
// A classifier's feasible region is the union of its feasible leaf
// polyhedra. The default encoding gives each leaf a copy y_l of the active
// variables and an indicator z_l, with y_l confined to z_l times the leaf
// polyhedron, sum_l y_l = x and sum_l z_l = 1; this extended form needs no
// big-M constants and its relaxation has integral z at every vertex. The
// big-M alternative relaxes each path row by M_h (1 - z_l).
//
// Regressors (objectives and separable constraints) use every leaf and add,
// per leaf, the tightest affine underestimator of the leaf samples as a
// lower bound on an auxiliary value column.

#ifndef TREEGOPT_ENCODER_H_
#define TREEGOPT_ENCODER_H_

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "treegopt/model.h"
#include "treegopt/problem.h"
#include "treegopt/sampler.h"
#include "treegopt/tree.h"

namespace treegopt {

enum class EncoderMode { kBigMFree, kBigM };

class EncodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A MILP piece over some original variables plus auxiliary columns. Column
// j is original variable `global[j]`, or auxiliary when global[j] == -1.
struct MilpFragment {
  enum class Kind { kInequality, kEquality, kObjective, kSeparable };

  Kind kind = Kind::kInequality;
  std::string source;
  LinearModel model;
  std::vector<int> global;
  std::vector<std::vector<int>> sos1_groups;
  std::vector<Provenance> provenance;  // one per column
  int value_column = -1;               // f* (objective) or g* (separable)
  // Disjunctive constraints counted with sum_l y_l = x as one constraint
  // and box rows on y_l excluded.
  int constraint_count = 0;

  int num_aux_continuous() const;
  int num_aux_binary() const;
  // Local column of original variable k, -1 if absent.
  int LocalColumn(int k) const;
  nlohmann::ordered_json ProvenanceJson() const;
};

// `vars` are the global indices of the tree's inputs, in order; `box` is
// their box.
MilpFragment EncodeInequality(const HyperplaneTree& tree, const Box& box,
                              const std::vector<int>& vars, EncoderMode mode,
                              const std::string& source = "g");

MilpFragment EncodeEquality(const HyperplaneTree& tree, const Box& box,
                            const std::vector<int>& vars, EncoderMode mode,
                            const std::string& source = "h");

// Tightest affine underestimator: minimizes sum_i (y_i - a.x_i - b) subject
// to a.x_i + b <= y_i. Rows of `points` are samples.
struct AffinePlane {
  Eigen::VectorXd weights;
  double intercept = 0.0;
};
AffinePlane FitLowerBoundingHyperplane(const Eigen::MatrixXd& points,
                                       const Eigen::VectorXd& targets);

// Value column bounds: sampled target range widened by 5% on each side.
MilpFragment EncodeObjective(const HyperplaneTree& tree, const Box& box,
                             const std::vector<int>& vars, EncoderMode mode,
                             const std::string& source = "f");

// a.x + b >= g(x) with g approximated from below by `tree` over `vars`.
// Affine variables outside `vars` enter as unbounded columns; assembly
// applies the problem bounds.
MilpFragment EncodeSeparable(const HyperplaneTree& tree, const Box& box,
                             const std::vector<int>& vars, const AffineForm& affine,
                             EncoderMode mode, const std::string& source = "s");

// Original linear rows, bounds and integrality plus every fragment. The
// objective is the fragment's value column when `objective` is given, else
// the problem's linear objective.
MilpInstance Assemble(const StandardFormProblem& problem,
                      const std::vector<MilpFragment>& fragments,
                      const MilpFragment* objective = nullptr,
                      const std::vector<std::string>& omitted = {});

enum class TreeRole { kObjective, kInequality, kEquality };

struct RoleTree {
  const HyperplaneTree* tree;
  TreeRole role;
};

struct AuxCounts {
  int binaries = 0;
  int continuous = 0;
  // Disjunctive constraints of the actual trees, same convention as
  // MilpFragment::constraint_count.
  int constraints = 0;
  // Worst case for full trees of each tree's depth.
  long worst_case_constraints = 0;
};

// Auxiliary variable and constraint counts of the encodings of `trees`; at
// most one objective tree.
AuxCounts CountAux(const std::vector<RoleTree>& trees);

}  // namespace treegopt

#endif  // TREEGOPT_ENCODER_H_
