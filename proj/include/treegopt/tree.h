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

// Decision trees with hyperplane splits: classifiers of constraint
// feasibility and regressors with linear leaf models.
//
// Training is greedy top-down oblique induction. Each node scores axis
// splits, a linear-discriminant direction, a logistic direction and several
// randomized discriminant fits with an exhaustive threshold sweep, then the
// grown tree is pruned bottom-up under loss + complexity * splits. The best
// of several restarts is kept.

#ifndef TREEGOPT_TREE_H_
#define TREEGOPT_TREE_H_

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace treegopt {

enum class TreeMode { kClassify, kRegress };

struct TreeParams {
  int max_depth = 5;
  double complexity = 1e-6;
  double minbucket = 0.01;  // fraction of training samples per leaf
  int tree_restarts = 10;
  int hyperplane_restarts = 5;
  TreeMode mode = TreeMode::kClassify;

  static TreeParams Classifier() { return {}; }
  static TreeParams Regressor() {
    TreeParams p;
    p.minbucket = 0.02;
    p.mode = TreeMode::kRegress;
    return p;
  }
};

struct TreeNode {
  // Internal nodes: go left when alpha.x <= beta.
  int left = -1;
  int right = -1;
  Eigen::VectorXd alpha;
  double beta = 0.0;
  // Leaves.
  bool feasible = false;
  Eigen::VectorXd weights;  // regression payload
  double intercept = 0.0;
  int count = 0;  // training points routed here
  int depth = 0;

  bool is_leaf() const { return left < 0; }
};

struct LeafPolyhedron {
  int leaf = -1;           // node index
  std::vector<int> minus;  // splits taken leftward: alpha.x <= beta
  std::vector<int> plus;   // splits taken rightward: alpha.x >= beta
};

class TreeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Nodes are stored in preorder; the 1-based node id of node i is i + 1.
class HyperplaneTree {
 public:
  TreeMode mode = TreeMode::kClassify;
  int dim = 0;
  std::vector<TreeNode> nodes;
  // Training points and targets per node index (leaves only); kept for the
  // encoder, not serialized.
  std::vector<Eigen::MatrixXd> leaf_points;
  std::vector<Eigen::VectorXd> leaf_targets;

  // Index of the leaf reached by x (ties go left).
  int Route(const Eigen::VectorXd& x) const;
  bool Classify(const Eigen::VectorXd& x) const;
  double Regress(const Eigen::VectorXd& x) const;

  std::vector<int> Leaves() const;
  std::vector<int> FeasibleLeaves() const;
  std::vector<int> InfeasibleLeaves() const;
  int num_splits() const;
  int Depth() const;  // longest root-to-leaf path, in splits
  std::vector<LeafPolyhedron> LeafPolyhedra() const;

  nlohmann::ordered_json ToJson() const;
  static HyperplaneTree FromJson(const nlohmann::json& j);

  // Builds a tree from preorder nodes: each internal node is followed by its
  // left subtree, then its right subtree. Child links and depths are filled
  // in.
  static HyperplaneTree FromPreorder(TreeMode mode, int dim, std::vector<TreeNode> preorder);
};

// Throws TreeError when the labels are single-class.
HyperplaneTree TrainClassifier(const Eigen::MatrixXd& points, const std::vector<bool>& labels,
                               const TreeParams& params, uint64_t seed);

// Constant targets give a single leaf.
HyperplaneTree TrainRegressor(const Eigen::MatrixXd& points, const Eigen::VectorXd& targets,
                              const TreeParams& params, uint64_t seed);

// Fraction of samples whose predicted class differs from the label.
double MisclassificationError(const HyperplaneTree& tree, const Eigen::MatrixXd& points,
                              const std::vector<bool>& labels);

// Sum of squared residuals over the total sum of squares about the mean.
// With constant targets: 0 if the residuals vanish, else 1.
double OneMinusR2(const HyperplaneTree& tree, const Eigen::MatrixXd& points,
                  const Eigen::VectorXd& targets);

}  // namespace treegopt

#endif  // TREEGOPT_TREE_H_
