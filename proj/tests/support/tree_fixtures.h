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

#ifndef TREEGOPT_TESTS_SUPPORT_TREE_FIXTURES_H_
#define TREEGOPT_TESTS_SUPPORT_TREE_FIXTURES_H_

#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "treegopt/tree.h"

namespace treegopt::fixtures {

inline TreeNode Split(std::vector<double> alpha, double beta) {
  TreeNode n;
  n.alpha = Eigen::Map<Eigen::VectorXd>(alpha.data(), static_cast<int>(alpha.size()));
  n.beta = beta;
  return n;
}

inline TreeNode Leaf(bool feasible) {
  TreeNode n;
  n.feasible = feasible;
  return n;
}

// The tree of the demo's first constraint over (x1, x2, x3), ids 1..7 in preorder.
inline HyperplaneTree DemoTree() {
  return HyperplaneTree::FromPreorder(
      TreeMode::kClassify, 3,
      {Split({1, 0, 0}, 1.542), Split({-0.6636, 0, 0.7467}, 0.03956),
       Split({-0.6657, 0.4771, 0.3709}, 0.1039), Leaf(true), Leaf(false), Leaf(false),
       Leaf(true)});
}

// The tree of the demo's second constraint over (x1, x2, x3, x6).
inline HyperplaneTree DemoTree2() {
  return HyperplaneTree::FromPreorder(
      TreeMode::kClassify, 4,
      {Split({-0.7025, 0.6884, 0.1103, 0.194}, 0.6397), Split({-0.0563, 0, 0, 0.6068}, 0.5222),
       Leaf(true), Split({0, 0, 1, 0}, 0.54), Leaf(true), Leaf(false), Leaf(false)});
}

// A random tree over [0,1]^p with splits through random interior points.
inline HyperplaneTree RandomTree(std::mt19937& rng, int p, int depth, TreeMode mode) {
  std::uniform_real_distribution<double> u(-1, 1), box(0, 1);
  std::bernoulli_distribution stop(0.25);
  std::vector<TreeNode> pre;
  std::function<void(int)> grow = [&](int d) {
    if (d == depth || (d > 0 && stop(rng))) {
      TreeNode leaf = Leaf(box(rng) < 0.5);
      leaf.weights = Eigen::VectorXd::NullaryExpr(p, [&]() { return u(rng); });
      leaf.intercept = u(rng);
      pre.push_back(leaf);
      return;
    }
    Eigen::VectorXd a = Eigen::VectorXd::NullaryExpr(p, [&]() { return u(rng); });
    a /= a.cwiseAbs().maxCoeff();
    Eigen::VectorXd c = Eigen::VectorXd::NullaryExpr(p, [&]() { return box(rng); });
    TreeNode s;
    s.alpha = a;
    s.beta = a.dot(c);
    pre.push_back(s);
    grow(d + 1);
    grow(d + 1);
  };
  grow(0);
  return HyperplaneTree::FromPreorder(mode, p, pre);
}

}  // namespace treegopt::fixtures

#endif  // TREEGOPT_TESTS_SUPPORT_TREE_FIXTURES_H_
