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

#include "treegopt/encoder.h"

#include <cmath>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "support/tree_fixtures.h"
#include "support/vertex_enum.h"
#include "treegopt/milp.h"
#include "treegopt/problem_io.h"
#include "treegopt/simplex.h"

namespace treegopt {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using fixtures::DemoTree;
using fixtures::DemoTree2;
using fixtures::Leaf;
using fixtures::RandomTree;
using fixtures::Split;

Box UnitBox(int p, double lower = 0.0, double upper = 1.0) {
  Box b;
  b.lower.assign(p, lower);
  b.upper.assign(p, upper);
  return b;
}

std::vector<int> Iota(int p) {
  std::vector<int> v(p);
  for (int k = 0; k < p; ++k) v[k] = k;
  return v;
}

MilpInstance AsInstance(const MilpFragment& f) {
  MilpInstance inst;
  inst.model = f.model;
  inst.sos1_groups = f.sos1_groups;
  inst.provenance = f.provenance;
  return inst;
}

// Is the fragment satisfiable with its original columns fixed at x?
bool FeasibleAt(const MilpFragment& f, const VectorXd& x) {
  MilpInstance inst = AsInstance(f);
  for (int j = 0; j < inst.model.num_cols(); ++j) {
    if (f.global[j] >= 0) inst.model.col_lower[j] = inst.model.col_upper[j] = x[f.global[j]];
  }
  const SolveResult r = SolveMilp(inst);
  EXPECT_TRUE(r.status == SolveStatus::kOptimal || r.status == SolveStatus::kInfeasible)
      << ToString(r.status);
  return r.ok();
}

// Smallest |alpha.x - beta| over all splits of the tree.
double PlaneDistance(const HyperplaneTree& t, const VectorXd& x) {
  double d = INFINITY;
  for (const auto& n : t.nodes) {
    if (!n.is_leaf()) d = std::min(d, std::fabs(n.alpha.dot(x) - n.beta));
  }
  return d;
}

TEST(EncoderTest, DemoTreeCounts) {
  const MilpFragment f = EncodeInequality(DemoTree(), UnitBox(3, 0, 2), Iota(3), EncoderMode::kBigMFree);
  EXPECT_EQ(f.num_aux_continuous(), 6);
  EXPECT_EQ(f.num_aux_binary(), 2);
  EXPECT_EQ(f.constraint_count, 6);
  ASSERT_EQ(f.sos1_groups.size(), 1u);
  EXPECT_EQ(f.sos1_groups[0].size(), 2u);
}

TEST(EncoderTest, DemoTree2Counts) {
  const MilpFragment f =
      EncodeInequality(DemoTree2(), UnitBox(4, 0, 2), {0, 1, 2, 5}, EncoderMode::kBigMFree);
  EXPECT_EQ(f.num_aux_continuous(), 8);
  EXPECT_EQ(f.num_aux_binary(), 2);
  EXPECT_EQ(f.constraint_count, 7);
  EXPECT_EQ(f.LocalColumn(5), 3);
}

TEST(EncoderTest, ProvenanceNamesLeaves) {
  const MilpFragment f = EncodeInequality(DemoTree(), UnitBox(3, 0, 2), Iota(3), EncoderMode::kBigMFree, "g1");
  std::vector<int> leaves;
  for (size_t j = 0; j < f.provenance.size(); ++j) {
    const auto& p = f.provenance[j];
    EXPECT_EQ(p.source, "g1");
    if (p.kind == Provenance::Kind::kLeafIndicator) leaves.push_back(p.leaf);
  }
  EXPECT_EQ(leaves, (std::vector<int>{4, 7}));
  const auto j = f.ProvenanceJson();
  EXPECT_EQ(j["columns"].size(), f.provenance.size());
}

TEST(EncoderTest, SingleFeasibleLeafIsItsPolyhedron) {
  const HyperplaneTree t = HyperplaneTree::FromPreorder(
      TreeMode::kClassify, 2, {Split({1.0, -1.0}, 0.2), Leaf(true), Leaf(false)});
  for (EncoderMode mode : {EncoderMode::kBigMFree, EncoderMode::kBigM}) {
    const MilpFragment f = EncodeInequality(t, UnitBox(2), Iota(2), mode);
    EXPECT_EQ(f.num_aux_binary(), 1);
    // The relaxation already pins z = 1, so its LP maximum of x1 - x2 is 0.2.
    LinearModel lp = f.model;
    lp.cost.assign(lp.num_cols(), 0.0);
    lp.cost[f.LocalColumn(0)] = -1.0;
    lp.cost[f.LocalColumn(1)] = 1.0;
    const SolveResult r = SolveLp(lp);
    ASSERT_TRUE(r.ok());
    EXPECT_NEAR(-r.objective, 0.2, 1e-9);
  }
  const MilpFragment free = EncodeInequality(t, UnitBox(2), Iota(2), EncoderMode::kBigMFree);
  EXPECT_EQ(free.constraint_count, 1 + 2);
}

TEST(EncoderTest, InequalityWithoutFeasibleLeafThrows) {
  const HyperplaneTree t = HyperplaneTree::FromPreorder(TreeMode::kClassify, 1, {Leaf(false)});
  EXPECT_THROW(EncodeInequality(t, UnitBox(1), {0}, EncoderMode::kBigMFree), EncodeError);
}

// Both encodings admit exactly the points the tree labels feasible.
TEST(EncoderTest, BigMAndBigMFreeAgreeWithTree) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> pick_p(1, 4), pick_d(1, 3);
  std::uniform_real_distribution<double> u(0, 1);
  int trees = 0, checked = 0;
  while (trees < 50) {
    const int p = pick_p(rng);
    const HyperplaneTree t = RandomTree(rng, p, pick_d(rng), TreeMode::kClassify);
    if (t.FeasibleLeaves().empty()) continue;
    ++trees;
    const Box box = UnitBox(p);
    const MilpFragment free = EncodeInequality(t, box, Iota(p), EncoderMode::kBigMFree);
    const MilpFragment bigm = EncodeInequality(t, box, Iota(p), EncoderMode::kBigM);
    for (int i = 0; i < 200; ++i) {
      const VectorXd x = VectorXd::NullaryExpr(p, [&]() { return u(rng); });
      if (PlaneDistance(t, x) < 1e-6) continue;
      const bool expected = t.Classify(x);
      ASSERT_EQ(FeasibleAt(free, x), expected) << "tree " << trees << " point " << i;
      ASSERT_EQ(FeasibleAt(bigm, x), expected) << "tree " << trees << " point " << i;
      ++checked;
    }
  }
  EXPECT_GE(checked, 9900);
}

TEST(EncoderTest, EqualityHoldsOnlyOnTheBoundary) {
  const HyperplaneTree t = HyperplaneTree::FromPreorder(
      TreeMode::kClassify, 2, {Split({1.0, -1.0}, 0.2), Leaf(true), Leaf(false)});
  for (EncoderMode mode : {EncoderMode::kBigMFree, EncoderMode::kBigM}) {
    const MilpFragment f = EncodeEquality(t, UnitBox(2), Iota(2), mode);
    EXPECT_EQ(f.sos1_groups.size(), 2u);
    EXPECT_TRUE(FeasibleAt(f, (VectorXd(2) << 0.6, 0.4).finished()));
    EXPECT_FALSE(FeasibleAt(f, (VectorXd(2) << 0.1, 0.5).finished()));
    EXPECT_FALSE(FeasibleAt(f, (VectorXd(2) << 0.9, 0.1).finished()));
  }
  const MilpFragment f = EncodeEquality(t, UnitBox(2), Iota(2), EncoderMode::kBigMFree);
  EXPECT_EQ(f.constraint_count, 2 + 4);
  EXPECT_EQ(f.num_aux_binary(), 2);
  EXPECT_EQ(f.num_aux_continuous(), 4);
}

TEST(EncoderTest, EqualityNeedsBothClasses) {
  const HyperplaneTree t = HyperplaneTree::FromPreorder(
      TreeMode::kClassify, 1, {Split({1.0}, 0.5), Leaf(true), Leaf(true)});
  EXPECT_THROW(EncodeEquality(t, UnitBox(1), {0}, EncoderMode::kBigMFree), EncodeError);
}

// Equality on random trees: feasible exactly where the point sits on a
// split separating a feasible from an infeasible leaf; interior points fail.
TEST(EncoderTest, EqualityRejectsInteriorPoints) {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> u(0, 1);
  int trees = 0;
  while (trees < 20) {
    const HyperplaneTree t = RandomTree(rng, 2, 2, TreeMode::kClassify);
    if (t.FeasibleLeaves().empty() || t.InfeasibleLeaves().empty()) continue;
    ++trees;
    const MilpFragment f = EncodeEquality(t, UnitBox(2), Iota(2), EncoderMode::kBigMFree);
    for (int i = 0; i < 20; ++i) {
      const VectorXd x = VectorXd::NullaryExpr(2, [&]() { return u(rng); });
      if (PlaneDistance(t, x) < 1e-6) continue;
      EXPECT_FALSE(FeasibleAt(f, x));
    }
  }
}

TEST(EncoderTest, LowerPlaneOfAffineData) {
  const MatrixXd x = (MatrixXd(3, 1) << 0.0, 1.0, 0.5).finished();
  const AffinePlane a = FitLowerBoundingHyperplane(x, (VectorXd(3) << 0.0, 2.0, 1.0).finished());
  EXPECT_NEAR(a.weights[0], 2.0, 1e-9);
  EXPECT_NEAR(a.intercept, 0.0, 1e-9);
}

TEST(EncoderTest, LowerPlaneUnderAPeak) {
  const MatrixXd x = (MatrixXd(3, 1) << 0.0, 1.0, 0.5).finished();
  const AffinePlane a = FitLowerBoundingHyperplane(x, (VectorXd(3) << 0.0, 0.0, 1.0).finished());
  EXPECT_NEAR(a.weights[0], 0.0, 1e-9);
  EXPECT_NEAR(a.intercept, 0.0, 1e-9);
}

TEST(EncoderTest, LowerPlaneOfOnePoint) {
  const MatrixXd x = (MatrixXd(1, 2) << 0.3, 0.7).finished();
  const AffinePlane a = FitLowerBoundingHyperplane(x, (VectorXd(1) << 4.5).finished());
  EXPECT_EQ(a.weights, VectorXd::Zero(2));
  EXPECT_EQ(a.intercept, 4.5);
}

TEST(EncoderTest, LowerPlaneNeverExceedsSamples) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 5 + trial, p = 1 + trial % 3;
    MatrixXd x(m, p);
    VectorXd y(m);
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < p; ++k) x(i, k) = u(rng);
      y[i] = x.row(i).squaredNorm() + std::sin(3 * x(i, 0));
    }
    const AffinePlane a = FitLowerBoundingHyperplane(x, y);
    for (int i = 0; i < m; ++i) EXPECT_LE(x.row(i).dot(a.weights) + a.intercept, y[i]);
  }
}

// |x - 0.5| sampled at five points, one leaf per side.
HyperplaneTree VTree() {
  TreeNode left = Leaf(true), right = Leaf(true);
  left.weights = VectorXd::Constant(1, -1.0);
  left.intercept = 0.5;
  right.weights = VectorXd::Constant(1, 1.0);
  right.intercept = -0.5;
  HyperplaneTree t = HyperplaneTree::FromPreorder(TreeMode::kRegress, 1, {Split({1.0}, 0.5), left, right});
  t.leaf_points[1] = (MatrixXd(3, 1) << 0.0, 0.25, 0.5).finished();
  t.leaf_targets[1] = (VectorXd(3) << 0.5, 0.25, 0.0).finished();
  t.leaf_points[2] = (MatrixXd(3, 1) << 0.5, 0.75, 1.0).finished();
  t.leaf_targets[2] = (VectorXd(3) << 0.0, 0.25, 0.5).finished();
  return t;
}

TEST(EncoderTest, ObjectiveOfTwoLeaves) {
  const HyperplaneTree t = VTree();
  for (EncoderMode mode : {EncoderMode::kBigMFree, EncoderMode::kBigM}) {
    const MilpFragment f = EncodeObjective(t, UnitBox(1), {0}, mode);
    ASSERT_GE(f.value_column, 0);
    MilpInstance inst = AsInstance(f);
    inst.model.cost[f.value_column] = 1.0;
    SolveResult r = SolveMilp(inst);
    ASSERT_TRUE(r.ok());
    EXPECT_NEAR(r.objective, 0.0, 1e-9);
    EXPECT_NEAR(r.x[f.LocalColumn(0)], 0.5, 1e-9);
    inst.model.col_lower[f.LocalColumn(0)] = inst.model.col_upper[f.LocalColumn(0)] = 0.2;
    r = SolveMilp(inst);
    ASSERT_TRUE(r.ok());
    EXPECT_NEAR(r.objective, 0.3, 1e-9);
  }
  const MilpFragment f = EncodeObjective(t, UnitBox(1), {0}, EncoderMode::kBigMFree);
  EXPECT_EQ(f.num_aux_binary(), 2);
  EXPECT_EQ(f.num_aux_continuous(), 1 + 2 * (1 + 1));
  EXPECT_EQ(f.constraint_count, 2 * (1 + 1) + 3);
  // Value bounds are the sampled range widened by 5%.
  EXPECT_NEAR(f.model.col_lower[f.value_column], -0.025, 1e-12);
  EXPECT_NEAR(f.model.col_upper[f.value_column], 0.525, 1e-12);
}

TEST(EncoderTest, SeparableAddsAffineRow) {
  // x0 - 0.1 >= |x1 - 0.5| on [0,1]^2.
  HyperplaneTree t = VTree();
  AffineForm affine;
  affine.coeffs = {{0, 1.0}};
  affine.constant = -0.1;
  for (EncoderMode mode : {EncoderMode::kBigMFree, EncoderMode::kBigM}) {
    const MilpFragment f = EncodeSeparable(t, UnitBox(1), {1}, affine, mode, "s1");
    EXPECT_GE(f.LocalColumn(0), 0);
    EXPECT_TRUE(FeasibleAt(f, (VectorXd(2) << 0.2, 0.45).finished()));
    EXPECT_TRUE(FeasibleAt(f, (VectorXd(2) << 0.6, 1.0).finished()));
    EXPECT_FALSE(FeasibleAt(f, (VectorXd(2) << 0.2, 0.9).finished()));
  }
}

TEST(EncoderTest, AssembleDemo) {
  const LoadedProblem lp = LoadProblem(std::string(TREEGOPT_SOURCE_DIR) + "/data/demo.json");
  const StandardFormProblem p = Standardize(lp.problem);
  ASSERT_EQ(p.nonlinear.size(), 2u);
  const auto& g1 = p.nonlinear[0];
  const auto& g2 = p.nonlinear[1];
  EXPECT_EQ(g2.active_vars, (std::vector<int>{0, 1, 2, 5}));
  std::vector<MilpFragment> fragments = {
      EncodeInequality(DemoTree(), ActiveBox(p, g1.active_vars), g1.active_vars,
                       EncoderMode::kBigMFree, "g1"),
      EncodeInequality(DemoTree2(), ActiveBox(p, g2.active_vars), g2.active_vars,
                       EncoderMode::kBigMFree, "g2")};
  const MilpInstance inst = Assemble(p, fragments);
  int integers = 0;
  for (bool b : inst.model.integer) integers += b;
  EXPECT_EQ(integers, 3 + 2 + 2);
  EXPECT_EQ(inst.num_original, 6);
  EXPECT_EQ(inst.model.num_cols(), 6 + 8 + 10);
  EXPECT_EQ(inst.sos1_groups.size(), 2u);
  EXPECT_EQ(inst.provenance.size(), static_cast<size_t>(inst.model.num_cols()));
  EXPECT_EQ(inst.model.cost[0], 10.0);
  const SolveResult r = SolveMilp(inst);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.status, SolveStatus::kOptimal);
  const SolveResult e = SolveMilpByEnumeration(inst);
  ASSERT_TRUE(e.ok());
  EXPECT_NEAR(r.objective, e.objective, 1e-6);
}

// Walks the tree itself rather than using LeafPolyhedra.
struct LeafWalk {
  int leaves = 0, feasible = 0, path_all = 0, path_feasible = 0, depth = 0;
};

LeafWalk Walk(const HyperplaneTree& t) {
  LeafWalk w;
  std::function<void(int, int)> go = [&](int v, int d) {
    const TreeNode& n = t.nodes[v];
    if (n.left < 0) {
      ++w.leaves;
      w.path_all += d;
      w.depth = std::max(w.depth, d);
      if (n.feasible) {
        ++w.feasible;
        w.path_feasible += d;
      }
      return;
    }
    go(n.left, d + 1);
    go(n.right, d + 1);
  };
  go(0, 0);
  return w;
}

TEST(EncoderTest, CountAuxMatchesEncodedFragments) {
  std::mt19937 rng(21);
  std::uniform_int_distribution<int> pick_p(1, 4), pick_d(1, 4), pick_i(0, 3), pick_j(0, 2);
  std::bernoulli_distribution has_objective(0.6);
  for (int set = 0; set < 100; ++set) {
    std::vector<HyperplaneTree> trees;
    std::vector<TreeRole> roles;
    auto draw = [&](TreeMode mode, TreeRole role) {
      while (true) {
        HyperplaneTree t = RandomTree(rng, pick_p(rng), pick_d(rng), mode);
        if (role == TreeRole::kInequality && t.FeasibleLeaves().empty()) continue;
        if (role == TreeRole::kEquality &&
            (t.FeasibleLeaves().empty() || t.InfeasibleLeaves().empty())) {
          continue;
        }
        trees.push_back(std::move(t));
        roles.push_back(role);
        return;
      }
    };
    const bool objective = has_objective(rng);
    if (objective) draw(TreeMode::kRegress, TreeRole::kObjective);
    for (int i = pick_i(rng); i > 0; --i) draw(TreeMode::kClassify, TreeRole::kInequality);
    for (int j = pick_j(rng); j > 0; --j) draw(TreeMode::kClassify, TreeRole::kEquality);

    std::vector<RoleTree> rt;
    long binaries = 0, continuous = objective ? 0 : 1, constraints = 0, worst = 0;
    long formula_bin = 0, formula_cont = 1, formula_cons = 0;
    for (size_t k = 0; k < trees.size(); ++k) {
      const HyperplaneTree& t = trees[k];
      rt.push_back({&t, roles[k]});
      const int p = t.dim;
      const Box box = UnitBox(p);
      MilpFragment f;
      const LeafWalk w = Walk(t);
      const long full = 1L << w.depth;
      switch (roles[k]) {
        case TreeRole::kObjective:
          f = EncodeObjective(t, box, Iota(p), EncoderMode::kBigMFree);
          formula_bin += w.leaves;
          formula_cont += w.leaves * (p + 1);
          formula_cons += w.path_all + w.leaves + 3;
          worst += full * (w.depth + 1) + 3;
          break;
        case TreeRole::kInequality:
          f = EncodeInequality(t, box, Iota(p), EncoderMode::kBigMFree);
          formula_bin += w.feasible;
          formula_cont += w.feasible * p;
          formula_cons += w.path_feasible + 2;
          worst += (full - 1) * w.depth + 2;
          break;
        case TreeRole::kEquality:
          f = EncodeEquality(t, box, Iota(p), EncoderMode::kBigMFree);
          formula_bin += w.leaves;
          formula_cont += w.leaves * p;
          formula_cons += w.path_all + 4;
          worst += (full - 1) * w.depth + 4;
          break;
      }
      binaries += f.num_aux_binary();
      continuous += f.num_aux_continuous();
      constraints += f.constraint_count;
    }
    const AuxCounts c = CountAux(rt);
    EXPECT_EQ(c.binaries, binaries) << "set " << set;
    EXPECT_EQ(c.continuous, continuous) << "set " << set;
    EXPECT_EQ(c.constraints, constraints) << "set " << set;
    EXPECT_EQ(c.binaries, formula_bin);
    EXPECT_EQ(c.continuous, formula_cont);
    EXPECT_EQ(c.constraints, formula_cons);
    EXPECT_EQ(c.worst_case_constraints, worst);
  }
}

TEST(EncoderTest, CountAuxOfNothing) {
  const AuxCounts c = CountAux({});
  EXPECT_EQ(c.binaries, 0);
  EXPECT_EQ(c.continuous, 1);
  EXPECT_EQ(c.constraints, 0);
}

TEST(VertexEnumTest, UnitSquareAndSimplex) {
  LinearModel sq;
  sq.AddColumn("a", 0, 1);
  sq.AddColumn("b", 0, 1);
  auto v = testing::EnumerateVertices(sq);
  EXPECT_EQ(v.vertices.size(), 4u);
  EXPECT_EQ(v.recession_rays, 0);
  // x + y + z = 1, x, y, z >= 0 in R^3.
  LinearModel tri;
  for (const char* n : {"x", "y", "z"}) tri.AddColumn(n, 0, INFINITY);
  tri.AddRow("sum", {{0, 1}, {1, 1}, {2, 1}}, 1, 1);
  v = testing::EnumerateVertices(tri);
  ASSERT_EQ(v.vertices.size(), 3u);
  for (const auto& x : v.vertices) {
    EXPECT_EQ(x[0] + x[1] + x[2], 1);
    EXPECT_TRUE(x[0] == 1 || x[1] == 1 || x[2] == 1);
  }
  // A fractional vertex: 2x + 2y <= 3 in the unit square.
  sq.AddRow("cut", {{0, 2}, {1, 2}}, -INFINITY, 3);
  v = testing::EnumerateVertices(sq);
  EXPECT_EQ(v.vertices.size(), 5u);
}

// Count of relaxation vertices with a fractional indicator column.
int FractionalVertices(const MilpFragment& f, int* total) {
  const auto v = testing::EnumerateVertices(f.model);
  EXPECT_EQ(v.recession_rays, 0);
  *total = static_cast<int>(v.vertices.size());
  int fractional = 0;
  for (const auto& x : v.vertices) {
    for (int j = 0; j < f.model.num_cols(); ++j) {
      if (f.model.integer[j] && x[j] != 0 && x[j] != 1) {
        ++fractional;
        break;
      }
    }
  }
  return fractional;
}

// Random depth <= 2 trees with p <= 2 over a box straddling zero.
template <typename Encode>
void CheckIntegralVertices(uint64_t seed, TreeMode mode, int count, Encode encode) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> pick_p(1, 2), pick_d(1, 2);
  int fragments = 0;
  while (fragments < count) {
    const int p = pick_p(rng);
    const HyperplaneTree t = RandomTree(rng, p, pick_d(rng), mode);
    if (mode == TreeMode::kClassify && t.FeasibleLeaves().empty()) continue;
    const MilpFragment f = encode(t, UnitBox(p, -0.5, 1.0), Iota(p));
    ++fragments;
    int total = 0;
    EXPECT_EQ(FractionalVertices(f, &total), 0) << "fragment " << fragments;
    EXPECT_GT(total, 0);
  }
}

TEST(EncoderTest, InequalityRelaxationsHaveIntegralVertices) {
  CheckIntegralVertices(31, TreeMode::kClassify, 20, [](const auto& t, const Box& b, const auto& v) {
    return EncodeInequality(t, b, v, EncoderMode::kBigMFree);
  });
}

TEST(EncoderTest, ObjectiveRelaxationsHaveIntegralVertices) {
  CheckIntegralVertices(32, TreeMode::kRegress, 10, [](const auto& t, const Box& b, const auto& v) {
    return EncodeObjective(t, b, v, EncoderMode::kBigMFree);
  });
}

TEST(EncoderTest, BigMRelaxationCanBeFractional) {
  // Feasible for x <= 0.3 or x >= 0.7.
  const HyperplaneTree t = HyperplaneTree::FromPreorder(
      TreeMode::kClassify, 1,
      {Split({1.0}, 0.3), Leaf(true), Split({1.0}, 0.7), Leaf(false), Leaf(true)});
  int total = 0;
  EXPECT_GT(FractionalVertices(EncodeInequality(t, UnitBox(1), {0}, EncoderMode::kBigM), &total), 0);
  EXPECT_EQ(FractionalVertices(EncodeInequality(t, UnitBox(1), {0}, EncoderMode::kBigMFree), &total), 0);
}

}  // namespace
}  // namespace treegopt
