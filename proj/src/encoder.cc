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

#include <algorithm>
#include <cmath>
#include <map>

#include "treegopt/simplex.h"

namespace treegopt {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

class Builder {
 public:
  Builder(MilpFragment::Kind kind, const std::string& source) {
    f_.kind = kind;
    f_.source = source;
  }

  int AddOriginal(int k, double lower, double upper) {
    const int col = f_.model.AddColumn("x" + std::to_string(k), lower, upper);
    f_.global.push_back(k);
    f_.provenance.push_back(Provenance{Provenance::Kind::kOriginal, f_.source, -1, -1});
    return col;
  }

  int AddAux(const std::string& name, double lower, double upper, bool integer,
             Provenance::Kind kind, int leaf, int component) {
    const int col = f_.model.AddColumn(f_.source + "." + name, lower, upper, 0.0, integer);
    f_.global.push_back(-1);
    f_.provenance.push_back(Provenance{kind, f_.source, leaf, component});
    return col;
  }

  void Row(const std::string& name, std::vector<std::pair<int, double>> terms, double lower,
           double upper) {
    std::erase_if(terms, [](const auto& t) { return t.second == 0.0; });
    f_.model.AddRow(f_.source + "." + name, std::move(terms), lower, upper);
  }

  MilpFragment& fragment() { return f_; }

 private:
  MilpFragment f_;
};

std::vector<int> AddOriginals(Builder& b, const Box& box, const std::vector<int>& vars) {
  std::vector<int> cols;
  for (size_t k = 0; k < vars.size(); ++k) {
    cols.push_back(b.AddOriginal(vars[k], box.lower[k], box.upper[k]));
  }
  return cols;
}

// Largest |alpha.x - beta| over the box, by interval arithmetic.
double BigM(const VectorXd& alpha, double beta, const Box& box) {
  double m = std::fabs(beta);
  for (int k = 0; k < alpha.size(); ++k) {
    m += std::fabs(alpha[k]) * std::max(std::fabs(box.lower[k]), std::fabs(box.upper[k]));
  }
  return m;
}

// Largest value of w.x + c over the box.
double MaxOverBox(const VectorXd& w, double c, const Box& box) {
  double v = c;
  for (int k = 0; k < w.size(); ++k) v += std::max(w[k] * box.lower[k], w[k] * box.upper[k]);
  return v;
}

struct LeafCopy {
  int leaf;
  std::vector<int> y;
  int z;
};

// Leaf copies y_l in z_l times the leaf polyhedron (extended form).
LeafCopy AddLeafCopy(Builder& b, const HyperplaneTree& tree, const LeafPolyhedron& poly,
                     const Box& box) {
  const int p = box.dim();
  const int id = poly.leaf + 1;
  const std::string tag = std::to_string(id);
  LeafCopy copy;
  copy.leaf = poly.leaf;
  copy.z = b.AddAux("z" + tag, 0.0, 1.0, true, Provenance::Kind::kLeafIndicator, id, -1);
  for (int k = 0; k < p; ++k) {
    copy.y.push_back(b.AddAux("y" + tag + "_" + std::to_string(k), std::min(box.lower[k], 0.0),
                              std::max(box.upper[k], 0.0), false, Provenance::Kind::kLeafCopy, id,
                              k));
  }
  auto path_row = [&](int h, bool left) {
    const TreeNode& node = tree.nodes[h];
    std::vector<std::pair<int, double>> terms;
    for (int k = 0; k < p; ++k) terms.emplace_back(copy.y[k], node.alpha[k]);
    terms.emplace_back(copy.z, -node.beta);
    const std::string name = "path" + tag + "_" + std::to_string(h + 1);
    if (left) {
      b.Row(name, std::move(terms), -kInf, 0.0);
    } else {
      b.Row(name, std::move(terms), 0.0, kInf);
    }
  };
  for (int h : poly.minus) path_row(h, true);
  for (int h : poly.plus) path_row(h, false);
  // Box rows; a zero bound is already a column bound.
  for (int k = 0; k < p; ++k) {
    const std::string name = "box" + tag + "_" + std::to_string(k);
    if (box.lower[k] != 0.0) b.Row(name + "_lo", {{copy.y[k], 1.0}, {copy.z, -box.lower[k]}}, 0.0, kInf);
    if (box.upper[k] != 0.0) b.Row(name + "_up", {{copy.y[k], 1.0}, {copy.z, -box.upper[k]}}, -kInf, 0.0);
  }
  return copy;
}

// sum_l y_l = x and sum_l z_l = 1 over one group of leaf copies.
void LinkCopies(Builder& b, const std::vector<LeafCopy>& copies, const std::vector<int>& x,
                const std::string& tag) {
  for (size_t k = 0; k < x.size(); ++k) {
    std::vector<std::pair<int, double>> terms;
    for (const auto& c : copies) terms.emplace_back(c.y[k], 1.0);
    terms.emplace_back(x[k], -1.0);
    b.Row("link" + tag + "_" + std::to_string(k), std::move(terms), 0.0, 0.0);
  }
  std::vector<std::pair<int, double>> terms;
  std::vector<int> group;
  for (const auto& c : copies) {
    terms.emplace_back(c.z, 1.0);
    group.push_back(c.z);
  }
  b.Row("pick" + tag, std::move(terms), 1.0, 1.0);
  b.fragment().sos1_groups.push_back(std::move(group));
}

// Path rows on x relaxed by M_h (1 - z_l).
int AddBigMLeaf(Builder& b, const HyperplaneTree& tree, const LeafPolyhedron& poly,
                const Box& box, const std::vector<int>& x) {
  const int id = poly.leaf + 1;
  const std::string tag = std::to_string(id);
  const int z = b.AddAux("z" + tag, 0.0, 1.0, true, Provenance::Kind::kLeafIndicator, id, -1);
  auto path_row = [&](int h, bool left) {
    const TreeNode& node = tree.nodes[h];
    const double m = BigM(node.alpha, node.beta, box);
    std::vector<std::pair<int, double>> terms;
    for (size_t k = 0; k < x.size(); ++k) terms.emplace_back(x[k], node.alpha[k]);
    const std::string name = "path" + tag + "_" + std::to_string(h + 1);
    if (left) {
      terms.emplace_back(z, m);  // alpha.x <= beta + M (1 - z)
      b.Row(name, std::move(terms), -kInf, node.beta + m);
    } else {
      terms.emplace_back(z, -m);  // alpha.x >= beta - M (1 - z)
      b.Row(name, std::move(terms), node.beta - m, kInf);
    }
  };
  for (int h : poly.minus) path_row(h, true);
  for (int h : poly.plus) path_row(h, false);
  return z;
}

void AddPick(Builder& b, const std::vector<int>& zs, const std::string& tag) {
  std::vector<std::pair<int, double>> terms;
  for (int z : zs) terms.emplace_back(z, 1.0);
  b.Row("pick" + tag, std::move(terms), 1.0, 1.0);
  b.fragment().sos1_groups.push_back(zs);
}

std::vector<LeafPolyhedron> Select(const HyperplaneTree& tree, bool feasible) {
  std::vector<LeafPolyhedron> out;
  for (auto& poly : tree.LeafPolyhedra()) {
    if (tree.nodes[poly.leaf].feasible == feasible) out.push_back(std::move(poly));
  }
  return out;
}

int PathLength(const LeafPolyhedron& poly) {
  return static_cast<int>(poly.minus.size() + poly.plus.size());
}

void CheckDims(const HyperplaneTree& tree, const Box& box, const std::vector<int>& vars) {
  if (tree.dim != box.dim() || static_cast<int>(vars.size()) != box.dim()) {
    throw EncodeError("tree, box and variable list dimensions differ");
  }
}

// Encodes a leafwise lower envelope of a regression tree into value column
// `value` bounded by [lo, hi]. Returns the constraint count.
int AddRegressionLeaves(Builder& b, const HyperplaneTree& tree, const Box& box,
                        const std::vector<int>& x, EncoderMode mode, int value, double lo,
                        double hi) {
  const auto polys = tree.LeafPolyhedra();
  std::vector<AffinePlane> planes;
  for (const auto& poly : polys) {
    const int v = poly.leaf;
    if (tree.leaf_points.size() > static_cast<size_t>(v) && tree.leaf_points[v].rows() > 0) {
      planes.push_back(FitLowerBoundingHyperplane(tree.leaf_points[v], tree.leaf_targets[v]));
    } else {
      planes.push_back(AffinePlane{tree.nodes[v].weights, tree.nodes[v].intercept});
    }
  }
  int count = 0;
  if (mode == EncoderMode::kBigMFree) {
    std::vector<LeafCopy> copies;
    std::vector<std::pair<int, double>> sum;
    for (size_t i = 0; i < polys.size(); ++i) {
      const LeafCopy copy = AddLeafCopy(b, tree, polys[i], box);
      const std::string tag = std::to_string(polys[i].leaf + 1);
      const int fl = b.AddAux("f" + tag, std::min(lo, 0.0), std::max(hi, 0.0), false,
                              Provenance::Kind::kLeafValue, polys[i].leaf + 1, -1);
      // a.y_l + b z_l <= f_l
      std::vector<std::pair<int, double>> terms;
      for (size_t k = 0; k < x.size(); ++k) terms.emplace_back(copy.y[k], planes[i].weights[k]);
      terms.emplace_back(copy.z, planes[i].intercept);
      terms.emplace_back(fl, -1.0);
      b.Row("plane" + tag, std::move(terms), -kInf, 0.0);
      // f_l vanishes with z_l.
      if (lo != 0.0) b.Row("vlo" + tag, {{fl, 1.0}, {copy.z, -lo}}, 0.0, kInf);
      if (hi != 0.0) b.Row("vup" + tag, {{fl, 1.0}, {copy.z, -hi}}, -kInf, 0.0);
      sum.emplace_back(fl, 1.0);
      copies.push_back(copy);
      count += PathLength(polys[i]) + 1;
    }
    LinkCopies(b, copies, x, "");
    sum.emplace_back(value, -1.0);
    b.Row("value", std::move(sum), 0.0, 0.0);
    count += 3;
  } else {
    std::vector<int> zs;
    for (size_t i = 0; i < polys.size(); ++i) {
      const int z = AddBigMLeaf(b, tree, polys[i], box, x);
      zs.push_back(z);
      // a.x + b - v <= M (1 - z)
      const double m = std::max(0.0, MaxOverBox(planes[i].weights, planes[i].intercept, box) - lo);
      std::vector<std::pair<int, double>> terms;
      for (size_t k = 0; k < x.size(); ++k) terms.emplace_back(x[k], planes[i].weights[k]);
      terms.emplace_back(value, -1.0);
      terms.emplace_back(z, m);
      b.Row("plane" + std::to_string(polys[i].leaf + 1), std::move(terms), -kInf,
            m - planes[i].intercept);
      count += PathLength(polys[i]) + 1;
    }
    AddPick(b, zs, "");
    count += 1;
  }
  return count;
}

// Value column range: sampled targets widened by 5%, raised if a leaf plane
// can exceed it inside the box.
std::pair<double, double> ValueRange(const HyperplaneTree& tree, const Box& box) {
  double lo = kInf, hi = -kInf;
  for (int v : tree.Leaves()) {
    if (static_cast<size_t>(v) < tree.leaf_targets.size() && tree.leaf_targets[v].size() > 0) {
      lo = std::min(lo, tree.leaf_targets[v].minCoeff());
      hi = std::max(hi, tree.leaf_targets[v].maxCoeff());
    }
  }
  if (!std::isfinite(lo)) {
    // No stored samples: fall back to the leaf regressors over the box.
    for (int v : tree.Leaves()) {
      const auto& n = tree.nodes[v];
      hi = std::max(hi, MaxOverBox(n.weights, n.intercept, box));
      lo = std::min(lo, -MaxOverBox(-n.weights, -n.intercept, box));
    }
  }
  const double margin = std::max(0.05 * (hi - lo), 1e-6 * std::max(1.0, std::fabs(hi)));
  lo -= margin;
  hi += margin;
  for (int v : tree.Leaves()) {
    if (static_cast<size_t>(v) < tree.leaf_points.size() && tree.leaf_points[v].rows() > 0) {
      const AffinePlane plane = FitLowerBoundingHyperplane(tree.leaf_points[v], tree.leaf_targets[v]);
      hi = std::max(hi, MaxOverBox(plane.weights, plane.intercept, box));
    }
  }
  return {lo, hi};
}

}  // namespace

int MilpFragment::num_aux_continuous() const {
  int n = 0;
  for (int j = 0; j < model.num_cols(); ++j) n += global[j] < 0 && !model.integer[j];
  return n;
}

int MilpFragment::num_aux_binary() const {
  int n = 0;
  for (int j = 0; j < model.num_cols(); ++j) n += global[j] < 0 && model.integer[j];
  return n;
}

int MilpFragment::LocalColumn(int k) const {
  for (int j = 0; j < static_cast<int>(global.size()); ++j) {
    if (global[j] == k) return j;
  }
  return -1;
}

nlohmann::ordered_json MilpFragment::ProvenanceJson() const {
  static const char* kKinds[] = {"original", "leaf_copy", "leaf_indicator", "leaf_value",
                                 "aggregate"};
  static const char* kFragmentKinds[] = {"inequality", "equality", "objective", "separable"};
  nlohmann::ordered_json j;
  j["source"] = source;
  j["kind"] = kFragmentKinds[static_cast<int>(kind)];
  j["constraint_count"] = constraint_count;
  auto& cols = j["columns"] = nlohmann::ordered_json::array();
  for (int c = 0; c < model.num_cols(); ++c) {
    nlohmann::ordered_json e;
    e["name"] = model.col_names[c];
    e["kind"] = kKinds[static_cast<int>(provenance[c].kind)];
    if (global[c] >= 0) e["variable"] = global[c];
    if (provenance[c].leaf >= 0) e["leaf"] = provenance[c].leaf;
    if (provenance[c].component >= 0) e["component"] = provenance[c].component;
    cols.push_back(std::move(e));
  }
  return j;
}

MilpFragment EncodeInequality(const HyperplaneTree& tree, const Box& box,
                              const std::vector<int>& vars, EncoderMode mode,
                              const std::string& source) {
  CheckDims(tree, box, vars);
  const auto polys = Select(tree, true);
  if (polys.empty()) throw EncodeError("constraint '" + source + "' has no feasible leaf in its box");
  Builder b(MilpFragment::Kind::kInequality, source);
  const std::vector<int> x = AddOriginals(b, box, vars);
  int count = 0;
  if (mode == EncoderMode::kBigMFree) {
    std::vector<LeafCopy> copies;
    for (const auto& poly : polys) {
      copies.push_back(AddLeafCopy(b, tree, poly, box));
      count += PathLength(poly);
    }
    LinkCopies(b, copies, x, "");
    count += 2;
  } else {
    std::vector<int> zs;
    for (const auto& poly : polys) {
      zs.push_back(AddBigMLeaf(b, tree, poly, box, x));
      count += PathLength(poly);
    }
    AddPick(b, zs, "");
    count += 1;
  }
  b.fragment().constraint_count = count;
  return std::move(b.fragment());
}

MilpFragment EncodeEquality(const HyperplaneTree& tree, const Box& box,
                            const std::vector<int>& vars, EncoderMode mode,
                            const std::string& source) {
  CheckDims(tree, box, vars);
  const auto feasible = Select(tree, true);
  const auto infeasible = Select(tree, false);
  if (feasible.empty() || infeasible.empty()) {
    throw EncodeError("equality '" + source + "' needs feasible and infeasible leaves");
  }
  Builder b(MilpFragment::Kind::kEquality, source);
  const std::vector<int> x = AddOriginals(b, box, vars);
  int count = 0;
  for (const auto* group : {&feasible, &infeasible}) {
    const std::string tag = group == &feasible ? "1" : "0";
    if (mode == EncoderMode::kBigMFree) {
      std::vector<LeafCopy> copies;
      for (const auto& poly : *group) {
        copies.push_back(AddLeafCopy(b, tree, poly, box));
        count += PathLength(poly);
      }
      LinkCopies(b, copies, x, tag);
      count += 2;
    } else {
      std::vector<int> zs;
      for (const auto& poly : *group) {
        zs.push_back(AddBigMLeaf(b, tree, poly, box, x));
        count += PathLength(poly);
      }
      AddPick(b, zs, tag);
      count += 1;
    }
  }
  b.fragment().constraint_count = count;
  return std::move(b.fragment());
}

AffinePlane FitLowerBoundingHyperplane(const Eigen::MatrixXd& points,
                                       const Eigen::VectorXd& targets) {
  const int m = static_cast<int>(points.rows());
  const int p = static_cast<int>(points.cols());
  AffinePlane plane{VectorXd::Zero(p), 0.0};
  if (m == 0) throw EncodeError("lower bounding plane needs samples");
  if (m == 1) {
    plane.intercept = targets[0];
    return plane;
  }
  // Solve in unit-box coordinates of the samples for conditioning:
  // x = lower + range .* u, so a.x + b = (a .* range).u + (b + a.lower).
  const VectorXd lower = points.colwise().minCoeff().transpose();
  VectorXd range = points.colwise().maxCoeff().transpose() - lower;
  LinearModel lp;
  for (int k = 0; k < p; ++k) lp.AddColumn("w" + std::to_string(k), -kInf, kInf);
  const int c = lp.AddColumn("c", -kInf, kInf);
  VectorXd usum = VectorXd::Zero(p);
  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int k = 0; k < p; ++k) {
      const double u = range[k] > 0 ? (points(i, k) - lower[k]) / range[k] : 0.0;
      usum[k] += u;
      if (u != 0.0) terms.emplace_back(k, u);
    }
    terms.emplace_back(c, 1.0);
    lp.AddRow("s" + std::to_string(i), std::move(terms), -kInf, targets[i]);
  }
  // Minimizing sum of gaps = maximizing sum of plane values.
  for (int k = 0; k < p; ++k) lp.cost[k] = -usum[k];
  lp.cost[c] = -m;
  const SolveResult r = SolveLp(lp);
  if (!r.ok()) {
    // Degenerate data: the flat plane at the minimum is always valid.
    plane.intercept = targets.minCoeff();
    return plane;
  }
  plane.intercept = r.x[c];
  for (int k = 0; k < p; ++k) {
    if (range[k] > 0) {
      plane.weights[k] = r.x[k] / range[k];
      plane.intercept -= r.x[k] * lower[k] / range[k];
    }
  }
  // Absorb round-off so that the plane never exceeds a sample.
  for (int pass = 0; pass < 8; ++pass) {
    double excess = 0.0;
    for (int i = 0; i < m; ++i) {
      excess = std::max(excess, points.row(i).dot(plane.weights) + plane.intercept - targets[i]);
    }
    if (excess == 0.0) break;
    plane.intercept = std::nextafter(plane.intercept - excess, -kInf);
  }
  return plane;
}

MilpFragment EncodeObjective(const HyperplaneTree& tree, const Box& box,
                             const std::vector<int>& vars, EncoderMode mode,
                             const std::string& source) {
  CheckDims(tree, box, vars);
  if (tree.mode != TreeMode::kRegress) throw EncodeError("objective needs a regression tree");
  Builder b(MilpFragment::Kind::kObjective, source);
  const std::vector<int> x = AddOriginals(b, box, vars);
  const auto [lo, hi] = ValueRange(tree, box);
  const int value = b.AddAux("value", lo, hi, false, Provenance::Kind::kAggregate, -1, -1);
  b.fragment().value_column = value;
  b.fragment().constraint_count = AddRegressionLeaves(b, tree, box, x, mode, value, lo, hi);
  return std::move(b.fragment());
}

MilpFragment EncodeSeparable(const HyperplaneTree& tree, const Box& box,
                             const std::vector<int>& vars, const AffineForm& affine,
                             EncoderMode mode, const std::string& source) {
  CheckDims(tree, box, vars);
  if (tree.mode != TreeMode::kRegress) throw EncodeError("separable part needs a regression tree");
  Builder b(MilpFragment::Kind::kSeparable, source);
  const std::vector<int> x = AddOriginals(b, box, vars);
  const auto [lo, hi] = ValueRange(tree, box);
  const int value = b.AddAux("value", lo, hi, false, Provenance::Kind::kAggregate, -1, -1);
  b.fragment().value_column = value;
  int count = AddRegressionLeaves(b, tree, box, x, mode, value, lo, hi);
  // a.x - g* >= -b
  std::vector<std::pair<int, double>> terms;
  for (const auto& [k, a] : affine.coeffs) {
    int col = b.fragment().LocalColumn(k);
    if (col < 0) col = b.AddOriginal(k, -kInf, kInf);
    terms.emplace_back(col, a);
  }
  terms.emplace_back(value, -1.0);
  b.Row("affine", std::move(terms), -affine.constant, kInf);
  b.fragment().constraint_count = count + 1;
  return std::move(b.fragment());
}

MilpInstance Assemble(const StandardFormProblem& problem,
                      const std::vector<MilpFragment>& fragments, const MilpFragment* objective,
                      const std::vector<std::string>& omitted) {
  MilpInstance inst;
  LinearModel& m = inst.model;
  const int n = problem.num_vars();
  for (const auto& v : problem.variables) {
    m.AddColumn(v.name, v.lower, v.upper, 0.0, v.integral);
    inst.provenance.push_back(Provenance{Provenance::Kind::kOriginal, v.name, -1, -1});
  }
  inst.num_original = n;
  if (!objective) {
    if (!problem.objective.is_linear()) throw EncodeError("nonlinear objective needs a fragment");
    for (const auto& [k, a] : problem.objective.linear.coeffs) m.cost[k] += a;
    m.cost_offset = problem.objective.linear.constant;
  }
  for (const auto& row : problem.inequalities) m.AddRow(row.name, row.terms, row.rhs, kInf);
  for (const auto& row : problem.equalities) m.AddRow(row.name, row.terms, row.rhs, row.rhs);
  auto add = [&](const MilpFragment& f) {
    std::vector<int> map(f.model.num_cols());
    for (int j = 0; j < f.model.num_cols(); ++j) {
      if (f.global[j] >= 0) {
        if (f.global[j] >= n) throw EncodeError("fragment '" + f.source + "' references an unknown variable");
        map[j] = f.global[j];
      } else {
        map[j] = m.AddColumn(f.model.col_names[j], f.model.col_lower[j], f.model.col_upper[j], 0.0,
                             f.model.integer[j]);
        inst.provenance.push_back(f.provenance[j]);
      }
    }
    for (const auto& row : f.model.rows) {
      std::vector<std::pair<int, double>> terms;
      for (const auto& [j, a] : row.terms) terms.emplace_back(map[j], a);
      m.AddRow(row.name, std::move(terms), row.lower, row.upper);
    }
    for (const auto& group : f.sos1_groups) {
      std::vector<int> g;
      for (int j : group) g.push_back(map[j]);
      inst.sos1_groups.push_back(std::move(g));
    }
    return map;
  };
  for (const auto& f : fragments) add(f);
  if (objective) {
    const std::vector<int> map = add(*objective);
    inst.objective_column = map[objective->value_column];
    m.cost[inst.objective_column] = 1.0;
  }
  inst.omitted = omitted;
  return inst;
}

AuxCounts CountAux(const std::vector<RoleTree>& trees) {
  AuxCounts c;
  c.continuous = 1;
  int objectives = 0;
  for (const auto& rt : trees) {
    const HyperplaneTree& t = *rt.tree;
    const auto polys = t.LeafPolyhedra();
    const int p = t.dim;
    const long d = t.Depth();
    const long full = 1L << d;
    switch (rt.role) {
      case TreeRole::kObjective: {
        if (++objectives > 1) throw EncodeError("at most one objective tree");
        const int leaves = static_cast<int>(polys.size());
        c.binaries += leaves;
        c.continuous += leaves * (p + 1);
        for (const auto& poly : polys) c.constraints += PathLength(poly) + 1;
        c.constraints += 3;
        c.worst_case_constraints += full * (d + 1) + 3;
        break;
      }
      case TreeRole::kInequality: {
        int leaves = 0;
        for (const auto& poly : polys) {
          if (!t.nodes[poly.leaf].feasible) continue;
          ++leaves;
          c.constraints += PathLength(poly);
        }
        c.binaries += leaves;
        c.continuous += leaves * p;
        c.constraints += 2;
        c.worst_case_constraints += (full - 1) * d + 2;
        break;
      }
      case TreeRole::kEquality: {
        const int leaves = static_cast<int>(polys.size());
        c.binaries += leaves;
        c.continuous += leaves * p;
        for (const auto& poly : polys) c.constraints += PathLength(poly);
        c.constraints += 4;
        c.worst_case_constraints += (full - 1) * d + 4;
        break;
      }
    }
  }
  return c;
}

}  // namespace treegopt
