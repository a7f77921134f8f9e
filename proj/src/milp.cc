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

#include "treegopt/milp.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <tuple>
#include <vector>

namespace treegopt {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct BoundChange {
  int col;
  double lower;
  double upper;
};

struct Node {
  std::vector<BoundChange> changes;  // cumulative from the root
  double bound = -kInfinity;         // parent relaxation value
  int depth = 0;
};

class BranchAndBound {
 public:
  BranchAndBound(const MilpInstance& instance, const MilpOptions& options)
      : inst_(instance),
        model_(instance.model),
        opt_(options),
        lp_(instance.model, options.lp),
        cur_lb_(model_.col_lower),
        cur_ub_(model_.col_upper) {}

  SolveResult Run() {
    const auto start = std::chrono::steady_clock::now();
    std::vector<Node> open;
    open.push_back(Node{});
    int nodes = 0;
    bool complete = true;
    while (!open.empty()) {
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (nodes >= opt_.max_nodes || elapsed > opt_.time_limit_seconds) {
        complete = false;
        break;
      }
      Node node = Select(open);
      if (node.bound >= incumbent_value_ - opt_.absolute_gap) continue;
      ++nodes;
      Apply(node.changes);
      const SolveResult relax = lp_.Solve();
      iterations_ += relax.iterations;
      if (relax.status == SolveStatus::kInfeasible) continue;
      if (!relax.ok()) {
        complete = false;
        continue;
      }
      if (relax.objective >= incumbent_value_ - opt_.absolute_gap) continue;
      Branch(node, relax, open);
    }
    SolveResult result;
    result.nodes = nodes;
    result.iterations = iterations_;
    double open_bound = incumbent_value_;
    for (const Node& n : open) open_bound = std::min(open_bound, n.bound);
    if (std::isfinite(incumbent_value_)) {
      result.x = incumbent_;
      result.objective = incumbent_value_;
    }
    if (complete) {
      result.status = std::isfinite(incumbent_value_) ? SolveStatus::kOptimal
                                                      : SolveStatus::kInfeasible;
      result.bound = incumbent_value_;
    } else {
      result.status = SolveStatus::kIterationLimit;
      result.bound = open_bound;
      result.message = "budget exhausted";
    }
    return result;
  }

 private:
  Node Select(std::vector<Node>& open) {
    size_t pick = open.size() - 1;  // depth-first until an incumbent exists
    if (std::isfinite(incumbent_value_)) {
      for (size_t i = 0; i < open.size(); ++i) {
        if (open[i].bound < open[pick].bound ||
            (open[i].bound == open[pick].bound && open[i].depth > open[pick].depth)) {
          pick = i;
        }
      }
    }
    Node node = std::move(open[pick]);
    open.erase(open.begin() + pick);
    return node;
  }

  void Apply(const std::vector<BoundChange>& changes) {
    std::vector<double> lb = model_.col_lower;
    std::vector<double> ub = model_.col_upper;
    for (const auto& c : changes) {
      lb[c.col] = c.lower;
      ub[c.col] = c.upper;
    }
    for (int j = 0; j < model_.num_cols(); ++j) {
      if (lb[j] != cur_lb_[j] || ub[j] != cur_ub_[j]) {
        lp_.SetColumnBounds(j, lb[j], ub[j]);
        cur_lb_[j] = lb[j];
        cur_ub_[j] = ub[j];
      }
    }
  }

  bool Fractional(double v) const {
    return std::fabs(v - std::round(v)) > opt_.integrality_tol;
  }

  void Branch(const Node& node, const SolveResult& relax, std::vector<Node>& open) {
    const std::vector<double>& x = relax.x;
    // Pick-a-leaf branching on the most spread disjunction group.
    int best_group = -1;
    double best_score = 0.0;
    for (size_t g = 0; g < inst_.sos1_groups.size(); ++g) {
      double top = 0.0;
      bool fractional = false;
      for (int j : inst_.sos1_groups[g]) {
        top = std::max(top, x[j]);
        fractional = fractional || Fractional(x[j]);
      }
      if (fractional && 1.0 - top > best_score) {
        best_score = 1.0 - top;
        best_group = static_cast<int>(g);
      }
    }
    if (best_group >= 0) {
      const auto& group = inst_.sos1_groups[best_group];
      const int size = static_cast<int>(group.size());
      int first = size, last = -1;
      for (int t = 0; t < size; ++t) {
        if (x[group[t]] > opt_.integrality_tol) {
          first = std::min(first, t);
          last = t;
        }
      }
      double mass = 0.0;
      int split = first;
      for (int t = first; t < last; ++t) {
        mass += std::max(0.0, x[group[t]]);
        split = t;
        if (mass >= 0.5) break;
      }
      // Left child keeps group[0..split], right child keeps the rest.
      Node left{node.changes, relax.objective, node.depth + 1};
      Node right{node.changes, relax.objective, node.depth + 1};
      for (int t = 0; t < size; ++t) {
        Node& target = t <= split ? right : left;
        target.changes.push_back({group[t], 0.0, 0.0});
      }
      // Dive into the heavier side first.
      if (mass >= 0.5) {
        open.push_back(std::move(right));
        open.push_back(std::move(left));
      } else {
        open.push_back(std::move(left));
        open.push_back(std::move(right));
      }
      return;
    }
    int best_col = -1;
    double best_frac = 0.0;
    for (int j = 0; j < model_.num_cols(); ++j) {
      if (!model_.integer[j] || !Fractional(x[j])) continue;
      const double f = std::fabs(x[j] - std::floor(x[j]) - 0.5);
      if (best_col < 0 || f < best_frac) {
        best_frac = f;
        best_col = j;
      }
    }
    if (best_col >= 0) {
      const int j = best_col;
      Node down{node.changes, relax.objective, node.depth + 1};
      Node up{node.changes, relax.objective, node.depth + 1};
      down.changes.push_back({j, cur_lb_[j], std::floor(x[j])});
      up.changes.push_back({j, std::ceil(x[j]), cur_ub_[j]});
      if (x[j] - std::floor(x[j]) >= 0.5) {
        open.push_back(std::move(down));
        open.push_back(std::move(up));
      } else {
        open.push_back(std::move(up));
        open.push_back(std::move(down));
      }
      return;
    }
    Polish(node, relax);
  }

  // Fixes the integer columns at their rounded values and re-solves for a
  // clean incumbent.
  void Polish(const Node& node, const SolveResult& relax) {
    std::vector<BoundChange> fixed = node.changes;
    for (int j = 0; j < model_.num_cols(); ++j) {
      if (model_.integer[j]) {
        const double v = std::round(relax.x[j]);
        fixed.push_back({j, v, v});
      }
    }
    Apply(fixed);
    const SolveResult clean = lp_.Solve();
    iterations_ += clean.iterations;
    std::vector<double> x = clean.ok() ? clean.x : relax.x;
    for (int j = 0; j < model_.num_cols(); ++j) {
      if (model_.integer[j]) x[j] = std::round(x[j]);
    }
    if (model_.MaxViolation(x) > 1e-7) return;
    const double value = model_.Objective(x);
    if (value < incumbent_value_) {
      incumbent_value_ = value;
      incumbent_ = std::move(x);
    }
  }

  const MilpInstance& inst_;
  const LinearModel& model_;
  MilpOptions opt_;
  DenseSimplex lp_;
  std::vector<double> cur_lb_, cur_ub_;
  double incumbent_value_ = kInfinity;
  std::vector<double> incumbent_;
  int iterations_ = 0;
};

}  // namespace

SolveResult SolveMilp(const MilpInstance& instance, const MilpOptions& options) {
  BranchAndBound bb(instance, options);
  return bb.Run();
}

SolveResult SolveMilpByEnumeration(const MilpInstance& instance) {
  const LinearModel& m = instance.model;
  std::vector<bool> grouped(m.num_cols(), false);
  for (const auto& g : instance.sos1_groups) {
    for (int j : g) grouped[j] = true;
  }
  std::vector<int> free_ints;
  for (int j = 0; j < m.num_cols(); ++j) {
    if (m.integer[j] && !grouped[j]) free_ints.push_back(j);
  }
  // Mixed radix counter over groups then integer columns.
  std::vector<int> radix;
  for (const auto& g : instance.sos1_groups) radix.push_back(static_cast<int>(g.size()));
  for (int j : free_ints) {
    radix.push_back(static_cast<int>(std::floor(m.col_upper[j]) - std::ceil(m.col_lower[j])) + 1);
  }
  SolveResult best;
  best.status = SolveStatus::kInfeasible;
  best.objective = kInfinity;
  for (int r : radix) {
    if (r <= 0) return best;
  }
  std::vector<int> digit(radix.size(), 0);
  int count = 0;
  while (true) {
    LinearModel fixed = m;
    const size_t ng = instance.sos1_groups.size();
    for (size_t g = 0; g < ng; ++g) {
      const auto& group = instance.sos1_groups[g];
      for (int t = 0; t < static_cast<int>(group.size()); ++t) {
        const double v = t == digit[g] ? 1.0 : 0.0;
        fixed.col_lower[group[t]] = fixed.col_upper[group[t]] = v;
      }
    }
    for (size_t k = 0; k < free_ints.size(); ++k) {
      const int j = free_ints[k];
      const double v = std::ceil(m.col_lower[j]) + digit[ng + k];
      fixed.col_lower[j] = fixed.col_upper[j] = v;
    }
    const SolveResult r = SolveLp(fixed);
    ++count;
    if (r.ok() && r.objective < best.objective) {
      best = r;
    }
    size_t pos = 0;
    while (pos < digit.size() && ++digit[pos] == radix[pos]) digit[pos++] = 0;
    if (pos == digit.size()) break;
  }
  best.nodes = count;
  if (best.ok()) best.bound = best.objective;
  return best;
}

}  // namespace treegopt
