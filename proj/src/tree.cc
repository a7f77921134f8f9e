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

#include "treegopt/tree.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <random>

#include "treegopt/seed.h"

namespace treegopt {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kGainTol = 1e-12;
constexpr int kMaxRegressionThresholds = 128;
constexpr int kLookaheadThresholds = 16;

// Growth happens in coordinates scaled to the unit box of the data; splits
// are mapped back to the original coordinates before pruning.
struct Scaling {
  VectorXd lower;
  VectorXd range;

  static Scaling Of(const MatrixXd& x) {
    Scaling s;
    s.lower = x.colwise().minCoeff().transpose();
    s.range = x.colwise().maxCoeff().transpose() - s.lower;
    return s;
  }
  MatrixXd Apply(const MatrixXd& x) const {
    MatrixXd u = x;
    for (int k = 0; k < x.cols(); ++k) {
      if (range[k] > 0) {
        u.col(k) = ((x.col(k).array() - lower[k]) / range[k]).matrix();
      } else {
        u.col(k).setZero();
      }
    }
    return u;
  }
  // Maps w.u <= t to alpha.x <= beta with max |alpha| = 1.
  void ToOriginal(const VectorXd& w, double t, VectorXd* alpha, double* beta) const {
    VectorXd a = VectorXd::Zero(w.size());
    double b = t;
    for (int k = 0; k < w.size(); ++k) {
      if (range[k] > 0) {
        a[k] = w[k] / range[k];
        b += w[k] * lower[k] / range[k];
      }
    }
    const double scale = a.cwiseAbs().maxCoeff();
    *alpha = a / scale;
    *beta = b / scale;
  }
};

struct BuildNode {
  VectorXd w;  // unit-box split w.u <= t
  double t = 0.0;
  VectorXd alpha;  // original-coordinate split
  double beta = 0.0;
  std::unique_ptr<BuildNode> left, right;

  bool leaf() const { return !left; }
};

struct Split {
  VectorXd w;
  double t = 0.0;
  double score = std::numeric_limits<double>::infinity();
  bool ok() const { return w.size() > 0; }
};

// Least squares of y on [1, u] with a tiny ridge; returns (coef, sse).
std::pair<VectorXd, double> FitLinear(const MatrixXd& u, const VectorXd& y) {
  const int n = static_cast<int>(u.rows()), p = static_cast<int>(u.cols());
  MatrixXd z(n, p + 1);
  z.col(0).setOnes();
  z.rightCols(p) = u;
  const VectorXd coef = z.completeOrthogonalDecomposition().solve(y);
  const double sse = (z * coef - y).squaredNorm();
  return {coef, sse};
}

class Trainer {
 public:
  Trainer(const MatrixXd& u, const TreeParams& params, std::vector<int> labels, VectorXd targets,
          uint64_t seed)
      : u_(u),
        params_(params),
        labels_(std::move(labels)),
        targets_(std::move(targets)),
        rng_(seed),
        minb_(std::max(1, static_cast<int>(std::ceil(params.minbucket * u.rows() - 1e-9)))) {}

  std::unique_ptr<BuildNode> Grow(const std::vector<int>& idx, int depth) {
    auto node = std::make_unique<BuildNode>();
    const int n = static_cast<int>(idx.size());
    if (depth >= params_.max_depth || n < 2 * minb_ || Pure(idx)) return node;
    // Once the node fits in the remaining depth, keep children small enough
    // that every point could still end in its own leaf.
    const int remaining = params_.max_depth - depth;
    remaining_ = remaining;
    cap_ = n;
    force_ = false;
    if (remaining < 30 && n <= (1 << remaining)) {
      cap_ = 1 << (remaining - 1);
      force_ = true;
    }
    const Split split = classify() ? ClassifySplit(idx, true) : RegressSplit(idx);
    if (!split.ok()) return node;
    std::vector<int> left, right;
    Partition(idx, split.w, split.t, &left, &right);
    if (left.empty() || right.empty()) return node;
    node->w = split.w;
    node->t = split.t;
    node->left = Grow(left, depth + 1);
    node->right = Grow(right, depth + 1);
    return node;
  }

 private:
  bool classify() const { return params_.mode == TreeMode::kClassify; }

  bool Pure(const std::vector<int>& idx) const {
    if (classify()) {
      int pos = 0;
      for (int i : idx) pos += labels_[i];
      return pos == 0 || pos == static_cast<int>(idx.size());
    }
    double lo = targets_[idx[0]], hi = lo;
    for (int i : idx) {
      lo = std::min(lo, targets_[i]);
      hi = std::max(hi, targets_[i]);
    }
    return hi - lo <= 1e-12 * std::max(1.0, std::fabs(hi));
  }

  void Partition(const std::vector<int>& idx, const VectorXd& w, double t, std::vector<int>* left,
                 std::vector<int>* right) const {
    for (int i : idx) (u_.row(i).dot(w) <= t ? left : right)->push_back(i);
  }

  // Linear discriminant direction between the two classes of `idx`, over
  // the features in `mask`.
  VectorXd Discriminant(const std::vector<int>& idx, const std::vector<int>& cls,
                        const std::vector<bool>& mask) const {
    const int p = static_cast<int>(u_.cols());
    VectorXd mu[2] = {VectorXd::Zero(p), VectorXd::Zero(p)};
    int count[2] = {0, 0};
    for (int i : idx) {
      mu[cls[i]] += u_.row(i).transpose();
      ++count[cls[i]];
    }
    if (count[0] == 0 || count[1] == 0) return {};
    mu[0] /= count[0];
    mu[1] /= count[1];
    MatrixXd s = MatrixXd::Zero(p, p);
    for (int i : idx) {
      const VectorXd d = u_.row(i).transpose() - mu[cls[i]];
      s += d * d.transpose();
    }
    s /= static_cast<double>(idx.size());
    s.diagonal().array() += 1e-6 + 1e-9 * s.trace();
    for (int k = 0; k < p; ++k) {
      if (mask[k]) continue;
      s.row(k).setZero();
      s.col(k).setZero();
      s(k, k) = 1.0;
    }
    VectorXd diff = mu[1] - mu[0];
    for (int k = 0; k < p; ++k) {
      if (!mask[k]) diff[k] = 0.0;
    }
    VectorXd w = s.ldlt().solve(diff);
    if (!w.allFinite() || w.cwiseAbs().maxCoeff() < 1e-12) return {};
    return w / w.cwiseAbs().maxCoeff();
  }

  // Ridge logistic regression by Newton steps; returns the normal of the
  // decision boundary.
  VectorXd Logistic(const std::vector<int>& idx) const {
    const int p = static_cast<int>(u_.cols());
    VectorXd theta = VectorXd::Zero(p + 1);
    for (int iter = 0; iter < 8; ++iter) {
      MatrixXd h = 1e-4 * MatrixXd::Identity(p + 1, p + 1);
      VectorXd g = 1e-4 * theta;
      for (int i : idx) {
        VectorXd z(p + 1);
        z[0] = 1.0;
        z.tail(p) = u_.row(i).transpose();
        const double q = 1.0 / (1.0 + std::exp(-z.dot(theta)));
        g += (q - labels_[i]) * z;
        h += q * (1.0 - q) * z * z.transpose();
      }
      const VectorXd step = h.ldlt().solve(g);
      if (!step.allFinite()) break;
      theta -= step;
      if (step.norm() < 1e-8) break;
    }
    VectorXd w = theta.tail(p);
    if (!w.allFinite() || w.cwiseAbs().maxCoeff() < 1e-12) return {};
    return w / w.cwiseAbs().maxCoeff();
  }

  std::vector<VectorXd> Directions(const std::vector<int>& idx, const std::vector<int>& cls,
                                   bool randomized) {
    const int p = static_cast<int>(u_.cols());
    std::vector<VectorXd> dirs;
    for (int k = 0; k < p; ++k) dirs.push_back(VectorXd::Unit(p, k));
    const std::vector<bool> all(p, true);
    if (p > 1) {
      if (VectorXd w = Discriminant(idx, cls, all); w.size()) dirs.push_back(w);
      if (classify() && randomized) {
        if (VectorXd w = Logistic(idx); w.size()) dirs.push_back(w);
      }
    }
    if (!randomized || p == 1) return dirs;
    std::uniform_int_distribution<size_t> pick(0, idx.size() - 1);
    std::bernoulli_distribution coin(0.5);
    std::uniform_int_distribution<int> feature(0, p - 1);
    for (int r = 1; r < params_.hyperplane_restarts; ++r) {
      std::vector<int> sample(idx.size());
      for (auto& s : sample) s = idx[pick(rng_)];
      std::vector<bool> mask(p);
      for (int k = 0; k < p; ++k) mask[k] = coin(rng_);
      mask[feature(rng_)] = true;
      if (VectorXd w = Discriminant(sample, cls, mask); w.size()) dirs.push_back(w);
    }
    return dirs;
  }

  // Weighted Gini impurity, in units of points, of the best threshold along
  // `w` with both sides holding at least minbucket points.
  Split SweepGini(const std::vector<int>& idx, const VectorXd& w) const {
    const int n = static_cast<int>(idx.size());
    std::vector<std::pair<double, int>> proj(n);
    for (int t = 0; t < n; ++t) proj[t] = {u_.row(idx[t]).dot(w), labels_[idx[t]]};
    std::sort(proj.begin(), proj.end());
    int total_pos = 0;
    for (const auto& pr : proj) total_pos += pr.second;
    Split best;
    int pos = 0;
    for (int i = 1; i < n; ++i) {
      pos += proj[i - 1].second;
      if (i < minb_ || n - i < minb_ || i > cap_ || n - i > cap_) continue;
      if (proj[i].first - proj[i - 1].first <= 1e-12) continue;
      const double nl = i, nr = n - i;
      const double pr = total_pos - pos;
      const double score = 2.0 * pos * (nl - pos) / nl + 2.0 * pr * (nr - pr) / nr;
      if (score < best.score - 1e-12) {
        best.score = score;
        best.w = w;
        best.t = 0.5 * (proj[i - 1].first + proj[i].first);
      }
    }
    return best;
  }

  double Gini(const std::vector<int>& idx) const {
    double pos = 0;
    for (int i : idx) pos += labels_[i];
    const double n = static_cast<double>(idx.size());
    return n > 0 ? 2.0 * pos * (n - pos) / n : 0.0;
  }

  Split ClassifySplit(const std::vector<int>& idx, bool lookahead) {
    const double parent = Gini(idx);
    const std::vector<VectorXd> dirs = Directions(idx, labels_, lookahead);
    Split best;
    for (const VectorXd& w : dirs) {
      const Split s = SweepGini(idx, w);
      if (s.ok() && s.score < best.score - 1e-12) best = s;
    }
    if (!lookahead) return best.ok() && best.score < parent - kGainTol ? best : Split{};
    if (remaining_ < 2) {
      if (best.ok() && (best.score < parent - kGainTol || (force_ && parent > 0))) return best;
      return {};
    }
    // One-step lookahead: score candidates by the best split available in
    // each child, which also resolves XOR-like data.
    Split ahead;
    if (best.ok()) {
      ahead = best;
      ahead.score = TwoLevelScore(idx, best.w, best.t);
    }
    const int n = static_cast<int>(idx.size());
    auto position = [&](int q) {
      return minb_ + (n - 2 * minb_) * q / (kLookaheadThresholds - 1);
    };
    // Coarse pass over quantiles, then every position around the winner.
    int best_dir = -1, best_q = 0;
    std::vector<double> sorted(n);
    auto try_position = [&](const VectorXd& w, int i) {
      if (i <= 0 || i >= n || i > cap_ || n - i > cap_) return false;
      if (sorted[i] - sorted[i - 1] <= 1e-12) return false;
      const double t = 0.5 * (sorted[i - 1] + sorted[i]);
      const double score = TwoLevelScore(idx, w, t);
      if (score < ahead.score - 1e-12) {
        ahead.score = score;
        ahead.w = w;
        ahead.t = t;
        return true;
      }
      return false;
    };
    auto project = [&](const VectorXd& w) {
      for (int t = 0; t < n; ++t) sorted[t] = u_.row(idx[t]).dot(w);
      std::sort(sorted.begin(), sorted.end());
    };
    for (size_t d = 0; d < dirs.size(); ++d) {
      project(dirs[d]);
      for (int q = 0; q < kLookaheadThresholds; ++q) {
        if (try_position(dirs[d], position(q))) {
          best_dir = static_cast<int>(d);
          best_q = q;
        }
      }
    }
    if (best_dir >= 0) {
      project(dirs[best_dir]);
      const int lo = position(std::max(0, best_q - 1));
      const int hi = position(std::min(kLookaheadThresholds - 1, best_q + 1));
      for (int i = lo; i <= hi; ++i) try_position(dirs[best_dir], i);
    }
    if (ahead.ok() && ahead.score < parent - kGainTol) return ahead;
    if (best.ok() && (best.score < parent - kGainTol || (force_ && parent > 0))) return best;
    return {};
  }

  // Gini after splitting at (w, t) and then splitting each child greedily.
  double TwoLevelScore(const std::vector<int>& idx, const VectorXd& w, double t) {
    std::vector<int> left, right;
    Partition(idx, w, t, &left, &right);
    if (static_cast<int>(left.size()) < minb_ || static_cast<int>(right.size()) < minb_) {
      return std::numeric_limits<double>::infinity();
    }
    const int saved_cap = cap_;
    cap_ = std::numeric_limits<int>::max();
    double score = 0.0;
    for (const auto* side : {&left, &right}) {
      Split child;
      if (static_cast<int>(side->size()) >= 2 * minb_ && Gini(*side) > 0) {
        child = ClassifySplit(*side, false);
      }
      score += child.ok() ? child.score : Gini(*side);
    }
    cap_ = saved_cap;
    return score;
  }

  Split RegressSplit(const std::vector<int>& idx) {
    const int n = static_cast<int>(idx.size());
    const int p = static_cast<int>(u_.cols());
    MatrixXd un(n, p);
    VectorXd y(n);
    for (int t = 0; t < n; ++t) {
      un.row(t) = u_.row(idx[t]);
      y[t] = targets_[idx[t]];
    }
    y.array() -= y.mean();
    const auto [coef, parent_sse] = FitLinear(un, y);
    if (parent_sse <= 1e-24 * std::max(1.0, y.squaredNorm())) return {};
    // Residual signs drive the discriminant candidates.
    const VectorXd resid = y - (coef[0] + (un * coef.tail(p)).array()).matrix();
    std::vector<int> sign(u_.rows(), 0);
    for (int t = 0; t < n; ++t) sign[idx[t]] = resid[t] > 0 ? 1 : 0;
    const std::vector<VectorXd> dirs = Directions(idx, sign, true);
    Split best;
    for (const VectorXd& w : dirs) {
      const Split s = SweepSse(un, y, w);
      if (s.ok() && s.score < best.score - 1e-12 * parent_sse) best = s;
    }
    if (best.ok() && best.score < parent_sse * (1.0 - 1e-9)) return best;
    return {};
  }

  // Sum of the two children's least-squares residuals at up to 128
  // thresholds along w, from prefix normal equations.
  Split SweepSse(const MatrixXd& un, const VectorXd& y, const VectorXd& w) const {
    const int n = static_cast<int>(un.rows()), p = static_cast<int>(un.cols());
    std::vector<std::pair<double, int>> proj(n);
    for (int t = 0; t < n; ++t) proj[t] = {un.row(t).dot(w), t};
    std::sort(proj.begin(), proj.end());
    std::vector<int> candidates;
    for (int i = std::max(1, minb_); i <= n - std::max(1, minb_); ++i) {
      if (i > cap_ || n - i > cap_) continue;
      if (proj[i].first - proj[i - 1].first > 1e-12) candidates.push_back(i);
    }
    if (candidates.empty()) return {};
    if (static_cast<int>(candidates.size()) > kMaxRegressionThresholds) {
      std::vector<int> thinned;
      for (int q = 0; q < kMaxRegressionThresholds; ++q) {
        thinned.push_back(candidates[static_cast<size_t>(q) * (candidates.size() - 1) /
                                     (kMaxRegressionThresholds - 1)]);
      }
      candidates = std::move(thinned);
    }
    const int m = p + 1;
    MatrixXd g_total = MatrixXd::Zero(m, m);
    VectorXd c_total = VectorXd::Zero(m);
    double yy_total = 0.0;
    std::vector<VectorXd> z(n);
    for (int t = 0; t < n; ++t) {
      const int r = proj[t].second;
      z[t].resize(m);
      z[t][0] = 1.0;
      z[t].tail(p) = un.row(r).transpose();
      g_total += z[t] * z[t].transpose();
      c_total += y[r] * z[t];
      yy_total += y[r] * y[r];
    }
    auto sse = [&](const MatrixXd& g, const VectorXd& c, double yy) {
      MatrixXd reg = g;
      reg.diagonal().array() += 1e-10 * (1.0 + g.trace());
      const VectorXd b = reg.ldlt().solve(c);
      return std::max(0.0, yy - 2.0 * b.dot(c) + b.dot(g * b));
    };
    MatrixXd g = MatrixXd::Zero(m, m);
    VectorXd c = VectorXd::Zero(m);
    double yy = 0.0;
    int filled = 0;
    Split best;
    for (int i : candidates) {
      for (; filled < i; ++filled) {
        const int r = proj[filled].second;
        g += z[filled] * z[filled].transpose();
        c += y[r] * z[filled];
        yy += y[r] * y[r];
      }
      const double score = sse(g, c, yy) + sse(g_total - g, c_total - c, yy_total - yy);
      if (score < best.score) {
        best.score = score;
        best.w = w;
        best.t = 0.5 * (proj[i - 1].first + proj[i].first);
      }
    }
    return best;
  }

  const MatrixXd& u_;
  TreeParams params_;
  std::vector<int> labels_;
  VectorXd targets_;
  std::mt19937_64 rng_;
  int minb_;
  int remaining_ = 0;   // depth left below the current node
  int cap_ = 0;         // largest child allowed at the current node
  bool force_ = false;  // split impure nodes even without gain
};

// Loss of a node collapsed to a leaf, on the normalized scale of the tree
// loss (misclassified fraction, or SSE over SST).
struct LeafLoss {
  const MatrixXd& x;
  const std::vector<bool>* labels;
  const VectorXd* targets;
  double denom;

  double operator()(const std::vector<int>& idx) const {
    if (idx.empty()) return 0.0;
    if (labels) {
      int pos = 0;
      for (int i : idx) pos += (*labels)[i];
      const int n = static_cast<int>(idx.size());
      return std::min(pos, n - pos) / denom;
    }
    MatrixXd sub(idx.size(), x.cols());
    VectorXd y(idx.size());
    for (size_t t = 0; t < idx.size(); ++t) {
      sub.row(t) = x.row(idx[t]);
      y[t] = (*targets)[idx[t]];
    }
    const Scaling s = Scaling::Of(sub);
    const double mean = y.mean();
    return FitLinear(s.Apply(sub), y.array() - mean).second / denom;
  }
};

void ConvertSplits(BuildNode* node, const Scaling& scaling) {
  if (node->leaf()) return;
  scaling.ToOriginal(node->w, node->t, &node->alpha, &node->beta);
  ConvertSplits(node->left.get(), scaling);
  ConvertSplits(node->right.get(), scaling);
}

// Returns (loss, splits) of the pruned subtree.
std::pair<double, int> Prune(BuildNode* node, const std::vector<int>& idx, const MatrixXd& x,
                             const LeafLoss& leaf_loss, double complexity) {
  const double as_leaf = leaf_loss(idx);
  if (node->leaf()) return {as_leaf, 0};
  std::vector<int> left, right;
  for (int i : idx) (x.row(i).dot(node->alpha) <= node->beta ? left : right).push_back(i);
  const auto [ll, ls] = Prune(node->left.get(), left, x, leaf_loss, complexity);
  const auto [rl, rs] = Prune(node->right.get(), right, x, leaf_loss, complexity);
  const int splits = ls + rs + 1;
  if (as_leaf <= ll + rl + complexity * splits + 1e-15) {
    node->left.reset();
    node->right.reset();
    return {as_leaf, 0};
  }
  return {ll + rl, splits};
}

void Flatten(const BuildNode* node, int depth, std::vector<TreeNode>* out) {
  const int index = static_cast<int>(out->size());
  out->emplace_back();
  (*out)[index].depth = depth;
  if (node->leaf()) return;
  (*out)[index].alpha = node->alpha;
  (*out)[index].beta = node->beta;
  (*out)[index].left = index + 1;
  Flatten(node->left.get(), depth + 1, out);
  (*out)[index].right = static_cast<int>(out->size());
  Flatten(node->right.get(), depth + 1, out);
}

// Routes the training data and fills leaf payloads.
void FillLeaves(HyperplaneTree* tree, const MatrixXd& x, const std::vector<bool>* labels,
                const VectorXd* targets) {
  const int count = static_cast<int>(tree->nodes.size());
  std::vector<std::vector<int>> routed(count);
  for (int i = 0; i < x.rows(); ++i) routed[tree->Route(x.row(i).transpose())].push_back(i);
  tree->leaf_points.assign(count, MatrixXd());
  tree->leaf_targets.assign(count, VectorXd());
  for (int v = 0; v < count; ++v) {
    TreeNode& node = tree->nodes[v];
    if (!node.is_leaf()) continue;
    const auto& idx = routed[v];
    node.count = static_cast<int>(idx.size());
    MatrixXd pts(idx.size(), x.cols());
    VectorXd ys(idx.size());
    int pos = 0;
    for (size_t t = 0; t < idx.size(); ++t) {
      pts.row(t) = x.row(idx[t]);
      if (labels) {
        pos += (*labels)[idx[t]];
        ys[t] = (*labels)[idx[t]] ? 1.0 : 0.0;
      } else {
        ys[t] = (*targets)[idx[t]];
      }
    }
    if (labels) {
      node.feasible = 2 * pos > node.count;
    } else {
      node.weights = VectorXd::Zero(x.cols());
      node.intercept = 0.0;
      if (!idx.empty()) {
        const Scaling s = Scaling::Of(pts);
        const double mean = ys.mean();
        const VectorXd coef = FitLinear(s.Apply(pts), ys.array() - mean).first;
        node.intercept = mean + coef[0];
        for (int k = 0; k < x.cols(); ++k) {
          if (s.range[k] > 0) {
            node.weights[k] = coef[k + 1] / s.range[k];
            node.intercept -= coef[k + 1] * s.lower[k] / s.range[k];
          }
        }
      }
    }
    tree->leaf_points[v] = std::move(pts);
    tree->leaf_targets[v] = std::move(ys);
  }
}

HyperplaneTree Train(const MatrixXd& x, const std::vector<bool>* labels, const VectorXd* targets,
                     const TreeParams& params, uint64_t seed) {
  if (params.max_depth < 1) throw TreeError("max depth must be at least 1");
  const int n = static_cast<int>(x.rows());
  const Scaling scaling = Scaling::Of(x);
  const MatrixXd u = scaling.Apply(x);
  std::vector<int> cls(n, 0);
  VectorXd y = VectorXd::Zero(n);
  double denom = n;
  if (labels) {
    for (int i = 0; i < n; ++i) cls[i] = (*labels)[i] ? 1 : 0;
  } else {
    y = *targets;
    denom = (y.array() - y.mean()).square().sum();
  }
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  HyperplaneTree best;
  double best_cost = std::numeric_limits<double>::infinity();
  int best_splits = 0;
  const int restarts = std::max(1, params.tree_restarts);
  for (int r = 0; r < restarts; ++r) {
    std::unique_ptr<BuildNode> root;
    if (!labels && denom <= 0.0) {
      root = std::make_unique<BuildNode>();  // constant targets
    } else {
      Trainer trainer(u, params, cls, y, MixSeed(seed, static_cast<uint64_t>(r)));
      root = trainer.Grow(all, 0);
    }
    ConvertSplits(root.get(), scaling);
    const LeafLoss loss{x, labels, targets, denom > 0 ? denom : 1.0};
    const auto [value, splits] = Prune(root.get(), all, x, loss, params.complexity);
    const double cost = value + params.complexity * splits;
    if (cost < best_cost - 1e-15 || (cost <= best_cost + 1e-15 && splits < best_splits)) {
      HyperplaneTree tree;
      tree.mode = params.mode;
      tree.dim = static_cast<int>(x.cols());
      Flatten(root.get(), 0, &tree.nodes);
      best = std::move(tree);
      best_cost = cost;
      best_splits = splits;
    }
    if (!labels && denom <= 0.0) break;
  }
  FillLeaves(&best, x, labels, targets);
  return best;
}

}  // namespace

int HyperplaneTree::Route(const Eigen::VectorXd& x) const {
  int v = 0;
  while (!nodes[v].is_leaf()) v = nodes[v].alpha.dot(x) <= nodes[v].beta ? nodes[v].left : nodes[v].right;
  return v;
}

bool HyperplaneTree::Classify(const Eigen::VectorXd& x) const { return nodes[Route(x)].feasible; }

double HyperplaneTree::Regress(const Eigen::VectorXd& x) const {
  const TreeNode& leaf = nodes[Route(x)];
  return leaf.weights.dot(x) + leaf.intercept;
}

std::vector<int> HyperplaneTree::Leaves() const {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(nodes.size()); ++v) {
    if (nodes[v].is_leaf()) out.push_back(v);
  }
  return out;
}

std::vector<int> HyperplaneTree::FeasibleLeaves() const {
  std::vector<int> out;
  for (int v : Leaves()) {
    if (nodes[v].feasible) out.push_back(v);
  }
  return out;
}

std::vector<int> HyperplaneTree::InfeasibleLeaves() const {
  std::vector<int> out;
  for (int v : Leaves()) {
    if (!nodes[v].feasible) out.push_back(v);
  }
  return out;
}

int HyperplaneTree::num_splits() const {
  return static_cast<int>(nodes.size() - Leaves().size());
}

int HyperplaneTree::Depth() const {
  int d = 0;
  for (const auto& node : nodes) d = std::max(d, node.depth);
  return d;
}

std::vector<LeafPolyhedron> HyperplaneTree::LeafPolyhedra() const {
  std::vector<LeafPolyhedron> out;
  LeafPolyhedron path;
  std::function<void(int)> walk = [&](int v) {
    if (nodes[v].is_leaf()) {
      path.leaf = v;
      out.push_back(path);
      return;
    }
    path.minus.push_back(v);
    walk(nodes[v].left);
    path.minus.pop_back();
    path.plus.push_back(v);
    walk(nodes[v].right);
    path.plus.pop_back();
  };
  if (!nodes.empty()) walk(0);
  return out;
}

nlohmann::ordered_json HyperplaneTree::ToJson() const {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["mode"] = mode == TreeMode::kClassify ? "classify" : "regress";
  j["dim"] = dim;
  auto& list = j["nodes"] = nlohmann::ordered_json::array();
  for (size_t v = 0; v < nodes.size(); ++v) {
    const TreeNode& node = nodes[v];
    nlohmann::ordered_json n;
    n["id"] = v + 1;
    if (node.is_leaf()) {
      n["leaf"] = true;
      n["count"] = node.count;
      if (mode == TreeMode::kClassify) {
        n["feasible"] = node.feasible;
      } else {
        n["weights"] = std::vector<double>(node.weights.data(), node.weights.data() + node.weights.size());
        n["intercept"] = node.intercept;
      }
    } else {
      n["alpha"] = std::vector<double>(node.alpha.data(), node.alpha.data() + node.alpha.size());
      n["beta"] = node.beta;
      n["left"] = node.left + 1;
      n["right"] = node.right + 1;
    }
    list.push_back(std::move(n));
  }
  return j;
}

HyperplaneTree HyperplaneTree::FromJson(const nlohmann::json& j) {
  if (j.value("version", 0) != 1) throw TreeError("unsupported tree version");
  HyperplaneTree tree;
  const std::string mode = j.at("mode").get<std::string>();
  if (mode != "classify" && mode != "regress") throw TreeError("unknown tree mode '" + mode + "'");
  tree.mode = mode == "classify" ? TreeMode::kClassify : TreeMode::kRegress;
  tree.dim = j.at("dim").get<int>();
  auto vec = [&](const nlohmann::json& a) {
    const auto v = a.get<std::vector<double>>();
    if (static_cast<int>(v.size()) != tree.dim) throw TreeError("vector length differs from dim");
    return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), tree.dim));
  };
  std::vector<TreeNode> preorder;
  for (const auto& n : j.at("nodes")) {
    TreeNode node;
    if (n.value("leaf", false)) {
      node.count = n.value("count", 0);
      if (tree.mode == TreeMode::kClassify) {
        node.feasible = n.at("feasible").get<bool>();
      } else {
        node.weights = vec(n.at("weights"));
        node.intercept = n.at("intercept").get<double>();
      }
    } else {
      node.alpha = vec(n.at("alpha"));
      node.beta = n.at("beta").get<double>();
    }
    preorder.push_back(std::move(node));
  }
  HyperplaneTree built = FromPreorder(tree.mode, tree.dim, std::move(preorder));
  // Stored child ids must agree with the preorder layout.
  const auto& list = j.at("nodes");
  for (size_t v = 0; v < built.nodes.size(); ++v) {
    if (built.nodes[v].is_leaf()) continue;
    if (list[v].at("left").get<int>() != built.nodes[v].left + 1 ||
        list[v].at("right").get<int>() != built.nodes[v].right + 1) {
      throw TreeError("child ids are not in preorder");
    }
  }
  return built;
}

HyperplaneTree HyperplaneTree::FromPreorder(TreeMode mode, int dim,
                                            std::vector<TreeNode> preorder) {
  HyperplaneTree tree;
  tree.mode = mode;
  tree.dim = dim;
  tree.nodes = std::move(preorder);
  const int count = static_cast<int>(tree.nodes.size());
  std::function<int(int, int)> link = [&](int v, int depth) -> int {
    if (v >= count) throw TreeError("preorder node list is truncated");
    TreeNode& node = tree.nodes[v];
    node.depth = depth;
    if (node.alpha.size() == 0) {
      node.left = node.right = -1;
      return v + 1;
    }
    if (node.alpha.size() != dim) throw TreeError("split dimension differs from dim");
    node.left = v + 1;
    const int next = link(v + 1, depth + 1);
    tree.nodes[v].right = next;
    return link(next, depth + 1);
  };
  if (count == 0 || link(0, 0) != count) throw TreeError("preorder node list is malformed");
  tree.leaf_points.assign(count, Eigen::MatrixXd());
  tree.leaf_targets.assign(count, Eigen::VectorXd());
  return tree;
}

HyperplaneTree TrainClassifier(const Eigen::MatrixXd& points, const std::vector<bool>& labels,
                               const TreeParams& params, uint64_t seed) {
  const auto pos = std::count(labels.begin(), labels.end(), true);
  if (pos == 0 || pos == static_cast<long>(labels.size())) {
    throw TreeError("classifier needs both feasible and infeasible samples");
  }
  TreeParams p = params;
  p.mode = TreeMode::kClassify;
  return Train(points, &labels, nullptr, p, seed);
}

HyperplaneTree TrainRegressor(const Eigen::MatrixXd& points, const Eigen::VectorXd& targets,
                              const TreeParams& params, uint64_t seed) {
  if (points.rows() == 0) throw TreeError("regressor needs samples");
  TreeParams p = params;
  p.mode = TreeMode::kRegress;
  return Train(points, nullptr, &targets, p, seed);
}

double MisclassificationError(const HyperplaneTree& tree, const Eigen::MatrixXd& points,
                              const std::vector<bool>& labels) {
  int wrong = 0;
  for (int i = 0; i < points.rows(); ++i) {
    wrong += tree.Classify(points.row(i).transpose()) != labels[i];
  }
  return static_cast<double>(wrong) / static_cast<double>(points.rows());
}

double OneMinusR2(const HyperplaneTree& tree, const Eigen::MatrixXd& points,
                  const Eigen::VectorXd& targets) {
  double sse = 0.0;
  for (int i = 0; i < points.rows(); ++i) {
    const double r = tree.Regress(points.row(i).transpose()) - targets[i];
    sse += r * r;
  }
  const double sst = (targets.array() - targets.mean()).square().sum();
  if (sst <= 0.0) return sse <= 0.0 ? 0.0 : 1.0;
  return sse / sst;
}

}  // namespace treegopt
