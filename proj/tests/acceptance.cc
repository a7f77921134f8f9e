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

// Acceptance checks. Prints one PASS or FAIL line per criterion and exits
// nonzero when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/tree_fixtures.h"
#include "support/vertex_enum.h"
#include "treegopt/encoder.h"
#include "treegopt/pipeline.h"
#include "treegopt/problem_io.h"
#include "treegopt/repair.h"
#include "treegopt/sampler.h"
#include "treegopt/simplex.h"
#include "treegopt/tree.h"

namespace treegopt {
namespace {

using Eigen::VectorXd;
using fixtures::RandomTree;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string DataPath(const std::string& name) {
  return std::string(TREEGOPT_SOURCE_DIR) + "/data/" + name;
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Box UnitBox(int p, double lower = 0.0, double upper = 1.0) {
  return Box{std::vector<double>(p, lower), std::vector<double>(p, upper)};
}

std::vector<int> Iota(int p) {
  std::vector<int> v(p);
  for (int k = 0; k < p; ++k) v[k] = k;
  return v;
}

// Solves the bundled problem and times it.
struct TimedRun {
  RunReport report;
  double seconds = 0.0;
};

TimedRun Solve(const std::string& file, uint64_t seed) {
  const StandardFormProblem p = LoadProblem(DataPath(file)).problem;
  PipelineConfig config;
  config.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  TimedRun run;
  run.report = SolveGlobal(p, config);
  run.seconds = Seconds(start);
  return run;
}

Outcome Demo(const TimedRun& run) {
  const RunReport& r = run.report;
  std::ostringstream os;
  os << "objective " << r.objective << ", violation " << r.check.max_violation << ", "
     << r.restarts.size() << " restarts, " << run.seconds << " s";
  const bool ok = r.status == "feasible" && r.restarts.size() <= 3 &&
                  r.check.max_violation <= 1e-6 && r.objective <= -6.90 && run.seconds <= 60.0;
  return {ok, os.str()};
}

Outcome SpeedReducer(const TimedRun& run) {
  const RunReport& r = run.report;
  const StandardFormProblem p = LoadProblem(DataPath("speed_reducer.json")).problem;
  const ViolationReport check = CheckSolution(p, r.x, 1e-8);
  double worst_loss = 0.0;
  for (const RestartReport& rr : r.restarts) {
    for (const auto& s : rr.surrogates) {
      if (s.role == "objective") worst_loss = std::max(worst_loss, s.loss);
    }
  }
  std::ostringstream os;
  os << "objective " << r.objective << ", violation " << check.max_violation
     << ", objective tree loss " << worst_loss << ", " << run.seconds << " s";
  const bool ok = r.status == "feasible" && check.feasible && r.objective <= 2995.0 &&
                  worst_loss <= 1e-3 && run.seconds <= 120.0;
  return {ok, os.str()};
}

Outcome G5Hyperplane() {
  const StandardFormProblem p = Standardize(LoadProblem(DataPath("speed_reducer.json")).problem);
  const NonlinearConstraint* g5 = nullptr;
  for (const auto& c : p.nonlinear) {
    if (c.name == "g5") g5 = &c;
  }
  if (g5 == nullptr) return {false, "g5 not found"};
  const Box box = ActiveBox(p, g5->active_vars);
  const LabeledSampleSet data = SampleConstraint(*g5, box, {}, 5);
  TreeParams params = TreeParams::Classifier();
  params.max_depth = 1;
  const HyperplaneTree t = TrainClassifier(data.samples.points, data.labels, params, 5);
  const LabeledSampleSet fresh = EvaluateConstraint(*g5, OlhSamples(box, 10000, 99, {0, 0, 0}));
  const double accuracy = 1.0 - MisclassificationError(t, fresh.samples.points, fresh.labels);
  std::ostringstream os;
  os << "depth-1 accuracy " << accuracy << " on " << fresh.size() << " fresh samples";
  return {accuracy >= 0.99, os.str()};
}

// Is the fragment satisfiable at x? Tries every 0/1 assignment of the
// indicator columns and solves an LP for the remaining continuous ones.
bool FeasibleByEnumeration(const MilpFragment& f, const VectorXd& x) {
  const LinearModel& m = f.model;
  std::vector<int> zs;
  for (int j = 0; j < m.num_cols(); ++j) {
    if (m.integer[j]) zs.push_back(j);
  }
  std::vector<bool> discrete_row(m.num_rows());
  for (int r = 0; r < m.num_rows(); ++r) {
    discrete_row[r] = std::all_of(m.rows[r].terms.begin(), m.rows[r].terms.end(),
                                  [&](const auto& t) { return m.integer[t.first] || f.global[t.first] >= 0; });
  }
  std::vector<double> fixed(m.num_cols(), 0.0);
  for (int j = 0; j < m.num_cols(); ++j) {
    if (f.global[j] >= 0) fixed[j] = x[f.global[j]];
  }
  const long combos = 1L << zs.size();
  for (long mask = 0; mask < combos; ++mask) {
    for (size_t i = 0; i < zs.size(); ++i) fixed[zs[i]] = (mask >> i) & 1;
    bool possible = true;
    for (size_t i = 0; i < zs.size() && possible; ++i) {
      possible = fixed[zs[i]] >= m.col_lower[zs[i]] && fixed[zs[i]] <= m.col_upper[zs[i]];
    }
    for (int r = 0; r < m.num_rows() && possible; ++r) {
      if (!discrete_row[r]) continue;
      const double a = m.RowActivity(r, fixed);
      possible = a >= m.rows[r].lower - 1e-9 && a <= m.rows[r].upper + 1e-9;
    }
    if (!possible) continue;
    LinearModel lp = m;
    for (int j = 0; j < m.num_cols(); ++j) {
      lp.integer[j] = false;
      if (m.integer[j] || f.global[j] >= 0) lp.col_lower[j] = lp.col_upper[j] = fixed[j];
    }
    if (SolveLp(lp).ok()) return true;
  }
  return false;
}

double PlaneDistance(const HyperplaneTree& t, const VectorXd& x) {
  double d = INFINITY;
  for (const auto& n : t.nodes) {
    if (!n.is_leaf()) d = std::min(d, std::fabs(n.alpha.dot(x) - n.beta));
  }
  return d;
}

Outcome EncoderEquivalence() {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> pick_p(1, 4), pick_d(1, 3);
  std::uniform_real_distribution<double> u(0, 1);
  int trees = 0, checked = 0, disagreements = 0, tree_mismatch = 0;
  while (trees < 50) {
    const int p = pick_p(rng);
    const HyperplaneTree t = RandomTree(rng, p, pick_d(rng), TreeMode::kClassify);
    if (t.FeasibleLeaves().empty()) continue;
    ++trees;
    const Box box = UnitBox(p);
    const MilpFragment free = EncodeInequality(t, box, Iota(p), EncoderMode::kBigMFree);
    const MilpFragment bigm = EncodeInequality(t, box, Iota(p), EncoderMode::kBigM);
    int points = 0;
    while (points < 200) {
      const VectorXd x = VectorXd::NullaryExpr(p, [&]() { return u(rng); });
      if (PlaneDistance(t, x) < 1e-6) continue;  // on a split: either side is valid
      ++points;
      const bool a = FeasibleByEnumeration(free, x);
      const bool b = FeasibleByEnumeration(bigm, x);
      disagreements += a != b;
      tree_mismatch += a != t.Classify(x);
      ++checked;
    }
  }
  std::ostringstream os;
  os << trees << " trees, " << checked << " points, " << disagreements
     << " disagreements, " << tree_mismatch << " differ from the tree";
  return {disagreements == 0 && tree_mismatch == 0, os.str()};
}

Outcome LocalIdealness() {
  std::mt19937 rng(2025);
  std::uniform_int_distribution<int> pick_p(1, 2), pick_d(1, 2);
  int fragments = 0, vertices = 0, fractional = 0, rays = 0;
  while (fragments < 20) {
    const int p = pick_p(rng);
    const HyperplaneTree t = RandomTree(rng, p, pick_d(rng), TreeMode::kClassify);
    if (t.FeasibleLeaves().empty()) continue;
    ++fragments;
    const MilpFragment f = EncodeInequality(t, UnitBox(p, -0.5, 1.0), Iota(p), EncoderMode::kBigMFree);
    const auto v = testing::EnumerateVertices(f.model);
    rays += v.recession_rays;
    vertices += static_cast<int>(v.vertices.size());
    for (const auto& point : v.vertices) {
      for (int j = 0; j < f.model.num_cols(); ++j) {
        if (f.model.integer[j] && point[j] != 0 && point[j] != 1) {
          ++fractional;
          break;
        }
      }
    }
  }
  std::ostringstream os;
  os << fragments << " fragments, " << vertices << " vertices, " << fractional << " fractional";
  return {fractional == 0 && rays == 0 && vertices > 0, os.str()};
}

VectorXd CentralDifference(const NonlinearConstraint& c, std::vector<double> x, double h) {
  VectorXd g = VectorXd::Zero(static_cast<int>(x.size()));
  for (int k : c.active_vars) {
    const double x0 = x[k];
    x[k] = x0 + h;
    const double up = c.Evaluate(x);
    x[k] = x0 - h;
    const double down = c.Evaluate(x);
    x[k] = x0;
    g[k] = (up - down) / (2 * h);
  }
  return g;
}

Outcome AdGradients() {
  std::mt19937 rng(2026);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  int constraints = 0, points = 0, failures = 0;
  double worst = 0.0;
  for (const char* file : {"demo.json", "speed_reducer.json"}) {
    const StandardFormProblem p = LoadProblem(DataPath(file)).problem;
    for (const auto& c : p.nonlinear) {
      if (!c.is_explicit()) continue;
      ++constraints;
      int done = 0;
      while (done < 100) {
        std::vector<double> x(p.num_vars());
        for (int k = 0; k < p.num_vars(); ++k) {
          x[k] = p.variables[k].lower + u(rng) * (p.variables[k].upper - p.variables[k].lower);
        }
        VectorXd ad, fd;
        try {
          ad = ExpressionGradient(*c.body, x);
          double scale = 1.0;
          for (int k : c.active_vars) scale = std::max(scale, std::fabs(x[k]));
          fd = CentralDifference(c, x, 1e-6 * scale);
        } catch (const DomainError&) {
          continue;
        }
        ++done;
        ++points;
        const double norm = std::max(ad.cwiseAbs().maxCoeff(), 1e-300);
        const double rel = (ad - fd).cwiseAbs().maxCoeff() / norm;
        worst = std::max(worst, rel);
        failures += rel > 1e-5;
      }
    }
  }
  std::ostringstream os;
  os << constraints << " constraints, " << points << " points, worst relative error " << worst;
  return {failures == 0 && constraints > 0, os.str()};
}

Outcome KnnSampler() {
  const std::vector<std::string> vars = {"x1", "x2", "x3"};
  const NonlinearConstraint g1 = MakeConstraint(
      "g1", ParseExpression("0.8*log(x2 + 1) + 0.96*log(x1 - x2 + 1) - 0.8*x3", vars));
  const Box box{{0, 0, 0}, {2, 2, 1}};
  SamplingOptions opt;
  LabeledSampleSet data = EvaluateConstraint(g1, BoundarySamples(box, opt.corner_cap));
  data.Merge(EvaluateConstraint(g1, OlhSamples(box, 400, 11)));
  const SampleSet knn = KnnQuasiNewton(data, 4);
  const LabeledSampleSet eval = EvaluateConstraint(g1, knn);
  int near = 0;
  for (int i = 0; i < eval.size(); ++i) {
    if (eval.has_value(i) && std::fabs(eval.values[i]) < 0.1) ++near;
  }
  const double share = eval.size() > 0 ? static_cast<double>(near) / eval.size() : 0.0;

  VectorXd a(1), b(1);
  a << 0.0;
  b << 1.0;
  bool secant = SecantPoint(a, -1, b, 1)[0] == 0.5 && SecantPoint(a, -1, b, 3)[0] == 0.25 &&
                SecantPoint(a, -2, b, 2)[0] == 0.5;
  try {
    SecantPoint(a, 1, b, 1);
    secant = false;  // same sign has no crossing
  } catch (const std::invalid_argument&) {
  }
  std::ostringstream os;
  os << near << " of " << eval.size() << " points with |g1| < 0.1, secant cases "
     << (secant ? "match" : "differ");
  return {share >= 0.9 && eval.size() > 0 && secant, os.str()};
}

bool IsLatin(const SampleSet& s) {
  const int n = s.size();
  for (int k = 0; k < s.points.cols(); ++k) {
    std::vector<int> hits(n, 0);
    for (int i = 0; i < n; ++i) {
      const double u = (s.points(i, k) - s.box.lower[k]) / s.box.range(k);
      ++hits[std::min(n - 1, static_cast<int>(std::floor(u * n)))];
    }
    if (std::any_of(hits.begin(), hits.end(), [](int h) { return h != 1; })) return false;
  }
  return true;
}

Outcome OlhValidity() {
  int designs = 0, invalid = 0, regressions = 0;
  for (int p = 1; p <= 6; ++p) {
    for (int n : {2, 7, 30, 100}) {
      for (uint64_t seed = 1; seed <= 5; ++seed) {
        Box box = UnitBox(p);
        for (int k = 0; k < p; ++k) box.upper[k] = 1.0 + k;
        OlhStats stats;
        const SampleSet s = OlhSamples(box, n, seed, {}, &stats);
        ++designs;
        invalid += !IsLatin(s);
        regressions += stats.final_fitness < stats.initial_fitness;
      }
    }
  }
  std::ostringstream os;
  os << designs << " designs, " << invalid << " not Latin, " << regressions
     << " with fitness below generation 0";
  return {invalid == 0 && regressions == 0, os.str()};
}

struct LeafWalk {
  int leaves = 0, feasible = 0, path_all = 0, path_feasible = 0;
};

LeafWalk Walk(const HyperplaneTree& t) {
  LeafWalk w;
  std::function<void(int, int)> go = [&](int v, int d) {
    const TreeNode& n = t.nodes[v];
    if (n.left < 0) {
      ++w.leaves;
      w.path_all += d;
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

Outcome CountingFormulas() {
  std::mt19937 rng(2027);
  std::uniform_int_distribution<int> pick_p(1, 4), pick_d(1, 4), pick_i(0, 3), pick_j(0, 2);
  std::bernoulli_distribution has_objective(0.6);
  int mismatches = 0;
  for (int set = 0; set < 100; ++set) {
    std::vector<HyperplaneTree> trees;
    std::vector<TreeRole> roles;
    auto draw = [&](TreeMode mode, TreeRole role) {
      while (true) {
        HyperplaneTree t = RandomTree(rng, pick_p(rng), pick_d(rng), mode);
        const bool no_feasible = t.FeasibleLeaves().empty();
        const bool no_infeasible = t.InfeasibleLeaves().empty();
        if (role == TreeRole::kInequality && no_feasible) continue;
        if (role == TreeRole::kEquality && (no_feasible || no_infeasible)) continue;
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
    long binaries = 0, continuous = 1, constraints = 0;
    for (size_t k = 0; k < trees.size(); ++k) {
      rt.push_back({&trees[k], roles[k]});
      const int p = trees[k].dim;
      const LeafWalk w = Walk(trees[k]);
      switch (roles[k]) {
        case TreeRole::kObjective:
          binaries += w.leaves;
          continuous += w.leaves * (p + 1);
          constraints += w.path_all + w.leaves + 3;
          break;
        case TreeRole::kInequality:
          binaries += w.feasible;
          continuous += w.feasible * p;
          constraints += w.path_feasible + 2;
          break;
        case TreeRole::kEquality:
          binaries += w.leaves;
          continuous += w.leaves * p;
          constraints += w.path_all + 4;
          break;
      }
    }
    const AuxCounts c = CountAux(rt);
    mismatches += c.binaries != binaries || c.continuous != continuous || c.constraints != constraints;
  }
  std::ostringstream os;
  os << "100 tree sets, " << mismatches << " mismatches";
  return {mismatches == 0, os.str()};
}

Outcome Determinism(const TimedRun& first, const TimedRun& second) {
  const std::string a = ReportToJson(first.report).dump(2);
  const std::string b = ReportToJson(second.report).dump(2);
  std::ostringstream os;
  os << "two demo runs, " << a.size() << " bytes, " << (a == b ? "identical" : "different");
  return {a == b, os.str()};
}

Outcome Guard(const std::function<Outcome()>& check) {
  try {
    return check();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

}  // namespace
}  // namespace treegopt

int main() {
  using namespace treegopt;
  TimedRun demo, demo_again, speed_reducer;
  std::string run_error;
  try {
    demo = Solve("demo.json", 1);
    demo_again = Solve("demo.json", 1);
    speed_reducer = Solve("speed_reducer.json", 1);
  } catch (const std::exception& e) {
    run_error = e.what();
  }
  auto with_runs = [&](std::function<Outcome()> f) {
    return [f, &run_error]() -> Outcome {
      if (!run_error.empty()) return {false, "pipeline threw: " + run_error};
      return f();
    };
  };
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"demo example solved", with_runs([&] { return Demo(demo); })},
      {"speed reducer solved", with_runs([&] { return SpeedReducer(speed_reducer); })},
      {"g5 is one hyperplane", G5Hyperplane},
      {"bigM-free and bigM encoders agree", EncoderEquivalence},
      {"inequality relaxations are locally ideal", LocalIdealness},
      {"forward-mode gradients match finite differences", AdGradients},
      {"kNN sampler hugs the boundary", KnnSampler},
      {"optimal Latin hypercube designs are valid", OlhValidity},
      {"auxiliary counts match brute force", CountingFormulas},
      {"same seed gives identical reports", with_runs([&] { return Determinism(demo, demo_again); })},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const Outcome o = Guard(criteria[i].second);
    failed += !o.pass;
    std::printf("[%s] %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
