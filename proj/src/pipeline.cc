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

#include "treegopt/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>

#include "treegopt/seed.h"

namespace treegopt {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

// Regression data for `body` over the box of `vars`: boundary and OLH
// samples, rows whose evaluation failed dropped, values negated when asked.
LabeledSampleSet RegressionSamples(const StandardFormProblem& problem, const std::string& name,
                                   const Expression& body,
                                   const PipelineConfig& config, uint64_t seed, bool negate,
                                   SamplingStats* stats) {
  const NonlinearConstraint c = MakeConstraint(name, body);
  const Box box = ActiveBox(problem, c.active_vars);
  const int p = box.dim();
  const int base = config.sampling.base_samples > 0 ? config.sampling.base_samples
                                                    : std::max(400, 100 * p);
  LabeledSampleSet data =
      EvaluateConstraint(c, BoundarySamples(box, config.sampling.corner_cap, MixSeed(seed, 3)));
  stats->corners = data.size();
  OlhStats olh_stats;
  data.Merge(EvaluateConstraint(
      c, OlhSamples(box, base, MixSeed(seed, 5), config.sampling.olh, &olh_stats)));
  stats->olh = data.size() - stats->corners;
  stats->olh_stats = olh_stats;
  LabeledSampleSet kept;
  kept.samples.box = box;
  std::vector<int> rows;
  for (int i = 0; i < data.size(); ++i) {
    if (data.has_value(i)) rows.push_back(i);
  }
  kept.samples.points.resize(static_cast<Eigen::Index>(rows.size()), p);
  for (size_t r = 0; r < rows.size(); ++r) {
    kept.samples.points.row(static_cast<Eigen::Index>(r)) = data.samples.points.row(rows[r]);
    const double v = negate ? -data.values[rows[r]] : data.values[rows[r]];
    kept.values.push_back(v);
    kept.labels.push_back(v >= 0);
  }
  return kept;
}

Eigen::VectorXd Targets(const LabeledSampleSet& data) {
  return Eigen::Map<const Eigen::VectorXd>(data.values.data(),
                                           static_cast<Eigen::Index>(data.values.size()));
}

void TrainRegressorSurrogate(Surrogate& s, const PipelineConfig& config, uint64_t seed) {
  if (s.data.size() == 0) throw PipelineError("sample", s.name + ": no evaluable samples");
  const Eigen::VectorXd y = Targets(s.data);
  s.tree = TrainRegressor(s.data.samples.points, y, config.regressor, seed);
  s.loss = OneMinusR2(*s.tree, s.data.samples.points, y);
}

RestartReport::SurrogateSummary Summarize(const Surrogate& s) {
  RestartReport::SurrogateSummary out;
  out.name = s.name;
  out.role = ToString(s.role);
  out.samples = s.data.size();
  out.feasible = s.data.num_feasible();
  out.corners = s.sampling.corners;
  out.olh = s.sampling.olh;
  out.knn = s.sampling.knn;
  if (s.tree) {
    out.depth = s.tree->Depth();
    out.leaves = static_cast<int>(s.tree->Leaves().size());
    out.feasible_leaves = static_cast<int>(s.tree->FeasibleLeaves().size());
  }
  out.loss = s.loss;
  return out;
}

SolveResult SolveInstance(const MilpInstance& instance, const PipelineConfig& config) {
  if (config.external) {
    try {
      return ExternalSolve(instance, *config.external);
    } catch (const std::exception& e) {
      throw PipelineError("milp", e.what());
    }
  }
  return SolveMilp(instance, config.milp);
}

bool HasPoint(const SolveResult& r) {
  return !r.x.empty() &&
         (r.status == SolveStatus::kOptimal || r.status == SolveStatus::kIterationLimit);
}

RestartReport RunRestart(const StandardFormProblem& original, const StandardFormProblem& bounded,
                         const PipelineConfig& config, int restart) {
  RestartReport out;
  out.restart = restart;
  out.seed = MixSeed(config.seed, static_cast<uint64_t>(restart));
  const auto start = Clock::now();
  try {
    SolveResult milp;
    SurrogateModel model;
    for (int attempt = 0; attempt < 2; ++attempt) {
      out.attempts = attempt + 1;
      const int passes = config.sampling.knn_passes * (attempt + 1);
      const uint64_t seed = attempt == 0 ? out.seed : MixSeed(out.seed, 0x7e7);
      auto t = Clock::now();
      try {
        model = BuildSurrogateModel(bounded, config, seed, passes);
      } catch (const EncodeError& e) {
        // A tree without a feasible leaf is an empty surrogate region.
        out.times.sample_train += Seconds(t);
        if (attempt == 1) throw;
        continue;
      }
      out.times.sample_train += Seconds(t);
      t = Clock::now();
      milp = SolveInstance(model.milp, config);
      out.times.milp += Seconds(t);
      if (HasPoint(milp)) break;
    }
    out.surrogates.clear();
    for (const Surrogate& s : model.surrogates) out.surrogates.push_back(Summarize(s));
    if (model.objective) out.surrogates.push_back(Summarize(*model.objective));
    out.counts = model.counts;
    out.milp_columns = model.milp.model.num_cols();
    out.milp_rows = model.milp.model.num_rows();
    out.milp_status = ToString(milp.status);
    out.milp_nodes = milp.nodes;
    if (!HasPoint(milp)) {
      out.failed_stage = "milp";
      out.message = "surrogate MILP " + out.milp_status + " after resampling";
      if (!milp.message.empty()) out.message += ": " + milp.message;
      out.times.total = Seconds(start);
      return out;
    }
    out.milp_objective = milp.objective;
    out.milp_bound = milp.bound;
    out.milp_point.assign(milp.x.begin(), milp.x.begin() + model.milp.num_original);
    const ViolationReport at_milp = CheckSolution(original, out.milp_point, config.pgd.phi);
    out.mio_violation = at_milp.max_violation;
    try {
      out.mio_objective = original.objective.Evaluate(out.milp_point);
    } catch (const std::exception&) {
      out.mio_objective = std::numeric_limits<double>::quiet_NaN();
    }
    const auto t = Clock::now();
    out.repair = Repair(bounded, out.milp_point, config.pgd);
    out.times.repair = Seconds(t);
  } catch (const PipelineError& e) {
    out.failed_stage = e.stage();
    out.message = e.what();
  } catch (const EncodeError& e) {
    out.failed_stage = "encode";
    out.message = e.what();
  } catch (const TreeError& e) {
    out.failed_stage = "train";
    out.message = e.what();
  }
  out.times.total = Seconds(start);
  return out;
}

// Feasible before infeasible, then lower objective, then lower violation;
// ties keep the earlier restart.
bool Better(const RestartReport& a, const RestartReport& b) {
  const bool ok_a = a.failed_stage.empty(), ok_b = b.failed_stage.empty();
  if (ok_a != ok_b) return ok_a;
  if (!ok_a) return false;
  if (a.repair.feasible != b.repair.feasible) return a.repair.feasible;
  if (a.repair.feasible) return a.repair.objective < b.repair.objective;
  return a.repair.max_violation < b.repair.max_violation;
}

nlohmann::ordered_json Number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

nlohmann::ordered_json Numbers(const std::vector<double>& v) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (double x : v) out.push_back(Number(x));
  return out;
}

nlohmann::ordered_json TimesJson(const StageTimes& t) {
  return {{"prepare", t.prepare}, {"sample_train", t.sample_train},
          {"milp", t.milp},       {"repair", t.repair},             {"total", t.total}};
}

}  // namespace

PipelineError::PipelineError(std::string stage, const std::string& what)
    : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

const char* ToString(SurrogateRole role) {
  switch (role) {
    case SurrogateRole::kInequality: return "inequality";
    case SurrogateRole::kEquality: return "equality";
    case SurrogateRole::kSeparable: return "separable";
    case SurrogateRole::kObjective: return "objective";
    case SurrogateRole::kOmitted: return "omitted";
  }
  return "?";
}

StandardFormProblem PrepareProblem(const StandardFormProblem& problem) {
  StandardFormProblem p = Standardize(problem);
  try {
    return BoundNonlinearVariables(std::move(p));
  } catch (const BoundError& e) {
    throw PipelineError("bound", e.what());
  }
}

SurrogateModel BuildSurrogateModel(const StandardFormProblem& bounded, const PipelineConfig& config,
                                   uint64_t seed, int knn_passes) {
  SurrogateModel model;
  model.problem = bounded;
  SamplingOptions sampling = config.sampling;
  sampling.knn_passes = knn_passes;
  const int n = static_cast<int>(bounded.nonlinear.size());
  std::vector<MilpFragment> fragments;
  std::vector<std::string> omitted;
  for (int i = 0; i < n; ++i) {
    const NonlinearConstraint& c = bounded.nonlinear[i];
    const uint64_t sample_seed = MixSeed(seed, 2 * static_cast<uint64_t>(i));
    const uint64_t train_seed = MixSeed(seed, 2 * static_cast<uint64_t>(i) + 1);
    Surrogate s;
    s.name = c.name;
    const bool regress = c.use_regressor && c.separable.has_value() &&
                         c.sense == ConstraintSense::kGreaterEqualZero;
    if (regress) {
      // a.x + b + r(x) >= 0 as a.x + b >= g(x) with g = -r.
      s.role = SurrogateRole::kSeparable;
      s.vars = c.separable->remainder.Variables();
      s.data = RegressionSamples(bounded, c.name, c.separable->remainder, config,
                                 sample_seed, true, &s.sampling);
      TrainRegressorSurrogate(s, config, train_seed);
      fragments.push_back(EncodeSeparable(*s.tree, ActiveBox(bounded, s.vars), s.vars,
                                          c.separable->affine, config.encoder, c.name));
    } else {
      s.role = c.sense == ConstraintSense::kEqualZero ? SurrogateRole::kEquality
                                                      : SurrogateRole::kInequality;
      s.vars = c.active_vars;
      const Box box = ActiveBox(bounded, s.vars);
      s.data = SampleConstraint(c, box, sampling, sample_seed, &s.sampling);
      if (s.data.num_feasible() == 0) {
        throw PipelineError("sample", c.name + ": no feasible sample in the box");
      }
      if (s.role == SurrogateRole::kInequality && s.data.num_feasible() == s.data.size()) {
        s.role = SurrogateRole::kOmitted;
        omitted.push_back(c.name);
      } else {
        s.tree = TrainClassifier(s.data.samples.points, s.data.labels, config.classifier,
                                 train_seed);
        s.loss = MisclassificationError(*s.tree, s.data.samples.points, s.data.labels);
        fragments.push_back(s.role == SurrogateRole::kEquality
                                ? EncodeEquality(*s.tree, box, s.vars, config.encoder, c.name)
                                : EncodeInequality(*s.tree, box, s.vars, config.encoder, c.name));
      }
    }
    model.surrogates.push_back(std::move(s));
  }
  std::optional<MilpFragment> objective;
  if (!bounded.objective.is_linear()) {
    Surrogate s;
    s.name = "objective";
    s.role = SurrogateRole::kObjective;
    s.vars = bounded.objective.nonlinear->Variables();
    s.data = RegressionSamples(bounded, s.name, *bounded.objective.nonlinear, config,
                               MixSeed(seed, 2 * static_cast<uint64_t>(n)), false, &s.sampling);
    TrainRegressorSurrogate(s, config, MixSeed(seed, 2 * static_cast<uint64_t>(n) + 1));
    objective = EncodeObjective(*s.tree, ActiveBox(bounded, s.vars), s.vars, config.encoder,
                                s.name);
    model.objective = std::move(s);
  }
  std::vector<RoleTree> roles;
  for (const Surrogate& s : model.surrogates) {
    if (!s.tree) continue;
    roles.push_back({&*s.tree, s.role == SurrogateRole::kEquality ? TreeRole::kEquality
                                                                  : TreeRole::kInequality});
  }
  if (model.objective) roles.push_back({&*model.objective->tree, TreeRole::kObjective});
  model.counts = CountAux(roles);
  model.milp = Assemble(bounded, fragments, objective ? &*objective : nullptr, omitted);
  return model;
}

RunReport SolveGlobal(const StandardFormProblem& problem, const PipelineConfig& config) {
  const auto start = Clock::now();
  RunReport report;
  report.problem = problem.name;
  report.names = problem.VariableNames();
  const StandardFormProblem standard = Standardize(problem);
  if (standard.nonlinear.empty() && standard.objective.is_linear()) {
    report.short_circuit = true;
    const SolveResult r = SolveInstance(Assemble(standard, {}), config);
    report.times.milp = Seconds(start);
    if (HasPoint(r)) {
      report.x.assign(r.x.begin(), r.x.begin() + standard.num_vars());
    }
  } else {
    auto t = Clock::now();
    const StandardFormProblem bounded = PrepareProblem(problem);
    report.times.prepare = Seconds(t);
    const int k = std::max(1, config.restarts);
    std::vector<std::future<RestartReport>> jobs;
    for (int r = 0; r < k; ++r) {
      jobs.push_back(std::async(std::launch::async, RunRestart, std::cref(problem),
                                std::cref(bounded), std::cref(config), r));
    }
    for (auto& job : jobs) report.restarts.push_back(job.get());
    for (int r = 0; r < k; ++r) {
      const RestartReport& rr = report.restarts[r];
      report.times.sample_train += rr.times.sample_train;
      report.times.milp += rr.times.milp;
      report.times.repair += rr.times.repair;
      if (!rr.failed_stage.empty()) continue;
      if (report.best_restart < 0 || Better(rr, report.restarts[report.best_restart])) {
        report.best_restart = r;
      }
    }
    if (report.best_restart >= 0) report.x = report.restarts[report.best_restart].repair.x;
  }
  if (report.x.empty()) {
    report.status = report.short_circuit ? "infeasible" : "error";
  } else {
    report.check = CheckSolution(problem, report.x, config.pgd.phi);
    report.max_violation = report.check.max_violation;
    report.feasible = report.check.feasible;
    report.objective = problem.objective.Evaluate(report.x);
    report.status = report.feasible ? "feasible" : "infeasible";
  }
  report.times.total = Seconds(start);
  return report;
}

nlohmann::ordered_json ReportToJson(const RunReport& report, bool include_timings) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["problem"] = report.problem;
  j["status"] = report.status;
  j["short_circuit"] = report.short_circuit;
  j["best_restart"] = report.best_restart;
  j["objective"] = report.x.empty() ? ordered_json(nullptr) : Number(report.objective);
  j["max_violation"] = report.x.empty() ? ordered_json(nullptr) : Number(report.max_violation);
  j["feasible"] = report.feasible;
  ordered_json point = ordered_json::object();
  for (size_t k = 0; k < report.x.size(); ++k) point[report.names[k]] = Number(report.x[k]);
  j["point"] = point;
  ordered_json constraints = ordered_json::array();
  for (size_t i = 0; i < report.check.names.size(); ++i) {
    constraints.push_back({{"name", report.check.names[i]},
                           {"equality", static_cast<bool>(report.check.equality[i])},
                           {"value", Number(report.check.values[i])}});
  }
  j["constraints"] = constraints;
  ordered_json restarts = ordered_json::array();
  for (const RestartReport& r : report.restarts) {
    ordered_json rj;
    rj["restart"] = r.restart;
    rj["seed"] = r.seed;
    rj["attempts"] = r.attempts;
    rj["failed_stage"] = r.failed_stage.empty() ? ordered_json(nullptr) : ordered_json(r.failed_stage);
    rj["message"] = r.message;
    ordered_json trees = ordered_json::array();
    for (const auto& s : r.surrogates) {
      trees.push_back({{"name", s.name},         {"role", s.role},
                       {"samples", s.samples},   {"feasible_samples", s.feasible},
                       {"corners", s.corners},   {"olh", s.olh},
                       {"knn", s.knn},           {"depth", s.depth},
                       {"leaves", s.leaves},     {"feasible_leaves", s.feasible_leaves},
                       {"loss", Number(s.loss)}});
    }
    rj["surrogates"] = trees;
    rj["aux"] = {{"binaries", r.counts.binaries},
                 {"continuous", r.counts.continuous},
                 {"constraints", r.counts.constraints},
                 {"worst_case_constraints", r.counts.worst_case_constraints}};
    rj["milp"] = {{"columns", r.milp_columns},
                  {"rows", r.milp_rows},
                  {"status", r.milp_status},
                  {"objective", Number(r.milp_objective)},
                  {"bound", Number(r.milp_bound)},
                  {"nodes", r.milp_nodes},
                  {"point", Numbers(r.milp_point)},
                  {"true_objective", Number(r.mio_objective)},
                  {"max_violation", Number(r.mio_violation)}};
    rj["repair"] = {{"objective", Number(r.repair.objective)},
                    {"max_violation", Number(r.repair.max_violation)},
                    {"feasible", r.repair.feasible},
                    {"converged", r.repair.converged},
                    {"iterations", r.repair.iterations},
                    {"point", Numbers(r.repair.x)},
                    {"warnings", r.repair.warnings}};
    if (include_timings) rj["seconds"] = TimesJson(r.times);
    restarts.push_back(rj);
  }
  j["restarts"] = restarts;
  if (include_timings) j["seconds"] = TimesJson(report.times);
  return j;
}

}  // namespace treegopt
