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

// End-to-end global optimization: standardize, bound, sample, train,
// encode, solve the MILP surrogate and repair the MILP point against the
// original constraints. Restarts rerun sampling and training with derived
// seeds and keep the best result.

#ifndef TREEGOPT_PIPELINE_H_
#define TREEGOPT_PIPELINE_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "treegopt/encoder.h"
#include "treegopt/milp.h"
#include "treegopt/mps.h"
#include "treegopt/problem.h"
#include "treegopt/repair.h"
#include "treegopt/sampler.h"
#include "treegopt/tree.h"

namespace treegopt {

struct PipelineConfig {
  uint64_t seed = 0;
  SamplingOptions sampling;  // base_samples 0 selects max(400, 100 p)
  TreeParams classifier = TreeParams::Classifier();
  TreeParams regressor = TreeParams::Regressor();
  EncoderMode encoder = EncoderMode::kBigMFree;
  MilpOptions milp;
  PgdParams pgd;
  int restarts = 3;
  // Solve the MILP with an external command instead of the internal
  // branch and bound.
  std::optional<ExternalOptions> external;
};

// A stage failure: "bound", "sample", "train", "encode", "milp" or "repair".
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, const std::string& what);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

enum class SurrogateRole { kInequality, kEquality, kSeparable, kObjective, kOmitted };
const char* ToString(SurrogateRole role);

// One approximated function with its samples and tree.
struct Surrogate {
  std::string name;
  SurrogateRole role = SurrogateRole::kInequality;
  std::vector<int> vars;  // global indices of the tree inputs
  LabeledSampleSet data;  // regressors: values hold the targets
  SamplingStats sampling;
  std::optional<HyperplaneTree> tree;
  double loss = 0.0;  // misclassification or 1 - R^2 on the training data
};

struct SurrogateModel {
  StandardFormProblem problem;  // standardized and bounded
  std::vector<Surrogate> surrogates;
  std::optional<Surrogate> objective;
  MilpInstance milp;
  AuxCounts counts;
};

// Samples and trains every nonlinear constraint (and a nonlinear objective)
// of a standardized, bounded problem and assembles the MILP. `knn_passes`
// overrides the sampling option.
SurrogateModel BuildSurrogateModel(const StandardFormProblem& bounded, const PipelineConfig& config,
                                   uint64_t seed, int knn_passes);

// Standardize then bound the variables of nonlinear terms.
StandardFormProblem PrepareProblem(const StandardFormProblem& problem);

struct StageTimes {
  double prepare = 0, sample_train = 0, milp = 0, repair = 0, total = 0;
};

struct RestartReport {
  int restart = 0;
  uint64_t seed = 0;
  int attempts = 0;        // 2 when the MILP was infeasible once
  std::string failed_stage;  // empty on success
  std::string message;
  struct SurrogateSummary {
    std::string name;
    std::string role;
    int samples = 0, feasible = 0, corners = 0, olh = 0, knn = 0;
    int depth = 0, leaves = 0, feasible_leaves = 0;
    double loss = 0.0;
  };
  std::vector<SurrogateSummary> surrogates;
  AuxCounts counts;
  int milp_columns = 0, milp_rows = 0;
  std::string milp_status;
  double milp_objective = 0.0;  // surrogate objective
  double milp_bound = 0.0;
  int milp_nodes = 0;
  std::vector<double> milp_point;
  double mio_objective = 0.0;  // true objective at the MILP point
  double mio_violation = 0.0;
  RepairResult repair;
  StageTimes times;
};

struct RunReport {
  std::string problem;
  std::string status;  // "feasible", "infeasible" or "error"
  bool short_circuit = false;  // no nonlinear terms: solved as a MILP/LP
  int best_restart = -1;
  std::vector<std::string> names;
  std::vector<double> x;
  double objective = 0.0;
  double max_violation = 0.0;
  bool feasible = false;
  ViolationReport check;
  std::vector<RestartReport> restarts;
  StageTimes times;
};

// Runs the pipeline. Throws PipelineError for fatal stage errors (bounding);
// per-restart failures are recorded in the report.
RunReport SolveGlobal(const StandardFormProblem& problem, const PipelineConfig& config);

// Deterministic JSON; wall-clock timings only when asked.
nlohmann::ordered_json ReportToJson(const RunReport& report, bool include_timings = false);

}  // namespace treegopt

#endif  // TREEGOPT_PIPELINE_H_
