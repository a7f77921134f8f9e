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

// Labeled sample generation over a constraint's active-variable box: box
// corners, a genetically optimized Latin hypercube, and secant points near
// the feasibility boundary found from mixed-feasibility nearest-neighbor
// clusters.

#ifndef TREEGOPT_SAMPLER_H_
#define TREEGOPT_SAMPLER_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "treegopt/problem.h"

namespace treegopt {

struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  int dim() const { return static_cast<int>(lower.size()); }
  double range(int k) const { return upper[k] - lower[k]; }
  // Maps a point to [0, 1]^p; zero-width dimensions map to 0.
  Eigen::VectorXd Normalize(const Eigen::VectorXd& x) const;
  Eigen::VectorXd Clip(const Eigen::VectorXd& x) const;
  bool Contains(const Eigen::VectorXd& x, double tol = 1e-12) const;
};

// Box of a constraint's active variables. Throws BoundError if any bound is
// infinite.
Box ActiveBox(const StandardFormProblem& problem, const std::vector<int>& active_vars);

// One sample per row.
struct SampleSet {
  Box box;
  Eigen::MatrixXd points;

  int size() const { return static_cast<int>(points.rows()); }
};

struct LabeledSampleSet {
  SampleSet samples;
  std::vector<double> values;  // NaN where evaluation failed
  std::vector<bool> labels;    // value >= 0

  int size() const { return samples.size(); }
  int num_feasible() const;
  bool has_value(int i) const;
  // Appends `other` (same box), skipping rows that duplicate an existing
  // row within 1e-12 in normalized coordinates.
  void Merge(const LabeledSampleSet& other);
};

// All 2^p corners when 2^p <= cap, else `cap` distinct random corners.
SampleSet BoundarySamples(const Box& box, int cap, uint64_t seed = 0);

struct OlhOptions {
  int population = 50;
  int generations = 30;
  double mutation_rate = 0.1;  // per-column swap probability
};

struct OlhStats {
  double initial_fitness = 0.0;  // best maximin distance of generation 0
  double final_fitness = 0.0;
  // Maximin fitness of the best design after each generation, generation 0
  // first.
  std::vector<double> history;
};

// n-point Latin hypercube at bin centers, improved for maximin distance in
// normalized coordinates by a permutation genetic algorithm.
SampleSet OlhSamples(const Box& box, int n, uint64_t seed, const OlhOptions& options = {},
                     OlhStats* stats = nullptr);

// Smallest pairwise Euclidean distance of the rows of a normalized design.
double MaximinDistance(const Eigen::MatrixXd& normalized);

// Evaluates the constraint at each sample. Points map onto the constraint's
// active variables in order. Equalities are labeled by h >= 0. Domain errors
// leave the value NaN and the label infeasible.
LabeledSampleSet EvaluateConstraint(const NonlinearConstraint& constraint,
                                    const SampleSet& samples);

// Secant root estimate x_j - y_j (x_j - x_i) / (y_j - y_i). Throws
// std::invalid_argument when y_i == y_j.
Eigen::VectorXd SecantPoint(const Eigen::VectorXd& xi, double yi, const Eigen::VectorXd& xj,
                            double yj);

// One pass of nearest-neighbor quasi-Newton sampling. Each cluster is a point
// and its k - 1 nearest neighbors in normalized coordinates; a mixed cluster
// whose center is infeasible yields one secant point per feasible neighbor.
// Output is clipped to the box and deduplicated. Throws std::invalid_argument
// if no sample is feasible.
SampleSet KnnQuasiNewton(const LabeledSampleSet& data, int k);

struct SamplingOptions {
  int corner_cap = 512;
  int base_samples = 0;  // 0 selects max(400, 100 p)
  int knn_passes = 1;    // refinement passes; each runs on the merged data
  OlhOptions olh;
};

struct SamplingStats {
  int corners = 0;
  int olh = 0;
  int knn = 0;
  OlhStats olh_stats;
};

// Corners plus OLH, evaluated, then one kNN refinement pass, evaluated and
// merged.
LabeledSampleSet SampleConstraint(const NonlinearConstraint& constraint, const Box& box,
                                  const SamplingOptions& options, uint64_t seed,
                                  SamplingStats* stats = nullptr);

// CSV with one column per active variable, then value and label.
void WriteSamplesCsv(std::ostream& out, const LabeledSampleSet& data,
                     const std::vector<std::string>& names);

}  // namespace treegopt

#endif  // TREEGOPT_SAMPLER_H_
