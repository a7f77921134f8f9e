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

#include "treegopt/sampler.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "treegopt/seed.h"

namespace treegopt {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SampleSet FromNormalized(const Box& box, const Eigen::MatrixXd& unit) {
  SampleSet s;
  s.box = box;
  s.points.resize(unit.rows(), unit.cols());
  for (int i = 0; i < unit.rows(); ++i) {
    for (int k = 0; k < unit.cols(); ++k) {
      s.points(i, k) = box.lower[k] + unit(i, k) * box.range(k);
    }
  }
  return s;
}

Eigen::MatrixXd NormalizeRows(const Box& box, const Eigen::MatrixXd& points) {
  Eigen::MatrixXd unit(points.rows(), points.cols());
  for (int i = 0; i < points.rows(); ++i) {
    unit.row(i) = box.Normalize(points.row(i).transpose()).transpose();
  }
  return unit;
}

// A Latin design as one bin permutation per column.
using Design = Eigen::MatrixXi;

Eigen::MatrixXd Centers(const Design& d) {
  const double n = static_cast<double>(d.rows());
  return (d.cast<double>().array() + 0.5) / n;
}

double Fitness(const Design& d) { return MaximinDistance(Centers(d)); }

}  // namespace

Eigen::VectorXd Box::Normalize(const Eigen::VectorXd& x) const {
  Eigen::VectorXd u(x.size());
  for (int k = 0; k < x.size(); ++k) {
    const double r = range(k);
    u[k] = r > 0.0 ? (x[k] - lower[k]) / r : 0.0;
  }
  return u;
}

Eigen::VectorXd Box::Clip(const Eigen::VectorXd& x) const {
  Eigen::VectorXd c = x;
  for (int k = 0; k < x.size(); ++k) c[k] = std::clamp(x[k], lower[k], upper[k]);
  return c;
}

bool Box::Contains(const Eigen::VectorXd& x, double tol) const {
  for (int k = 0; k < x.size(); ++k) {
    if (x[k] < lower[k] - tol || x[k] > upper[k] + tol) return false;
  }
  return true;
}

Box ActiveBox(const StandardFormProblem& problem, const std::vector<int>& active_vars) {
  Box box;
  for (int j : active_vars) {
    const Variable& v = problem.variables.at(j);
    if (!v.bounded()) throw BoundError("variable '" + v.name + "' is not bounded");
    box.lower.push_back(v.lower);
    box.upper.push_back(v.upper);
  }
  return box;
}

int LabeledSampleSet::num_feasible() const {
  return static_cast<int>(std::count(labels.begin(), labels.end(), true));
}

bool LabeledSampleSet::has_value(int i) const { return !std::isnan(values[i]); }

void LabeledSampleSet::Merge(const LabeledSampleSet& other) {
  const Box& box = samples.box;
  std::vector<Eigen::VectorXd> seen;
  seen.reserve(size() + other.size());
  for (int i = 0; i < size(); ++i) seen.push_back(box.Normalize(samples.points.row(i).transpose()));
  std::vector<int> keep;
  for (int i = 0; i < other.size(); ++i) {
    const Eigen::VectorXd u = box.Normalize(other.samples.points.row(i).transpose());
    bool duplicate = false;
    for (const auto& s : seen) {
      if ((s - u).cwiseAbs().maxCoeff() <= 1e-12) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) {
      keep.push_back(i);
      seen.push_back(u);
    }
  }
  const int old = size();
  const int p = static_cast<int>(other.samples.points.cols());
  if (old == 0) samples.points.resize(0, p);
  samples.points.conservativeResize(old + static_cast<int>(keep.size()), p);
  for (size_t t = 0; t < keep.size(); ++t) {
    samples.points.row(old + static_cast<int>(t)) = other.samples.points.row(keep[t]);
    values.push_back(other.values[keep[t]]);
    labels.push_back(other.labels[keep[t]]);
  }
}

SampleSet BoundarySamples(const Box& box, int cap, uint64_t seed) {
  const int p = box.dim();
  std::vector<uint64_t> masks;
  if (p < 63 && (uint64_t{1} << p) <= static_cast<uint64_t>(cap)) {
    for (uint64_t m = 0; m < (uint64_t{1} << p); ++m) masks.push_back(m);
  } else {
    std::mt19937_64 rng(MixSeed(seed, 1));
    std::set<uint64_t> chosen;
    const uint64_t mask_all = p >= 64 ? ~uint64_t{0} : (uint64_t{1} << p) - 1;
    while (static_cast<int>(chosen.size()) < cap) {
      const uint64_t m = rng() & mask_all;
      if (chosen.insert(m).second) masks.push_back(m);
    }
  }
  Eigen::MatrixXd unit(masks.size(), p);
  for (size_t i = 0; i < masks.size(); ++i) {
    for (int k = 0; k < p; ++k) unit(i, k) = (masks[i] >> k) & 1 ? 1.0 : 0.0;
  }
  SampleSet s = FromNormalized(box, unit);
  // Exact bounds rather than lower + 1 * range.
  for (size_t i = 0; i < masks.size(); ++i) {
    for (int k = 0; k < p; ++k) s.points(i, k) = (masks[i] >> k) & 1 ? box.upper[k] : box.lower[k];
  }
  return s;
}

double MaximinDistance(const Eigen::MatrixXd& normalized) {
  const int n = static_cast<int>(normalized.rows());
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      best = std::min(best, (normalized.row(i) - normalized.row(j)).squaredNorm());
    }
  }
  return std::sqrt(best);
}

SampleSet OlhSamples(const Box& box, int n, uint64_t seed, const OlhOptions& options,
                     OlhStats* stats) {
  if (n < 2) throw std::invalid_argument("Latin hypercube needs at least two points");
  const int p = box.dim();
  std::mt19937_64 rng(MixSeed(seed, 2));
  std::vector<int> identity(n);
  std::iota(identity.begin(), identity.end(), 0);

  struct Individual {
    Design design;
    double fitness;
  };
  auto random_design = [&]() {
    Design d(n, p);
    for (int k = 0; k < p; ++k) {
      std::vector<int> perm = identity;
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int i = 0; i < n; ++i) d(i, k) = perm[i];
    }
    return d;
  };
  const int size = std::max(2, options.population);
  std::vector<Individual> population;
  for (int t = 0; t < size; ++t) {
    Design d = random_design();
    const double f = Fitness(d);
    population.push_back({std::move(d), f});
  }
  auto by_fitness = [](const Individual& a, const Individual& b) { return a.fitness > b.fitness; };
  std::stable_sort(population.begin(), population.end(), by_fitness);
  OlhStats local;
  local.initial_fitness = population.front().fitness;
  local.history.push_back(local.initial_fitness);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, size - 1);
  std::uniform_int_distribution<int> row(0, n - 1);
  auto tournament = [&]() -> const Individual& {
    const int a = pick(rng), b = pick(rng);
    return population[std::min(a, b)];  // population is sorted best first
  };
  for (int g = 0; g < options.generations; ++g) {
    std::vector<Individual> next;
    next.push_back(population.front());  // elitism keeps fitness monotone
    while (static_cast<int>(next.size()) < size) {
      const Individual& a = tournament();
      const Individual& b = tournament();
      Design child(n, p);
      // Column-wise crossover keeps every column a permutation.
      for (int k = 0; k < p; ++k) {
        child.col(k) = unit(rng) < 0.5 ? a.design.col(k) : b.design.col(k);
        if (unit(rng) < options.mutation_rate) std::swap(child(row(rng), k), child(row(rng), k));
      }
      const double f = Fitness(child);
      next.push_back({std::move(child), f});
    }
    population = std::move(next);
    std::stable_sort(population.begin(), population.end(), by_fitness);
    local.history.push_back(population.front().fitness);
  }
  local.final_fitness = population.front().fitness;
  if (stats) *stats = local;
  return FromNormalized(box, Centers(population.front().design));
}

LabeledSampleSet EvaluateConstraint(const NonlinearConstraint& constraint,
                                    const SampleSet& samples) {
  LabeledSampleSet out;
  out.samples = samples;
  const auto& active = constraint.active_vars;
  const int width = active.empty() ? 0 : *std::max_element(active.begin(), active.end()) + 1;
  std::vector<double> full(width, 0.0);
  for (int i = 0; i < samples.size(); ++i) {
    for (size_t k = 0; k < active.size(); ++k) full[active[k]] = samples.points(i, k);
    double v = kNaN;
    try {
      v = constraint.Evaluate(full);
    } catch (const DomainError&) {
      v = kNaN;
    }
    out.values.push_back(v);
    out.labels.push_back(!std::isnan(v) && v >= 0.0);
  }
  return out;
}

Eigen::VectorXd SecantPoint(const Eigen::VectorXd& xi, double yi, const Eigen::VectorXd& xj,
                            double yj) {
  if (yi == yj) throw std::invalid_argument("secant step needs distinct values");
  return xj - yj * (xj - xi) / (yj - yi);
}

SampleSet KnnQuasiNewton(const LabeledSampleSet& data, int k) {
  const int n = data.size();
  const Box& box = data.samples.box;
  if (data.num_feasible() == 0) throw std::invalid_argument("no feasible samples found");
  const Eigen::MatrixXd unit = NormalizeRows(box, data.samples.points);
  const int neighbors = std::min(k - 1, n - 1);
  std::vector<Eigen::VectorXd> found;
  std::vector<int> order(n);
  std::vector<double> dist(n);
  for (int i = 0; i < n; ++i) {
    // Only infeasible centers with a known value can seed a secant step.
    if (data.labels[i] || !data.has_value(i)) continue;
    for (int j = 0; j < n; ++j) dist[j] = (unit.row(i) - unit.row(j)).squaredNorm();
    std::iota(order.begin(), order.end(), 0);
    std::swap(order[0], order[i]);
    std::partial_sort(order.begin() + 1, order.begin() + 1 + neighbors, order.end(),
                      [&](int a, int b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); });
    for (int t = 1; t <= neighbors; ++t) {
      const int j = order[t];
      if (!data.labels[j] || data.values[j] == data.values[i]) continue;
      const Eigen::VectorXd x = box.Clip(SecantPoint(data.samples.points.row(i).transpose(),
                                                     data.values[i],
                                                     data.samples.points.row(j).transpose(),
                                                     data.values[j]));
      const Eigen::VectorXd u = box.Normalize(x);
      bool duplicate = false;
      for (const auto& f : found) {
        if ((box.Normalize(f) - u).cwiseAbs().maxCoeff() <= 1e-12) {
          duplicate = true;
          break;
        }
      }
      if (!duplicate) found.push_back(x);
    }
  }
  SampleSet out;
  out.box = box;
  out.points.resize(static_cast<int>(found.size()), box.dim());
  for (size_t t = 0; t < found.size(); ++t) out.points.row(static_cast<int>(t)) = found[t].transpose();
  return out;
}

LabeledSampleSet SampleConstraint(const NonlinearConstraint& constraint, const Box& box,
                                  const SamplingOptions& options, uint64_t seed,
                                  SamplingStats* stats) {
  const int p = box.dim();
  const int base = options.base_samples > 0 ? options.base_samples : std::max(400, 100 * p);
  SamplingStats local;
  const SampleSet corners = BoundarySamples(box, options.corner_cap, MixSeed(seed, 3));
  const SampleSet olh = OlhSamples(box, base, MixSeed(seed, 4), options.olh, &local.olh_stats);
  LabeledSampleSet data = EvaluateConstraint(constraint, corners);
  data.Merge(EvaluateConstraint(constraint, olh));
  local.corners = corners.size();
  local.olh = olh.size();
  for (int pass = 0; pass < options.knn_passes; ++pass) {
    if (data.num_feasible() == 0) break;
    const SampleSet refined = KnnQuasiNewton(data, p + 1);
    const int before = data.size();
    data.Merge(EvaluateConstraint(constraint, refined));
    local.knn += data.size() - before;
  }
  if (stats) *stats = local;
  return data;
}

void WriteSamplesCsv(std::ostream& out, const LabeledSampleSet& data,
                     const std::vector<std::string>& names) {
  for (const auto& name : names) out << name << ',';
  out << "value,label\n";
  out << std::setprecision(17);
  for (int i = 0; i < data.size(); ++i) {
    for (int k = 0; k < data.samples.points.cols(); ++k) out << data.samples.points(i, k) << ',';
    if (data.has_value(i)) out << data.values[i];
    out << ',' << (data.labels[i] ? 1 : 0) << '\n';
  }
}

}  // namespace treegopt
