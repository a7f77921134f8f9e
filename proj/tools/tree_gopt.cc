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

// Command-line front end: solve, bench, export-mps, dump-samples and
// dump-trees. Exit codes: 0 success, 1 infeasible result or solver failure,
// 2 input error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "treegopt/mps.h"
#include "treegopt/pipeline.h"
#include "treegopt/problem_io.h"
#include "treegopt/seed.h"

namespace {

using namespace treegopt;
namespace fs = std::filesystem;

constexpr int kInputError = 2;
constexpr int kInfeasible = 1;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  uint64_t seed = 0;
  int samples = 0;
  int depth = 0;
  int restarts = 3;
  std::string encoder = "bigm-free";
  std::string backend = "internal";
  std::string solver_cmd;
  int max_pgd_iters = 100;
  bool json = false;
  bool timings = false;
  std::string trace_dir;
  std::string data_dir = TREEGOPT_DATA_DIR;
};

PipelineConfig MakeConfig(const Flags& f) {
  PipelineConfig c;
  c.seed = f.seed;
  c.sampling.base_samples = f.samples;
  if (f.depth > 0) {
    c.classifier.max_depth = f.depth;
    c.regressor.max_depth = f.depth;
  }
  c.restarts = f.restarts;
  c.encoder = f.encoder == "bigm" ? EncoderMode::kBigM : EncoderMode::kBigMFree;
  c.pgd.max_iters = f.max_pgd_iters;
  if (f.backend == "external") {
    std::string cmd = f.solver_cmd;
    if (cmd.empty()) {
      const char* env = std::getenv("TREE_GOPT_SOLVER_CMD");
      if (env != nullptr) cmd = env;
    }
    if (cmd.empty()) {
      throw InputError("--backend external needs --solver-cmd or TREE_GOPT_SOLVER_CMD");
    }
    ExternalOptions ext;
    ext.command = cmd;
    c.external = ext;
  }
  return c;
}

LoadedProblem Load(const std::string& path) {
  try {
    return LoadProblem(path);
  } catch (const ProblemFormatError& e) {
    throw InputError(e.what());
  }
}

std::string Fixed(double v, int digits) {
  if (!std::isfinite(v)) return v != v ? "nan" : (v > 0 ? "inf" : "-inf");
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::string Sci(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(2) << v;
  return s.str();
}

void WriteTraces(const RunReport& report, const std::string& dir) {
  if (dir.empty()) return;
  fs::create_directories(dir);
  for (const RestartReport& r : report.restarts) {
    std::ofstream out(fs::path(dir) / ("restart" + std::to_string(r.restart) + "_pgd.csv"));
    WriteTraceCsv(out, r.repair.trace);
  }
  if (report.best_restart >= 0) {
    std::ofstream out(fs::path(dir) / "pgd_trace.csv");
    WriteTraceCsv(out, report.restarts[report.best_restart].repair.trace);
  }
}

RunReport Run(const StandardFormProblem& problem, const Flags& flags) {
  try {
    return SolveGlobal(problem, MakeConfig(flags));
  } catch (const PipelineError& e) {
    if (e.stage() == "bound") throw InputError(e.what());
    throw;
  }
}

void PrintSummary(const RunReport& r) {
  std::cout << "problem:       " << r.problem << "\n"
            << "status:        " << r.status << "\n";
  if (!r.x.empty()) {
    std::cout << "objective:     " << Fixed(r.objective, 6) << "\n"
              << "max violation: " << Sci(r.max_violation) << "\n"
              << "point:        ";
    for (size_t k = 0; k < r.x.size(); ++k) std::cout << " " << r.names[k] << "=" << Fixed(r.x[k], 6);
    std::cout << "\n";
  }
  for (const RestartReport& rr : r.restarts) {
    std::cout << "restart " << rr.restart << ": ";
    if (!rr.failed_stage.empty()) {
      std::cout << "failed at " << rr.failed_stage << " (" << rr.message << ")\n";
      continue;
    }
    std::cout << "milp " << rr.milp_status << " surrogate " << Fixed(rr.milp_objective, 4)
              << ", true " << Fixed(rr.mio_objective, 4) << " (violation "
              << Sci(rr.mio_violation) << "), repaired " << Fixed(rr.repair.objective, 4)
              << " (violation " << Sci(rr.repair.max_violation) << ", " << rr.repair.iterations
              << " iterations)\n";
  }
}

int CmdSolve(const std::string& path, const Flags& flags) {
  const LoadedProblem loaded = Load(path);
  const RunReport report = Run(loaded.problem, flags);
  WriteTraces(report, flags.trace_dir);
  if (flags.json) {
    std::cout << ReportToJson(report, flags.timings).dump(2) << "\n";
  } else {
    PrintSummary(report);
  }
  return report.status == "feasible" ? 0 : kInfeasible;
}

struct BenchCase {
  std::string id;
  std::string file;
};

const std::vector<BenchCase> kBundled = {{"demo", "demo.json"},
                                         {"speed_reducer", "speed_reducer.json"}};

nlohmann::json LoadStubs(const Flags& flags) {
  std::ifstream in(fs::path(flags.data_dir) / "minlplib_stubs.json");
  if (!in) return nlohmann::json::object();
  return nlohmann::json::parse(in);
}

int CmdBenchList(const Flags& flags) {
  std::cout << "bundled:\n";
  for (const BenchCase& c : kBundled) std::cout << "  " << c.id << "\n";
  const nlohmann::json stubs = LoadStubs(flags);
  if (stubs.contains("cases")) {
    std::cout << "stubs (definitions not bundled):\n";
    for (const auto& c : stubs["cases"]) {
      std::cout << "  " << c["id"].get<std::string>() << "  best known "
                << c["best_known"].get<double>() << "\n";
    }
  }
  return 0;
}

int CmdBench(const std::string& id, const Flags& flags) {
  std::vector<BenchCase> cases;
  for (const BenchCase& c : kBundled) {
    if (id.empty() || id == "all" || id == c.id) cases.push_back(c);
  }
  if (cases.empty()) {
    const nlohmann::json stubs = LoadStubs(flags);
    for (const auto& c : stubs.value("cases", nlohmann::json::array())) {
      if (c["id"] == id) {
        throw InputError(id + " is a stub: its constraint definitions are not bundled");
      }
    }
    throw InputError("unknown benchmark " + id);
  }
  nlohmann::ordered_json json = nlohmann::ordered_json::array();
  std::ostringstream table;
  table << std::left << std::setw(15) << "case" << std::right << std::setw(12) << "best known"
        << std::setw(14) << "MIO" << std::setw(14) << "repaired" << std::setw(11) << "violation"
        << std::setw(9) << "time(s)" << "  status\n";
  bool all_feasible = true;
  for (const BenchCase& c : cases) {
    const LoadedProblem loaded = Load((fs::path(flags.data_dir) / c.file).string());
    Flags case_flags = flags;
    if (!flags.trace_dir.empty()) case_flags.trace_dir = (fs::path(flags.trace_dir) / c.id).string();
    const RunReport r = Run(loaded.problem, case_flags);
    WriteTraces(r, case_flags.trace_dir);
    all_feasible = all_feasible && r.status == "feasible";
    const double best = loaded.best_known ? loaded.best_known->objective : NAN;
    const double mio = r.best_restart >= 0 ? r.restarts[r.best_restart].mio_objective : NAN;
    table << std::left << std::setw(15) << c.id << std::right << std::setw(12) << Fixed(best, 3)
          << std::setw(14) << Fixed(mio, 4) << std::setw(14)
          << (r.x.empty() ? std::string("-") : Fixed(r.objective, 4)) << std::setw(11)
          << (r.x.empty() ? std::string("-") : Sci(r.max_violation)) << std::setw(9)
          << Fixed(r.times.total, 1) << "  " << r.status << "\n";
    nlohmann::ordered_json entry;
    entry["id"] = c.id;
    entry["best_known"] = loaded.best_known ? nlohmann::ordered_json(best) : nullptr;
    entry["report"] = ReportToJson(r, flags.timings);
    json.push_back(entry);
  }
  if (flags.json) {
    std::cout << json.dump(2) << "\n";
  } else {
    std::cout << table.str();
  }
  return all_feasible ? 0 : kInfeasible;
}

SurrogateModel Surrogates(const std::string& path, const Flags& flags) {
  const LoadedProblem loaded = Load(path);
  const PipelineConfig config = MakeConfig(flags);
  StandardFormProblem bounded;
  try {
    bounded = PrepareProblem(loaded.problem);
  } catch (const PipelineError& e) {
    throw InputError(e.what());
  }
  // Restart 0 of a solve with the same seed.
  return BuildSurrogateModel(bounded, config, MixSeed(config.seed, 0), config.sampling.knn_passes);
}

std::ostream& Output(const std::string& file, std::ofstream& holder) {
  if (file.empty() || file == "-") return std::cout;
  holder.open(file);
  if (!holder) throw InputError("cannot write " + file);
  return holder;
}

int CmdExportMps(const std::string& path, const std::string& out_file,
                 const std::string& provenance_file, const Flags& flags) {
  const SurrogateModel model = Surrogates(path, flags);
  std::ofstream holder;
  Output(out_file, holder) << ExportMps(model.milp.model, model.problem.name).text;
  if (!provenance_file.empty()) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (size_t c = 0; c < model.milp.provenance.size(); ++c) {
      const Provenance& p = model.milp.provenance[c];
      static const char* kKinds[] = {"original", "leaf_copy", "leaf_indicator", "leaf_value",
                                     "aggregate"};
      j.push_back({{"column", model.milp.model.col_names[c]},
                   {"kind", kKinds[static_cast<int>(p.kind)]},
                   {"source", p.source},
                   {"leaf", p.leaf},
                   {"component", p.component}});
    }
    std::ofstream prov(provenance_file);
    if (!prov) throw InputError("cannot write " + provenance_file);
    prov << j.dump(2) << "\n";
  }
  return 0;
}

std::vector<std::string> Names(const StandardFormProblem& p, const std::vector<int>& vars) {
  std::vector<std::string> names;
  for (int k : vars) names.push_back(p.variables[k].name);
  return names;
}

int CmdDumpSamples(const std::string& path, const std::string& out_dir, const Flags& flags) {
  const SurrogateModel model = Surrogates(path, flags);
  std::vector<const Surrogate*> all;
  for (const Surrogate& s : model.surrogates) all.push_back(&s);
  if (model.objective) all.push_back(&*model.objective);
  if (!out_dir.empty()) fs::create_directories(out_dir);
  for (const Surrogate* s : all) {
    if (out_dir.empty()) {
      std::cout << "# " << s->name << " (" << ToString(s->role) << ")\n";
      WriteSamplesCsv(std::cout, s->data, Names(model.problem, s->vars));
    } else {
      std::ofstream out(fs::path(out_dir) / (s->name + ".csv"));
      WriteSamplesCsv(out, s->data, Names(model.problem, s->vars));
    }
  }
  return 0;
}

int CmdDumpTrees(const std::string& path, const std::string& out_file, const Flags& flags) {
  const SurrogateModel model = Surrogates(path, flags);
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  std::vector<const Surrogate*> all;
  for (const Surrogate& s : model.surrogates) all.push_back(&s);
  if (model.objective) all.push_back(&*model.objective);
  for (const Surrogate* s : all) {
    nlohmann::ordered_json e;
    e["name"] = s->name;
    e["role"] = ToString(s->role);
    e["vars"] = Names(model.problem, s->vars);
    e["loss"] = s->loss;
    e["tree"] = s->tree ? s->tree->ToJson() : nlohmann::ordered_json(nullptr);
    j.push_back(e);
  }
  std::ofstream holder;
  Output(out_file, holder) << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Global optimization with hyperplane decision trees"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  app.add_option("--seed", flags.seed, "Random seed");
  app.add_option("--samples", flags.samples, "Base samples per constraint (0: max(400, 100 p))")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--depth", flags.depth, "Maximum tree depth (0: default 5)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--restarts", flags.restarts, "Independent restarts")->check(CLI::PositiveNumber);
  app.add_option("--encoder", flags.encoder, "Tree encoding")
      ->check(CLI::IsMember({"bigm-free", "bigm"}));
  app.add_option("--backend", flags.backend, "MILP solver")
      ->check(CLI::IsMember({"internal", "external"}));
  app.add_option("--solver-cmd", flags.solver_cmd,
                 "External solver command with {input} and {output} placeholders");
  app.add_option("--max-pgd-iters", flags.max_pgd_iters, "Repair iteration limit")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--json", flags.json, "Machine-readable report on stdout");
  app.add_flag("--timings", flags.timings, "Include wall-clock timings in JSON reports");
  app.add_option("--trace-dir", flags.trace_dir, "Directory for repair trace CSV files");
  app.add_option("--data-dir", flags.data_dir, "Directory of bundled benchmark files");

  std::string problem_path, bench_id, out, provenance;
  bool list = false;
  CLI::App* solve = app.add_subcommand("solve", "Solve a problem file");
  solve->add_option("problem", problem_path, "Problem JSON file")->required();
  CLI::App* bench = app.add_subcommand("bench", "Run bundled benchmarks");
  bench->add_option("id", bench_id, "Benchmark id (default: all bundled)");
  bench->add_flag("--list", list, "List bundled and stub benchmarks");
  CLI::App* mps = app.add_subcommand("export-mps", "Write the surrogate MILP as MPS");
  mps->add_option("problem", problem_path, "Problem JSON file")->required();
  mps->add_option("-o,--output", out, "Output file (default stdout)");
  mps->add_option("--provenance", provenance, "Also write column provenance JSON here");
  CLI::App* samples = app.add_subcommand("dump-samples", "Write constraint samples as CSV");
  samples->add_option("problem", problem_path, "Problem JSON file")->required();
  samples->add_option("-o,--output", out, "Directory for one CSV per function (default stdout)");
  CLI::App* trees = app.add_subcommand("dump-trees", "Write trained trees as JSON");
  trees->add_option("problem", problem_path, "Problem JSON file")->required();
  trees->add_option("-o,--output", out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*solve) return CmdSolve(problem_path, flags);
    if (*bench) return list ? CmdBenchList(flags) : CmdBench(bench_id, flags);
    if (*mps) return CmdExportMps(problem_path, out, provenance, flags);
    if (*samples) return CmdDumpSamples(problem_path, out, flags);
    if (*trees) return CmdDumpTrees(problem_path, out, flags);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfeasible;
  }
  return kInputError;
}
