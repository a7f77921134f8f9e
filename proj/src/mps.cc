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

#include "treegopt/mps.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace treegopt {
namespace {

std::string Num(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

bool Safe(const std::string& s) {
  if (s.empty() || s.size() > 8) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.') return false;
  }
  return true;
}

std::vector<std::string> Mangle(const std::vector<std::string>& names, char prefix,
                                std::set<std::string>& used,
                                std::vector<std::pair<std::string, std::string>>& renamed) {
  std::vector<std::string> out(names.size());
  for (size_t i = 0; i < names.size(); ++i) {
    if (Safe(names[i]) && !used.count(names[i])) {
      out[i] = names[i];
      used.insert(names[i]);
    }
  }
  int counter = 0;
  for (size_t i = 0; i < names.size(); ++i) {
    if (!out[i].empty()) continue;
    std::string candidate;
    do {
      candidate = prefix + std::to_string(counter++);
    } while (used.count(candidate));
    used.insert(candidate);
    out[i] = candidate;
    renamed.emplace_back(names[i], candidate);
  }
  return out;
}

// Fields at the fixed-format columns 2, 5, 15, 25, 40, 50.
std::string Line(const std::string& f1, const std::string& f2, const std::string& f3 = "",
                 const std::string& f4 = "", const std::string& f5 = "",
                 const std::string& f6 = "") {
  std::string s = " " + f1;
  auto pad = [&](size_t col, const std::string& f) {
    if (f.empty()) return;
    if (s.size() < col - 1) s.append(col - 1 - s.size(), ' ');
    else s += ' ';
    s += f;
  };
  pad(5, f2);
  pad(15, f3);
  pad(25, f4);
  pad(40, f5);
  pad(50, f6);
  return s + "\n";
}

double ParseNum(const std::string& s, int line) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw MpsError("line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

MpsExport ExportMps(const LinearModel& model, const std::string& name) {
  MpsExport e;
  std::set<std::string> used = {"OBJ"};
  e.column_names = Mangle(model.col_names, 'C', used, e.renamed);
  std::vector<std::string> row_names;
  for (const auto& r : model.rows) row_names.push_back(r.name);
  e.row_names = Mangle(row_names, 'R', used, e.renamed);

  std::ostringstream out;
  out << "NAME          " << name << "\n";
  out << "ROWS\n" << Line("N", "OBJ");
  std::vector<char> sense(model.num_rows());
  for (int i = 0; i < model.num_rows(); ++i) {
    const auto& r = model.rows[i];
    const bool lo = std::isfinite(r.lower), up = std::isfinite(r.upper);
    if (lo && up && r.lower == r.upper) {
      sense[i] = 'E';
    } else if (lo && up && r.lower + (r.upper - r.lower) != r.upper &&
               r.upper - (r.upper - r.lower) == r.lower) {
      sense[i] = 'L';  // the range reproduces the lower end exactly
    } else if (lo) {
      sense[i] = 'G';
    } else if (up) {
      sense[i] = 'L';
    } else {
      sense[i] = 'N';
    }
    out << Line(std::string(1, sense[i]), e.row_names[i]);
  }
  // Column-major coefficients in row order.
  std::vector<std::vector<std::pair<int, double>>> cols(model.num_cols());
  for (int i = 0; i < model.num_rows(); ++i) {
    std::map<int, double> merged;
    for (const auto& [j, a] : model.rows[i].terms) merged[j] += a;
    for (const auto& [j, a] : merged) {
      if (a != 0.0) cols[j].emplace_back(i, a);
    }
  }
  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (int j = 0; j < model.num_cols(); ++j) {
    if (model.integer[j] != in_int) {
      const std::string m = "MARKER" + std::to_string(marker++);
      out << Line("", m, "'MARKER'", "", in_int ? "'INTEND'" : "'INTORG'");
      in_int = model.integer[j];
    }
    if (model.cost[j] != 0.0) out << Line("", e.column_names[j], "OBJ", Num(model.cost[j]));
    for (const auto& [i, a] : cols[j]) out << Line("", e.column_names[j], e.row_names[i], Num(a));
    if (model.cost[j] == 0.0 && cols[j].empty()) out << Line("", e.column_names[j], "OBJ", "0");
  }
  if (in_int) out << Line("", "MARKER" + std::to_string(marker), "'MARKER'", "", "'INTEND'");
  out << "RHS\n";
  if (model.cost_offset != 0.0) out << Line("", "RHS", "OBJ", Num(-model.cost_offset));
  for (int i = 0; i < model.num_rows(); ++i) {
    const auto& r = model.rows[i];
    const double rhs = sense[i] == 'L' ? r.upper : sense[i] == 'N' ? 0.0 : r.lower;
    if (rhs != 0.0) out << Line("", "RHS", e.row_names[i], Num(rhs));
  }
  std::ostringstream ranges;
  for (int i = 0; i < model.num_rows(); ++i) {
    const auto& r = model.rows[i];
    // Ranged rows; the far end may be off by one ulp when neither end
    // is reproduced exactly.
    if (sense[i] != 'E' && std::isfinite(r.lower) && std::isfinite(r.upper)) {
      ranges << Line("", "RNG", e.row_names[i], Num(r.upper - r.lower));
    }
  }
  if (!ranges.str().empty()) out << "RANGES\n" << ranges.str();
  out << "BOUNDS\n";
  for (int j = 0; j < model.num_cols(); ++j) {
    const double lo = model.col_lower[j], up = model.col_upper[j];
    const std::string& c = e.column_names[j];
    if (std::isfinite(lo) && lo == up) {
      out << Line("FX", "BND", c, Num(lo));
      continue;
    }
    if (!std::isfinite(lo) && !std::isfinite(up)) {
      out << Line("FR", "BND", c);
      continue;
    }
    // Explicit bounds everywhere: integer columns default differently
    // across readers.
    if (std::isfinite(lo)) {
      out << Line("LO", "BND", c, Num(lo));
    } else {
      out << Line("MI", "BND", c);
    }
    if (std::isfinite(up)) {
      out << Line("UP", "BND", c, Num(up));
    } else {
      out << Line("PL", "BND", c);
    }
  }
  out << "ENDATA\n";
  e.text = out.str();
  return e;
}

LinearModel ImportMps(const std::string& text) {
  LinearModel m;
  std::map<std::string, int> rows, cols;
  std::map<std::string, char> sense;
  std::string objective;
  std::string section;
  bool in_int = false;
  std::set<int> has_lower, has_upper;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  auto fail = [&](const std::string& what) {
    throw MpsError("line " + std::to_string(line) + ": " + what);
  };
  while (std::getline(in, raw)) {
    ++line;
    if (raw.empty() || raw[0] == '*') continue;
    std::istringstream ls(raw);
    std::vector<std::string> f;
    for (std::string w; ls >> w;) f.push_back(w);
    if (f.empty()) continue;
    if (!std::isspace(static_cast<unsigned char>(raw[0]))) {
      section = f[0];
      if (section == "ENDATA") break;
      continue;
    }
    if (section == "ROWS") {
      if (f.size() != 2) fail("ROWS entry needs sense and name");
      const char s = f[0][0];
      if (s == 'N') {
        if (objective.empty()) objective = f[1];
        continue;
      }
      if (s != 'E' && s != 'G' && s != 'L') fail("unknown row sense '" + f[0] + "'");
      rows[f[1]] = m.AddRow(f[1], {}, s == 'L' ? -kInf : 0.0, s == 'G' ? kInf : 0.0);
      sense[f[1]] = s;
    } else if (section == "COLUMNS") {
      if (f.size() >= 3 && f[1] == "'MARKER'") {
        in_int = f.back() == "'INTORG'";
        continue;
      }
      if (f.size() != 3 && f.size() != 5) fail("COLUMNS entry needs 3 or 5 fields");
      auto it = cols.find(f[0]);
      if (it == cols.end()) {
        it = cols.emplace(f[0], m.AddColumn(f[0], 0.0, kInf, 0.0, in_int)).first;
        if (in_int) has_upper.erase(it->second);
      }
      for (size_t k = 1; k + 1 < f.size(); k += 2) {
        const double v = ParseNum(f[k + 1], line);
        if (f[k] == objective) {
          m.cost[it->second] += v;
        } else {
          auto r = rows.find(f[k]);
          if (r == rows.end()) fail("unknown row '" + f[k] + "'");
          m.rows[r->second].terms.emplace_back(it->second, v);
        }
      }
    } else if (section == "RHS") {
      if (f.size() != 3 && f.size() != 5) fail("RHS entry needs 3 or 5 fields");
      for (size_t k = 1; k + 1 < f.size(); k += 2) {
        const double v = ParseNum(f[k + 1], line);
        if (f[k] == objective) {
          m.cost_offset = -v;
          continue;
        }
        auto r = rows.find(f[k]);
        if (r == rows.end()) fail("unknown row '" + f[k] + "'");
        auto& row = m.rows[r->second];
        switch (sense[f[k]]) {
          case 'E': row.lower = row.upper = v; break;
          case 'G': row.lower = v; break;
          case 'L': row.upper = v; break;
        }
      }
    } else if (section == "RANGES") {
      if (f.size() != 3 && f.size() != 5) fail("RANGES entry needs 3 or 5 fields");
      for (size_t k = 1; k + 1 < f.size(); k += 2) {
        const double v = ParseNum(f[k + 1], line);
        auto r = rows.find(f[k]);
        if (r == rows.end()) fail("unknown row '" + f[k] + "'");
        auto& row = m.rows[r->second];
        switch (sense[f[k]]) {
          case 'G': row.upper = row.lower + std::fabs(v); break;
          case 'L': row.lower = row.upper - std::fabs(v); break;
          case 'E':
            if (v > 0) row.upper = row.lower + v;
            else row.lower = row.upper + v;
            break;
        }
      }
    } else if (section == "BOUNDS") {
      if (f.size() < 3) fail("BOUNDS entry too short");
      auto c = cols.find(f[2]);
      if (c == cols.end()) fail("unknown column '" + f[2] + "'");
      const int j = c->second;
      const std::string& type = f[0];
      double v = 0.0;
      const bool needs_value = type == "UP" || type == "LO" || type == "FX" || type == "LI" || type == "UI";
      if (needs_value) {
        if (f.size() != 4) fail("bound '" + type + "' needs a value");
        v = ParseNum(f[3], line);
      }
      if (type == "UP" || type == "UI") {
        m.col_upper[j] = v;
      } else if (type == "LO" || type == "LI") {
        m.col_lower[j] = v;
      } else if (type == "FX") {
        m.col_lower[j] = m.col_upper[j] = v;
      } else if (type == "FR") {
        m.col_lower[j] = -kInf;
        m.col_upper[j] = kInf;
      } else if (type == "MI") {
        m.col_lower[j] = -kInf;
      } else if (type == "PL") {
        m.col_upper[j] = kInf;
      } else if (type == "BV") {
        m.col_lower[j] = 0.0;
        m.col_upper[j] = 1.0;
        m.integer[j] = true;
      } else {
        fail("unknown bound type '" + type + "'");
      }
      if (type == "LI" || type == "UI") m.integer[j] = true;
    } else if (section == "NAME" || section == "OBJSENSE") {
      continue;
    } else {
      fail("unexpected data in section '" + section + "'");
    }
  }
  if (objective.empty()) throw MpsError("no objective row");
  return m;
}

SolveResult ExternalSolve(const MilpInstance& instance, const ExternalOptions& options) {
  namespace fs = std::filesystem;
  SolveResult result;
  if (options.command.find("{input}") == std::string::npos ||
      options.command.find("{output}") == std::string::npos) {
    result.message = "solver command needs {input} and {output} placeholders";
    return result;
  }
  fs::path dir = options.work_dir;
  if (dir.empty()) {
    std::string tmpl = (fs::temp_directory_path() / "treegopt-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) {
      result.message = "cannot create a temporary directory";
      return result;
    }
    dir = tmpl;
  } else {
    fs::create_directories(dir);
  }
  const fs::path input = dir / "model.mps";
  const fs::path output = dir / "solution.txt";
  const MpsExport e = ExportMps(instance.model);
  {
    std::ofstream f(input);
    f << e.text;
  }
  {
    std::ofstream f(dir / "names.txt");
    for (const auto& [from, to] : e.renamed) f << to << ' ' << from << '\n';
  }
  std::error_code ec;
  fs::remove(output, ec);
  std::string cmd = options.command;
  auto replace = [&](const std::string& key, const std::string& value) {
    for (size_t pos; (pos = cmd.find(key)) != std::string::npos;) cmd.replace(pos, key.size(), "'" + value + "'");
  };
  replace("{input}", input.string());
  replace("{output}", output.string());
  const int rc = std::system(cmd.c_str());
  auto keep = [&](const std::string& what) {
    result.status = SolveStatus::kError;
    result.message = what + " (artifacts in " + dir.string() + ")";
    return result;
  };
  if (rc != 0) return keep("solver command exited with status " + std::to_string(rc));
  std::ifstream sol(output);
  if (!sol) return keep("solver wrote no solution file");
  std::map<std::string, int> index;
  for (int j = 0; j < static_cast<int>(e.column_names.size()); ++j) index[e.column_names[j]] = j;
  std::string status;
  std::vector<double> x(instance.model.num_cols(), std::nan(""));
  std::string key;
  int line = 0;
  while (sol >> key) {
    ++line;
    std::string value;
    if (!(sol >> value)) return keep("truncated solution file");
    if (key == "status") {
      status = value;
      continue;
    }
    double v = 0.0;
    const auto r = std::from_chars(value.data(), value.data() + value.size(), v);
    if (r.ec != std::errc()) return keep("bad number '" + value + "' in solution file");
    if (key == "objective") continue;
    auto it = index.find(key);
    if (it == index.end()) return keep("unknown column '" + key + "' in solution file");
    x[it->second] = v;
  }
  if (status == "infeasible") {
    result.status = SolveStatus::kInfeasible;
  } else if (status == "unbounded") {
    result.status = SolveStatus::kUnbounded;
  } else if (status == "optimal" || status == "iteration-limit") {
    for (double v : x) {
      if (std::isnan(v)) return keep("solution file misses columns");
    }
    const double viol = std::max(instance.model.MaxViolation(x), instance.model.MaxIntegrality(x));
    if (viol > options.feasibility_tol) {
      return keep("external solution violates the model by " + Num(viol));
    }
    result.status = status == "optimal" ? SolveStatus::kOptimal : SolveStatus::kIterationLimit;
    result.x = std::move(x);
    result.objective = instance.model.Objective(result.x);
  } else {
    return keep("solver reported status '" + status + "'");
  }
  if (options.work_dir.empty()) fs::remove_all(dir, ec);
  return result;
}

}  // namespace treegopt
