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

#include "treegopt/problem_io.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace treegopt {
namespace {

using Json = nlohmann::json;

// Maps JSON pointers to the 1-based line and column where each value starts.
// Runs only on text the JSON parser has already accepted.
class PositionIndex {
 public:
  explicit PositionIndex(const std::string& text) : text_(text) {
    Value("");
  }

  std::pair<int, int> Find(const std::string& pointer) const {
    auto it = positions_.find(pointer);
    return it == positions_.end() ? std::pair<int, int>{0, 0} : it->second;
  }

 private:
  void Advance() {
    if (text_[i_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++i_;
  }
  void SkipSpace() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) Advance();
  }
  std::string String() {
    std::string out;
    Advance();  // opening quote
    while (i_ < text_.size() && text_[i_] != '"') {
      if (text_[i_] == '\\') {
        Advance();
        if (i_ < text_.size() && text_[i_] == '/') out += '/';
        if (i_ < text_.size() && text_[i_] == '~') out += '~';
      }
      out += text_[i_];
      Advance();
    }
    Advance();
    return out;
  }
  static std::string Escape(const std::string& key) {
    std::string out;
    for (char c : key) {
      if (c == '~') {
        out += "~0";
      } else if (c == '/') {
        out += "~1";
      } else {
        out += c;
      }
    }
    return out;
  }
  void Value(const std::string& pointer) {
    SkipSpace();
    if (i_ >= text_.size()) return;
    positions_[pointer] = {line_, column_};
    const char c = text_[i_];
    if (c == '{') {
      Advance();
      SkipSpace();
      while (i_ < text_.size() && text_[i_] != '}') {
        const std::string key = String();
        SkipSpace();
        Advance();  // colon
        Value(pointer + "/" + Escape(key));
        SkipSpace();
        if (text_[i_] == ',') {
          Advance();
          SkipSpace();
        }
      }
      Advance();
    } else if (c == '[') {
      Advance();
      SkipSpace();
      for (int k = 0; i_ < text_.size() && text_[i_] != ']'; ++k) {
        Value(pointer + "/" + std::to_string(k));
        SkipSpace();
        if (text_[i_] == ',') Advance();
        SkipSpace();
      }
      Advance();
    } else if (c == '"') {
      String();
    } else {
      while (i_ < text_.size() && text_[i_] != ',' && text_[i_] != '}' && text_[i_] != ']' &&
             !std::isspace(static_cast<unsigned char>(text_[i_]))) {
        Advance();
      }
    }
  }

  const std::string& text_;
  size_t i_ = 0;
  int line_ = 1;
  int column_ = 1;
  std::map<std::string, std::pair<int, int>> positions_;
};

class Reader {
 public:
  Reader(const std::string& text, std::string source) : source_(std::move(source)) {
    try {
      root_ = Json::parse(text);
    } catch (const Json::parse_error& err) {
      // Convert the byte offset into a line and column.
      int line = 1, column = 1;
      const size_t end = std::min(err.byte == 0 ? 0 : err.byte - 1, text.size());
      for (size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
          ++line;
          column = 1;
        } else {
          ++column;
        }
      }
      std::string what = err.what();
      const auto colon = what.find("syntax error");
      if (colon != std::string::npos) what = what.substr(colon);
      throw ProblemFormatError(source_, line, column, what);
    }
    index_ = std::make_unique<PositionIndex>(text);
  }

  [[noreturn]] void Fail(const std::string& pointer, const std::string& what,
                         int column_offset = 0) const {
    auto [line, column] = index_->Find(pointer);
    throw ProblemFormatError(source_, line, column == 0 ? 0 : column + column_offset,
                             (pointer.empty() ? std::string("document") : pointer) + ": " + what);
  }

  const Json& Member(const Json& obj, const std::string& pointer, const char* key) const {
    if (!obj.is_object() || !obj.contains(key)) Fail(pointer, std::string("missing '") + key + "'");
    return obj.at(key);
  }

  double Number(const Json& v, const std::string& pointer) const {
    if (!v.is_number()) Fail(pointer, "expected a number");
    return v.get<double>();
  }

  std::string String(const Json& v, const std::string& pointer) const {
    if (!v.is_string()) Fail(pointer, "expected a string");
    return v.get<std::string>();
  }

  LoadedProblem Read() {
    LoadedProblem out;
    StandardFormProblem& p = out.problem;
    if (!root_.is_object()) Fail("", "expected an object");
    for (const auto& [key, _] : root_.items()) {
      static const std::set<std::string> kKeys = {"name",      "variables", "linear",
                                                  "nonlinear", "objective", "best_known",
                                                  "description"};
      if (!kKeys.count(key)) Fail("/" + key, "unknown key '" + key + "'");
    }
    if (root_.contains("name")) p.name = String(root_["name"], "/name");

    const Json& vars = Member(root_, "", "variables");
    if (!vars.is_array() || vars.empty()) Fail("/variables", "expected a non-empty array");
    for (size_t i = 0; i < vars.size(); ++i) {
      const std::string at = "/variables/" + std::to_string(i);
      const Json& v = vars[i];
      Variable var;
      var.name = String(Member(v, at, "name"), at + "/name");
      if (!IsIdentifier(var.name)) Fail(at + "/name", "invalid variable name '" + var.name + "'");
      if (p.VariableIndex(var.name) >= 0) Fail(at + "/name", "duplicate variable '" + var.name + "'");
      if (v.contains("lb") && !v["lb"].is_null()) var.lower = Number(v["lb"], at + "/lb");
      if (v.contains("ub") && !v["ub"].is_null()) var.upper = Number(v["ub"], at + "/ub");
      if (v.contains("integer")) {
        if (!v["integer"].is_boolean()) Fail(at + "/integer", "expected true or false");
        var.integral = v["integer"].get<bool>();
      }
      if (var.lower > var.upper) Fail(at, "lower bound exceeds upper bound");
      p.variables.push_back(var);
    }
    names_ = p.VariableNames();

    if (root_.contains("linear")) {
      const Json& rows = root_["linear"];
      if (!rows.is_array()) Fail("/linear", "expected an array");
      for (size_t i = 0; i < rows.size(); ++i) ReadLinear(rows[i], "/linear/" + std::to_string(i), p);
    }
    if (root_.contains("nonlinear")) {
      const Json& cons = root_["nonlinear"];
      if (!cons.is_array()) Fail("/nonlinear", "expected an array");
      for (size_t i = 0; i < cons.size(); ++i) {
        ReadNonlinear(cons[i], "/nonlinear/" + std::to_string(i), p);
      }
    }
    if (root_.contains("objective")) ReadObjective(root_["objective"], "/objective", p);
    if (root_.contains("best_known")) {
      const Json& bk = root_["best_known"];
      BestKnown best;
      best.objective = Number(Member(bk, "/best_known", "objective"), "/best_known/objective");
      if (bk.contains("point")) {
        for (const auto& [name, value] : bk["point"].items()) {
          if (p.VariableIndex(name) < 0) Fail("/best_known/point/" + name, "unknown variable");
          best.point[name] = Number(value, "/best_known/point/" + name);
        }
      }
      if (bk.contains("printed_point")) {
        const Json& pp = bk["printed_point"];
        if (!pp.is_array()) Fail("/best_known/printed_point", "expected an array");
        for (size_t k = 0; k < pp.size(); ++k) {
          best.printed_point.push_back(
              Number(pp[k], "/best_known/printed_point/" + std::to_string(k)));
        }
      }
      if (bk.contains("source")) best.source = String(bk["source"], "/best_known/source");
      out.best_known = best;
    }
    return out;
  }

 private:
  static bool IsIdentifier(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s) {
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    }
    return true;
  }

  int Index(const std::string& name, const std::string& pointer) const {
    for (size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) return static_cast<int>(i);
    }
    Fail(pointer, "unknown variable '" + name + "'");
  }

  std::vector<std::pair<int, double>> Coeffs(const Json& obj, const std::string& pointer) const {
    if (!obj.is_object()) Fail(pointer, "expected an object of coefficients");
    std::vector<std::pair<int, double>> terms;
    for (const auto& [name, value] : obj.items()) {
      const std::string at = pointer + "/" + name;
      const double a = Number(value, at);
      if (a != 0.0) terms.emplace_back(Index(name, at), a);
    }
    std::sort(terms.begin(), terms.end());
    return terms;
  }

  Expression Parse(const Json& v, const std::string& pointer) const {
    const std::string text = String(v, pointer);
    try {
      return ParseExpression(text, names_);
    } catch (const ParseError& err) {
      // +1 skips the opening quote of the string literal.
      Fail(pointer, err.what(), 1 + static_cast<int>(err.position()));
    }
  }

  void ReadLinear(const Json& row, const std::string& at, StandardFormProblem& p) const {
    LinearRow r;
    r.name = row.contains("name") ? String(row["name"], at + "/name")
                                  : "linear" + std::to_string(p.inequalities.size() +
                                                              p.equalities.size() + 1);
    r.terms = Coeffs(Member(row, at, "coeffs"), at + "/coeffs");
    r.rhs = Number(Member(row, at, "rhs"), at + "/rhs");
    const std::string sense = String(Member(row, at, "sense"), at + "/sense");
    if (sense == ">=") {
      p.inequalities.push_back(std::move(r));
    } else if (sense == "<=") {
      for (auto& t : r.terms) t.second = -t.second;
      r.rhs = -r.rhs;
      p.inequalities.push_back(std::move(r));
    } else if (sense == "==") {
      p.equalities.push_back(std::move(r));
    } else {
      Fail(at + "/sense", "sense must be one of >=, <=, ==");
    }
  }

  void ReadNonlinear(const Json& c, const std::string& at, StandardFormProblem& p) const {
    const std::string name = c.contains("name") ? String(c["name"], at + "/name")
                                                : "g" + std::to_string(p.nonlinear.size() + 1);
    const std::string sense = String(Member(c, at, "sense"), at + "/sense");
    if (sense != ">=" && sense != "<=" && sense != "==") {
      Fail(at + "/sense", "sense must be one of >=, <=, ==");
    }
    const ConstraintSense cs =
        sense == "==" ? ConstraintSense::kEqualZero : ConstraintSense::kGreaterEqualZero;
    NonlinearConstraint con;
    if (c.contains("expr")) {
      Expression body = Parse(c["expr"], at + "/expr");
      if (sense == "<=") body = Expression::Unary(OpCode::kNeg, body);
      con = MakeConstraint(name, body, cs);
      if (c.contains("separable")) {
        if (!c["separable"].is_boolean()) Fail(at + "/separable", "expected true or false");
        if (c["separable"].get<bool>()) {
          if (!con.separable) Fail(at + "/separable", "body is not an affine part plus a nonlinear part");
          con.use_regressor = true;
        }
      }
    } else if (c.contains("blackbox")) {
      const std::string id = String(c["blackbox"], at + "/blackbox");
      const BlackBoxFn* fn = BlackBoxRegistry::Global().Find(id);
      if (!fn) Fail(at + "/blackbox", "unknown black-box id '" + id + "'");
      const Json& vs = Member(c, at, "vars");
      if (!vs.is_array() || vs.empty()) Fail(at + "/vars", "expected a non-empty array");
      std::vector<int> active;
      for (size_t k = 0; k < vs.size(); ++k) {
        const std::string vat = at + "/vars/" + std::to_string(k);
        active.push_back(Index(String(vs[k], vat), vat));
      }
      if (sense == "<=") Fail(at + "/sense", "black-box constraints take >= or ==");
      con = MakeBlackBoxConstraint(name, id, *fn, std::move(active), cs);
    } else {
      Fail(at, "needs 'expr' or 'blackbox'");
    }
    p.nonlinear.push_back(std::move(con));
  }

  void ReadObjective(const Json& o, const std::string& at, StandardFormProblem& p) const {
    if (!o.is_object()) Fail(at, "expected an object");
    if (o.contains("expr")) {
      p.objective.nonlinear = Parse(o["expr"], at + "/expr");
      return;
    }
    if (o.contains("linear")) {
      for (const auto& [j, a] : Coeffs(o["linear"], at + "/linear")) {
        p.objective.linear.coeffs[j] = a;
      }
    }
    if (o.contains("constant")) p.objective.linear.constant = Number(o["constant"], at + "/constant");
  }

  std::string source_;
  Json root_;
  std::unique_ptr<PositionIndex> index_;
  std::vector<std::string> names_;
};

nlohmann::ordered_json Bound(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

ProblemFormatError::ProblemFormatError(const std::string& source, int line, int column,
                                       const std::string& what)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) + ":" +
                                                  std::to_string(column)
                                            : std::string()) +
                         ": " + what),
      line_(line),
      column_(column) {}

LoadedProblem ParseProblem(const std::string& text, const std::string& source) {
  Reader reader(text, source);
  return reader.Read();
}

LoadedProblem LoadProblem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProblemFormatError(path, 0, 0, "cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseProblem(buffer.str(), path);
}

nlohmann::ordered_json ProblemToJson(const StandardFormProblem& problem) {
  using OJson = nlohmann::ordered_json;
  const auto names = problem.VariableNames();
  OJson j;
  j["name"] = problem.name;
  OJson vars = OJson::array();
  for (const auto& v : problem.variables) {
    vars.push_back({{"name", v.name}, {"lb", Bound(v.lower)}, {"ub", Bound(v.upper)},
                    {"integer", v.integral}});
  }
  j["variables"] = vars;
  OJson linear = OJson::array();
  auto emit_rows = [&](const std::vector<LinearRow>& rows, const char* sense) {
    for (const auto& r : rows) {
      OJson coeffs = OJson::object();
      for (const auto& [k, a] : r.terms) coeffs[names[k]] = a;
      linear.push_back({{"name", r.name}, {"coeffs", coeffs}, {"sense", sense}, {"rhs", r.rhs}});
    }
  };
  emit_rows(problem.inequalities, ">=");
  emit_rows(problem.equalities, "==");
  j["linear"] = linear;
  OJson nonlinear = OJson::array();
  for (const auto& c : problem.nonlinear) {
    OJson entry;
    entry["name"] = c.name;
    if (c.body) {
      entry["expr"] = c.body->ToString();
    } else {
      entry["blackbox"] = c.black_box_id;
      OJson vs = OJson::array();
      for (int k : c.active_vars) vs.push_back(names[k]);
      entry["vars"] = vs;
    }
    entry["sense"] = c.sense == ConstraintSense::kEqualZero ? "==" : ">=";
    if (c.use_regressor) entry["separable"] = true;
    nonlinear.push_back(entry);
  }
  j["nonlinear"] = nonlinear;
  if (problem.objective.nonlinear) {
    j["objective"] = {{"expr", problem.objective.nonlinear->ToString()}};
  } else {
    OJson coeffs = OJson::object();
    for (const auto& [k, a] : problem.objective.linear.coeffs) coeffs[names[k]] = a;
    j["objective"] = {{"linear", coeffs}, {"constant", problem.objective.linear.constant}};
  }
  return j;
}

}  // namespace treegopt
