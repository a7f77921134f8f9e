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

#include "treegopt/expression.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

namespace treegopt {
namespace {

struct FunctionInfo {
  std::string_view name;
  OpCode op;
  int min_args;
  int max_args;  // -1: unbounded
};

constexpr FunctionInfo kFunctions[] = {
    {"exp", OpCode::kExp, 1, 1},   {"log", OpCode::kLog, 1, 1},
    {"sqrt", OpCode::kSqrt, 1, 1}, {"abs", OpCode::kAbs, 1, 1},
    {"sin", OpCode::kSin, 1, 1},   {"cos", OpCode::kCos, 1, 1},
    {"tan", OpCode::kTan, 1, 1},   {"pow", OpCode::kPow, 2, 2},
    {"min", OpCode::kMin, 2, -1},  {"max", OpCode::kMax, 2, -1},
};

const FunctionInfo* FindFunction(std::string_view name) {
  for (const auto& f : kFunctions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::string_view FunctionName(OpCode op) {
  for (const auto& f : kFunctions) {
    if (f.op == op) return f.name;
  }
  return "?";
}

std::string FormatNumber(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

// Printing precedence; higher binds tighter.
int Precedence(const Expression& e) {
  switch (e.kind()) {
    case NodeKind::kConstant:
      return e.constant() < 0 ? 3 : 5;
    case NodeKind::kVariable:
      return 5;
    case NodeKind::kUnary:
      return e.op() == OpCode::kNeg ? 3 : 5;
    case NodeKind::kBinary:
    case NodeKind::kNary:
      switch (e.op()) {
        case OpCode::kAdd:
        case OpCode::kSub:
          return 1;
        case OpCode::kMul:
        case OpCode::kDiv:
          return 2;
        case OpCode::kPow:
          return 4;
        default:
          return 5;
      }
  }
  return 5;
}

void Print(const Expression& e, std::string& out);

void PrintChild(const Expression& child, bool parens, std::string& out) {
  if (parens) out += '(';
  Print(child, out);
  if (parens) out += ')';
}

void Print(const Expression& e, std::string& out) {
  switch (e.kind()) {
    case NodeKind::kConstant:
      out += FormatNumber(e.constant());
      return;
    case NodeKind::kVariable:
      out += e.var_name();
      return;
    case NodeKind::kUnary:
      if (e.op() == OpCode::kNeg) {
        out += '-';
        PrintChild(e.children()[0], Precedence(e.children()[0]) <= 3, out);
      } else {
        out += FunctionName(e.op());
        PrintChild(e.children()[0], true, out);
      }
      return;
    case NodeKind::kBinary:
    case NodeKind::kNary: {
      const auto kids = e.children();
      const int prec = Precedence(e);
      if (prec == 5) {  // function-call syntax (min/max)
        out += FunctionName(e.op());
        out += '(';
        for (size_t i = 0; i < kids.size(); ++i) {
          if (i) out += ", ";
          Print(kids[i], out);
        }
        out += ')';
        return;
      }
      if (e.op() == OpCode::kPow) {
        PrintChild(kids[0], Precedence(kids[0]) <= 4, out);
        out += '^';
        PrintChild(kids[1], Precedence(kids[1]) < 4, out);
        return;
      }
      const char sym = e.op() == OpCode::kAdd   ? '+'
                       : e.op() == OpCode::kSub ? '-'
                       : e.op() == OpCode::kMul ? '*'
                                                : '/';
      // Left-associative: the leftmost child only needs parentheses when it
      // binds looser; every later child also when it binds equally.
      PrintChild(kids[0], Precedence(kids[0]) < prec, out);
      for (size_t i = 1; i < kids.size(); ++i) {
        out += ' ';
        out += sym;
        out += ' ';
        PrintChild(kids[i], Precedence(kids[i]) <= prec, out);
      }
      return;
    }
  }
}

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> vars)
      : text_(text), vars_(vars) {}

  Expression Parse() {
    Expression e = ParseSum();
    SkipSpace();
    if (pos_ < text_.size()) {
      if (text_[pos_] == ')') throw ParseError("unbalanced parentheses", pos_);
      throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'",
                       pos_);
    }
    return e;
  }

 private:
  void SkipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }
  bool Accept(char c) {
    SkipSpace();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expression ParseSum() {
    Expression lhs = ParseProduct();
    while (true) {
      if (Accept('+')) {
        lhs = Expression::Binary(OpCode::kAdd, lhs, ParseProduct());
      } else if (Accept('-')) {
        lhs = Expression::Binary(OpCode::kSub, lhs, ParseProduct());
      } else {
        return lhs;
      }
    }
  }

  Expression ParseProduct() {
    Expression lhs = ParseUnary();
    while (true) {
      if (Accept('*')) {
        lhs = Expression::Binary(OpCode::kMul, lhs, ParseUnary());
      } else if (Accept('/')) {
        lhs = Expression::Binary(OpCode::kDiv, lhs, ParseUnary());
      } else {
        return lhs;
      }
    }
  }

  Expression ParseUnary() {
    if (Accept('-')) {
      Expression arg = ParseUnary();
      if (arg.kind() == NodeKind::kConstant) return Expression::Constant(-arg.constant());
      return Expression::Unary(OpCode::kNeg, arg);
    }
    if (Accept('+')) return ParseUnary();
    return ParsePower();
  }

  Expression ParsePower() {
    Expression base = ParsePrimary();
    if (Accept('^')) return Expression::Binary(OpCode::kPow, base, ParseUnary());
    return base;
  }

  Expression ParsePrimary() {
    SkipSpace();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      const size_t open = pos_++;
      Expression inner = ParseSum();
      if (!Accept(')')) throw ParseError("unbalanced parentheses", open);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return ParseNumber();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ParseIdentifier();
    if (c == ')') throw ParseError("unbalanced parentheses", pos_);
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  Expression ParseNumber() {
    const size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits();
      } else {
        pos_ = save;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      throw ParseError("malformed number", start);
    }
    return Expression::Constant(value);
  }

  Expression ParseIdentifier() {
    const size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    SkipSpace();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      const FunctionInfo* fn = FindFunction(name);
      if (fn == nullptr) {
        throw ParseError("unknown function '" + std::string(name) + "'", start);
      }
      const size_t open = pos_++;
      std::vector<Expression> args;
      SkipSpace();
      if (!(pos_ < text_.size() && text_[pos_] == ')')) {
        args.push_back(ParseSum());
        while (Accept(',')) args.push_back(ParseSum());
      }
      if (!Accept(')')) throw ParseError("unbalanced parentheses", open);
      const int n = static_cast<int>(args.size());
      if (n < fn->min_args || (fn->max_args >= 0 && n > fn->max_args)) {
        throw ParseError("arity mismatch for '" + std::string(name) + "': got " +
                             std::to_string(n) + " arguments",
                         start);
      }
      if (fn->op == OpCode::kMin || fn->op == OpCode::kMax) {
        return Expression::Nary(fn->op, std::move(args));
      }
      if (fn->op == OpCode::kPow) return Expression::Binary(OpCode::kPow, args[0], args[1]);
      return Expression::Unary(fn->op, args[0]);
    }
    for (size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == name) return Expression::Variable(static_cast<int>(i), vars_[i]);
    }
    if (FindFunction(name) != nullptr) {
      throw ParseError("arity mismatch for '" + std::string(name) + "': missing arguments",
                       start);
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view text_;
  std::span<const std::string> vars_;
  size_t pos_ = 0;
};

void CollectVariables(const Expression& e, std::set<int>& out) {
  if (e.kind() == NodeKind::kVariable) {
    out.insert(e.var_index());
    return;
  }
  for (const auto& c : e.children()) CollectVariables(c, out);
}

AffineForm Scale(AffineForm a, double s) {
  for (auto& [k, v] : a.coeffs) v *= s;
  a.constant *= s;
  return a;
}

AffineForm Combine(AffineForm a, const AffineForm& b, double sign) {
  for (const auto& [k, v] : b.coeffs) a.coeffs[k] += sign * v;
  a.constant += sign * b.constant;
  return a;
}

void DropZeros(AffineForm& a) {
  std::erase_if(a.coeffs, [](const auto& kv) { return kv.second == 0.0; });
}

void FlattenSum(const Expression& e, double sign,
                std::vector<std::pair<double, Expression>>& terms) {
  if ((e.kind() == NodeKind::kBinary || e.kind() == NodeKind::kNary) &&
      (e.op() == OpCode::kAdd || e.op() == OpCode::kSub)) {
    const auto kids = e.children();
    FlattenSum(kids[0], sign, terms);
    for (size_t i = 1; i < kids.size(); ++i) {
      FlattenSum(kids[i], e.op() == OpCode::kSub ? -sign : sign, terms);
    }
    return;
  }
  if (e.kind() == NodeKind::kUnary && e.op() == OpCode::kNeg) {
    FlattenSum(e.children()[0], -sign, terms);
    return;
  }
  terms.emplace_back(sign, e);
}

}  // namespace

Expression::Expression() : Expression(Constant(0.0)) {}

Expression Expression::Constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kConstant;
  n->constant = value;
  return Expression(std::move(n));
}

Expression Expression::Variable(int index, std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kVariable;
  n->var_index = index;
  n->var_name = std::move(name);
  return Expression(std::move(n));
}

Expression Expression::Unary(OpCode op, Expression arg) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kUnary;
  n->op = op;
  n->children.push_back(std::move(arg));
  return Expression(std::move(n));
}

Expression Expression::Binary(OpCode op, Expression lhs, Expression rhs) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kBinary;
  n->op = op;
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  return Expression(std::move(n));
}

Expression Expression::Nary(OpCode op, std::vector<Expression> args) {
  if (args.empty()) throw std::invalid_argument("n-ary node needs arguments");
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kNary;
  n->op = op;
  n->children = std::move(args);
  return Expression(std::move(n));
}

std::vector<int> Expression::Variables() const {
  std::set<int> s;
  CollectVariables(*this, s);
  return {s.begin(), s.end()};
}

int Expression::MaxVariableIndex() const {
  const auto v = Variables();
  return v.empty() ? -1 : v.back();
}

std::string Expression::ToString() const {
  std::string out;
  Print(*this, out);
  return out;
}

bool Expression::StructurallyEquals(const Expression& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind() || op() != other.op()) return false;
  switch (kind()) {
    case NodeKind::kConstant:
      return constant() == other.constant();
    case NodeKind::kVariable:
      return var_index() == other.var_index();
    default:
      break;
  }
  if (children().size() != other.children().size()) return false;
  for (size_t i = 0; i < children().size(); ++i) {
    if (!children()[i].StructurallyEquals(other.children()[i])) return false;
  }
  return true;
}

Expression Expression::Remap(std::span<const int> mapping) const {
  switch (kind()) {
    case NodeKind::kConstant:
      return *this;
    case NodeKind::kVariable:
      return Variable(mapping[var_index()], var_name());
    default:
      break;
  }
  auto n = std::make_shared<Node>(*node_);
  for (auto& c : n->children) c = c.Remap(mapping);
  return Expression(std::move(n));
}

Expression ParseExpression(std::string_view text, std::span<const std::string> variables) {
  return Parser(text, variables).Parse();
}

double AffineForm::Evaluate(std::span<const double> point) const {
  double v = constant;
  for (const auto& [k, a] : coeffs) v += a * point[k];
  return v;
}

std::optional<AffineForm> ExtractAffine(const Expression& e) {
  if (e.kind() == NodeKind::kConstant) return AffineForm{{}, e.constant()};
  if (e.kind() == NodeKind::kVariable) {
    AffineForm a;
    a.coeffs[e.var_index()] = 1.0;
    return a;
  }
  if (e.Variables().empty()) {
    try {
      return AffineForm{{}, e.Evaluate<double>(std::span<const double>())};
    } catch (const DomainError&) {
      return std::nullopt;
    }
  }
  const auto kids = e.children();
  std::optional<AffineForm> result;
  switch (e.op()) {
    case OpCode::kNeg: {
      auto a = ExtractAffine(kids[0]);
      if (a) result = Scale(*a, -1.0);
      break;
    }
    case OpCode::kAdd:
    case OpCode::kSub: {
      auto acc = ExtractAffine(kids[0]);
      for (size_t i = 1; acc && i < kids.size(); ++i) {
        auto b = ExtractAffine(kids[i]);
        if (!b) return std::nullopt;
        acc = Combine(*acc, *b, e.op() == OpCode::kSub ? -1.0 : 1.0);
      }
      result = acc;
      break;
    }
    case OpCode::kMul: {
      auto acc = ExtractAffine(kids[0]);
      for (size_t i = 1; acc && i < kids.size(); ++i) {
        auto b = ExtractAffine(kids[i]);
        if (!b) return std::nullopt;
        if (acc->coeffs.empty()) {
          acc = Scale(*b, acc->constant);
        } else if (b->coeffs.empty()) {
          acc = Scale(*acc, b->constant);
        } else {
          return std::nullopt;
        }
      }
      result = acc;
      break;
    }
    case OpCode::kDiv: {
      auto a = ExtractAffine(kids[0]);
      auto b = ExtractAffine(kids[1]);
      if (a && b && b->coeffs.empty() && b->constant != 0.0) {
        result = Scale(*a, 1.0 / b->constant);
      }
      break;
    }
    case OpCode::kPow: {
      if (kids[1].kind() == NodeKind::kConstant && kids[1].constant() == 1.0) {
        result = ExtractAffine(kids[0]);
      }
      break;
    }
    default:
      break;
  }
  if (result) DropZeros(*result);
  return result;
}

std::optional<SeparableSplit> SplitSeparable(const Expression& expr) {
  std::vector<std::pair<double, Expression>> terms;
  FlattenSum(expr, 1.0, terms);
  AffineForm affine;
  bool has_affine = false;
  std::vector<Expression> rest;
  for (const auto& [sign, term] : terms) {
    if (auto a = ExtractAffine(term)) {
      affine = Combine(affine, *a, sign);
      has_affine = true;
    } else {
      rest.push_back(sign > 0 ? term : Expression::Unary(OpCode::kNeg, term));
    }
  }
  if (!has_affine || rest.empty()) return std::nullopt;
  DropZeros(affine);
  Expression remainder = rest.size() == 1 ? rest[0] : Expression::Nary(OpCode::kAdd, rest);
  return SeparableSplit{std::move(affine), std::move(remainder)};
}

}  // namespace treegopt
