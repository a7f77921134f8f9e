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

// Expression trees for explicit constraint and objective bodies.
//
// An Expression is an immutable, cheaply copyable handle to a shared node
// graph. Evaluation is templated on the scalar so the same tree serves plain
// doubles and forward-mode duals. Domain violations (log of a non-positive
// value, division by zero, non-finite intermediate results) throw
// DomainError naming the offending subexpression.

#ifndef TREEGOPT_EXPRESSION_H_
#define TREEGOPT_EXPRESSION_H_

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "treegopt/dual.h"

namespace treegopt {

enum class NodeKind { kConstant, kVariable, kUnary, kBinary, kNary };

enum class OpCode {
  kNone,
  kNeg,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,
  kExp,
  kLog,
  kSqrt,
  kAbs,
  kMin,
  kMax,
  kSin,
  kCos,
  kTan,
};

class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& what, std::string subexpression)
      : std::runtime_error(what + " in '" + subexpression + "'"),
        subexpression_(std::move(subexpression)) {}
  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  size_t position() const { return position_; }

 private:
  size_t position_;
};

class Expression {
 public:
  Expression();  // the constant 0

  static Expression Constant(double value);
  static Expression Variable(int index, std::string name);
  static Expression Unary(OpCode op, Expression arg);
  static Expression Binary(OpCode op, Expression lhs, Expression rhs);
  static Expression Nary(OpCode op, std::vector<Expression> args);

  NodeKind kind() const { return node_->kind; }
  OpCode op() const { return node_->op; }
  double constant() const { return node_->constant; }
  int var_index() const { return node_->var_index; }
  const std::string& var_name() const { return node_->var_name; }
  std::span<const Expression> children() const { return node_->children; }

  // Evaluates at `point`, indexed by global variable index.
  template <typename T>
  T Evaluate(std::span<const T> point) const;
  double operator()(std::span<const double> point) const {
    return Evaluate<double>(point);
  }

  // Sorted, unique variable indices referenced anywhere in the tree.
  std::vector<int> Variables() const;
  // Largest referenced variable index, -1 when none.
  int MaxVariableIndex() const;

  // Canonical infix form; parsing it back yields an equivalent tree.
  std::string ToString() const;

  // Structural equality (same shape, ops, constants and variables).
  bool StructurallyEquals(const Expression& other) const;

  // Rewrites variable indices through `mapping` (old index -> new index).
  Expression Remap(std::span<const int> mapping) const;

 private:
  struct Node {
    NodeKind kind = NodeKind::kConstant;
    OpCode op = OpCode::kNone;
    double constant = 0.0;
    int var_index = -1;
    std::string var_name;
    std::vector<Expression> children;
  };
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  template <typename T>
  T Check(T value) const {
    if (!std::isfinite(math::Value(value))) {
      throw DomainError("non-finite value", ToString());
    }
    if constexpr (!std::is_same_v<T, double>) {
      if (!std::isfinite(value.deriv)) {
        throw DomainError("non-finite derivative", ToString());
      }
    }
    return value;
  }

  std::shared_ptr<const Node> node_;
};

// Parses an infix formula. Supported: + - * / ^, unary minus, numbers with
// optional exponent, and the functions exp log sqrt abs sin cos tan (one
// argument), pow (two), min max (two or more). Identifiers must appear in
// `variables`; the position in that list becomes the variable index.
Expression ParseExpression(std::string_view text,
                           std::span<const std::string> variables);

// Affine view a.x + b of an expression, if it is syntactically affine.
struct AffineForm {
  std::map<int, double> coeffs;
  double constant = 0.0;

  double Evaluate(std::span<const double> point) const;
};
std::optional<AffineForm> ExtractAffine(const Expression& expr);

// Splits a top-level sum into affine terms and a non-affine remainder:
// expr == affine + remainder. Returns nullopt unless both parts are present.
struct SeparableSplit {
  AffineForm affine;
  Expression remainder;
};
std::optional<SeparableSplit> SplitSeparable(const Expression& expr);

// ---------------------------------------------------------------------------

template <typename T>
T Expression::Evaluate(std::span<const T> point) const {
  const Node& n = *node_;
  switch (n.kind) {
    case NodeKind::kConstant:
      return T(n.constant);
    case NodeKind::kVariable:
      if (n.var_index < 0 || static_cast<size_t>(n.var_index) >= point.size()) {
        throw DomainError("variable index out of range", n.var_name);
      }
      return point[n.var_index];
    case NodeKind::kUnary: {
      const T a = n.children[0].Evaluate<T>(point);
      const double av = math::Value(a);
      switch (n.op) {
        case OpCode::kNeg:
          return -a;
        case OpCode::kExp:
          return Check(math::Exp(a));
        case OpCode::kLog:
          if (!(av > 0.0)) throw DomainError("log of non-positive value", ToString());
          return Check(math::Log(a));
        case OpCode::kSqrt:
          if (av < 0.0) throw DomainError("sqrt of negative value", ToString());
          return Check(math::Sqrt(a));
        case OpCode::kAbs:
          return math::Abs(a);
        case OpCode::kSin:
          return math::Sin(a);
        case OpCode::kCos:
          return math::Cos(a);
        case OpCode::kTan:
          return Check(math::Tan(a));
        default:
          break;
      }
      break;
    }
    case NodeKind::kBinary: {
      const T a = n.children[0].Evaluate<T>(point);
      if (n.op == OpCode::kPow && n.children[1].kind() == NodeKind::kConstant) {
        const double c = n.children[1].constant();
        const double av = math::Value(a);
        if (av < 0.0 && std::floor(c) != c) {
          throw DomainError("fractional power of negative value", ToString());
        }
        if (av == 0.0 && c < 0.0) throw DomainError("division by zero", ToString());
        return Check(math::PowConst(a, c));
      }
      const T b = n.children[1].Evaluate<T>(point);
      switch (n.op) {
        case OpCode::kAdd:
          return Check(a + b);
        case OpCode::kSub:
          return Check(a - b);
        case OpCode::kMul:
          return Check(a * b);
        case OpCode::kDiv:
          if (math::Value(b) == 0.0) throw DomainError("division by zero", ToString());
          return Check(a / b);
        case OpCode::kPow:
          if (!(math::Value(a) > 0.0)) {
            throw DomainError("variable power of non-positive value", ToString());
          }
          return Check(math::Pow(a, b));
        case OpCode::kMin:
          return math::Value(b) < math::Value(a) ? b : a;
        case OpCode::kMax:
          return math::Value(b) > math::Value(a) ? b : a;
        default:
          break;
      }
      break;
    }
    case NodeKind::kNary: {
      T acc = n.children[0].Evaluate<T>(point);
      for (size_t i = 1; i < n.children.size(); ++i) {
        const T v = n.children[i].Evaluate<T>(point);
        switch (n.op) {
          case OpCode::kAdd:
            acc = acc + v;
            break;
          case OpCode::kMul:
            acc = acc * v;
            break;
          case OpCode::kMin:
            if (math::Value(v) < math::Value(acc)) acc = v;
            break;
          case OpCode::kMax:
            if (math::Value(v) > math::Value(acc)) acc = v;
            break;
          default:
            throw DomainError("unsupported n-ary operator", ToString());
        }
      }
      return Check(acc);
    }
  }
  throw DomainError("malformed expression node", "?");
}

}  // namespace treegopt

#endif  // TREEGOPT_EXPRESSION_H_
