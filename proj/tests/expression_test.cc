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

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace treegopt {
namespace {

const std::vector<std::string> kDemoVars = {"x1", "x2", "x3", "x4", "x5", "x6"};
const char kG1[] = "0.8*log(x2 + 1) + 0.96*log(x1 - x2 + 1) - 0.8*x3";

double Eval(const Expression& e, std::vector<double> x) { return e(x); }

TEST(ExpressionTest, ParsesAndEvaluatesSpecExamples) {
  const std::vector<std::string> x2 = {"x2"};
  Expression e = ParseExpression("0.8*log(x2+1)", x2);
  EXPECT_EQ(e.kind(), NodeKind::kBinary);
  EXPECT_EQ(e.op(), OpCode::kMul);
  EXPECT_EQ(e.children()[1].op(), OpCode::kLog);
  EXPECT_EQ(e.children()[1].children()[0].op(), OpCode::kAdd);
  EXPECT_EQ(Eval(e, {0.0}), 0.0);

  const std::vector<std::string> xy = {"x1", "x2"};
  EXPECT_EQ(Eval(ParseExpression("x1 - x2", xy), {1.0, 1.0}), 0.0);

  const std::vector<std::string> x6 = {"x6"};
  EXPECT_DOUBLE_EQ(Eval(ParseExpression("110*x6^3", x6), {2.0}), 880.0);
}

TEST(ExpressionTest, EvaluatesDemoConstraint) {
  Expression g1 = ParseExpression(kG1, kDemoVars);
  EXPECT_NEAR(Eval(g1, {1, 1, 0, 0, 0, 0}), 0.8 * std::log(2.0), 1e-15);
  EXPECT_NEAR(Eval(g1, {1, 1, 0, 0, 0, 0}), 0.55452, 1e-5);
  EXPECT_EQ(Eval(g1, {0, 0, 0, 0, 0, 0}), 0.0);
  try {
    Eval(g1, {0, 1, 0, 0, 0, 0});
    FAIL() << "expected a domain error";
  } catch (const DomainError& err) {
    EXPECT_NE(err.subexpression().find("log"), std::string::npos);
    EXPECT_NE(err.subexpression().find("x1"), std::string::npos);
  }
}

TEST(ExpressionTest, PrecedenceAndAssociativity) {
  const std::vector<std::string> v = {"a", "b", "c"};
  EXPECT_DOUBLE_EQ(Eval(ParseExpression("a - b - c", v), {1, 2, 3}), -4.0);
  EXPECT_DOUBLE_EQ(Eval(ParseExpression("a / b / c", v), {8, 2, 2}), 2.0);
  EXPECT_DOUBLE_EQ(Eval(ParseExpression("a ^ b ^ c", v), {2, 3, 2}), 512.0);
  EXPECT_DOUBLE_EQ(Eval(ParseExpression("-a ^ 2", v), {3, 0, 0}), -9.0);
  EXPECT_DOUBLE_EQ(Eval(ParseExpression("a + b * c", v), {1, 2, 3}), 7.0);
  EXPECT_DOUBLE_EQ(Eval(ParseExpression("2e-1 * a", v), {5, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(Eval(ParseExpression("min(a, b, c) + max(a, b)", v), {4, 2, 3}), 6.0);
  EXPECT_DOUBLE_EQ(Eval(ParseExpression("pow(a, b)", v), {2, 5, 0}), 32.0);
}

TEST(ExpressionTest, ParseErrors) {
  const std::vector<std::string> v = {"x"};
  EXPECT_THROW(ParseExpression("y + 1", v), ParseError);
  EXPECT_THROW(ParseExpression("log(x, x)", v), ParseError);
  EXPECT_THROW(ParseExpression("pow(x)", v), ParseError);
  EXPECT_THROW(ParseExpression("(x + 1", v), ParseError);
  EXPECT_THROW(ParseExpression("x + 1)", v), ParseError);
  EXPECT_THROW(ParseExpression("foo(x)", v), ParseError);
  try {
    ParseExpression("x + * 2", v);
    FAIL();
  } catch (const ParseError& err) {
    EXPECT_EQ(err.position(), 4u);
  }
}

TEST(ExpressionTest, DomainErrors) {
  const std::vector<std::string> v = {"x"};
  EXPECT_THROW(Eval(ParseExpression("1 / x", v), {0.0}), DomainError);
  EXPECT_THROW(Eval(ParseExpression("sqrt(x)", v), {-1.0}), DomainError);
  EXPECT_THROW(Eval(ParseExpression("x ^ 0.5", v), {-1.0}), DomainError);
  EXPECT_THROW(Eval(ParseExpression("exp(x)", v), {1000.0}), DomainError);
}

// Random expression generator for the round-trip property.
Expression RandomExpression(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_real_distribution<double> c(-3.0, 3.0);
  const int k = depth <= 0 ? pick(rng) % 2 : pick(rng);
  switch (k) {
    case 0:
      return Expression::Constant(std::round(c(rng) * 1000) / 1000);
    case 1: {
      const int i = std::uniform_int_distribution<int>(0, 2)(rng);
      return Expression::Variable(i, "v" + std::to_string(i));
    }
    case 2:
      return Expression::Binary(OpCode::kAdd, RandomExpression(rng, depth - 1),
                                RandomExpression(rng, depth - 1));
    case 3:
      return Expression::Binary(OpCode::kSub, RandomExpression(rng, depth - 1),
                                RandomExpression(rng, depth - 1));
    case 4:
      return Expression::Binary(OpCode::kMul, RandomExpression(rng, depth - 1),
                                RandomExpression(rng, depth - 1));
    case 5:
      return Expression::Unary(OpCode::kNeg, RandomExpression(rng, depth - 1));
    case 6:
      return Expression::Unary(OpCode::kSin, RandomExpression(rng, depth - 1));
    case 7:
      return Expression::Binary(OpCode::kPow, RandomExpression(rng, depth - 1),
                                Expression::Constant(2.0));
    case 8:
      return Expression::Nary(OpCode::kMax, {RandomExpression(rng, depth - 1),
                                             RandomExpression(rng, depth - 1)});
    default:
      return Expression::Unary(OpCode::kExp,
                               Expression::Unary(OpCode::kCos, RandomExpression(rng, depth - 1)));
  }
}

TEST(ExpressionTest, PrintParseRoundTrip) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const std::vector<std::string> names = {"v0", "v1", "v2"};
  for (int trial = 0; trial < 50; ++trial) {
    Expression e = RandomExpression(rng, 4);
    Expression back = ParseExpression(e.ToString(), names);
    // The canonical form is a fixed point of parse-then-print.
    EXPECT_EQ(ParseExpression(back.ToString(), names).ToString(), back.ToString());
    for (int k = 0; k < 100; ++k) {
      std::vector<double> x = {u(rng), u(rng), u(rng)};
      double a, b;
      try {
        a = e(x);
      } catch (const DomainError&) {
        EXPECT_THROW(back(x), DomainError);
        continue;
      }
      b = back(x);
      EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::fabs(a))) << e.ToString();
    }
  }
}

TEST(ExpressionTest, DemoConstraintRoundTrip) {
  Expression g1 = ParseExpression(kG1, kDemoVars);
  Expression back = ParseExpression(g1.ToString(), kDemoVars);
  EXPECT_TRUE(back.StructurallyEquals(g1)) << g1.ToString();
}

TEST(ExpressionTest, AffineAgreesWithMatrixForm) {
  const std::vector<std::string> v = {"a", "b", "c"};
  Expression e = ParseExpression("2*a - 3*(b - c)/4 + 7 - (a + c)*2 + -(b)", v);
  auto affine = ExtractAffine(e);
  ASSERT_TRUE(affine.has_value());
  // Hand-collected coefficients: a: 0, b: -1.75, c: -1.25, constant 7.
  EXPECT_EQ(affine->coeffs.count(0), 0u);
  EXPECT_DOUBLE_EQ(affine->coeffs.at(1), -1.75);
  EXPECT_DOUBLE_EQ(affine->coeffs.at(2), -1.25);
  EXPECT_DOUBLE_EQ(affine->constant, 7.0);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> x = {u(rng), u(rng), u(rng)};
    const double matrix = -1.75 * x[1] - 1.25 * x[2] + 7.0;
    EXPECT_NEAR(e(x), matrix, 1e-12);
    EXPECT_NEAR(affine->Evaluate(x), matrix, 1e-12);
  }
  EXPECT_FALSE(ExtractAffine(ParseExpression("a*b", v)).has_value());
  EXPECT_FALSE(ExtractAffine(ParseExpression("log(a)", v)).has_value());
  EXPECT_TRUE(ExtractAffine(ParseExpression("a*log(2)", v)).has_value());
}

TEST(ExpressionTest, SeparableSplit) {
  Expression g2 = ParseExpression(
      "log(x2 + 1) + 1.2*log(x1 - x2 + 1) - x3 - 2*x6 + 2", kDemoVars);
  auto split = SplitSeparable(g2);
  ASSERT_TRUE(split.has_value());
  EXPECT_DOUBLE_EQ(split->affine.coeffs.at(2), -1.0);
  EXPECT_DOUBLE_EQ(split->affine.coeffs.at(5), -2.0);
  EXPECT_DOUBLE_EQ(split->affine.constant, 2.0);
  std::vector<double> x = {1.5, 0.3, 0.2, 0, 0, 1};
  EXPECT_NEAR(split->affine.Evaluate(x) + split->remainder(x), g2(x), 1e-14);
  EXPECT_FALSE(SplitSeparable(ParseExpression("log(x1 + 1)", kDemoVars)).has_value());
}

TEST(ExpressionTest, ForwardModeDerivative) {
  const std::vector<std::string> v = {"x"};
  Expression e = ParseExpression("x^2", v);
  std::vector<Dual> point = {Dual{3.0, 1.0}};
  const Dual d = e.Evaluate<Dual>(point);
  EXPECT_EQ(d.value, 9.0);
  EXPECT_EQ(d.deriv, 6.0);
}

}  // namespace
}  // namespace treegopt
