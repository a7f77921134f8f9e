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

#ifndef TREEGOPT_DUAL_H_
#define TREEGOPT_DUAL_H_

#include <cmath>

namespace treegopt {

// Forward-mode dual number carrying one directional derivative. A full
// gradient is obtained by one seeded pass per active variable.
struct Dual {
  double value = 0.0;
  double deriv = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double v) : value(v) {}  // NOLINT: implicit from constants
  constexpr Dual(double v, double d) : value(v), deriv(d) {}
};

inline Dual operator-(const Dual& a) { return {-a.value, -a.deriv}; }
inline Dual operator+(const Dual& a, const Dual& b) {
  return {a.value + b.value, a.deriv + b.deriv};
}
inline Dual operator-(const Dual& a, const Dual& b) {
  return {a.value - b.value, a.deriv - b.deriv};
}
inline Dual operator*(const Dual& a, const Dual& b) {
  return {a.value * b.value, a.deriv * b.value + a.value * b.deriv};
}
inline Dual operator/(const Dual& a, const Dual& b) {
  const double q = a.value / b.value;
  return {q, (a.deriv - q * b.deriv) / b.value};
}

// Scalar kernels shared by double and Dual evaluation. Domain checks live in
// the expression evaluator; these only implement the arithmetic.
namespace math {

inline double Value(double x) { return x; }
inline double Value(const Dual& x) { return x.value; }

inline double Exp(double x) { return std::exp(x); }
inline double Log(double x) { return std::log(x); }
inline double Sqrt(double x) { return std::sqrt(x); }
inline double Abs(double x) { return std::fabs(x); }
inline double Sin(double x) { return std::sin(x); }
inline double Cos(double x) { return std::cos(x); }
inline double Tan(double x) { return std::tan(x); }
inline double Pow(double x, double y) { return std::pow(x, y); }
inline double PowConst(double x, double c) { return std::pow(x, c); }

inline Dual Exp(const Dual& x) {
  const double e = std::exp(x.value);
  return {e, e * x.deriv};
}
inline Dual Log(const Dual& x) { return {std::log(x.value), x.deriv / x.value}; }
inline Dual Sqrt(const Dual& x) {
  const double s = std::sqrt(x.value);
  return {s, x.deriv / (2.0 * s)};
}
inline Dual Abs(const Dual& x) {
  const double sign = x.value > 0 ? 1.0 : (x.value < 0 ? -1.0 : 0.0);
  return {std::fabs(x.value), sign * x.deriv};
}
inline Dual Sin(const Dual& x) {
  return {std::sin(x.value), std::cos(x.value) * x.deriv};
}
inline Dual Cos(const Dual& x) {
  return {std::cos(x.value), -std::sin(x.value) * x.deriv};
}
inline Dual Tan(const Dual& x) {
  const double t = std::tan(x.value);
  return {t, (1.0 + t * t) * x.deriv};
}
// x^c with a constant exponent; valid for negative x when c is integral.
inline Dual PowConst(const Dual& x, double c) {
  if (c == 0.0) return {1.0, 0.0};
  const double v = std::pow(x.value, c);
  const double d = (c == 1.0) ? 1.0 : c * std::pow(x.value, c - 1.0);
  return {v, d * x.deriv};
}
// General x^y, requires x > 0 unless y carries no derivative.
inline Dual Pow(const Dual& x, const Dual& y) {
  if (y.deriv == 0.0) return PowConst(x, y.value);
  const double v = std::pow(x.value, y.value);
  const double dx = (x.deriv == 0.0) ? 0.0
                                     : y.value * std::pow(x.value, y.value - 1.0) * x.deriv;
  return {v, dx + v * std::log(x.value) * y.deriv};
}

}  // namespace math
}  // namespace treegopt

#endif  // TREEGOPT_DUAL_H_
