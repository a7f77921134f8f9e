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

#ifndef TREEGOPT_TESTS_SUPPORT_VERTEX_ENUM_H_
#define TREEGOPT_TESTS_SUPPORT_VERTEX_ENUM_H_

#include <vector>

#include <gmpxx.h>

#include "treegopt/model.h"

namespace treegopt::testing {

struct VertexEnumeration {
  std::vector<std::vector<mpq_class>> vertices;
  int recession_rays = 0;  // nonzero when the polyhedron is unbounded
};

// Exact vertices of {x : A x >= b} by the double description method on the
// homogenized cone. Rows must have full column rank.
VertexEnumeration EnumerateVertices(const std::vector<std::vector<mpq_class>>& a,
                                    const std::vector<mpq_class>& b);

// Vertices of the LP relaxation of `model`: rows and finite column bounds.
VertexEnumeration EnumerateVertices(const LinearModel& model);

}  // namespace treegopt::testing

#endif  // TREEGOPT_TESTS_SUPPORT_VERTEX_ENUM_H_
