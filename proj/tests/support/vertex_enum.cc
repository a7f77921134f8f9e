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

#include "support/vertex_enum.h"

#include <cmath>
#include <stdexcept>

namespace treegopt::testing {
namespace {

using Vec = std::vector<mpq_class>;

struct Ray {
  Vec v;
  std::vector<bool> zero;  // over processed halfspaces
};

mpq_class Dot(const Vec& h, const Vec& r) {
  mpq_class s = 0;
  for (size_t i = 0; i < h.size(); ++i) {
    if (sgn(h[i]) != 0 && sgn(r[i]) != 0) s += h[i] * r[i];
  }
  return s;
}

// Scales a ray so that its largest absolute entry is one.
void Normalize(Vec& r) {
  mpq_class m = 0;
  for (const auto& x : r) {
    if (abs(x) > m) m = abs(x);
  }
  if (sgn(m) != 0) {
    for (auto& x : r) x /= m;
  }
}

// Indices of a maximal linearly independent subset of rows, greedily.
std::vector<int> IndependentRows(const std::vector<Vec>& h, int d) {
  std::vector<Vec> basis;  // reduced rows with distinct pivots
  std::vector<int> pivots, chosen;
  for (int i = 0; i < static_cast<int>(h.size()) && static_cast<int>(chosen.size()) < d; ++i) {
    Vec r = h[i];
    for (size_t k = 0; k < basis.size(); ++k) {
      if (sgn(r[pivots[k]]) == 0) continue;
      const mpq_class f = r[pivots[k]] / basis[k][pivots[k]];
      for (int j = 0; j < d; ++j) r[j] -= f * basis[k][j];
    }
    int piv = -1;
    for (int j = 0; j < d; ++j) {
      if (sgn(r[j]) != 0) {
        piv = j;
        break;
      }
    }
    if (piv < 0) continue;
    basis.push_back(std::move(r));
    pivots.push_back(piv);
    chosen.push_back(i);
  }
  return chosen;
}

// Inverse of a square rational matrix by Gauss-Jordan elimination.
std::vector<Vec> Inverse(std::vector<Vec> m) {
  const int d = static_cast<int>(m.size());
  std::vector<Vec> inv(d, Vec(d, 0));
  for (int i = 0; i < d; ++i) inv[i][i] = 1;
  for (int c = 0; c < d; ++c) {
    int p = c;
    while (p < d && sgn(m[p][c]) == 0) ++p;
    if (p == d) throw std::logic_error("singular initial basis");
    std::swap(m[p], m[c]);
    std::swap(inv[p], inv[c]);
    const mpq_class piv = m[c][c];
    for (int j = 0; j < d; ++j) {
      m[c][j] /= piv;
      inv[c][j] /= piv;
    }
    for (int i = 0; i < d; ++i) {
      if (i == c || sgn(m[i][c]) == 0) continue;
      const mpq_class f = m[i][c];
      for (int j = 0; j < d; ++j) {
        m[i][j] -= f * m[c][j];
        inv[i][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

}  // namespace

VertexEnumeration EnumerateVertices(const std::vector<Vec>& a, const Vec& b) {
  const int n = a.empty() ? 0 : static_cast<int>(a[0].size());
  const int d = n + 1;
  // Cone rows (A, -b) (x, t) >= 0 and t >= 0.
  std::vector<Vec> h;
  for (size_t i = 0; i < a.size(); ++i) {
    Vec row = a[i];
    row.push_back(-b[i]);
    h.push_back(std::move(row));
  }
  Vec t(d, 0);
  t[n] = 1;
  h.push_back(t);
  const int m = static_cast<int>(h.size());

  const std::vector<int> init = IndependentRows(h, d);
  if (static_cast<int>(init.size()) < d) throw std::invalid_argument("cone is not pointed");
  std::vector<Vec> a0;
  for (int i : init) a0.push_back(h[i]);
  const std::vector<Vec> inv = Inverse(a0);

  std::vector<bool> done(m, false);
  for (int i : init) done[i] = true;
  std::vector<Ray> rays;
  for (int c = 0; c < d; ++c) {
    Ray r;
    r.v.resize(d);
    for (int i = 0; i < d; ++i) r.v[i] = inv[i][c];
    Normalize(r.v);
    r.zero.assign(m, false);
    for (int k = 0; k < d; ++k) r.zero[init[k]] = k != c;
    rays.push_back(std::move(r));
  }

  for (int row = 0; row < m; ++row) {
    if (done[row]) continue;
    std::vector<mpq_class> s(rays.size());
    std::vector<int> plus, minus;
    for (size_t i = 0; i < rays.size(); ++i) {
      s[i] = Dot(h[row], rays[i].v);
      if (sgn(s[i]) > 0) plus.push_back(static_cast<int>(i));
      if (sgn(s[i]) < 0) minus.push_back(static_cast<int>(i));
    }
    std::vector<Ray> next;
    for (int p : plus) {
      for (int q : minus) {
        std::vector<bool> common(m);
        int size = 0;
        for (int k = 0; k < m; ++k) {
          common[k] = rays[p].zero[k] && rays[q].zero[k];
          size += common[k];
        }
        if (size < d - 2) continue;
        // Combinatorial adjacency: no third ray vanishes on the common set.
        bool adjacent = true;
        for (size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (static_cast<int>(r) == p || static_cast<int>(r) == q) continue;
          bool contains = true;
          for (int k = 0; k < m && contains; ++k) contains = !common[k] || rays[r].zero[k];
          adjacent = !contains;
        }
        if (!adjacent) continue;
        Ray nr;
        nr.v.resize(d);
        for (int i = 0; i < d; ++i) nr.v[i] = s[p] * rays[q].v[i] - s[q] * rays[p].v[i];
        Normalize(nr.v);
        nr.zero = std::move(common);
        nr.zero[row] = true;
        next.push_back(std::move(nr));
      }
    }
    for (size_t i = 0; i < rays.size(); ++i) {
      if (sgn(s[i]) < 0) continue;
      if (sgn(s[i]) == 0) rays[i].zero[row] = true;
      next.push_back(std::move(rays[i]));
    }
    rays = std::move(next);
    done[row] = true;
  }

  VertexEnumeration out;
  for (const auto& r : rays) {
    if (sgn(r.v[n]) == 0) {
      ++out.recession_rays;
      continue;
    }
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = r.v[i] / r.v[n];
    out.vertices.push_back(std::move(x));
  }
  return out;
}

VertexEnumeration EnumerateVertices(const LinearModel& model) {
  const int n = model.num_cols();
  std::vector<Vec> a;
  Vec b;
  auto add = [&](const std::vector<std::pair<int, double>>& terms, double sign, double rhs) {
    Vec row(n, 0);
    for (const auto& [j, v] : terms) row[j] += mpq_class(sign * v);
    a.push_back(std::move(row));
    b.push_back(mpq_class(sign * rhs));
  };
  for (const auto& row : model.rows) {
    if (std::isfinite(row.lower)) add(row.terms, 1.0, row.lower);
    if (std::isfinite(row.upper)) add(row.terms, -1.0, row.upper);
  }
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(model.col_lower[j])) add({{j, 1.0}}, 1.0, model.col_lower[j]);
    if (std::isfinite(model.col_upper[j])) add({{j, 1.0}}, -1.0, model.col_upper[j]);
  }
  return EnumerateVertices(a, b);
}

}  // namespace treegopt::testing
