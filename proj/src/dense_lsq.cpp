// Copyright 2026 The Cyclecast Authors.
//
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

#include "dense_lsq.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace cyclecast::internal {

std::vector<double> JacobiSingularValues(ColumnMatrix a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  constexpr double kEps = 1e-15;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += a(i, p) * a(i, p);
          beta += a(i, q) * a(i, q);
          gamma += a(i, p) * a(i, q);
        }
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double ap = a(i, p);
          const double aq = a(i, q);
          a(i, p) = c * ap - s * aq;
          a(i, q) = s * ap + c * aq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) ss += a(i, j) * a(i, j);
    sv[j] = std::sqrt(ss);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

QrSolve HouseholderLeastSquares(ColumnMatrix a, std::vector<double> b,
                                double rank_tol) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<double> v(m);

  for (std::size_t k = 0; k < n && k < m; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < m; ++i) norm = std::hypot(norm, a(i, k));
    if (norm == 0.0) continue;
    const double alpha = a(k, k) > 0.0 ? -norm : norm;
    double vnorm2 = 0.0;
    for (std::size_t i = k; i < m; ++i) {
      v[i] = a(i, k);
      if (i == k) v[i] -= alpha;
      vnorm2 += v[i] * v[i];
    }
    if (vnorm2 == 0.0) continue;
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += v[i] * a(i, j);
      s = 2.0 * s / vnorm2;
      for (std::size_t i = k; i < m; ++i) a(i, j) -= s * v[i];
    }
    double s = 0.0;
    for (std::size_t i = k; i < m; ++i) s += v[i] * b[i];
    s = 2.0 * s / vnorm2;
    for (std::size_t i = k; i < m; ++i) b[i] -= s * v[i];
  }

  ColumnMatrix r(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i <= j && i < m; ++i) r(i, j) = a(i, j);
  }

  QrSolve out;
  out.singular_values = JacobiSingularValues(r);
  if (out.singular_values.empty() ||
      !(out.singular_values.back() > rank_tol * out.singular_values.front())) {
    return out;
  }

  out.solution.assign(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= r(i, j) * out.solution[j];
    out.solution[i] = s / r(i, i);
  }
  return out;
}

}  // namespace cyclecast::internal
