// Copyright 2026 The polyvul Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POLYVUL_TESTS_LP_ORACLE_H_
#define POLYVUL_TESTS_LP_ORACLE_H_

#include <cmath>
#include <optional>
#include <vector>

#include "linprog.h"
#include "rng.h"

namespace polyvul::testing_util {

// Random LP with box bounds on every variable and only <= rows.
inline LinearProgram RandomBoxLp(Rng& rng, int n, int m) {
  LinearProgram lp(rng.Uniform() < 0.5 ? LpSense::kMinimize
                                       : LpSense::kMaximize);
  for (int j = 0; j < n; ++j) {
    const double lo = rng.Uniform(-2, 0);
    lp.AddVariable(rng.Uniform(-1, 1), lo, lo + rng.Uniform(0.5, 3));
  }
  for (int r = 0; r < m; ++r) {
    LpRow row;
    for (int j = 0; j < n; ++j) row.emplace_back(j, rng.Uniform(-1, 1));
    lp.AddLessEqual(row, rng.Uniform(-0.5, 2.0));
  }
  return lp;
}

// Solves the square system in place; false when singular.
inline bool SolveSquare(std::vector<std::vector<double>> a,
                        std::vector<double> b, std::vector<double>& x) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (std::abs(a[piv][c]) < 1e-10) return false;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.resize(n);
  for (int c = 0; c < n; ++c) x[c] = b[c] / a[c][c];
  return true;
}

// Best objective over all basic feasible points of an LP whose variables all
// have finite boxes and which has only <= rows; nullopt if none is feasible.
inline std::optional<double> VertexEnumerationOptimum(const LinearProgram& lp) {
  const int n = lp.num_variables();
  // Every constraint as (coefficients, rhs) of a <= row.
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (int r = 0; r < lp.num_less_equal(); ++r) {
    std::vector<double> row(n, 0.0);
    for (const auto& [j, c] : lp.le_rows()[r]) row[j] += c;
    rows.push_back(row);
    rhs.push_back(lp.le_rhs()[r]);
  }
  for (int j = 0; j < n; ++j) {
    std::vector<double> up(n, 0.0), down(n, 0.0);
    up[j] = 1;
    down[j] = -1;
    rows.push_back(up);
    rhs.push_back(lp.upper()[j]);
    rows.push_back(down);
    rhs.push_back(-lp.lower()[j]);
  }
  const int total = static_cast<int>(rows.size());
  std::optional<double> best;
  std::vector<int> pick(n);
  for (int i = 0; i < n; ++i) pick[i] = i;
  while (true) {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (int i : pick) {
      a.push_back(rows[i]);
      b.push_back(rhs[i]);
    }
    std::vector<double> x;
    if (SolveSquare(a, b, x)) {
      bool ok = true;
      for (int r = 0; r < total && ok; ++r) {
        double s = 0;
        for (int j = 0; j < n; ++j) s += rows[r][j] * x[j];
        ok = s <= rhs[r] + 1e-9;
      }
      if (ok) {
        const double v = lp.Evaluate(x);
        if (!best || (lp.sense() == LpSense::kMinimize ? v < *best : v > *best)) {
          best = v;
        }
      }
    }
    int i = n - 1;
    while (i >= 0 && pick[i] == total - n + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int k = i + 1; k < n; ++k) pick[k] = pick[k - 1] + 1;
  }
  return best;
}

}  // namespace polyvul::testing_util

#endif  // POLYVUL_TESTS_LP_ORACLE_H_
