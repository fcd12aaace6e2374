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

#include <cmath>
#include <optional>

#include "errors.h"
#include "gtest/gtest.h"
#include "linprog.h"
#include "lp_oracle.h"
#include "rng.h"

namespace polyvul {
namespace {

using testing_util::RandomBoxLp;
using testing_util::VertexEnumerationOptimum;

TEST(LinprogTest, SimpleMax) {
  LinearProgram lp(LpSense::kMaximize);
  const int x = lp.AddVariable(1.0);
  lp.AddLessEqual({{x, 1.0}}, 1.0);
  LpSolution s = Solve(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.x[0], 1.0, 1e-12);
  EXPECT_NEAR(s.objective, 1.0, 1e-12);
}

TEST(LinprogTest, Infeasible) {
  LinearProgram lp;
  const int x = lp.AddVariable(0.0);
  lp.AddLessEqual({{x, 1.0}}, -1.0);
  EXPECT_EQ(Solve(lp).status, LpStatus::kInfeasible);
  SimplexOptions dual;
  dual.dualize = DualizeMode::kAlways;
  EXPECT_EQ(Solve(lp, dual).status, LpStatus::kInfeasible);
}

TEST(LinprogTest, Unbounded) {
  LinearProgram lp(LpSense::kMaximize);
  const int x = lp.AddVariable(1.0);
  const int y = lp.AddVariable(0.0);
  lp.AddLessEqual({{x, 1.0}, {y, -1.0}}, 1.0);
  EXPECT_EQ(Solve(lp).status, LpStatus::kUnbounded);
  SimplexOptions dual;
  dual.dualize = DualizeMode::kAlways;
  EXPECT_EQ(Solve(lp, dual).status, LpStatus::kUnbounded);
}

TEST(LinprogTest, FreeAndBoundedVariables) {
  // min |x - 3| + |y + 2| written with free x, y and epigraph variables.
  for (DualizeMode mode : {DualizeMode::kNever, DualizeMode::kAlways}) {
    LinearProgram lp;
    const int x = lp.AddVariable(0.0, -kInfinity, kInfinity);
    const int y = lp.AddVariable(0.0, -kInfinity, 1.0);
    const int t = lp.AddVariable(1.0);
    const int u = lp.AddVariable(1.0);
    lp.AddLessEqual({{x, 1}, {t, -1}}, 3);
    lp.AddGreaterEqual({{x, 1}, {t, 1}}, 3);
    lp.AddLessEqual({{y, 1}, {u, -1}}, -2);
    lp.AddGreaterEqual({{y, 1}, {u, 1}}, -2);
    lp.AddEqual({{x, 1}, {y, 1}}, 1);
    SimplexOptions opt;
    opt.dualize = mode;
    LpSolution s = Solve(lp, opt);
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    EXPECT_NEAR(s.x[x], 3.0, 1e-9);
    EXPECT_NEAR(s.x[y], -2.0, 1e-9);
    EXPECT_NEAR(s.objective, 0.0, 1e-9);
    EXPECT_LE(lp.MaxViolation(s.x), 1e-9);
  }
}

TEST(LinprogTest, RejectsMalformedInput) {
  LinearProgram lp;
  const int x = lp.AddVariable(1.0);
  EXPECT_THROW(lp.AddLessEqual({{x + 1, 1.0}}, 1.0), ValidationError);
  EXPECT_THROW(lp.AddLessEqual({{x, NAN}}, 1.0), ValidationError);
  EXPECT_THROW(lp.AddEqual({{x, 1.0}}, INFINITY), ValidationError);
  lp.AddVariable(1.0, 2.0, 1.0);
  EXPECT_THROW(Solve(lp), ValidationError);
}

TEST(LinprogTest, MatchesVertexEnumeration) {
  Rng rng(2024);
  int infeasible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    LinearProgram lp = RandomBoxLp(rng, 5, 8);
    std::optional<double> oracle = VertexEnumerationOptimum(lp);
    for (PricingRule rule : {PricingRule::kBland, PricingRule::kDantzig}) {
      for (DualizeMode mode : {DualizeMode::kNever, DualizeMode::kAlways}) {
        SimplexOptions opt;
        opt.pricing = rule;
        opt.dualize = mode;
        LpSolution s = Solve(lp, opt);
        if (!oracle) {
          EXPECT_EQ(s.status, LpStatus::kInfeasible) << trial;
          continue;
        }
        ASSERT_EQ(s.status, LpStatus::kOptimal) << trial;
        EXPECT_NEAR(s.objective, *oracle, 1e-6) << trial;
        EXPECT_LE(lp.MaxViolation(s.x), 1e-7) << trial;
      }
    }
    infeasible += !oracle;
  }
  // The generator should exercise both outcomes.
  EXPECT_GT(infeasible, 0);
  EXPECT_LT(infeasible, 100);
}

TEST(LinprogTest, StrongDuality) {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    // min c.x s.t. A x <= b, x >= 0 with b >= 0 and c mixed sign, boxed so
    // it stays bounded: x <= 1 rows are part of A.
    const int n = 4, m = 6;
    std::vector<std::vector<double>> a(m + n, std::vector<double>(n, 0.0));
    std::vector<double> b(m + n), c(n);
    for (int r = 0; r < m; ++r) {
      for (int j = 0; j < n; ++j) a[r][j] = rng.Uniform(-1, 1);
      b[r] = rng.Uniform(0, 2);
    }
    for (int j = 0; j < n; ++j) {
      a[m + j][j] = 1;
      b[m + j] = 1;
      c[j] = rng.Uniform(-1, 1);
    }
    LinearProgram primal;
    for (int j = 0; j < n; ++j) primal.AddVariable(c[j]);
    for (int r = 0; r < m + n; ++r) {
      LpRow row;
      for (int j = 0; j < n; ++j) row.emplace_back(j, a[r][j]);
      primal.AddLessEqual(row, b[r]);
    }
    // max -b.y s.t. A^T y >= -c, y >= 0.
    LinearProgram dual(LpSense::kMaximize);
    for (int r = 0; r < m + n; ++r) dual.AddVariable(-b[r]);
    for (int j = 0; j < n; ++j) {
      LpRow row;
      for (int r = 0; r < m + n; ++r) row.emplace_back(r, a[r][j]);
      dual.AddGreaterEqual(row, -c[j]);
    }
    LpSolution ps = Solve(primal);
    LpSolution ds = Solve(dual);
    ASSERT_EQ(ps.status, LpStatus::kOptimal);
    ASSERT_EQ(ds.status, LpStatus::kOptimal);
    EXPECT_NEAR(ps.objective, ds.objective, 1e-6);
  }
}

TEST(LinprogTest, Deterministic) {
  Rng rng(3);
  LinearProgram lp = RandomBoxLp(rng, 5, 8);
  LpSolution a = Solve(lp);
  LpSolution b = Solve(lp);
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.pivots, b.pivots);
  EXPECT_EQ(a.x, b.x);
}

TEST(LinprogTest, DegenerateProblemTerminates) {
  // Beale's cycling example under the textbook largest-coefficient rule.
  LinearProgram lp;
  const int x1 = lp.AddVariable(-0.75);
  const int x2 = lp.AddVariable(150);
  const int x3 = lp.AddVariable(-0.02);
  const int x4 = lp.AddVariable(6);
  lp.AddLessEqual({{x1, 0.25}, {x2, -60}, {x3, -0.04}, {x4, 9}}, 0);
  lp.AddLessEqual({{x1, 0.5}, {x2, -90}, {x3, -0.02}, {x4, 3}}, 0);
  lp.AddLessEqual({{x3, 1}}, 1);
  for (PricingRule rule : {PricingRule::kBland, PricingRule::kDantzig}) {
    SimplexOptions opt;
    opt.pricing = rule;
    opt.dualize = DualizeMode::kNever;
    LpSolution s = Solve(lp, opt);
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    EXPECT_NEAR(s.objective, -0.05, 1e-9);
  }
}

}  // namespace
}  // namespace polyvul
