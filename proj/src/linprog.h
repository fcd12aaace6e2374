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

#ifndef POLYVUL_LINPROG_H_
#define POLYVUL_LINPROG_H_

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace polyvul {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class LpSense { kMinimize, kMaximize };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

std::string LpStatusName(LpStatus status);

// Sparse row: (variable, coefficient) pairs.
using LpRow = std::vector<std::pair<int, double>>;

class LinearProgram {
 public:
  explicit LinearProgram(LpSense sense = LpSense::kMinimize) : sense_(sense) {}

  // New variable with bounds [lower, upper]; lower may be -inf and upper
  // +inf. Returns its index.
  int AddVariable(double objective, double lower = 0.0,
                  double upper = kInfinity);
  void SetObjective(int var, double coefficient);

  void AddLessEqual(LpRow row, double rhs);
  void AddGreaterEqual(LpRow row, double rhs);
  void AddEqual(LpRow row, double rhs);

  LpSense sense() const { return sense_; }
  int num_variables() const { return static_cast<int>(objective_.size()); }
  int num_less_equal() const { return static_cast<int>(le_rows_.size()); }
  int num_equal() const { return static_cast<int>(eq_rows_.size()); }
  const std::vector<double>& objective() const { return objective_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<LpRow>& le_rows() const { return le_rows_; }
  const std::vector<double>& le_rhs() const { return le_rhs_; }
  const std::vector<LpRow>& eq_rows() const { return eq_rows_; }
  const std::vector<double>& eq_rhs() const { return eq_rhs_; }

  // Throws ValidationError on bad indices, non-finite data or empty boxes.
  void Validate() const;

  // Largest violation of rows and bounds at x.
  double MaxViolation(const std::vector<double>& x) const;
  double Evaluate(const std::vector<double>& x) const;

 private:
  void CheckRow(const LpRow& row, double rhs) const;

  LpSense sense_;
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<LpRow> le_rows_;
  std::vector<double> le_rhs_;
  std::vector<LpRow> eq_rows_;
  std::vector<double> eq_rhs_;
};

enum class PricingRule {
  // Smallest eligible index enters; smallest basis index leaves on ratio
  // ties. Never cycles.
  kBland,
  // Most negative reduced cost enters; falls back to Bland's rule after a
  // run of degenerate pivots and returns to Dantzig after progress.
  kDantzig,
};

// When to solve the dual instead of the primal.
enum class DualizeMode { kAuto, kNever, kAlways };

struct SimplexOptions {
  PricingRule pricing = PricingRule::kBland;
  DualizeMode dualize = DualizeMode::kAuto;
  double pivot_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  double feasibility_tolerance = 1e-7;
  int degenerate_run_before_bland = 50;
  int64_t max_pivots = 50'000'000;
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0;
  int64_t pivots = 0;
  bool solved_dual = false;
};

// Two-phase dense tableau simplex.
//
// Auto mode solves the dual when the problem has many more rows than
// columns; the primal point is then read off the dual's optimal multipliers.
LpSolution Solve(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace polyvul

#endif  // POLYVUL_LINPROG_H_
