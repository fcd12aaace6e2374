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

#include "linprog.h"

#include <algorithm>
#include <cmath>

#include "errors.h"

namespace polyvul {

std::string LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

int LinearProgram::AddVariable(double objective, double lower, double upper) {
  objective_.push_back(objective);
  lower_.push_back(lower);
  upper_.push_back(upper);
  return num_variables() - 1;
}

void LinearProgram::SetObjective(int var, double coefficient) {
  POLYVUL_CHECK_ARG(var >= 0 && var < num_variables(), "unknown LP variable");
  objective_[var] = coefficient;
}

void LinearProgram::CheckRow(const LpRow& row, double rhs) const {
  POLYVUL_CHECK_ARG(std::isfinite(rhs), "LP right-hand side must be finite");
  for (const auto& [var, coef] : row) {
    POLYVUL_CHECK_ARG(var >= 0 && var < num_variables(),
                      "LP row references an unknown variable");
    POLYVUL_CHECK_ARG(std::isfinite(coef), "LP coefficients must be finite");
  }
}

void LinearProgram::AddLessEqual(LpRow row, double rhs) {
  CheckRow(row, rhs);
  le_rows_.push_back(std::move(row));
  le_rhs_.push_back(rhs);
}

void LinearProgram::AddGreaterEqual(LpRow row, double rhs) {
  for (auto& entry : row) entry.second = -entry.second;
  AddLessEqual(std::move(row), -rhs);
}

void LinearProgram::AddEqual(LpRow row, double rhs) {
  CheckRow(row, rhs);
  eq_rows_.push_back(std::move(row));
  eq_rhs_.push_back(rhs);
}

void LinearProgram::Validate() const {
  for (int j = 0; j < num_variables(); ++j) {
    POLYVUL_CHECK_ARG(std::isfinite(objective_[j]),
                      "LP objective must be finite");
    POLYVUL_CHECK_ARG(!std::isnan(lower_[j]) && !std::isnan(upper_[j]) &&
                          lower_[j] != kInfinity && upper_[j] != -kInfinity,
                      "LP bounds are malformed");
    POLYVUL_CHECK_ARG(lower_[j] <= upper_[j], "LP variable has an empty box");
  }
  for (size_t r = 0; r < le_rows_.size(); ++r) CheckRow(le_rows_[r], le_rhs_[r]);
  for (size_t r = 0; r < eq_rows_.size(); ++r) CheckRow(eq_rows_[r], eq_rhs_[r]);
}

double LinearProgram::MaxViolation(const std::vector<double>& x) const {
  double worst = 0;
  auto dot = [&](const LpRow& row) {
    double s = 0;
    for (const auto& [var, coef] : row) s += coef * x[var];
    return s;
  };
  for (size_t r = 0; r < le_rows_.size(); ++r) {
    worst = std::max(worst, dot(le_rows_[r]) - le_rhs_[r]);
  }
  for (size_t r = 0; r < eq_rows_.size(); ++r) {
    worst = std::max(worst, std::abs(dot(eq_rows_[r]) - eq_rhs_[r]));
  }
  for (int j = 0; j < num_variables(); ++j) {
    worst = std::max(worst, lower_[j] - x[j]);
    worst = std::max(worst, x[j] - upper_[j]);
  }
  return worst;
}

double LinearProgram::Evaluate(const std::vector<double>& x) const {
  double s = 0;
  for (int j = 0; j < num_variables(); ++j) s += objective_[j] * x[j];
  return s;
}

namespace {

// min c.x  s.t.  A x = b, x >= 0, with A stored by sparse columns.
struct StandardForm {
  int m = 0;
  int n = 0;
  std::vector<LpRow> columns;  // (row, coefficient) pairs per column
  std::vector<double> b;
  std::vector<double> c;
};

struct StandardResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;       // n entries
  std::vector<double> duals;   // m entries, c - A^T duals >= 0 at optimum
  double objective = 0;
  int64_t pivots = 0;
};

// Two-phase revised simplex with an explicit dense basis inverse.
//
// Rows with negative right-hand sides are negated, and every row gets an
// artificial column (index n + row) that starts basic and never re-enters.
class RevisedSimplex {
 public:
  static constexpr int kRefactorInterval = 100;

  RevisedSimplex(const StandardForm& sf, const SimplexOptions& options)
      : m_(sf.m), n_(sf.n), opt_(options), columns_(sf.columns), b_(sf.b) {
    flipped_.assign(m_, false);
    for (int r = 0; r < m_; ++r) {
      if (b_[r] < 0) {
        flipped_[r] = true;
        b_[r] = -b_[r];
      }
    }
    for (auto& col : columns_) {
      for (auto& [r, a] : col) {
        if (flipped_[r]) a = -a;
      }
    }
    basis_.resize(m_);
    position_.assign(n_ + m_, -1);
    for (int r = 0; r < m_; ++r) {
      basis_[r] = n_ + r;
      position_[n_ + r] = r;
    }
    binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) binv_[Index(r, r)] = 1.0;
    xb_ = b_;
    cost_.assign(n_ + m_, 0.0);
    y_.assign(m_, 0.0);
    alpha_.assign(m_, 0.0);
  }

  StandardResult Solve(const std::vector<double>& c) {
    StandardResult res;
    // Phase 1: minimize the sum of artificials.
    for (int r = 0; r < m_; ++r) cost_[n_ + r] = 1.0;
    double scale = 1.0;
    for (int r = 0; r < m_; ++r) scale = std::max(scale, b_[r]);
    if (!Optimize()) {
      throw RuntimeError("simplex phase 1 reported an unbounded ray");
    }
    res.pivots = pivots_;
    double infeasibility = 0;
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] >= n_) infeasibility += std::max(0.0, xb_[r]);
    }
    if (infeasibility > opt_.feasibility_tolerance * scale) {
      res.status = LpStatus::kInfeasible;
      return res;
    }
    DriveOutArtificials();

    // Phase 2.
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (int j = 0; j < n_; ++j) cost_[j] = c[j];
    const bool bounded = Optimize();
    res.pivots = pivots_;
    if (!bounded) {
      res.status = LpStatus::kUnbounded;
      return res;
    }
    res.status = LpStatus::kOptimal;
    res.x.assign(n_, 0.0);
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < n_) res.x[basis_[r]] = std::max(0.0, xb_[r]);
    }
    res.objective = 0;
    for (int j = 0; j < n_; ++j) res.objective += c[j] * res.x[j];
    ComputeDuals();
    res.duals.resize(m_);
    for (int r = 0; r < m_; ++r) res.duals[r] = flipped_[r] ? -y_[r] : y_[r];
    return res;
  }

 private:
  // The inverse is stored column-major: entry (r, k) at k * m + r.
  size_t Index(int r, int k) const {
    return static_cast<size_t>(k) * m_ + r;
  }

  // y = c_B B^-1.
  void ComputeDuals() {
    for (int k = 0; k < m_; ++k) {
      const double* col = &binv_[Index(0, k)];
      double s = 0;
      for (int r = 0; r < m_; ++r) s += cost_[basis_[r]] * col[r];
      y_[k] = s;
    }
  }

  double ReducedCost(int j) const {
    double d = cost_[j];
    for (const auto& [r, a] : columns_[j]) d -= y_[r] * a;
    return d;
  }

  // alpha = B^-1 A_j.
  void Ftran(int j) {
    std::fill(alpha_.begin(), alpha_.end(), 0.0);
    if (j >= n_) {
      const double* col = &binv_[Index(0, j - n_)];
      for (int r = 0; r < m_; ++r) alpha_[r] = col[r];
      return;
    }
    for (const auto& [k, a] : columns_[j]) {
      const double* col = &binv_[Index(0, k)];
      for (int r = 0; r < m_; ++r) alpha_[r] += a * col[r];
    }
  }

  // Runs pivots until optimal (true) or an unbounded column is found
  // (false). Artificial columns never enter.
  bool Optimize() {
    int degenerate_run = 0;
    while (true) {
      ComputeDuals();
      const bool bland = opt_.pricing == PricingRule::kBland ||
                         degenerate_run >= opt_.degenerate_run_before_bland;
      int q = -1;
      double most = -opt_.optimality_tolerance;
      for (int j = 0; j < n_; ++j) {
        if (position_[j] >= 0) continue;
        const double d = ReducedCost(j);
        if (d < most) {
          q = j;
          if (bland) break;
          most = d;
        }
      }
      if (q < 0) return true;

      Ftran(q);
      int p = -1;
      double best_ratio = kInfinity;
      for (int r = 0; r < m_; ++r) {
        const double coef = alpha_[r];
        if (coef <= opt_.pivot_tolerance) continue;
        const double ratio = std::max(0.0, xb_[r]) / coef;
        if (p < 0 || ratio < best_ratio - 1e-12) {
          p = r;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + 1e-12 && basis_[r] < basis_[p]) {
          p = r;
        }
      }
      if (p < 0) return false;
      if (++pivots_ > opt_.max_pivots) {
        throw RuntimeError("simplex exceeded its pivot limit");
      }
      degenerate_run = best_ratio <= 1e-12 ? degenerate_run + 1 : 0;
      Pivot(p, q);
    }
  }

  // Replaces the artificial basic in each row by a structural column with a
  // usable pivot, where one exists. Rows without one are redundant and keep
  // their artificial at level zero.
  void DriveOutArtificials() {
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      int best = -1;
      double best_abs = opt_.pivot_tolerance;
      for (int j = 0; j < n_; ++j) {
        if (position_[j] >= 0) continue;
        double v = 0;
        for (const auto& [k, a] : columns_[j]) v += binv_[Index(r, k)] * a;
        if (std::abs(v) > best_abs) {
          best_abs = std::abs(v);
          best = j;
        }
      }
      if (best >= 0) {
        Ftran(best);
        Pivot(r, best);
      }
    }
  }

  // Pivot on row p with alpha_ holding B^-1 A_q.
  void Pivot(int p, int q) {
    const double inv = 1.0 / alpha_[p];
    for (int k = 0; k < m_; ++k) {
      double* col = &binv_[Index(0, k)];
      const double v = col[p] * inv;
      if (v == 0.0) continue;
      for (int r = 0; r < m_; ++r) col[r] -= alpha_[r] * v;
      col[p] = v;
    }
    const double theta = xb_[p] * inv;
    for (int r = 0; r < m_; ++r) xb_[r] -= alpha_[r] * theta;
    xb_[p] = theta;
    position_[basis_[p]] = -1;
    basis_[p] = q;
    position_[q] = p;
    if (++since_refactor_ >= kRefactorInterval) Refactor();
  }

  // Recomputes B^-1 and the basic values from scratch.
  void Refactor() {
    since_refactor_ = 0;
    // Gauss-Jordan on [B | I] with partial pivoting, row-major scratch.
    std::vector<double> a(static_cast<size_t>(m_) * 2 * m_, 0.0);
    const size_t w = 2 * static_cast<size_t>(m_);
    for (int k = 0; k < m_; ++k) {
      const int j = basis_[k];
      if (j >= n_) {
        a[(j - n_) * w + k] = 1.0;
      } else {
        for (const auto& [r, v] : columns_[j]) a[r * w + k] += v;
      }
      a[k * w + m_ + k] = 1.0;
    }
    for (int c = 0; c < m_; ++c) {
      int piv = c;
      for (int r = c + 1; r < m_; ++r) {
        if (std::abs(a[r * w + c]) > std::abs(a[piv * w + c])) piv = r;
      }
      if (std::abs(a[piv * w + c]) < 1e-13) {
        throw RuntimeError("simplex basis became singular");
      }
      if (piv != c) {
        for (size_t k = 0; k < w; ++k) std::swap(a[piv * w + k], a[c * w + k]);
      }
      const double inv = 1.0 / a[c * w + c];
      for (size_t k = 0; k < w; ++k) a[c * w + k] *= inv;
      for (int r = 0; r < m_; ++r) {
        if (r == c) continue;
        const double f = a[r * w + c];
        if (f == 0.0) continue;
        for (size_t k = 0; k < w; ++k) a[r * w + k] -= f * a[c * w + k];
      }
    }
    for (int r = 0; r < m_; ++r) {
      for (int k = 0; k < m_; ++k) binv_[Index(r, k)] = a[r * w + m_ + k];
    }
    std::fill(xb_.begin(), xb_.end(), 0.0);
    for (int k = 0; k < m_; ++k) {
      const double* col = &binv_[Index(0, k)];
      for (int r = 0; r < m_; ++r) xb_[r] += col[r] * b_[k];
    }
  }

  int m_;
  int n_;
  SimplexOptions opt_;
  std::vector<LpRow> columns_;
  std::vector<double> b_;
  std::vector<bool> flipped_;
  std::vector<int> basis_;
  std::vector<int> position_;  // basis row of each column, or -1
  std::vector<double> binv_;
  std::vector<double> xb_;
  std::vector<double> cost_;
  std::vector<double> y_;
  std::vector<double> alpha_;
  int64_t pivots_ = 0;
  int since_refactor_ = 0;
};

StandardResult SolveStandard(const StandardForm& sf,
                             const SimplexOptions& options) {
  RevisedSimplex s(sf, options);
  return s.Solve(sf.c);
}

// Canonical problem: min c.x + constant, A_ub x <= b_ub, A_eq x = b_eq, with
// each x_j either nonnegative or free.
struct Canonical {
  int n = 0;
  std::vector<double> c;
  double constant = 0;
  std::vector<bool> free;
  std::vector<LpRow> ub_rows;
  std::vector<double> ub_rhs;
  std::vector<LpRow> eq_rows;
  std::vector<double> eq_rhs;
  // Map back: x_orig[k] = offset[k] + scale[k] * x[k].
  std::vector<double> offset;
  std::vector<double> scale;
};

Canonical Canonicalize(const LinearProgram& lp) {
  Canonical cf;
  const int n = lp.num_variables();
  cf.n = n;
  cf.c.resize(n);
  cf.free.assign(n, false);
  cf.offset.assign(n, 0.0);
  cf.scale.assign(n, 1.0);
  const double sign = lp.sense() == LpSense::kMaximize ? -1.0 : 1.0;
  std::vector<LpRow> bound_rows;
  std::vector<double> bound_rhs;
  for (int k = 0; k < n; ++k) {
    const double lo = lp.lower()[k];
    const double hi = lp.upper()[k];
    if (std::isfinite(lo)) {
      cf.offset[k] = lo;
      if (std::isfinite(hi)) {
        bound_rows.push_back({{k, 1.0}});
        bound_rhs.push_back(hi - lo);
      }
    } else if (std::isfinite(hi)) {
      cf.offset[k] = hi;
      cf.scale[k] = -1.0;
    } else {
      cf.free[k] = true;
    }
    cf.c[k] = sign * lp.objective()[k] * cf.scale[k];
    cf.constant += sign * lp.objective()[k] * cf.offset[k];
  }
  auto transform = [&](const LpRow& row, double rhs, LpRow& out,
                       double& out_rhs) {
    out.clear();
    out_rhs = rhs;
    for (const auto& [k, coef] : row) {
      out_rhs -= coef * cf.offset[k];
      out.emplace_back(k, coef * cf.scale[k]);
    }
  };
  for (int r = 0; r < lp.num_less_equal(); ++r) {
    LpRow row;
    double rhs;
    transform(lp.le_rows()[r], lp.le_rhs()[r], row, rhs);
    cf.ub_rows.push_back(std::move(row));
    cf.ub_rhs.push_back(rhs);
  }
  for (size_t r = 0; r < bound_rows.size(); ++r) {
    cf.ub_rows.push_back(std::move(bound_rows[r]));
    cf.ub_rhs.push_back(bound_rhs[r]);
  }
  for (int r = 0; r < lp.num_equal(); ++r) {
    LpRow row;
    double rhs;
    transform(lp.eq_rows()[r], lp.eq_rhs()[r], row, rhs);
    cf.eq_rows.push_back(std::move(row));
    cf.eq_rhs.push_back(rhs);
  }
  return cf;
}

struct CanonicalResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  int64_t pivots = 0;
};

CanonicalResult SolvePrimal(const Canonical& cf, const SimplexOptions& opt) {
  // Columns: one per nonnegative variable, two per free variable, then one
  // slack per inequality.
  std::vector<int> pos_col(cf.n), neg_col(cf.n, -1);
  int cols = 0;
  for (int k = 0; k < cf.n; ++k) {
    pos_col[k] = cols++;
    if (cf.free[k]) neg_col[k] = cols++;
  }
  const int n_ub = static_cast<int>(cf.ub_rows.size());
  const int n_eq = static_cast<int>(cf.eq_rows.size());
  const int slack0 = cols;
  cols += n_ub;
  StandardForm sf;
  sf.m = n_ub + n_eq;
  sf.n = cols;
  sf.columns.resize(cols);
  sf.b.resize(sf.m);
  sf.c.assign(cols, 0.0);
  for (int k = 0; k < cf.n; ++k) {
    sf.c[pos_col[k]] = cf.c[k];
    if (neg_col[k] >= 0) sf.c[neg_col[k]] = -cf.c[k];
  }
  auto fill = [&](int r, const LpRow& row) {
    for (const auto& [k, coef] : row) {
      sf.columns[pos_col[k]].emplace_back(r, coef);
      if (neg_col[k] >= 0) sf.columns[neg_col[k]].emplace_back(r, -coef);
    }
  };
  for (int r = 0; r < n_ub; ++r) {
    fill(r, cf.ub_rows[r]);
    sf.columns[slack0 + r].emplace_back(r, 1.0);
    sf.b[r] = cf.ub_rhs[r];
  }
  for (int r = 0; r < n_eq; ++r) {
    fill(n_ub + r, cf.eq_rows[r]);
    sf.b[n_ub + r] = cf.eq_rhs[r];
  }
  StandardResult sr = SolveStandard(sf, opt);
  CanonicalResult out;
  out.status = sr.status;
  out.pivots = sr.pivots;
  if (sr.status == LpStatus::kOptimal) {
    out.x.resize(cf.n);
    for (int k = 0; k < cf.n; ++k) {
      out.x[k] = sr.x[pos_col[k]] - (neg_col[k] >= 0 ? sr.x[neg_col[k]] : 0.0);
    }
  }
  return out;
}

// Solves the dual
//   min b_ub.y - b_eq.(w+ - w-)
//   s.t. -A_ub^T y + A_eq^T (w+ - w-) (+ s_j) = c_j,  y, w+, w-, s >= 0,
// with a slack s_j only for nonnegative primal variables. The primal point
// is minus the optimal multipliers of these rows.
bool SolveDual(const Canonical& cf, const SimplexOptions& opt,
               CanonicalResult& out) {
  const int n_ub = static_cast<int>(cf.ub_rows.size());
  const int n_eq = static_cast<int>(cf.eq_rows.size());
  int n_slack = 0;
  for (int k = 0; k < cf.n; ++k) n_slack += cf.free[k] ? 0 : 1;
  StandardForm sf;
  sf.m = cf.n;
  sf.n = n_ub + 2 * n_eq + n_slack;
  sf.columns.resize(sf.n);
  sf.b = cf.c;
  sf.c.assign(sf.n, 0.0);
  for (int r = 0; r < n_ub; ++r) {
    sf.c[r] = cf.ub_rhs[r];
    for (const auto& [k, coef] : cf.ub_rows[r]) {
      sf.columns[r].emplace_back(k, -coef);
    }
  }
  for (int e = 0; e < n_eq; ++e) {
    const int wp = n_ub + e;
    const int wm = n_ub + n_eq + e;
    sf.c[wp] = -cf.eq_rhs[e];
    sf.c[wm] = cf.eq_rhs[e];
    for (const auto& [k, coef] : cf.eq_rows[e]) {
      sf.columns[wp].emplace_back(k, coef);
      sf.columns[wm].emplace_back(k, -coef);
    }
  }
  for (int k = 0, s = n_ub + 2 * n_eq; k < cf.n; ++k) {
    if (!cf.free[k]) sf.columns[s++].emplace_back(k, 1.0);
  }
  StandardResult sr = SolveStandard(sf, opt);
  out.pivots += sr.pivots;
  if (sr.status == LpStatus::kUnbounded) {
    out.status = LpStatus::kInfeasible;
    return true;
  }
  if (sr.status == LpStatus::kInfeasible) return false;
  out.status = LpStatus::kOptimal;
  out.x.resize(cf.n);
  for (int k = 0; k < cf.n; ++k) {
    out.x[k] = -sr.duals[k];
    if (!cf.free[k]) out.x[k] = std::max(0.0, out.x[k]);
  }
  return true;
}

}  // namespace

LpSolution Solve(const LinearProgram& lp, const SimplexOptions& options) {
  lp.Validate();
  const Canonical cf = Canonicalize(lp);
  const int rows = static_cast<int>(cf.ub_rows.size() + cf.eq_rows.size());
  bool use_dual = options.dualize == DualizeMode::kAlways ||
                  (options.dualize == DualizeMode::kAuto &&
                   2 * rows > 3 * std::max(1, cf.n));
  if (cf.n == 0) use_dual = false;
  CanonicalResult cr;
  LpSolution sol;
  if (use_dual && SolveDual(cf, options, cr)) {
    sol.solved_dual = true;
  } else {
    const int64_t dual_pivots = cr.pivots;
    cr = SolvePrimal(cf, options);
    cr.pivots += dual_pivots;
  }
  sol.status = cr.status;
  sol.pivots = cr.pivots;
  if (cr.status == LpStatus::kOptimal) {
    sol.x.resize(lp.num_variables());
    for (int k = 0; k < lp.num_variables(); ++k) {
      sol.x[k] = cf.offset[k] + cf.scale[k] * cr.x[k];
    }
    sol.objective = lp.Evaluate(sol.x);
  }
  return sol;
}

}  // namespace polyvul
