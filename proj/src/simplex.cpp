#include "drsm/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace drsm {

namespace {

constexpr double kPivTol = 1e-11;
constexpr double kCostTol = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarState { kBasic, kAtLower, kAtUpper };

}  // namespace

SimplexResult simplex_box_lp(const Matrix& A, const Vec& b, const Vec& ub, const Vec& c) {
  const int m = A.rows, n = A.cols;
  if (static_cast<int>(b.size()) != m || static_cast<int>(ub.size()) != n ||
      static_cast<int>(c.size()) != n)
    throw std::invalid_argument("simplex_box_lp: dimension mismatch");
  for (double bi : b)
    if (bi < 0) throw std::invalid_argument("simplex_box_lp: b must be >= 0 (0 feasible)");

  // Columns 0..n-1 are structural with bounds [0, ub], n..n+m-1 are slacks.
  const int total = n + m;
  Matrix tab(m, total);  // B^{-1} [A I]
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) tab(i, j) = A(i, j);
    tab(i, n + i) = 1.0;
  }
  std::vector<int> basis(static_cast<size_t>(m));
  std::vector<VarState> state(static_cast<size_t>(total), VarState::kAtLower);
  Vec xb = b;  // values of the basic variables (slacks initially)
  for (int i = 0; i < m; ++i) {
    basis[static_cast<size_t>(i)] = n + i;
    state[static_cast<size_t>(n + i)] = VarState::kBasic;
  }
  auto bound_of = [&](int j) { return j < n ? ub[static_cast<size_t>(j)] : kInf; };
  auto cost_of = [&](int j) { return j < n ? c[static_cast<size_t>(j)] : 0.0; };

  SimplexResult res;
  for (;;) {
    if (++res.iterations > 50 * (total + 1) * (m + 1))
      throw std::runtime_error("simplex_box_lp: iteration limit exceeded");

    // Reduced costs d_j = c_j - c_B^T tab_col(j); Bland: smallest improving j.
    Vec y(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) y[static_cast<size_t>(i)] = cost_of(basis[static_cast<size_t>(i)]);
    int enter = -1;
    int dir = 0;  // +1 entering rises from lower, -1 drops from upper
    for (int j = 0; j < total && enter < 0; ++j) {
      if (state[static_cast<size_t>(j)] == VarState::kBasic) continue;
      double d = cost_of(j);
      for (int i = 0; i < m; ++i) d -= y[static_cast<size_t>(i)] * tab(i, j);
      if (state[static_cast<size_t>(j)] == VarState::kAtLower && d > kCostTol) {
        enter = j;
        dir = +1;
      } else if (state[static_cast<size_t>(j)] == VarState::kAtUpper && d < -kCostTol) {
        enter = j;
        dir = -1;
      }
    }
    if (enter < 0) break;  // optimal

    // Ratio test: increasing the entering displacement by delta changes
    // basic values by -dir * delta * tab_col(enter). Candidates are the rows
    // whose basic variable hits a bound plus the entering variable's own
    // bound flip; Bland tie-break picks the smallest variable index.
    double limit = bound_of(enter);
    int limit_var = enter;
    int leave_row = -1;
    int leave_to_upper = 0;
    for (int i = 0; i < m; ++i) {
      double w = dir * tab(i, enter);
      double cap;
      int to_upper;
      if (w > kPivTol) {
        cap = xb[static_cast<size_t>(i)] / w;  // basic drops to lower bound 0
        to_upper = 0;
      } else if (w < -kPivTol) {
        double ubi = bound_of(basis[static_cast<size_t>(i)]);
        if (ubi == kInf) continue;
        cap = (ubi - xb[static_cast<size_t>(i)]) / (-w);  // basic hits its upper bound
        to_upper = 1;
      } else {
        continue;
      }
      cap = std::max(cap, 0.0);
      int var = basis[static_cast<size_t>(i)];
      if (cap < limit - 1e-12 || (cap < limit + 1e-12 && var < limit_var)) {
        limit = std::min(limit, cap);
        limit_var = var;
        leave_row = i;
        leave_to_upper = to_upper;
      }
    }
    if (limit == kInf)
      throw std::runtime_error("simplex_box_lp: unbounded (region should be compact)");

    // Apply the displacement to the basic values.
    for (int i = 0; i < m; ++i) xb[static_cast<size_t>(i)] -= dir * limit * tab(i, enter);

    if (leave_row < 0) {
      // Bound flip: the entering variable crosses to its other bound.
      state[static_cast<size_t>(enter)] =
          dir > 0 ? VarState::kAtUpper : VarState::kAtLower;
      continue;
    }

    // Pivot: entering becomes basic in leave_row.
    int leaving = basis[static_cast<size_t>(leave_row)];
    state[static_cast<size_t>(leaving)] =
        leave_to_upper ? VarState::kAtUpper : VarState::kAtLower;
    state[static_cast<size_t>(enter)] = VarState::kBasic;
    basis[static_cast<size_t>(leave_row)] = enter;
    double entering_value = dir > 0 ? limit : bound_of(enter) - limit;
    xb[static_cast<size_t>(leave_row)] = entering_value;

    double piv = tab(leave_row, enter);
    if (std::fabs(piv) < kPivTol)
      throw std::runtime_error("simplex_box_lp: numerically zero pivot");
    for (int j = 0; j < total; ++j) tab(leave_row, j) /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave_row) continue;
      double f = tab(i, enter);
      if (f == 0.0) continue;
      for (int j = 0; j < total; ++j) tab(i, j) -= f * tab(leave_row, j);
    }
  }

  res.x.assign(static_cast<size_t>(n), 0.0);
  for (int j = 0; j < n; ++j)
    if (state[static_cast<size_t>(j)] == VarState::kAtUpper) res.x[static_cast<size_t>(j)] = ub[static_cast<size_t>(j)];
  for (int i = 0; i < m; ++i)
    if (basis[static_cast<size_t>(i)] < n)
      res.x[static_cast<size_t>(basis[static_cast<size_t>(i)])] = std::max(0.0, xb[static_cast<size_t>(i)]);
  res.objective = dot(res.x, c);
  return res;
}

}  // namespace drsm
