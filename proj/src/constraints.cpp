#include "drsm/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "drsm/simplex.hpp"

namespace drsm {

namespace {

void check_gradient(const Vec& g, int n) {
  if (static_cast<int>(g.size()) != n)
    throw std::invalid_argument("lmo: gradient dimension mismatch");
  if (!all_finite(g)) throw std::invalid_argument("lmo: gradient has non-finite entries");
}

double capped_upper(double u, const Vec* cap, size_t i) {
  double v = u;
  if (cap) {
    if ((*cap)[i] < 0) throw std::invalid_argument("lmo: cap must be >= 0");
    v = std::min(v, (*cap)[i]);
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// BoxConstraint

Vec BoxConstraint::lmo(const Vec& g, const Vec* cap) const {
  check_gradient(g, dim());
  Vec v(g.size(), 0.0);
  for (size_t i = 0; i < g.size(); ++i)
    if (g[i] > 0) v[i] = capped_upper(box_.upper()[i], cap, i);
  return v;
}

bool BoxConstraint::member(const Vec& x, double tol) const {
  return box_.contains(x, tol);
}

Vec BoxConstraint::project(const Vec& y) const {
  if (static_cast<int>(y.size()) != dim())
    throw std::invalid_argument("project: dimension mismatch");
  return box_.clamp(y);
}

// ---------------------------------------------------------------------------
// CardinalityPolytope

CardinalityPolytope::CardinalityPolytope(Vec u, double budget)
    : u_(std::move(u)), b_(budget) {
  if (u_.empty()) throw std::invalid_argument("CardinalityPolytope: empty u");
  double total = 0;
  for (double ui : u_) {
    if (!(ui > 0) || !std::isfinite(ui))
      throw std::invalid_argument("CardinalityPolytope: u entries must be > 0");
    total += ui;
  }
  if (b_ < 0) throw std::invalid_argument("CardinalityPolytope: budget must be >= 0");
  b_ = std::min(b_, total);
}

CardinalityPolytope::CardinalityPolytope(int n, double u_scalar, double budget)
    : CardinalityPolytope(Vec(static_cast<size_t>(n), u_scalar), budget) {}

Vec CardinalityPolytope::upper_bound() const {
  Vec cap(u_.size());
  for (size_t i = 0; i < u_.size(); ++i) cap[i] = std::min(u_[i], b_);
  return cap;
}

Vec CardinalityPolytope::lmo(const Vec& g, const Vec* cap) const {
  check_gradient(g, dim());
  // Greedy fill in descending gradient order, fractional last coordinate.
  std::vector<int> idx(g.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return g[static_cast<size_t>(a)] > g[static_cast<size_t>(b)];
  });
  Vec v(g.size(), 0.0);
  double remaining = b_;
  for (int i : idx) {
    if (g[static_cast<size_t>(i)] <= 0 || remaining <= 0) break;
    double amount = std::min(capped_upper(u_[static_cast<size_t>(i)], cap, static_cast<size_t>(i)), remaining);
    v[static_cast<size_t>(i)] = amount;
    remaining -= amount;
  }
  return v;
}

bool CardinalityPolytope::member(const Vec& x, double tol) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  double sum = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= -tol) || !(x[i] <= u_[i] + tol)) return false;
    sum += x[i];
  }
  return sum <= b_ + tol;
}

Vec CardinalityPolytope::project(const Vec& y) const {
  if (static_cast<int>(y.size()) != dim())
    throw std::invalid_argument("project: dimension mismatch");
  auto clip = [&](double tau, Vec& out) {
    double sum = 0;
    for (size_t i = 0; i < y.size(); ++i) {
      out[i] = std::min(std::max(y[i] - tau, 0.0), u_[i]);
      sum += out[i];
    }
    return sum;
  };
  Vec x(y.size());
  double sum0 = clip(0.0, x);
  if (sum0 <= b_ + 1e-15) return x;
  // sum(tau) is nonincreasing; bracket then bisect until sum(tau) = b.
  double lo = 0.0, hi = 1.0;
  while (clip(hi, x) > b_) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    if (clip(mid, x) > b_)
      lo = mid;
    else
      hi = mid;
  }
  clip(hi, x);
  return x;
}

// ---------------------------------------------------------------------------
// DownClosedPolytope

Vec derive_upper_bound(const Matrix& A, const Vec& b) {
  Vec cap(static_cast<size_t>(A.cols));
  for (int j = 0; j < A.cols; ++j) {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < A.rows; ++i)
      if (A(i, j) > 0) m = std::min(m, b[static_cast<size_t>(i)] / A(i, j));
    cap[static_cast<size_t>(j)] = m;
  }
  return cap;
}

DownClosedPolytope::DownClosedPolytope(Matrix A, Vec b)
    : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows < 1 || A_.cols < 1 || static_cast<int>(b_.size()) != A_.rows)
    throw std::invalid_argument("DownClosedPolytope: bad shapes");
  for (double a : A_.a)
    if (!(a > 0)) throw std::invalid_argument("DownClosedPolytope: A entries must be > 0");
  for (double bi : b_)
    if (bi < 0) throw std::invalid_argument("DownClosedPolytope: b must be >= 0");
  cap_ = derive_upper_bound(A_, b_);
}

Vec DownClosedPolytope::lmo(const Vec& g, const Vec* cap) const {
  check_gradient(g, dim());
  Vec ub(g.size());
  for (size_t j = 0; j < g.size(); ++j) {
    ub[j] = capped_upper(cap_[j], cap, j);
    if (g[j] <= 0) ub[j] = 0.0;  // optimal for a down-closed region
  }
  return simplex_box_lp(A_, b_, ub, g).x;
}

bool DownClosedPolytope::member(const Vec& x, double tol) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (double xi : x)
    if (!(xi >= -tol)) return false;
  Vec ax = matvec(A_, x);
  for (size_t i = 0; i < ax.size(); ++i)
    if (ax[i] > b_[i] + tol) return false;
  return true;
}

// ---------------------------------------------------------------------------
// CappedConstraint

CappedConstraint::CappedConstraint(const Constraint& base, Vec cap)
    : base_(&base), cap_(std::move(cap)) {
  if (static_cast<int>(cap_.size()) != base.dim())
    throw std::invalid_argument("CappedConstraint: cap dimension mismatch");
  for (double c : cap_)
    if (c < 0) throw std::invalid_argument("CappedConstraint: cap must be >= 0");
}

Vec CappedConstraint::lmo(const Vec& g, const Vec* cap) const {
  if (!cap) return base_->lmo(g, &cap_);
  Vec merged = meet(cap_, *cap);
  return base_->lmo(g, &merged);
}

bool CappedConstraint::member(const Vec& x, double tol) const {
  if (!base_->member(x, tol)) return false;
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] > cap_[i] + tol) return false;
  return true;
}

Vec CappedConstraint::upper_bound() const { return meet(base_->upper_bound(), cap_); }

}  // namespace drsm
