#pragma once

#include <memory>

#include "drsm/core.hpp"
#include "drsm/linalg.hpp"

namespace drsm {

// Down-closed convex feasible region. All implementations contain 0, expose a
// linear maximization oracle (optionally capped for the shrunken variant), a
// membership test, a tight upper box, and optionally Euclidean projection.
// Objects are immutable; all calls are pure and thread-safe.
class Constraint {
 public:
  virtual ~Constraint() = default;
  virtual int dim() const = 0;

  // argmax_{v in region, v <= cap} <v, g>. Nonpositive gradient coordinates
  // always get v_i = 0; ties between equal gradient entries resolve toward
  // lower indices.
  virtual Vec lmo(const Vec& g, const Vec* cap = nullptr) const = 0;

  virtual bool member(const Vec& x, double tol = kEqTol) const = 0;

  // Tight coordinate-wise upper bound of the region (the u-bar of the
  // enclosing box).
  virtual Vec upper_bound() const = 0;

  virtual bool supports_projection() const { return false; }
  virtual Vec project(const Vec& y) const {
    (void)y;
    throw UnsupportedOperation("constraint does not provide projection");
  }
};

class BoxConstraint final : public Constraint {
 public:
  explicit BoxConstraint(Box box) : box_(std::move(box)) {}
  int dim() const override { return box_.dim(); }
  Vec lmo(const Vec& g, const Vec* cap = nullptr) const override;
  bool member(const Vec& x, double tol = kEqTol) const override;
  Vec upper_bound() const override { return box_.upper(); }
  bool supports_projection() const override { return true; }
  Vec project(const Vec& y) const override;
  const Box& box() const { return box_; }

 private:
  Box box_;
};

// {0 <= x <= u, sum x <= b}. The budget is clamped into [0, sum u].
class CardinalityPolytope final : public Constraint {
 public:
  CardinalityPolytope(Vec u, double budget);
  CardinalityPolytope(int n, double u_scalar, double budget);
  int dim() const override { return static_cast<int>(u_.size()); }
  Vec lmo(const Vec& g, const Vec* cap = nullptr) const override;
  bool member(const Vec& x, double tol = kEqTol) const override;
  Vec upper_bound() const override;
  bool supports_projection() const override { return true; }
  // Euclidean projection: clip to [0,u]; if the budget is violated, shift by
  // tau >= 0 with x_i(tau) = clip(y_i - tau, 0, u_i), tau found by bisection.
  Vec project(const Vec& y) const override;
  const Vec& u() const { return u_; }
  double budget() const { return b_; }

 private:
  Vec u_;
  double b_;
};

// {x >= 0, A x <= b} with A strictly positive and b >= 0 (down-closed in the
// positive orthant). The LMO runs a bounded-variable simplex over the derived
// upper box; projection is not provided.
class DownClosedPolytope final : public Constraint {
 public:
  DownClosedPolytope(Matrix A, Vec b);
  int dim() const override { return A_.cols; }
  Vec lmo(const Vec& g, const Vec* cap = nullptr) const override;
  bool member(const Vec& x, double tol = kEqTol) const override;
  Vec upper_bound() const override { return cap_; }
  const Matrix& A() const { return A_; }
  const Vec& b() const { return b_; }

 private:
  Matrix A_;
  Vec b_;
  Vec cap_;
};

// Tight upper box of {x >= 0, A x <= b}: cap_j = min_i b_i / A_ij.
Vec derive_upper_bound(const Matrix& A, const Vec& b);

// Base region intersected with {x <= cap}; used for shrunken LMO regions.
// Holds a non-owning reference to the base constraint.
class CappedConstraint final : public Constraint {
 public:
  CappedConstraint(const Constraint& base, Vec cap);
  int dim() const override { return base_->dim(); }
  Vec lmo(const Vec& g, const Vec* cap = nullptr) const override;
  bool member(const Vec& x, double tol = kEqTol) const override;
  Vec upper_bound() const override;

 private:
  const Constraint* base_;
  Vec cap_;
};

}  // namespace drsm
