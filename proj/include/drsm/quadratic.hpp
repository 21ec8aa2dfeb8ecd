#pragma once

#include "drsm/core.hpp"
#include "drsm/linalg.hpp"

namespace drsm {

// f(x) = 1/2 x^T H x + h^T x + c over a box, H symmetric.
//
// Structure flags are derived from H: submodular iff all off-diagonal entries
// are <= 0, DR-submodular iff all entries are <= 0. For the DR case the
// gradient is entrywise antitone, so monotonicity over the box is certified
// by checking the gradient at the upper corner. The Lipschitz constant is the
// spectral norm of H (power iteration), and for H with strictly negative
// diagonal a strong-DR parameter mu = min_i(-H_ii) is certified.
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(Matrix H, Vec h, double c, Box domain);

  Eval eval(const Vec& x) const override;
  double value(const Vec& x) const override;

  const Matrix& H() const { return H_; }
  const Vec& h() const { return h_; }
  double c() const { return c_; }

 private:
  static ObjectiveFlags derive_flags(const Matrix& H, const Vec& h, const Box& domain);
  Matrix H_;
  Vec h_;
  double c_;
};

}  // namespace drsm
