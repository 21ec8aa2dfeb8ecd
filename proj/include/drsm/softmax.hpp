#pragma once

#include "drsm/core.hpp"
#include "drsm/linalg.hpp"

namespace drsm {

// Softmax extension of a DPP with PSD kernel L:
//   f(x) = log det(diag(x)(L - I) + I),  x in [0,1]^n.
//
// The determinant is computed by LU factorization with partial pivoting (the
// matrix is not symmetric). A nonpositive or underflowing determinant raises
// SingularMatrixError; with PSD L it is positive in exact arithmetic.
// Gradient: with C = (diag(x)(L-I)+I)^{-1} and D = L-I,
//   grad_i = D_{i,.} . C_{.,i}.
class SoftmaxObjective final : public Objective {
 public:
  explicit SoftmaxObjective(Matrix L);

  Eval eval(const Vec& x) const override;
  double value(const Vec& x) const override;

  const Matrix& L() const { return L_; }

 private:
  Matrix system_matrix(const Vec& x) const;  // diag(x)(L-I)+I
  Matrix L_;
};

}  // namespace drsm
