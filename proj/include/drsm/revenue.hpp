#pragma once

#include "drsm/core.hpp"
#include "drsm/linalg.hpp"

namespace drsm {

// Influence-and-exploit revenue over a directed social graph:
//   f(x) = sum_i sum_{j != i} W_ij (1 - q^{x_i}) q^{x_j},  q in (0,1), W >= 0.
// Submodular (separable reparameterization of a cut-style multilinear
// extension), generally non-monotone and not DR.
// q^x is computed as exp(x log q).
class RevenueIEObjective final : public Objective {
 public:
  RevenueIEObjective(Matrix W, double q, Box domain);

  Eval eval(const Vec& x) const override;
  double value(const Vec& x) const override;

  const Matrix& W() const { return W_; }
  double q() const { return q_; }

 private:
  Matrix W_;
  double q_;
  double log_q_;
};

}  // namespace drsm
