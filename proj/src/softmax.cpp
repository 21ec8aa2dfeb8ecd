#include "drsm/softmax.hpp"

#include <cmath>
#include <stdexcept>

namespace drsm {

namespace {

ObjectiveFlags softmax_flags() {
  ObjectiveFlags f;
  f.dr_submodular = true;
  f.submodular = true;
  f.monotone = false;
  return f;
}

}  // namespace

SoftmaxObjective::SoftmaxObjective(Matrix L)
    : Objective(Box::unit(L.rows), softmax_flags()), L_(std::move(L)) {
  if (L_.rows != L_.cols) throw std::invalid_argument("SoftmaxObjective: L not square");
  if (!L_.symmetric(1e-8)) throw std::invalid_argument("SoftmaxObjective: L not symmetric");
  double lam_min = sym_eig_min(L_, 100);
  if (lam_min < -1e-8)
    throw std::invalid_argument("SoftmaxObjective: L not PSD (lambda_min ~ " +
                                std::to_string(lam_min) + ")");
}

Matrix SoftmaxObjective::system_matrix(const Vec& x) const {
  const int n = L_.rows;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    double xi = x[static_cast<size_t>(i)];
    for (int j = 0; j < n; ++j) m(i, j) = xi * (L_(i, j) - (i == j ? 1.0 : 0.0));
    m(i, i) += 1.0;
  }
  return m;
}

double SoftmaxObjective::value(const Vec& x) const {
  Vec xc = checked(x);
  LuFactors f = lu_factor(system_matrix(xc));
  LogDet d = lu_logdet(f);
  if (d.sign <= 0 || d.log_abs < -690.0)  // |det| < ~1e-300
    throw SingularMatrixError("softmax: determinant numerically singular");
  return d.log_abs;
}

Eval SoftmaxObjective::eval(const Vec& x) const {
  Vec xc = checked(x);
  const int n = L_.rows;
  LuFactors f = lu_factor(system_matrix(xc));
  LogDet d = lu_logdet(f);
  if (d.sign <= 0 || d.log_abs < -690.0)
    throw SingularMatrixError("softmax: determinant numerically singular");
  Matrix c = lu_inverse(f);
  Vec g(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0;
    for (int k = 0; k < n; ++k)
      s += (L_(i, k) - (i == k ? 1.0 : 0.0)) * c(k, i);
    g[static_cast<size_t>(i)] = s;
  }
  return {d.log_abs, std::move(g)};
}

}  // namespace drsm
