#include "drsm/quadratic.hpp"

#include <stdexcept>

namespace drsm {

ObjectiveFlags QuadraticObjective::derive_flags(const Matrix& H, const Vec& h,
                                                const Box& domain) {
  ObjectiveFlags f;
  bool offdiag_nonpos = true, all_nonpos = true, all_diag_neg = true;
  for (int i = 0; i < H.rows; ++i) {
    for (int j = 0; j < H.cols; ++j) {
      if (H(i, j) > 0) {
        all_nonpos = false;
        if (i != j) offdiag_nonpos = false;
      }
    }
    if (!(H(i, i) < 0)) all_diag_neg = false;
  }
  f.submodular = offdiag_nonpos;
  f.dr_submodular = all_nonpos;
  if (all_nonpos) {
    // grad = Hx + h is antitone, so its minimum over the box is at the corner.
    Vec g_at_upper = matvec(H, domain.upper());
    bool nonneg = true;
    for (size_t i = 0; i < h.size(); ++i)
      if (g_at_upper[i] + h[i] < 0) nonneg = false;
    f.monotone = nonneg;
    if (all_diag_neg) {
      double mu = -H(0, 0);
      for (int i = 1; i < H.rows; ++i) mu = std::min(mu, -H(i, i));
      f.strong_dr = mu;
    }
  }
  f.lipschitz = sym_eig_max_abs(H, 50);
  return f;
}

QuadraticObjective::QuadraticObjective(Matrix H, Vec h, double c, Box domain)
    : Objective(domain, derive_flags(H, h, domain)),
      H_(std::move(H)),
      h_(std::move(h)),
      c_(c) {
  if (H_.rows != H_.cols || H_.rows != domain.dim() ||
      static_cast<int>(h_.size()) != domain.dim())
    throw std::invalid_argument("QuadraticObjective: dimension mismatch");
  if (!H_.symmetric(1e-12))
    throw std::invalid_argument("QuadraticObjective: H must be symmetric");
}

Eval QuadraticObjective::eval(const Vec& x) const {
  Vec xc = checked(x);
  Vec Hx = matvec(H_, xc);
  double v = 0.5 * dot(xc, Hx) + dot(h_, xc) + c_;
  for (size_t i = 0; i < Hx.size(); ++i) Hx[i] += h_[i];
  return {v, std::move(Hx)};
}

double QuadraticObjective::value(const Vec& x) const {
  Vec xc = checked(x);
  return 0.5 * dot(xc, matvec(H_, xc)) + dot(h_, xc) + c_;
}

}  // namespace drsm
