#include "drsm/meanfield.hpp"

#include <cmath>
#include <stdexcept>

namespace drsm {

namespace {

ObjectiveFlags meanfield_flags(const Objective& inner) {
  // All Hessian entries of -KL are nonpositive when the inner multilinear
  // extension is submodular (the entropy term only adds negative diagonal).
  ObjectiveFlags f;
  f.dr_submodular = inner.flags().submodular;
  f.submodular = f.dr_submodular;
  return f;
}

double entropy_term(double x) { return x * std::log(x) + (1.0 - x) * std::log(1.0 - x); }

}  // namespace

MeanFieldKLObjective::MeanFieldKLObjective(std::shared_ptr<const Objective> multilinear)
    : Objective(Box::unit(multilinear->dim()), meanfield_flags(*multilinear)),
      inner_(std::move(multilinear)) {
  if (!inner_->domain().contains(Vec(static_cast<size_t>(inner_->dim()), 1.0), kEqTol))
    throw std::invalid_argument("MeanFieldKLObjective: inner model must live on [0,1]^n");
}

Vec MeanFieldKLObjective::clamped(const Vec& x) const {
  Vec r = x;
  bool clamped_any = false;
  for (double& v : r) {
    if (v < kEps) {
      v = kEps;
      clamped_any = true;
    } else if (v > 1.0 - kEps) {
      v = 1.0 - kEps;
      clamped_any = true;
    }
  }
  if (clamped_any) clamp_events_.fetch_add(1, std::memory_order_relaxed);
  return r;
}

double MeanFieldKLObjective::value(const Vec& x) const {
  Vec xc = clamped(checked(x));
  double s = inner_->value(xc);
  for (double v : xc) s -= entropy_term(v);
  return s;
}

Eval MeanFieldKLObjective::eval(const Vec& x) const {
  Vec xc = clamped(checked(x));
  Eval inner = inner_->eval(xc);
  Eval e;
  e.value = inner.value;
  e.grad = std::move(inner.grad);
  for (size_t i = 0; i < xc.size(); ++i) {
    e.value -= entropy_term(xc[i]);
    e.grad[i] -= std::log(xc[i]) - std::log(1.0 - xc[i]);
  }
  return e;
}

}  // namespace drsm
