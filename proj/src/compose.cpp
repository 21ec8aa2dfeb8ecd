#include "drsm/compose.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace drsm {

namespace {

ObjectiveFlags composed_flags(const ObjectiveFlags& f, const MapFlags& h) {
  ObjectiveFlags g;
  bool h_monotone = h.monotone != MapMonotonicity::kNone;
  if (f.dr_submodular && f.monotone && h_monotone &&
      h.curvature == MapCurvature::kDrSubmodular) {
    g.dr_submodular = true;
    g.submodular = true;
  }
  if (f.submodular && h_monotone && h.separable) g.submodular = true;
  g.monotone = f.monotone && h.monotone == MapMonotonicity::kNondecreasing;
  return g;
}

// Clamp h(x) into f's domain; tolerate only tiny numerical excursions.
Vec into_domain(const Objective& f, Vec y) {
  if (static_cast<int>(y.size()) != f.dim())
    throw std::invalid_argument("compose: map range dimension does not match inner domain");
  if (!f.domain().contains(y, kDomainSlack))
    throw std::invalid_argument("compose: map output left the inner domain");
  return f.domain().clamp(std::move(y));
}

class SeparableComposed final : public Objective {
 public:
  SeparableComposed(std::shared_ptr<const Objective> f, std::vector<ScalarMap> h,
                    MapFlags h_flags, Box outer)
      : Objective(std::move(outer), composed_flags(f->flags(), h_flags)),
        f_(std::move(f)),
        h_(std::move(h)) {
    if (static_cast<int>(h_.size()) != dim() || f_->dim() != dim())
      throw std::invalid_argument("compose: separable map needs one scalar map per coordinate");
  }

  Eval eval(const Vec& x) const override {
    Vec xc = checked(x);
    Vec y(xc.size()), dy(xc.size());
    for (size_t i = 0; i < xc.size(); ++i) {
      y[i] = h_[i].value(xc[i]);
      dy[i] = h_[i].deriv(xc[i]);
    }
    Eval inner = f_->eval(into_domain(*f_, std::move(y)));
    Eval e;
    e.value = inner.value;
    e.grad.resize(xc.size());
    for (size_t i = 0; i < xc.size(); ++i) e.grad[i] = inner.grad[i] * dy[i];
    return e;
  }

  double value(const Vec& x) const override {
    Vec xc = checked(x);
    Vec y(xc.size());
    for (size_t i = 0; i < xc.size(); ++i) y[i] = h_[i].value(xc[i]);
    return f_->value(into_domain(*f_, std::move(y)));
  }

 private:
  std::shared_ptr<const Objective> f_;
  std::vector<ScalarMap> h_;
};

class VectorComposed final : public Objective {
 public:
  VectorComposed(std::shared_ptr<const Objective> f, VectorMap h, MapFlags h_flags,
                 Box outer)
      : Objective(std::move(outer), composed_flags(f->flags(), h_flags)),
        f_(std::move(f)),
        h_(std::move(h)) {
    if (h_.in_dim != dim() || h_.out_dim != f_->dim())
      throw std::invalid_argument("compose: vector map dimensions do not match");
  }

  Eval eval(const Vec& x) const override {
    Vec xc = checked(x);
    Eval inner = f_->eval(into_domain(*f_, h_.value(xc)));
    Matrix jac = h_.jacobian(xc);
    if (jac.rows != h_.out_dim || jac.cols != h_.in_dim)
      throw std::invalid_argument("compose: jacobian has wrong shape");
    Eval e;
    e.value = inner.value;
    e.grad = matvec_t(jac, inner.grad);
    return e;
  }

  double value(const Vec& x) const override {
    return f_->value(into_domain(*f_, h_.value(checked(x))));
  }

 private:
  std::shared_ptr<const Objective> f_;
  VectorMap h_;
};

}  // namespace

std::shared_ptr<Objective> compose(std::shared_ptr<const Objective> f,
                                   std::vector<ScalarMap> h, MapFlags h_flags,
                                   Box outer_domain) {
  h_flags.separable = true;
  return std::make_shared<SeparableComposed>(std::move(f), std::move(h), h_flags,
                                             std::move(outer_domain));
}

std::shared_ptr<Objective> compose(std::shared_ptr<const Objective> f, VectorMap h,
                                   MapFlags h_flags, Box outer_domain) {
  return std::make_shared<VectorComposed>(std::move(f), std::move(h), h_flags,
                                          std::move(outer_domain));
}

ScalarMap identity_map() {
  return {[](double t) { return t; }, [](double) { return 1.0; }};
}

ScalarMap activation_map(double p) {
  if (p < 0 || p > 1) throw std::invalid_argument("activation_map: p outside [0,1]");
  return {[p](double t) {
            if (p >= 1.0) return t > 0 ? 1.0 : 0.0;
            if (p <= 0.0) return 0.0;
            return 1.0 - std::exp(t * std::log1p(-p));
          },
          [p](double t) {
            if (p >= 1.0 || p <= 0.0) return 0.0;
            return -std::exp(t * std::log1p(-p)) * std::log1p(-p);
          }};
}

ScalarMap decay_share_map(double q) {
  if (!(q > 0 && q < 1)) throw std::invalid_argument("decay_share_map: q outside (0,1)");
  double lq = std::log(q);
  return {[lq](double t) { return 1.0 - std::exp(t * lq); },
          [lq](double t) { return -std::exp(t * lq) * lq; }};
}

}  // namespace drsm
