#include "drsm/influence.hpp"

#include <cmath>
#include <stdexcept>

namespace drsm {

namespace {

ObjectiveFlags influence_flags(const Objective& inner) {
  // Composition of a nondecreasing DR inner extension with a nondecreasing
  // DR activation preserves DR-submodularity and monotonicity.
  ObjectiveFlags f;
  f.dr_submodular = inner.flags().dr_submodular && inner.flags().monotone;
  f.submodular = f.dr_submodular;
  f.monotone = inner.flags().monotone;
  return f;
}

// (1-p)^x as exp(x log(1-p)), with the p = 1 and p = 0 edge cases pinned.
double decay_pow(double p, double x) {
  if (p >= 1.0) return x > 0 ? 0.0 : 1.0;
  if (p <= 0.0) return 1.0;
  return std::exp(x * std::log1p(-p));
}

}  // namespace

InfluenceObjective::InfluenceObjective(std::shared_ptr<const Objective> inner, Vec p,
                                       Box domain)
    : Objective(std::move(domain), influence_flags(*inner)),
      inner_(std::move(inner)),
      independent_(true),
      p_(std::move(p)) {
  if (dim() != inner_->dim() || static_cast<int>(p_.size()) != dim())
    throw std::invalid_argument("InfluenceObjective: independent mode needs one action per customer");
  for (double pi : p_)
    if (pi < 0 || pi > 1) throw std::invalid_argument("InfluenceObjective: p outside [0,1]");
}

InfluenceObjective::InfluenceObjective(std::shared_ptr<const Objective> inner,
                                       int n_actions, std::vector<BipartiteEdge> edges,
                                       Box domain)
    : Objective(std::move(domain), influence_flags(*inner)),
      inner_(std::move(inner)),
      independent_(false) {
  if (dim() != n_actions)
    throw std::invalid_argument("InfluenceObjective: domain dimension must equal n_actions");
  by_customer_.resize(static_cast<size_t>(inner_->dim()));
  for (const BipartiteEdge& e : edges) {
    if (e.action < 0 || e.action >= n_actions || e.customer < 0 ||
        e.customer >= inner_->dim())
      throw std::invalid_argument("InfluenceObjective: edge index out of range");
    if (e.p < 0 || e.p > 1)
      throw std::invalid_argument("InfluenceObjective: p outside [0,1]");
    by_customer_[static_cast<size_t>(e.customer)].push_back(e);
  }
}

Vec InfluenceObjective::activation(const Vec& x) const {
  if (independent_) {
    Vec a(x.size());
    for (size_t i = 0; i < x.size(); ++i) a[i] = 1.0 - decay_pow(p_[i], x[i]);
    return a;
  }
  Vec a(by_customer_.size());
  for (size_t t = 0; t < by_customer_.size(); ++t) {
    double miss = 1.0;
    for (const BipartiteEdge& e : by_customer_[t])
      miss *= decay_pow(e.p, x[static_cast<size_t>(e.action)]);
    a[t] = 1.0 - miss;
  }
  return a;
}

double InfluenceObjective::value(const Vec& x) const {
  return inner_->value(activation(checked(x)));
}

Eval InfluenceObjective::eval(const Vec& x) const {
  Vec xc = checked(x);
  Eval e;
  if (independent_) {
    Vec a(xc.size());
    Vec da(xc.size());  // da_i/dx_i
    for (size_t i = 0; i < xc.size(); ++i) {
      double pw = decay_pow(p_[i], xc[i]);
      a[i] = 1.0 - pw;
      da[i] = (p_[i] >= 1.0 || p_[i] <= 0.0) ? 0.0 : -pw * std::log1p(-p_[i]);
    }
    Eval inner = inner_->eval(a);
    e.value = inner.value;
    e.grad.resize(xc.size());
    for (size_t i = 0; i < xc.size(); ++i) e.grad[i] = inner.grad[i] * da[i];
    return e;
  }
  const size_t m = by_customer_.size();
  Vec a(m);
  Vec miss(m);
  for (size_t t = 0; t < m; ++t) {
    double q = 1.0;
    for (const BipartiteEdge& ed : by_customer_[t])
      q *= decay_pow(ed.p, xc[static_cast<size_t>(ed.action)]);
    miss[t] = q;
    a[t] = 1.0 - q;
  }
  Eval inner = inner_->eval(a);
  e.value = inner.value;
  e.grad.assign(xc.size(), 0.0);
  for (size_t t = 0; t < m; ++t) {
    for (const BipartiteEdge& ed : by_customer_[t]) {
      if (ed.p >= 1.0 || ed.p <= 0.0) continue;
      // da^t/dx_s = -log(1-p_st) * prod over the customer's edges
      e.grad[static_cast<size_t>(ed.action)] +=
          inner.grad[t] * (-std::log1p(-ed.p)) * miss[t];
    }
  }
  return e;
}

}  // namespace drsm
