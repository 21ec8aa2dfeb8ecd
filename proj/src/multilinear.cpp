#include "drsm/multilinear.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>

#include "drsm/rng.hpp"

namespace drsm {

// ---------------------------------------------------------------------------
// GibbsPolynomial

ObjectiveFlags GibbsPolynomial::derive_flags(int n, const std::vector<Term>& terms) {
  ObjectiveFlags f;
  // Sufficient conditions valid on [0,1]^n:
  //  - all interaction terms (>= 2 vars) nonpositive => every Hessian entry
  //    is a sum of nonpositive products => DR-submodular;
  //  - additionally grad_i >= theta_{i} + sum of negative interactions at i,
  //    so nonnegativity of that lower bound certifies monotonicity.
  bool interactions_nonpos = true;
  Vec grad_lb(static_cast<size_t>(n), 0.0);
  for (const Term& t : terms) {
    if (t.vars.size() >= 2 && t.coef > 0) interactions_nonpos = false;
    for (int v : t.vars) {
      if (t.vars.size() == 1)
        grad_lb[static_cast<size_t>(v)] += t.coef;
      else if (t.coef < 0)
        grad_lb[static_cast<size_t>(v)] += t.coef;
    }
  }
  if (interactions_nonpos) {
    f.submodular = true;
    f.dr_submodular = true;
  }
  f.monotone = std::all_of(grad_lb.begin(), grad_lb.end(),
                           [](double g) { return g >= 0.0; });
  return f;
}

GibbsPolynomial::GibbsPolynomial(int n, std::vector<Term> terms)
    : Objective(Box::unit(n), derive_flags(n, terms)), terms_(std::move(terms)) {
  for (Term& t : terms_) {
    std::sort(t.vars.begin(), t.vars.end());
    if (std::adjacent_find(t.vars.begin(), t.vars.end()) != t.vars.end())
      throw std::invalid_argument("GibbsPolynomial: repeated variable in term");
    for (int v : t.vars)
      if (v < 0 || v >= n) throw std::invalid_argument("GibbsPolynomial: variable index out of range");
  }
}

double GibbsPolynomial::value(const Vec& x) const {
  Vec xc = checked(x);
  double s = 0;
  for (const Term& t : terms_) {
    double p = t.coef;
    for (int v : t.vars) p *= xc[static_cast<size_t>(v)];
    s += p;
  }
  return s;
}

Eval GibbsPolynomial::eval(const Vec& x) const {
  Vec xc = checked(x);
  double s = 0;
  Vec g(xc.size(), 0.0);
  for (const Term& t : terms_) {
    double p = t.coef;
    for (int v : t.vars) p *= xc[static_cast<size_t>(v)];
    s += p;
    // d/dx_v = coef * prod over the other vars
    for (size_t a = 0; a < t.vars.size(); ++a) {
      double q = t.coef;
      for (size_t b = 0; b < t.vars.size(); ++b)
        if (b != a) q *= xc[static_cast<size_t>(t.vars[b])];
      g[static_cast<size_t>(t.vars[a])] += q;
    }
  }
  return {s, std::move(g)};
}

double GibbsPolynomial::set_value(uint64_t mask) const {
  double s = 0;
  for (const Term& t : terms_) {
    bool all_in = true;
    for (int v : t.vars)
      if (!(mask >> v & 1)) {
        all_in = false;
        break;
      }
    if (all_in) s += t.coef;
  }
  return s;
}

SetFunction GibbsPolynomial::set_function() const {
  return [this](uint64_t mask) { return set_value(mask); };
}

GibbsPolynomial GibbsPolynomial::undirected_cut(int n, const std::vector<Edge>& edges) {
  std::vector<Term> terms;
  for (const Edge& e : edges) {
    terms.push_back({0.5 * e.w, {e.i}});
    terms.push_back({0.5 * e.w, {e.j}});
    terms.push_back({-e.w, {e.i, e.j}});
  }
  return GibbsPolynomial(n, std::move(terms));
}

GibbsPolynomial GibbsPolynomial::directed_cut(int n, const std::vector<Edge>& edges) {
  std::vector<Term> terms;
  for (const Edge& e : edges) {
    terms.push_back({e.w, {e.i}});
    terms.push_back({-e.w, {e.i, e.j}});
  }
  return GibbsPolynomial(n, std::move(terms));
}

GibbsPolynomial GibbsPolynomial::ising(int n, const Vec& theta_node,
                                       const std::vector<Edge>& pair_theta) {
  std::vector<Term> terms;
  for (int i = 0; i < n; ++i)
    if (theta_node[static_cast<size_t>(i)] != 0.0)
      terms.push_back({theta_node[static_cast<size_t>(i)], {i}});
  for (const Edge& e : pair_theta) terms.push_back({e.w, {e.i, e.j}});
  return GibbsPolynomial(n, std::move(terms));
}

GibbsPolynomial GibbsPolynomial::modular(const Vec& w) {
  std::vector<Term> terms;
  for (size_t i = 0; i < w.size(); ++i) terms.push_back({w[i], {static_cast<int>(i)}});
  return GibbsPolynomial(static_cast<int>(w.size()), std::move(terms));
}

// ---------------------------------------------------------------------------
// FlidObjective

namespace {

ObjectiveFlags flid_flags(const Vec& u_prime) {
  ObjectiveFlags f;
  f.submodular = true;
  f.dr_submodular = true;  // multilinear extension of a submodular set function
  f.monotone = std::all_of(u_prime.begin(), u_prime.end(),
                           [](double u) { return u >= 0.0; });
  return f;
}

}  // namespace

FlidObjective::FlidObjective(Matrix W, Vec u_prime)
    : Objective(Box::unit(W.rows), flid_flags(u_prime)),
      W_(std::move(W)),
      u_prime_(std::move(u_prime)) {
  const int n = W_.rows, D = W_.cols;
  if (static_cast<int>(u_prime_.size()) != n)
    throw std::invalid_argument("FlidObjective: u' length mismatch");
  for (double w : W_.a)
    if (w < 0) throw std::invalid_argument("FlidObjective: W entries must be >= 0");
  order_.resize(static_cast<size_t>(D));
  for (int d = 0; d < D; ++d) {
    auto& ord = order_[static_cast<size_t>(d)];
    ord.resize(static_cast<size_t>(n));
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(),
                     [&](int a, int b) { return W_(a, d) < W_(b, d); });
  }
}

void FlidObjective::check_permutations() const {
  for (int d = 0; d < W_.cols; ++d) {
    const auto& ord = order_[static_cast<size_t>(d)];
    for (size_t l = 1; l < ord.size(); ++l)
      if (W_(ord[l - 1], d) > W_(ord[l], d))
        throw std::logic_error("FlidObjective: stale permutation cache");
  }
}

double FlidObjective::value_unchecked(const Vec& x) const {
  const int n = W_.rows, D = W_.cols;
  double s = 0;
  for (int i = 0; i < n; ++i) s += u_prime_[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
  for (int d = 0; d < D; ++d) {
    const auto& ord = order_[static_cast<size_t>(d)];
    double suffix = 1.0;  // prod_{m>l} (1 - x_{sigma(m)}), built from the top
    double acc = 0.0;
    for (int l = n - 1; l >= 0; --l) {
      int item = ord[static_cast<size_t>(l)];
      acc += W_(item, d) * x[static_cast<size_t>(item)] * suffix;
      suffix *= 1.0 - x[static_cast<size_t>(item)];
    }
    s += acc;
  }
  return s;
}

double FlidObjective::value(const Vec& x) const {
  Vec xc = checked(x);
  check_permutations();
  return value_unchecked(xc);
}

Eval FlidObjective::eval(const Vec& x) const {
  Vec xc = checked(x);
  check_permutations();
  const int n = W_.rows;
  Eval e;
  e.value = value_unchecked(xc);
  e.grad.resize(static_cast<size_t>(n));
  Vec probe = xc;
  for (int i = 0; i < n; ++i) {
    double xi = xc[static_cast<size_t>(i)];
    probe[static_cast<size_t>(i)] = 1.0;
    double hi = value_unchecked(probe);
    probe[static_cast<size_t>(i)] = 0.0;
    double lo = value_unchecked(probe);
    probe[static_cast<size_t>(i)] = xi;
    e.grad[static_cast<size_t>(i)] = hi - lo;
  }
  return e;
}

double FlidObjective::set_value(uint64_t mask) const {
  const int n = W_.rows, D = W_.cols;
  double s = 0;
  for (int i = 0; i < n; ++i)
    if (mask >> i & 1) s += u_prime_[static_cast<size_t>(i)];
  for (int d = 0; d < D; ++d) {
    double mx = 0;  // max over the empty set is 0
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) mx = std::max(mx, W_(i, d));
    s += mx;
  }
  return s;
}

SetFunction FlidObjective::set_function() const {
  return [this](uint64_t mask) { return set_value(mask); };
}

// ---------------------------------------------------------------------------
// SetCoverObjective

namespace {

ObjectiveFlags setcover_flags() {
  ObjectiveFlags f;
  f.submodular = true;
  f.dr_submodular = true;
  f.monotone = true;
  return f;
}

}  // namespace

SetCoverObjective::SetCoverObjective(int n, std::vector<Concept> concepts)
    : Objective(Box::unit(n), setcover_flags()), concepts_(std::move(concepts)) {
  for (const Concept& c : concepts_) {
    if (c.weight < 0) throw std::invalid_argument("SetCoverObjective: concept weight < 0");
    if (c.items.empty())
      throw std::invalid_argument("SetCoverObjective: concept covered by no item");
    for (int i : c.items)
      if (i < 0 || i >= n) throw std::invalid_argument("SetCoverObjective: item index out of range");
  }
}

double SetCoverObjective::value(const Vec& x) const {
  Vec xc = checked(x);
  double s = 0;
  for (const Concept& c : concepts_) {
    double miss = 1.0;
    for (int i : c.items) miss *= 1.0 - xc[static_cast<size_t>(i)];
    s += c.weight * (1.0 - miss);
  }
  return s;
}

Eval SetCoverObjective::eval(const Vec& x) const {
  Vec xc = checked(x);
  double s = 0;
  Vec g(xc.size(), 0.0);
  for (const Concept& c : concepts_) {
    double miss = 1.0;
    for (int i : c.items) miss *= 1.0 - xc[static_cast<size_t>(i)];
    s += c.weight * (1.0 - miss);
    for (int i : c.items) {
      double others = c.weight;
      for (int j : c.items)
        if (j != i) others *= 1.0 - xc[static_cast<size_t>(j)];
      g[static_cast<size_t>(i)] += others;
    }
  }
  return {s, std::move(g)};
}

double SetCoverObjective::set_value(uint64_t mask) const {
  double s = 0;
  for (const Concept& c : concepts_) {
    for (int i : c.items)
      if (mask >> i & 1) {
        s += c.weight;
        break;
      }
  }
  return s;
}

SetFunction SetCoverObjective::set_function() const {
  return [this](uint64_t mask) { return set_value(mask); };
}

// ---------------------------------------------------------------------------
// Sampling estimator

SampleEstimate multilinear_sample_estimate(int n, const SetFunction& F, const Vec& x,
                                           int k, uint64_t seed) {
  if (k < 1) throw std::invalid_argument("multilinear_sample_estimate: k must be >= 1");
  if (n > 63) throw std::invalid_argument("multilinear_sample_estimate: n too large for masks");
  CounterRng rng(seed);
  double vsum = 0;
  Vec gsum(static_cast<size_t>(n), 0.0);
  for (int s = 0; s < k; ++s) {
    uint64_t mask = 0;
    for (int i = 0; i < n; ++i)
      if (rng.next_double() < x[static_cast<size_t>(i)]) mask |= 1ull << i;
    vsum += F(mask);
    for (int i = 0; i < n; ++i) {
      uint64_t bit = 1ull << i;
      gsum[static_cast<size_t>(i)] += F(mask | bit) - F(mask & ~bit);
    }
  }
  SampleEstimate est;
  est.value = vsum / k;
  est.grad.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) est.grad[static_cast<size_t>(i)] = gsum[static_cast<size_t>(i)] / k;
  return est;
}

SampledMultilinearObjective::SampledMultilinearObjective(int n, SetFunction F,
                                                         int samples, uint64_t seed,
                                                         ObjectiveFlags flags)
    : Objective(Box::unit(n), flags), F_(std::move(F)), samples_(samples), seed_(seed) {
  if (samples_ < 1) throw std::invalid_argument("SampledMultilinearObjective: samples < 1");
}

Eval SampledMultilinearObjective::eval(const Vec& x) const {
  Vec xc = checked(x);
  // Hash the point into the stream so evaluation is a pure function of x.
  uint64_t h = seed_;
  for (double v : xc) {
    uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    h = CounterRng::mix64(h ^ bits);
  }
  SampleEstimate est = multilinear_sample_estimate(dim(), F_, xc, samples_, h);
  return {est.value, std::move(est.grad)};
}

}  // namespace drsm
