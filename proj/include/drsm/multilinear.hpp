#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "drsm/core.hpp"
#include "drsm/linalg.hpp"

namespace drsm {

// Set function over [n] given as a bitmask oracle (bit i set <=> item i in S).
using SetFunction = std::function<double(uint64_t mask)>;

// Multilinear extension of a Gibbs random field energy: a polynomial
//   f(x) = sum_T theta_T prod_{i in T} x_i
// over [0,1]^n, each term a coefficient on a set of distinct variables.
// Covers undirected/directed max-cut and Ising models via the builders below.
class GibbsPolynomial final : public Objective {
 public:
  struct Term {
    double coef = 0.0;
    std::vector<int> vars;  // sorted, distinct; empty means a constant term
  };

  GibbsPolynomial(int n, std::vector<Term> terms);

  Eval eval(const Vec& x) const override;
  double value(const Vec& x) const override;
  double set_value(uint64_t mask) const;
  SetFunction set_function() const;

  const std::vector<Term>& terms() const { return terms_; }

  struct Edge {
    int i, j;
    double w;
  };
  static GibbsPolynomial undirected_cut(int n, const std::vector<Edge>& edges);
  static GibbsPolynomial directed_cut(int n, const std::vector<Edge>& edges);
  static GibbsPolynomial ising(int n, const Vec& theta_node,
                               const std::vector<Edge>& pair_theta);
  // Modular polynomial sum_i w_i x_i.
  static GibbsPolynomial modular(const Vec& w);

 private:
  static ObjectiveFlags derive_flags(int n, const std::vector<Term>& terms);
  std::vector<Term> terms_;
};

// FLID diversity model F(S) = sum_{i in S} u'_i + sum_d max_{i in S} W_{i,d};
// its multilinear extension has the sorted closed form
//   f(x) = sum_i u'_i x_i
//        + sum_d sum_l W_{sigma_d(l),d} x_{sigma_d(l)} prod_{m>l} (1 - x_{sigma_d(m)})
// where sigma_d sorts column d of W nondecreasing (stable, ties by index).
// The gradient uses the multilinear identity grad_i = f(x;x_i=1) - f(x;x_i=0).
class FlidObjective final : public Objective {
 public:
  FlidObjective(Matrix W, Vec u_prime);  // W is n x D, entries >= 0

  Eval eval(const Vec& x) const override;
  double value(const Vec& x) const override;
  double set_value(uint64_t mask) const;
  SetFunction set_function() const;

  const Matrix& W() const { return W_; }
  const Vec& u_prime() const { return u_prime_; }

 private:
  double value_unchecked(const Vec& x) const;
  void check_permutations() const;
  Matrix W_;
  Vec u_prime_;
  std::vector<std::vector<int>> order_;  // order_[d][l] = sigma_d(l)
};

// Weighted set cover F(S) = sum_c m_c [Gamma^{-1}(c) intersects S], with the
// product-form multilinear extension.
class SetCoverObjective final : public Objective {
 public:
  struct Concept {
    double weight = 0.0;          // m_c >= 0
    std::vector<int> items;       // Gamma^{-1}(c), nonempty
  };

  SetCoverObjective(int n, std::vector<Concept> concepts);

  Eval eval(const Vec& x) const override;
  double value(const Vec& x) const override;
  double set_value(uint64_t mask) const;
  SetFunction set_function() const;

  const std::vector<Concept>& concepts() const { return concepts_; }

 private:
  std::vector<Concept> concepts_;
};

// Monte-Carlo estimate of the multilinear extension and its gradient at x:
// k subsets are drawn with independent inclusion probabilities x_i, and the
// gradient pairs F(S u {i}) - F(S \ {i}) share the sampled subsets (common
// random numbers).
struct SampleEstimate {
  double value = 0.0;
  Vec grad;
};
SampleEstimate multilinear_sample_estimate(int n, const SetFunction& F, const Vec& x,
                                           int k = 1000, uint64_t seed = 0);

// Objective wrapper around the sampling estimator. Evaluation derives the
// sample stream from the base seed and the bits of x, so it is pure.
class SampledMultilinearObjective final : public Objective {
 public:
  SampledMultilinearObjective(int n, SetFunction F, int samples, uint64_t seed,
                              ObjectiveFlags flags = {});
  Eval eval(const Vec& x) const override;

 private:
  SetFunction F_;
  int samples_;
  uint64_t seed_;
};

}  // namespace drsm
