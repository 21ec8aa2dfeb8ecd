#pragma once

#include <memory>
#include <vector>

#include "drsm/core.hpp"

namespace drsm {

// Expected influence under a marketing strategy x:
//   f(x) = multilinear(F) evaluated at the activation vector a(x),
// the composition of a nondecreasing multilinear extension (the inner
// objective, over [0,1]^m) with a monotone DR activation map.
//
// Activations:
//  - independent: one action per customer, a^i(x_i) = 1 - (1 - p_i)^{x_i};
//  - bipartite:   a^t(x) = 1 - prod_{(s,t)} (1 - p_st)^{x_s} over action
//    investments x in R_+^n.
// p = 1 is handled by defining (1-p)^x = 0 for x > 0; p = 0 gives a constant
// zero activation.
class InfluenceObjective final : public Objective {
 public:
  struct BipartiteEdge {
    int action = 0;    // s
    int customer = 0;  // t
    double p = 0.0;    // influence probability per unit investment
  };

  // Independent activations: inner->dim() customers, one action each.
  InfluenceObjective(std::shared_ptr<const Objective> inner, Vec p, Box domain);
  // Bipartite activations over n_actions investments.
  InfluenceObjective(std::shared_ptr<const Objective> inner, int n_actions,
                     std::vector<BipartiteEdge> edges, Box domain);

  Eval eval(const Vec& x) const override;
  double value(const Vec& x) const override;

  // Activation vector a(x) in [0,1]^m.
  Vec activation(const Vec& x) const;
  const Objective& inner() const { return *inner_; }

 private:
  std::shared_ptr<const Objective> inner_;
  bool independent_ = true;
  Vec p_;                                        // independent mode
  std::vector<std::vector<BipartiteEdge>> by_customer_;  // bipartite mode
};

}  // namespace drsm
