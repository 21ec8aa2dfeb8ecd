#pragma once

#include <atomic>
#include <memory>

#include "drsm/core.hpp"

namespace drsm {

// Negated mean-field KL divergence for a log-submodular model p(S) ~ exp(F(S))
// (the log-partition constant is dropped):
//   f(x) = multilinear_F(x) - sum_i [x_i log x_i + (1-x_i) log(1-x_i)].
// Maximizing f minimizes KL(q_x || p). Evaluation clamps x into
// [eps, 1-eps]^n with eps = 1e-9; clamp events are counted as run metadata.
class MeanFieldKLObjective final : public Objective {
 public:
  static constexpr double kEps = 1e-9;

  explicit MeanFieldKLObjective(std::shared_ptr<const Objective> multilinear);

  Eval eval(const Vec& x) const override;
  double value(const Vec& x) const override;

  long clamp_events() const { return clamp_events_.load(std::memory_order_relaxed); }
  const Objective& inner() const { return *inner_; }

 private:
  Vec clamped(const Vec& x) const;
  std::shared_ptr<const Objective> inner_;
  mutable std::atomic<long> clamp_events_{0};
};

}  // namespace drsm
