#include "drsm/revenue.hpp"

#include <cmath>
#include <stdexcept>

namespace drsm {

namespace {

ObjectiveFlags revenue_flags() {
  ObjectiveFlags f;
  f.submodular = true;
  return f;
}

}  // namespace

RevenueIEObjective::RevenueIEObjective(Matrix W, double q, Box domain)
    : Objective(std::move(domain), revenue_flags()), W_(std::move(W)), q_(q) {
  if (!(q_ > 0.0 && q_ < 1.0))
    throw std::invalid_argument("RevenueIEObjective: q must lie strictly in (0,1)");
  if (W_.rows != W_.cols || W_.rows != dim())
    throw std::invalid_argument("RevenueIEObjective: W must be n x n");
  for (int i = 0; i < W_.rows; ++i) {
    if (W_(i, i) != 0.0)
      throw std::invalid_argument("RevenueIEObjective: W diagonal must be zero");
    for (int j = 0; j < W_.cols; ++j)
      if (W_(i, j) < 0) throw std::invalid_argument("RevenueIEObjective: W entries must be >= 0");
  }
  log_q_ = std::log(q_);
}

double RevenueIEObjective::value(const Vec& x) const {
  Vec xc = checked(x);
  const int n = dim();
  Vec e(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) e[static_cast<size_t>(i)] = std::exp(xc[static_cast<size_t>(i)] * log_q_);
  double s = 0;
  for (int i = 0; i < n; ++i) {
    double row = 0;
    for (int j = 0; j < n; ++j) row += W_(i, j) * e[static_cast<size_t>(j)];
    s += (1.0 - e[static_cast<size_t>(i)]) * row;
  }
  return s;
}

Eval RevenueIEObjective::eval(const Vec& x) const {
  Vec xc = checked(x);
  const int n = dim();
  Vec e(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) e[static_cast<size_t>(i)] = std::exp(xc[static_cast<size_t>(i)] * log_q_);
  double s = 0;
  Vec out_row(static_cast<size_t>(n), 0.0);  // sum_j W_sj q^{x_j}
  Vec in_col(static_cast<size_t>(n), 0.0);   // sum_i W_is (1 - q^{x_i})
  for (int i = 0; i < n; ++i) {
    double oneme = 1.0 - e[static_cast<size_t>(i)];
    for (int j = 0; j < n; ++j) {
      double w = W_(i, j);
      if (w == 0.0) continue;
      out_row[static_cast<size_t>(i)] += w * e[static_cast<size_t>(j)];
      in_col[static_cast<size_t>(j)] += w * oneme;
    }
    // accumulate value after the row sum is complete
  }
  Vec g(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    s += (1.0 - e[static_cast<size_t>(i)]) * out_row[static_cast<size_t>(i)];
    g[static_cast<size_t>(i)] =
        -log_q_ * (e[static_cast<size_t>(i)] * out_row[static_cast<size_t>(i)] -
                   in_col[static_cast<size_t>(i)] * e[static_cast<size_t>(i)]);
  }
  return {s, std::move(g)};
}

}  // namespace drsm
