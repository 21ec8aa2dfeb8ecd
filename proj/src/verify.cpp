#include "drsm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "drsm/rng.hpp"
#include "drsm/solvers.hpp"

#include <nlohmann/json.hpp>

namespace drsm {

namespace {

constexpr size_t kMaxStoredViolations = 16;

// Fold one sampled margin into the report.
void record(CheckReport& rep, double margin, std::vector<Vec> witness, double tol) {
  rep.worst_margin = std::min(rep.worst_margin, margin);
  if (margin < -tol) {
    rep.pass = false;
    if (rep.violations.size() < kMaxStoredViolations)
      rep.violations.push_back({std::move(witness), margin});
  }
}

CheckReport make_report(const std::string& property, int samples, double tol) {
  CheckReport rep;
  rep.property = property;
  rep.samples = samples;
  rep.tol = tol;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  return rep;
}

// Uniform point in the box, optionally kept away from the faces.
Vec sample_point(const Box& box, CounterRng& rng, double interior_margin = 0.0) {
  const Vec& ub = box.upper();
  Vec x(ub.size());
  for (size_t i = 0; i < ub.size(); ++i) {
    double m = std::min(interior_margin, 0.4 * ub[i]);
    x[i] = rng.uniform(m, ub[i] - m);
  }
  return x;
}

// a <= b pair inside the box.
void sample_ordered_pair(const Box& box, CounterRng& rng, Vec& a, Vec& b) {
  const Vec& ub = box.upper();
  a.resize(ub.size());
  b.resize(ub.size());
  for (size_t i = 0; i < ub.size(); ++i) {
    b[i] = rng.uniform(0, ub[i]);
    a[i] = rng.uniform(0, b[i]);
  }
}

}  // namespace

std::string CheckReport::to_json() const {
  nlohmann::json j;
  j["property"] = property;
  j["samples"] = samples;
  j["tol"] = tol;
  j["pass"] = pass;
  j["worst_margin"] = worst_margin;
  j["violations"] = nlohmann::json::array();
  for (const Violation& v : violations) {
    nlohmann::json jv;
    jv["margin"] = v.margin;
    jv["witness"] = v.witness;
    j["violations"].push_back(jv);
  }
  return j.dump(2);
}

Vec fd_gradient(const Objective& obj, const Vec& x, double h) {
  Vec g(x.size());
  Vec probe = x;
  for (size_t i = 0; i < x.size(); ++i) {
    double xi = x[i];
    probe[i] = xi + h;
    double fp = obj.value(probe);
    probe[i] = xi - h;
    double fm = obj.value(probe);
    probe[i] = xi;
    g[i] = (fp - fm) / (2 * h);
  }
  return g;
}

double fd_cross_partial(const Objective& obj, const Vec& x, int i, int j, double h) {
  size_t si = static_cast<size_t>(i), sj = static_cast<size_t>(j);
  if (i == j) {
    Vec p = x;
    double f0 = obj.value(p);
    p[si] = x[si] + h;
    double fp = obj.value(p);
    p[si] = x[si] - h;
    double fm = obj.value(p);
    return (fp - 2 * f0 + fm) / (h * h);
  }
  Vec p = x;
  p[si] = x[si] + h;
  p[sj] = x[sj] + h;
  double fpp = obj.value(p);
  p[sj] = x[sj] - h;
  double fpm = obj.value(p);
  p[si] = x[si] - h;
  double fmm = obj.value(p);
  p[sj] = x[sj] + h;
  double fmp = obj.value(p);
  return (fpp - fpm - fmp + fmm) / (4 * h * h);
}

CheckReport check_weak_dr(const Objective& obj, int samples, double tol, uint64_t seed) {
  CheckReport rep = make_report("weak_dr", samples, tol);
  CounterRng rng(seed);
  const Box& box = obj.domain();
  const Vec& ub = box.upper();
  for (int s = 0; s < samples; ++s) {
    Vec a, b;
    sample_ordered_pair(box, rng, a, b);
    int i = rng.next_int(0, obj.dim() - 1);
    size_t si = static_cast<size_t>(i);
    a[si] = b[si];  // shared coordinate
    double room = ub[si] - b[si];
    if (room <= 0) continue;
    double k = rng.uniform(0, room);
    double lhs = obj.value(with_coord(a, i, a[si] + k)) - obj.value(a);
    double rhs = obj.value(with_coord(b, i, b[si] + k)) - obj.value(b);
    record(rep, lhs - rhs, {a, b, {k, static_cast<double>(i)}}, tol);
  }
  return rep;
}

CheckReport check_dr(const Objective& obj, int samples, double tol, uint64_t seed) {
  CheckReport rep = make_report("dr", samples, tol);
  CounterRng rng(seed);
  const Box& box = obj.domain();
  const Vec& ub = box.upper();
  for (int s = 0; s < samples; ++s) {
    Vec a, b;
    sample_ordered_pair(box, rng, a, b);
    int i = rng.next_int(0, obj.dim() - 1);
    size_t si = static_cast<size_t>(i);
    double room = ub[si] - b[si];
    if (room > 0) {
      double k = rng.uniform(0, room);
      double lhs = obj.value(with_coord(a, i, a[si] + k)) - obj.value(a);
      double rhs = obj.value(with_coord(b, i, b[si] + k)) - obj.value(b);
      record(rep, lhs - rhs, {a, b, {k, static_cast<double>(i)}}, tol);
    }
    // coordinate-wise concavity on a fresh point
    Vec x = sample_point(box, rng);
    int j = rng.next_int(0, obj.dim() - 1);
    size_t sjc = static_cast<size_t>(j);
    double room2 = ub[sjc] - x[sjc];
    if (room2 <= 0) continue;
    double k2 = rng.uniform(0, room2);
    double l2 = rng.uniform(0, room2 - k2);
    double lhs = obj.value(with_coord(x, j, x[sjc] + k2)) - obj.value(x);
    double rhs = obj.value(with_coord(x, j, x[sjc] + k2 + l2)) -
                 obj.value(with_coord(x, j, x[sjc] + l2));
    record(rep, lhs - rhs, {x, {k2, l2, static_cast<double>(j)}}, tol);
  }
  return rep;
}

CheckReport check_antitone(const Objective& obj, int samples, double tol, bool weak,
                           uint64_t seed) {
  CheckReport rep = make_report(weak ? "weak_antitone" : "antitone", samples, tol);
  CounterRng rng(seed);
  for (int s = 0; s < samples; ++s) {
    Vec a, b;
    sample_ordered_pair(obj.domain(), rng, a, b);
    if (weak) {
      // force a shared coordinate subset so the weak condition has content
      int i = rng.next_int(0, obj.dim() - 1);
      a[static_cast<size_t>(i)] = b[static_cast<size_t>(i)];
    }
    Vec ga = obj.grad(a);
    Vec gb = obj.grad(b);
    for (size_t i = 0; i < ga.size(); ++i) {
      if (weak && a[i] != b[i]) continue;
      record(rep, ga[i] - gb[i], {a, b, {static_cast<double>(i)}}, tol);
    }
  }
  return rep;
}

CheckReport check_cross_partials(const Objective& obj, int samples, double tol,
                                 bool offdiag_only, uint64_t seed) {
  CheckReport rep = make_report(offdiag_only ? "cross_partials_offdiag"
                                             : "cross_partials_all",
                                samples, tol);
  CounterRng rng(seed);
  const int n = obj.dim();
  for (int s = 0; s < samples; ++s) {
    Vec x = sample_point(obj.domain(), rng, 4 * kFdStep2);
    int i = rng.next_int(0, n - 1);
    int j = rng.next_int(0, n - 1);
    if (offdiag_only && i == j) j = (j + 1) % n;
    if (offdiag_only && i == j) continue;  // n == 1
    double hij = fd_cross_partial(obj, x, i, j);
    record(rep, -hij, {x, {static_cast<double>(i), static_cast<double>(j)}}, tol);
  }
  return rep;
}

CheckReport check_directional_concavity(const Objective& obj, int samples, double tol,
                                        uint64_t seed) {
  CheckReport rep = make_report("directional_concavity", samples, tol);
  CounterRng rng(seed);
  const Vec& ub = obj.domain().upper();
  for (int s = 0; s < samples; ++s) {
    bool nonneg = rng.next_double() < 0.5;
    Vec x(ub.size()), v(ub.size());
    for (size_t i = 0; i < ub.size(); ++i) {
      x[i] = rng.uniform(0, ub[i]);
      v[i] = nonneg ? rng.uniform(0, ub[i] - x[i]) : -rng.uniform(0, x[i]);
    }
    double lambda = rng.uniform(0.05, 0.95);
    double lhs = obj.value(x + lambda * v);
    double rhs = lambda * obj.value(x + v) + (1 - lambda) * obj.value(x);
    record(rep, lhs - rhs, {x, v, {lambda}}, tol);
  }
  return rep;
}

CheckReport check_join_meet_bound(const Objective& obj, int samples, double tol,
                                  uint64_t seed) {
  CheckReport rep = make_report("join_meet_bound", samples, tol);
  CounterRng rng(seed);
  double mu = obj.flags().strong_dr.value_or(0.0);
  for (int s = 0; s < samples; ++s) {
    Vec x = sample_point(obj.domain(), rng);
    Vec y = sample_point(obj.domain(), rng);
    Eval ex = obj.eval(x);
    double lhs = dot(y - x, ex.grad);
    double d = norm2(x - y);
    double rhs = obj.value(join(x, y)) + obj.value(meet(x, y)) - 2 * ex.value +
                 0.5 * mu * d * d;
    record(rep, lhs - rhs, {x, y}, tol);
  }
  return rep;
}

CheckReport check_local_global(const Objective& obj, const Constraint& region,
                               const Vec& x, const Vec* z, double opt_value,
                               double tol) {
  CheckReport rep = make_report(z ? "local_global_nonmonotone" : "local_global_monotone",
                                1, tol);
  double gap_x = non_stationarity(obj, region, x);
  if (!z) {
    double margin = obj.value(x) - 0.5 * (opt_value - gap_x);
    record(rep, margin, {x}, tol);
    return rep;
  }
  Vec cap = region.upper_bound() - x;
  for (double& c : cap) c = std::max(c, 0.0);
  CappedConstraint q(region, cap);
  double gap_z = non_stationarity(obj, q, *z);
  double lhs = std::max(obj.value(x), obj.value(*z));
  double margin = lhs - 0.25 * (opt_value - gap_x - gap_z);
  record(rep, margin, {x, *z}, tol);
  return rep;
}

double brute_force_multilinear(int n, const SetFunction& f, const Vec& x) {
  if (n > 20) throw std::invalid_argument("brute_force_multilinear: n > 20");
  if (static_cast<int>(x.size()) != n)
    throw std::invalid_argument("brute_force_multilinear: dimension mismatch");
  double total = 0;
  for (uint64_t mask = 0; mask < (1ull << n); ++mask) {
    double p = 1.0;
    for (int i = 0; i < n; ++i) p *= (mask >> i & 1) ? x[static_cast<size_t>(i)] : 1.0 - x[static_cast<size_t>(i)];
    if (p != 0.0) total += p * f(mask);
  }
  return total;
}

Vec brute_force_multilinear_grad(int n, const SetFunction& f, const Vec& x) {
  Vec g(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double hi = brute_force_multilinear(n, f, with_coord(x, i, 1.0));
    double lo = brute_force_multilinear(n, f, with_coord(x, i, 0.0));
    g[static_cast<size_t>(i)] = hi - lo;
  }
  return g;
}

GridMax brute_force_grid_max(const Objective& obj, const Constraint& region,
                             double resolution) {
  const int n = obj.dim();
  if (n > 4) throw std::invalid_argument("brute_force_grid_max: n > 4");
  if (!(resolution > 0)) throw std::invalid_argument("brute_force_grid_max: resolution <= 0");
  Vec ub = region.upper_bound();
  std::vector<int> steps(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    steps[static_cast<size_t>(i)] = static_cast<int>(std::floor(ub[static_cast<size_t>(i)] / resolution + 1e-12));
  GridMax best;
  best.value = -std::numeric_limits<double>::infinity();
  Vec x(static_cast<size_t>(n), 0.0);
  std::vector<int> idx(static_cast<size_t>(n), 0);
  for (;;) {
    for (int i = 0; i < n; ++i)
      x[static_cast<size_t>(i)] = std::min(idx[static_cast<size_t>(i)] * resolution, ub[static_cast<size_t>(i)]);
    if (region.member(x, kEqTol)) {
      double v = obj.value(x);
      if (v > best.value) {
        best.value = v;
        best.x = x;
      }
    }
    int c = 0;
    while (c < n) {
      if (++idx[static_cast<size_t>(c)] <= steps[static_cast<size_t>(c)]) break;
      idx[static_cast<size_t>(c)] = 0;
      ++c;
    }
    if (c == n) break;
  }
  return best;
}

}  // namespace drsm
