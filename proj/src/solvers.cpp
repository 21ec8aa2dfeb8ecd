#include "drsm/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <fstream>
#include <stdexcept>

#include "drsm/rng.hpp"

#include <nlohmann/json.hpp>

namespace drsm {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Vec zeros(int n) { return Vec(static_cast<size_t>(n), 0.0); }

void check_pair(const Objective& obj, const Constraint& region) {
  if (obj.dim() != region.dim())
    throw std::invalid_argument("solver: objective and constraint dimensions differ");
  if (!leq(region.upper_bound(), obj.domain().upper(), kDomainSlack))
    throw std::invalid_argument(
        "solver: feasible region is not contained in the objective domain");
}

// Golden-section search for max_{gamma in [0,1]} f(x + gamma d).
double golden_section_step(const Objective& obj, const Vec& x, const Vec& d, int iters) {
  const double invphi = 0.6180339887498949;
  double lo = 0.0, hi = 1.0;
  double m1 = hi - invphi * (hi - lo);
  double m2 = lo + invphi * (hi - lo);
  double f1 = obj.value(x + m1 * d);
  double f2 = obj.value(x + m2 * d);
  for (int it = 0; it < iters; ++it) {
    if (f1 < f2) {
      lo = m1;
      m1 = m2;
      f1 = f2;
      m2 = lo + invphi * (hi - lo);
      f2 = obj.value(x + m2 * d);
    } else {
      hi = m2;
      m2 = m1;
      f2 = f1;
      m1 = hi - invphi * (hi - lo);
      f1 = obj.value(x + m1 * d);
    }
  }
  double mid = 0.5 * (lo + hi);
  // Endpoints can dominate an interior probe on non-concave segments.
  double fmid = obj.value(x + mid * d);
  double f_hi = obj.value(x + 1.0 * d);
  double f_lo = obj.value(x);
  if (f_hi >= fmid && f_hi >= f_lo) return 1.0;
  if (f_lo >= fmid && f_lo >= f_hi) return 0.0;
  return mid;
}

struct BestTracker {
  double value = -std::numeric_limits<double>::infinity();
  Vec point;
  void consider(double v, const Vec& x) {
    if (v > value) {
      value = v;
      point = x;
    }
  }
};

}  // namespace

double non_stationarity(const Objective& obj, const Constraint& region, const Vec& x) {
  check_pair(obj, region);
  Vec g = obj.grad(x);
  Vec v = region.lmo(g);
  return dot(v, g) - dot(x, g);
}

double diameter_bound(const Constraint& region) { return norm2(region.upper_bound()); }

double lipschitz_estimate(const Objective& obj, const SolverConfig& config) {
  if (config.lipschitz) return *config.lipschitz;
  if (obj.flags().lipschitz) return *obj.flags().lipschitz;
  CounterRng rng(config.seed ^ 0x4c697073ULL);
  const Vec& ub = obj.domain().upper();
  double best = 0;
  for (int s = 0; s < 200; ++s) {
    Vec a(ub.size()), b(ub.size());
    for (size_t i = 0; i < ub.size(); ++i) {
      a[i] = rng.uniform(0, ub[i]);
      b[i] = rng.uniform(0, ub[i]);
    }
    double dist = norm2(a - b);
    if (dist < 1e-9) continue;
    best = std::max(best, norm2(obj.grad(a) - obj.grad(b)) / dist);
  }
  return 2.0 * best;  // safety factor; sampling only lower-bounds L
}

namespace {

// Shared skeleton of Submodular FW and Shrunken FW. When shrink is set every
// LMO is capped at u-bar - x^k; the loop runs while t < 1 with the final step
// clamped so the step sizes sum to exactly 1.
Trajectory budgeted_fw(const Objective& obj, const Constraint& region,
                       const SolverConfig& config, bool shrink) {
  check_pair(obj, region);
  if (config.iterations < 1) throw std::invalid_argument("solver: K must be >= 1");
  if (!(config.alpha > 0 && config.alpha <= 1.0))
    throw std::invalid_argument("solver: alpha must lie in (0,1]");
  if (config.delta < 0) throw std::invalid_argument("solver: delta must be >= 0");
  if (!config.force) {
    if (!obj.flags().dr_submodular)
      throw std::invalid_argument(
          "solver: objective not flagged DR-submodular (use force to override)");
    if (!shrink && !obj.flags().monotone)
      throw std::invalid_argument(
          "solver: objective not flagged monotone (use force to override)");
  }
  if (config.step_rule != StepRule::kDefault && config.step_rule != StepRule::kConstant)
    throw std::invalid_argument("solver: this variant uses the constant 1/K step rule");

  const auto t0 = Clock::now();
  const double gamma = 1.0 / config.iterations;
  const bool degrade = config.alpha < 1.0 || config.delta > 0.0;
  const double ld2 = degrade ? lipschitz_estimate(obj, config) *
                                   diameter_bound(region) * diameter_bound(region)
                             : 0.0;
  Vec ubar = region.upper_bound();

  Trajectory traj;
  BestTracker best;
  Vec x = zeros(obj.dim());
  double t = 0.0;
  int k = 0;
  while (t < 1.0) {
    double gamma_k = std::min(gamma, 1.0 - t);
    Eval e = obj.eval(x);
    Vec cap;
    const Vec* cap_ptr = nullptr;
    if (shrink) {
      cap = ubar - x;
      for (double& ci : cap) ci = std::max(ci, 0.0);
      cap_ptr = &cap;
    }
    Vec v = region.lmo(e.grad, cap_ptr);
    double gap = dot(v, e.grad) - dot(x, e.grad);
    if (degrade) {
      // Worst oracle still admitted by the error model: scale v down until
      // <v, grad> = alpha * max - delta * gamma_k * L D^2 / 2.
      double exact = dot(v, e.grad);
      double target = config.alpha * exact - 0.5 * config.delta * gamma_k * ld2;
      if (exact > 1e-300) {
        double scale = std::clamp(target / exact, 0.0, 1.0);
        for (double& vi : v) vi *= scale;
      }
    }
    traj.records.push_back({k, t, e.value, gap, gamma_k, ms_since(t0)});
    traj.points.push_back(x);
    best.consider(e.value, x);
    for (size_t i = 0; i < x.size(); ++i) x[i] += gamma_k * v[i];
    t += gamma_k;
    ++k;
  }
  Eval e = obj.eval(x);
  Vec v = region.lmo(e.grad, nullptr);
  traj.records.push_back({k, t, e.value, dot(v, e.grad) - dot(x, e.grad), 0.0, ms_since(t0)});
  traj.points.push_back(x);
  best.consider(e.value, x);
  traj.final_point = x;
  traj.best_point = best.point;
  traj.best_value = best.value;
  traj.wall_ms = ms_since(t0);
  return traj;
}

}  // namespace

Trajectory submodular_fw(const Objective& obj, const Constraint& region,
                         const SolverConfig& config) {
  return budgeted_fw(obj, region, config, /*shrink=*/false);
}

Trajectory shrunken_fw(const Objective& obj, const Constraint& region,
                       const SolverConfig& config) {
  return budgeted_fw(obj, region, config, /*shrink=*/true);
}

Trajectory nonconvex_fw(const Objective& obj, const Constraint& region,
                        const SolverConfig& config, const Vec& x0) {
  check_pair(obj, region);
  if (config.iterations < 1) throw std::invalid_argument("solver: K must be >= 1");
  if (!region.member(x0, 1e-8))
    throw std::invalid_argument("nonconvex_fw: x0 is infeasible");
  const auto t0 = Clock::now();
  StepRule rule = config.step_rule == StepRule::kDefault ? StepRule::kLineSearch
                                                         : config.step_rule;
  double gap_c = 0.0;
  if (rule == StepRule::kLipschitz) {
    double d = diameter_bound(region);
    gap_c = config.adaptive_c.value_or(lipschitz_estimate(obj, config) * d * d);
    if (gap_c <= 0) gap_c = 1.0;
  }

  Trajectory traj;
  BestTracker best;
  Vec x = x0;
  double min_gap = std::numeric_limits<double>::infinity();
  Vec min_gap_point = x0;
  for (int k = 0; k <= config.iterations; ++k) {
    Eval e = obj.eval(x);
    Vec v = region.lmo(e.grad);
    Vec d = v - x;
    double gap = dot(d, e.grad);
    best.consider(e.value, x);
    if (gap < min_gap) {
      min_gap = gap;
      min_gap_point = x;
    }
    if (gap <= config.eps || k == config.iterations) {
      traj.records.push_back({k, static_cast<double>(k), e.value, gap, 0.0, ms_since(t0)});
      traj.points.push_back(x);
      break;
    }
    double gamma;
    switch (rule) {
      case StepRule::kLineSearch:
        gamma = golden_section_step(obj, x, d, 30);
        break;
      case StepRule::kLipschitz:
        gamma = std::min(gap / gap_c, 1.0);
        break;
      case StepRule::kOblivious:
        gamma = 2.0 / (k + 2);
        break;
      default:
        throw std::invalid_argument("nonconvex_fw: unsupported step rule");
    }
    traj.records.push_back({k, static_cast<double>(k), e.value, gap, gamma, ms_since(t0)});
    traj.points.push_back(x);
    for (size_t i = 0; i < x.size(); ++i) x[i] += gamma * d[i];
  }
  // Modified output: the iterate with the minimum recorded non-stationarity.
  traj.final_point = min_gap_point;
  traj.best_point = best.point;
  traj.best_value = best.value;
  traj.wall_ms = ms_since(t0);
  return traj;
}

Trajectory pga(const Objective& obj, const Constraint& region,
               const SolverConfig& config, const Vec& x0) {
  check_pair(obj, region);
  if (config.iterations < 1) throw std::invalid_argument("solver: K must be >= 1");
  if (!region.supports_projection())
    throw UnsupportedOperation("pga: constraint does not support projection");
  if (!region.member(x0, 1e-8)) throw std::invalid_argument("pga: x0 is infeasible");
  const auto t0 = Clock::now();
  // Default is the diminishing rule C/sqrt(k+1) with C = 100: the 1/L rule
  // needs a Lipschitz constant that is rarely available.
  StepRule rule = config.step_rule == StepRule::kDefault ? StepRule::kAdaptive
                                                         : config.step_rule;
  double inv_l = 0.0;
  if (rule == StepRule::kLipschitz) {
    double l = lipschitz_estimate(obj, config);
    inv_l = l > 0 ? 1.0 / l : 1.0;
  }
  double adaptive_c = config.adaptive_c.value_or(100.0);

  Trajectory traj;
  BestTracker best;
  Vec x = x0;
  for (int k = 0; k < config.iterations; ++k) {
    Eval e = obj.eval(x);
    double gamma;
    switch (rule) {
      case StepRule::kLipschitz:
        gamma = inv_l;
        break;
      case StepRule::kAdaptive:
        gamma = adaptive_c / std::sqrt(k + 1.0);
        break;
      default:
        throw std::invalid_argument("pga: unsupported step rule");
    }
    traj.records.push_back({k, static_cast<double>(k), e.value, 0.0, gamma, ms_since(t0)});
    traj.points.push_back(x);
    best.consider(e.value, x);
    Vec y = x + gamma * e.grad;
    x = region.project(y);
  }
  double fv = obj.value(x);
  traj.records.push_back({config.iterations, static_cast<double>(config.iterations), fv,
                          0.0, 0.0, ms_since(t0)});
  traj.points.push_back(x);
  best.consider(fv, x);
  traj.final_point = best.point;  // output is the best-value iterate
  traj.best_point = best.point;
  traj.best_value = best.value;
  traj.wall_ms = ms_since(t0);
  return traj;
}

Trajectory two_phase(const Objective& obj, const Constraint& region,
                     const SolverConfig& config, const Vec& x0, const Vec& z0) {
  check_pair(obj, region);
  const auto t0 = Clock::now();
  SolverConfig phase1 = config;
  phase1.iterations = config.iterations_phase1 > 0 ? config.iterations_phase1
                                                   : config.iterations;
  phase1.eps = config.eps1 > 0 ? config.eps1 : config.eps;
  SolverConfig phase2 = config;
  phase2.iterations = config.iterations_phase2 > 0 ? config.iterations_phase2
                                                   : config.iterations;
  phase2.eps = config.eps2 > 0 ? config.eps2 : config.eps;

  Vec start1 = x0.empty() ? zeros(obj.dim()) : x0;
  Trajectory t1 = nonconvex_fw(obj, region, phase1, start1);
  Vec x = t1.final_point;

  Vec cap = region.upper_bound() - x;
  for (double& c : cap) c = std::max(c, 0.0);
  CappedConstraint q(region, cap);
  Vec start2 = z0.empty() ? zeros(obj.dim()) : z0;
  if (!q.member(start2, 1e-8))
    throw std::invalid_argument("two_phase: z0 is infeasible in the shrunken region");
  Trajectory t2 = nonconvex_fw(obj, q, phase2, start2);
  Vec z = t2.final_point;

  TwoPhaseInfo info;
  info.x = x;
  info.z = z;
  info.fx = obj.value(x);
  info.fz = obj.value(z);
  info.gap_x = non_stationarity(obj, region, x);
  info.gap_z = non_stationarity(obj, q, z);

  Trajectory traj;
  traj.records = t1.records;
  traj.points = t1.points;
  int offset = static_cast<int>(traj.records.size());
  for (size_t i = 0; i < t2.records.size(); ++i) {
    IterationRecord r = t2.records[i];
    r.iter += offset;
    r.t_cum += offset;
    traj.records.push_back(r);
    traj.points.push_back(t2.points[i]);
  }
  if (info.fx >= info.fz) {
    traj.final_point = x;
    traj.best_value = info.fx;
  } else {
    traj.final_point = z;
    traj.best_value = info.fz;
  }
  traj.best_point = traj.final_point;
  traj.two_phase = std::move(info);
  traj.wall_ms = ms_since(t0);
  return traj;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          bool include_timings) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "iter,t_cum,f,gap,step,elapsed_ms\n";
  out.precision(17);
  for (const IterationRecord& r : traj.records) {
    out << r.iter << ',' << r.t_cum << ',' << r.value << ',' << r.gap << ',' << r.step
        << ',' << (include_timings ? r.elapsed_ms : 0.0) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string summary_json(const Trajectory& traj, const std::string& solver,
                         uint64_t seed) {
  nlohmann::json j;
  j["solver"] = solver;
  j["seed"] = seed;
  j["best_value"] = traj.best_value;
  j["best_point"] = traj.best_point;
  j["iterations"] = traj.records.empty() ? 0 : traj.records.back().iter;
  j["wall_ms"] = traj.wall_ms;
  return j.dump(2);
}

}  // namespace drsm
