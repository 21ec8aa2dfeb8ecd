#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drsm/constraints.hpp"
#include "drsm/core.hpp"

namespace drsm {

enum class StepRule {
  kDefault,     // per-solver default
  kOblivious,   // 2/(k+2)
  kConstant,    // 1/K
  kLipschitz,   // 1/L for PGA, gap/C with C = L D^2 for the FW variants
  kAdaptive,    // C/sqrt(k+1)
  kLineSearch,  // golden-section over [0,1]
};

struct SolverConfig {
  int iterations = 100;        // K
  int iterations_phase1 = 0;   // K1 for two-phase; 0 means iterations
  int iterations_phase2 = 0;   // K2 for two-phase; 0 means iterations
  StepRule step_rule = StepRule::kDefault;
  double alpha = 1.0;          // multiplicative LMO error level, in (0,1]
  double delta = 0.0;          // additive LMO error level, >= 0
  double eps = 1e-6;           // stopping tolerance on the FW gap
  double eps1 = 0.0;           // phase-1 tolerance; 0 means eps
  double eps2 = 0.0;           // phase-2 tolerance; 0 means eps
  std::optional<double> adaptive_c;  // C for the adaptive / gap step rules
  std::optional<double> lipschitz;   // L override
  uint64_t seed = 0;
  bool force = false;          // run even when objective flags void the guarantee
};

struct IterationRecord {
  int iter = 0;
  double t_cum = 0.0;      // cumulative step size
  double value = 0.0;      // f(x^(k)) before the update
  double gap = 0.0;        // non-stationarity at x^(k)
  double step = 0.0;       // step size taken from x^(k)
  double elapsed_ms = 0.0; // wall time since the run started
};

struct TwoPhaseInfo {
  Vec x, z;
  double fx = 0.0, fz = 0.0;
  double gap_x = 0.0, gap_z = 0.0;
};

struct Trajectory {
  std::vector<IterationRecord> records;
  std::vector<Vec> points;  // x^(k) per record
  Vec final_point;
  Vec best_point;
  double best_value = 0.0;
  double wall_ms = 0.0;
  std::optional<TwoPhaseInfo> two_phase;
};

// g_Q(x) = max_{v in Q} <v - x, grad f(x)>; one LMO call.
double non_stationarity(const Objective& obj, const Constraint& region, const Vec& x);

// L from the config override, the objective's flag, or a sampled difference
// quotient estimate with a 2x safety factor.
double lipschitz_estimate(const Objective& obj, const SolverConfig& config);

// Diameter upper bound ||u-bar of the region||.
double diameter_bound(const Constraint& region);

// The monotone Frank-Wolfe variant: x^{k+1} = x^k + gamma_k v^k with the
// cumulative step budget sum gamma_k = 1. Requires monotone + DR flags unless
// config.force. alpha < 1 or delta > 0 degrade the LMO on purpose for
// testing the error-tolerant guarantee.
Trajectory submodular_fw(const Objective& obj, const Constraint& region,
                         const SolverConfig& config = {});

// Non-monotone variant: every LMO is capped at u-bar - x^k. Requires the DR
// flag unless config.force; uniform step 1/K.
Trajectory shrunken_fw(const Objective& obj, const Constraint& region,
                       const SolverConfig& config = {});

// Classical FW with the FW gap as non-stationarity measure; stops once the
// gap drops below eps and reports the iterate with the smallest recorded gap.
Trajectory nonconvex_fw(const Objective& obj, const Constraint& region,
                        const SolverConfig& config, const Vec& x0);

// Projected gradient ascent; returns the best-value iterate. Requires a
// constraint with projection support.
Trajectory pga(const Objective& obj, const Constraint& region,
               const SolverConfig& config, const Vec& x0);

// Phase 1 solves over P, phase 2 over Q = P intersect {y <= u-bar - x};
// returns the better of the two approximately stationary points.
Trajectory two_phase(const Objective& obj, const Constraint& region,
                     const SolverConfig& config = {}, const Vec& x0 = {},
                     const Vec& z0 = {});

// Trajectory CSV with header iter,t_cum,f,gap,step,elapsed_ms. Timings are
// zeroed by default so reruns with one seed are byte-identical; wall time
// lives in the summary JSON.
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          bool include_timings = false);
std::string summary_json(const Trajectory& traj, const std::string& solver,
                         uint64_t seed);

}  // namespace drsm
