#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drsm/constraints.hpp"
#include "drsm/core.hpp"
#include "drsm/multilinear.hpp"

namespace drsm {

// Sampled falsification checks of the structural characterizations plus the
// brute-force oracles used to pin expected values in tests. Checks are
// deterministic given a seed and report the worst margin even when passing.

struct Violation {
  std::vector<Vec> witness;
  double margin = 0.0;  // negative means violated
};

struct CheckReport {
  std::string property;
  int samples = 0;
  double tol = 0.0;
  double worst_margin = 0.0;  // min margin seen across samples
  std::vector<Violation> violations;
  bool pass = true;

  std::string to_json() const;
};

inline constexpr int kDefaultSamples = 1000;
inline constexpr double kDefaultCheckTol = 1e-7;
inline constexpr double kFdStep = 1e-5;        // first-order differences
inline constexpr double kFdStep2 = 1e-4;       // second-order differences

// Central-difference gradient; x must be interior by margin h.
Vec fd_gradient(const Objective& obj, const Vec& x, double h = kFdStep);
// Central-difference second partial d^2 f / dx_i dx_j.
double fd_cross_partial(const Objective& obj, const Vec& x, int i, int j,
                        double h = kFdStep2);

// Weak DR: f(k e_i + a) - f(a) >= f(k e_i + b) - f(b) for a <= b agreeing on
// coordinate i. Equivalent to submodularity.
CheckReport check_weak_dr(const Objective& obj, int samples = kDefaultSamples,
                          double tol = kDefaultCheckTol, uint64_t seed = 7);

// Full DR: the same inequality for all a <= b, plus coordinate-wise concavity
// f(k e_i + x) - f(x) >= f((k+l) e_i + x) - f(l e_i + x).
CheckReport check_dr(const Objective& obj, int samples = kDefaultSamples,
                     double tol = kDefaultCheckTol, uint64_t seed = 7);

// Gradient antitonicity: grad f(a) >= grad f(b) for a <= b (full mode), or
// restricted to coordinates with a_i = b_i (weak mode).
CheckReport check_antitone(const Objective& obj, int samples = kDefaultSamples,
                           double tol = kDefaultCheckTol, bool weak = false,
                           uint64_t seed = 7);

// Finite-difference Hessian sign test: off-diagonal entries <= tol
// (submodularity) or all entries <= tol (DR) at random interior points.
CheckReport check_cross_partials(const Objective& obj, int samples = kDefaultSamples,
                                 double tol = kDefaultCheckTol,
                                 bool offdiag_only = false, uint64_t seed = 7);

// Concavity along random nonnegative and nonpositive directions.
CheckReport check_directional_concavity(const Objective& obj,
                                        int samples = kDefaultSamples,
                                        double tol = kDefaultCheckTol,
                                        uint64_t seed = 7);

// (y-x)^T grad f(x) >= f(x v y) + f(x ^ y) - 2 f(x) + mu/2 ||x-y||^2 at random
// pairs, with mu taken from the objective's certified strong-DR flag.
CheckReport check_join_meet_bound(const Objective& obj, int samples = kDefaultSamples,
                                  double tol = kDefaultCheckTol, uint64_t seed = 7);

// Local-global relation at given points: monotone form
// f(x) >= (opt - g_P(x)) / 2 when z is null, else the two-point form
// max{f(x), f(z)} >= (opt - g_P(x) - g_Q(z)) / 4 with Q the region shrunk by x.
CheckReport check_local_global(const Objective& obj, const Constraint& region,
                               const Vec& x, const Vec* z, double opt_value,
                               double tol = kDefaultCheckTol);

// Exact multilinear extension by 2^n enumeration (n <= 20).
double brute_force_multilinear(int n, const SetFunction& f, const Vec& x);
Vec brute_force_multilinear_grad(int n, const SetFunction& f, const Vec& x);

// Exhaustive feasible-grid maximization (n <= 4). The optimality slack is
// bounded by G * sqrt(n) * resolution with G a bound on the gradient norm.
struct GridMax {
  Vec x;
  double value = 0.0;
};
GridMax brute_force_grid_max(const Objective& obj, const Constraint& region,
                             double resolution);

}  // namespace drsm
