#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "drsm/core.hpp"
#include "drsm/linalg.hpp"

namespace drsm {

enum class MapMonotonicity { kNone, kNondecreasing, kNonincreasing };
enum class MapCurvature { kNone, kDrSubmodular, kIrSupermodular };

struct MapFlags {
  MapMonotonicity monotone = MapMonotonicity::kNone;
  MapCurvature curvature = MapCurvature::kNone;
  bool separable = false;
};

// One differentiable scalar map, used coordinate-wise for separable h.
struct ScalarMap {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
};

// General differentiable map h: R^m -> R^n with user-supplied Jacobian
// (n x m, jacobian(i,j) = dh^i/dx_j).
struct VectorMap {
  int in_dim = 0, out_dim = 0;
  std::function<Vec(const Vec&)> value;
  std::function<Matrix(const Vec&)> jacobian;
};

// g = f(h(x)) with flags derived from the composition rules:
//  - f DR-submodular and nondecreasing, h monotone DR-submodular
//      => g DR-submodular (monotone when h is nondecreasing);
//  - f submodular, h monotone and separable => g submodular.
// When no rule applies all structure flags are cleared. h must map the outer
// domain into f's domain (checked per evaluation, small excursions clamped).
std::shared_ptr<Objective> compose(std::shared_ptr<const Objective> f,
                                   std::vector<ScalarMap> h, MapFlags h_flags,
                                   Box outer_domain);
std::shared_ptr<Objective> compose(std::shared_ptr<const Objective> f, VectorMap h,
                                   MapFlags h_flags, Box outer_domain);

// Common separable building blocks.
ScalarMap identity_map();
ScalarMap activation_map(double p);   // 1 - (1-p)^t, nondecreasing DR
ScalarMap decay_share_map(double q);  // 1 - q^t, nondecreasing, q in (0,1)

}  // namespace drsm
