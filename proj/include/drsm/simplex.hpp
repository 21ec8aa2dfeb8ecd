#pragma once

#include "drsm/core.hpp"
#include "drsm/linalg.hpp"

namespace drsm {

// Bounded-variable primal simplex for
//   max c^T x  s.t.  A x <= b,  0 <= x <= ub   (b >= 0, so x = 0 is feasible)
// with Bland's rule for both entering and leaving choices (anti-cycling,
// deterministic output). Dense tableau; intended for desk-scale m, n.
struct SimplexResult {
  Vec x;
  double objective = 0.0;
  int iterations = 0;
};

SimplexResult simplex_box_lp(const Matrix& A, const Vec& b, const Vec& ub, const Vec& c);

}  // namespace drsm
