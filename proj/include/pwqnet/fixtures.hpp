#pragma once

#include "pwqnet/pwq1d.hpp"
#include "pwqnet/verifynd.hpp"

namespace pwqnet::fixtures {

// Three-segment value function of a scalar constrained control problem:
// 11x^2+12x+6 on [-5/3,-1], 5x^2 on [-1,1], 11x^2-12x+6 on [1,5/3].
Pwq1D ovf_1d();

// Lift produced by the direct construction for ovf_1d.
Pwa1D ovf_1d_lift_direct();

// Minimum-norm lift (sum-of-squares cost) for ovf_1d.
Pwa1D ovf_1d_lift_opt();

// x^2 on [-1, 1].
Pwq1D single_segment();

// Continuous but nonconvex: slope drops from 1 to 0 at x = 0.
Pwq1D nonconvex_example();

// Six-piece 2D instance on [-10,5] x [-2,4]. The affine lift table is fixed;
// the partition is its dominance-cell decomposition and the quadratic pieces
// are ||x||^2 + (1/2) * (lift piece), which keeps the function continuous and
// convex. The partition is a reconstruction, not taken from any reference
// geometry.
PwqND ovf_2d();
PwaND ovf_2d_lift();

}  // namespace pwqnet::fixtures
