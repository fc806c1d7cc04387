#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "pwqnet/pwq1d.hpp"
#include "pwqnet/qp.hpp"
#include "pwqnet/tolerances.hpp"

namespace pwqnet {

// The constraint families tying a candidate lift h to f. "left" conditions
// compare segment j < i against the tangent of the lifted segment i at its
// lower end; "right" conditions mirror this at the upper end.
enum class ConditionFamily {
    continuity_12a,
    convexity_12b,
    left_13a,
    left_13b,
    right_13a,
    right_13b,
};

struct ConditionViolation {
    ConditionFamily family;
    std::size_t i = 0;   // segment the condition is anchored at (0-based)
    std::size_t j = 0;   // competing segment; equals i for the 12-family
    double slack = 0.0;  // lhs - rhs, positive means violated
};

struct LiftConditionsReport {
    std::vector<ConditionViolation> violations;
    bool feasible() const { return violations.empty(); }
};

// Evaluates all conditions a lift must satisfy so that f + h equals the
// max over lifted segments. Each comparison allows slack eps_v (scaled).
// Throws std::invalid_argument on breakpoint mismatch.
LiftConditionsReport check_lift_conditions(const Pwq1D& f, const Pwa1D& h,
                                           const ToleranceConfig& tol = {});

// Direct construction of a feasible lift: sweep segments left to right and,
// whenever a competing segment pokes above the anchored tangent bounds, tilt
// the affine pieces on the offending side just enough to restore them. The
// violation tests compare exactly (zero slack); corrections anchored at a
// shared breakpoint have zero denominator and are skipped, since the update
// could not change that comparison anyway. Requires validate_pwq(f).ok().
Pwa1D algorithm1(const Pwq1D& f, const ToleranceConfig& tol = {});

// Objective for the lift optimization, over variables
// (alpha_1, beta_1, ..., alpha_s, beta_s).
struct CostSpec {
    enum class Kind { sum_squares, quadratic };
    Kind kind = Kind::sum_squares;
    Eigen::MatrixXd H;  // 2s x 2s, used when kind == quadratic
    Eigen::VectorXd g;  // 2s

    static CostSpec sum_squares() { return CostSpec{}; }
};

double evaluate_cost(const CostSpec& cost, const Pwa1D& h);

struct LiftQpResult {
    Pwa1D lift;
    QpSolution qp;  // diagnostics of the reduced solve
    double cost_value = 0.0;
};

// Minimizes the cost over all lifts satisfying the conditions. Continuity
// equalities are eliminated (beta_2..beta_s expressed from beta_1 and the
// alphas), leaving s+1 free variables and inequality rows only. The solve is
// warm-started from algorithm1's feasible point.
LiftQpResult solve_lift_qp(const Pwq1D& f, const CostSpec& cost, const ToleranceConfig& tol = {});

// Constraint rows of the lift problem in the full interleaved variable order;
// exposed for tests and for the reduced transcription.
struct LiftConstraintMatrices {
    Eigen::MatrixXd A;       // m x 2s
    Eigen::VectorXd b;       // m
    Eigen::MatrixXd reduce;  // 2s x (s+1): z = reduce * (alpha_1..alpha_s, beta_1)
};
LiftConstraintMatrices build_lift_constraints(const Pwq1D& f);

}  // namespace pwqnet
