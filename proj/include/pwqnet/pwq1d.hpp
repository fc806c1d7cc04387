#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pwqnet/tolerances.hpp"

namespace pwqnet {

// One quadratic segment q*x^2 + l*x + c.
struct QuadSegment {
    double q = 0.0;
    double l = 0.0;
    double c = 0.0;

    double value(double x) const { return (q * x + l) * x + c; }
    double slope(double x) const { return 2.0 * q * x + l; }
};

// One affine piece alpha*x + beta.
struct AffinePiece {
    double alpha = 0.0;
    double beta = 0.0;

    double value(double x) const { return alpha * x + beta; }
};

// Scalar piecewise-quadratic function on a bounded interval. Segment i is
// active on [breakpoints[i], breakpoints[i+1]]; the breakpoint list is
// strictly increasing with size() == segments.size() + 1.
struct Pwq1D {
    std::vector<QuadSegment> segments;
    std::vector<double> breakpoints;

    std::size_t piece_count() const { return segments.size(); }
    double lower(std::size_t i) const { return breakpoints[i]; }
    double upper(std::size_t i) const { return breakpoints[i + 1]; }
    double domain_lo() const { return breakpoints.front(); }
    double domain_hi() const { return breakpoints.back(); }
};

// Scalar piecewise-affine function on the same kind of breakpoint grid.
struct Pwa1D {
    std::vector<AffinePiece> pieces;
    std::vector<double> breakpoints;

    std::size_t piece_count() const { return pieces.size(); }
    double lower(std::size_t i) const { return breakpoints[i]; }
    double upper(std::size_t i) const { return breakpoints[i + 1]; }

    static Pwa1D zero_like(const Pwq1D& f) {
        Pwa1D h;
        h.pieces.assign(f.piece_count(), AffinePiece{});
        h.breakpoints = f.breakpoints;
        return h;
    }
};

enum class ViolationKind {
    structure,           // malformed data (ordering, sizes, non-finite entries)
    negative_curvature,  // q_i < 0
    continuity,          // segment values disagree at an interior breakpoint
    slope_monotonicity,  // left slope exceeds right slope at a breakpoint
};

struct Violation {
    ViolationKind kind;
    std::size_t index;  // breakpoint or segment index the violation refers to
    double magnitude;   // how far outside tolerance
    std::string detail;
};

struct ValidationResult {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool has(ViolationKind kind) const {
        for (const auto& v : violations)
            if (v.kind == kind) return true;
        return false;
    }
};

// Checks structure, q_i >= 0, continuity and slope monotonicity at interior
// breakpoints. All violations are reported, not just the first.
ValidationResult validate_pwq(const Pwq1D& f, const ToleranceConfig& tol = {});

// Continuity and convexity (alpha nondecreasing) of a PWA function.
ValidationResult validate_pwa(const Pwa1D& h, const ToleranceConfig& tol = {});

// Evaluates f at x. Dispatch is half-open [lo_i, hi_i) with the last interval
// closed. Throws std::domain_error outside [x_lo, x_hi].
double eval_pwq(const Pwq1D& f, double x);

// Index of the segment owning x under the same dispatch rule.
std::size_t find_segment(const std::vector<double>& breakpoints, double x);

// Evaluates h at x by interval dispatch. Throws std::domain_error outside the domain.
double eval_pwa(const Pwa1D& h, double x);

// max_i { alpha_i * x + beta_i }; defined for every real x. For a valid
// (continuous, convex) h this equals eval_pwa on the domain.
double eval_pwa_as_max(const Pwa1D& h, double x);

// Segment-wise sum (q_i, l_i + alpha_i, c_i + beta_i). Requires identical
// breakpoint lists; throws std::invalid_argument on mismatch.
Pwq1D add_pwa(const Pwq1D& f, const Pwa1D& h);

// Draws a random convex PWQ that passes validate_pwq by construction:
// breakpoints are strictly increasing, q_i >= 0, each new segment's slope at
// the shared breakpoint is the previous slope plus a nonnegative increment,
// and the constant term is chosen to make the segments match there.
// Deterministic for a fixed seed.
Pwq1D generate_random_convex_pwq(std::uint64_t seed, std::size_t s,
                                 double domain_lo, double domain_hi,
                                 double coefficient_scale);

}  // namespace pwqnet
