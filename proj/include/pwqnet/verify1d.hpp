#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pwqnet/net.hpp"
#include "pwqnet/pwq1d.hpp"
#include "pwqnet/tolerances.hpp"

namespace pwqnet {

enum class Verdict { certified, sampled_pass, counterexample };

struct Witness {
    std::vector<double> x;
    double margin = 0.0;     // dominance defect at the witness (negative)
    std::size_t piece_i = 0; // segment owning the witness point
    std::size_t piece_j = 0; // competing segment
};

struct VerificationReport {
    Verdict verdict = Verdict::certified;
    std::optional<Witness> witness;
    std::size_t samples_used = 0;
    double min_margin = 0.0;  // most negative dominance margin found (0 if no pairs)
};

// Analytic dominance certificate: for every segment i and competitor j, the
// lifted difference d(x) = (phi_i + h_i) - (phi_j + h_j) is minimized exactly
// over [lo_i, hi_i] (endpoints, plus the vertex when d is convex). Certified
// iff every pair stays above -eps_v (scaled). On failure the witness is the
// midpoint of the first violating pair's violation interval, a point well
// inside the region where the max-form provably disagrees with f + h;
// min_margin still reports the globally worst defect.
VerificationReport verify_max_representation_1d(const Pwq1D& f, const Pwa1D& h,
                                                const ToleranceConfig& tol = {});

struct PipelineResult {
    VerificationReport report;
    std::string failed_stage;  // empty on success: lift | conditions | certify | network
    Pwa1D lift;
};

// End-to-end check for one function: construct the lift, check the
// conditions, certify the max representation, build the max-out net and
// sample it against direct evaluation. Throws PreconditionError when f
// itself fails validation.
PipelineResult verify_representation_pipeline(const Pwq1D& f, const ToleranceConfig& tol = {});

}  // namespace pwqnet
