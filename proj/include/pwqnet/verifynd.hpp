#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pwqnet/pwq1d.hpp"
#include "pwqnet/tolerances.hpp"
#include "pwqnet/verify1d.hpp"

namespace pwqnet {

struct QuadPieceND {
    Eigen::MatrixXd Q;  // symmetric n x n
    Eigen::VectorXd l;
    double c = 0.0;

    double value(const Eigen::VectorXd& x) const { return x.dot(Q * x) + l.dot(x) + c; }
};

struct AffinePieceND {
    Eigen::VectorXd a;
    double d = 0.0;

    double value(const Eigen::VectorXd& x) const { return a.dot(x) + d; }
};

struct PolyRegion {
    Eigen::MatrixXd A;  // {x : Ax <= b}
    Eigen::VectorXd b;
    std::optional<Eigen::VectorXd> interior_point;
};

struct PwqND {
    std::vector<QuadPieceND> pieces;
    std::vector<PolyRegion> regions;

    Eigen::Index dim() const { return pieces.empty() ? 0 : pieces.front().l.size(); }
};

// Affine pieces over the same region list as the PwqND they accompany.
struct PwaND {
    std::vector<AffinePieceND> pieces;
};

struct SamplingConfig {
    std::size_t per_region = 2000;
    std::uint64_t seed = 0;
    std::size_t thinning = 20;  // hit-and-run steps per emitted sample
};

// Sampling-grade check of phi_i + h_i >= phi_j + h_j on region i. Points are
// drawn by hit-and-run from each region's interior point (computed as a
// Chebyshev center when not provided); for n == 2 all pairwise facet
// intersections that lie in the region are added so facets and vertices get
// covered. The verdict is sampled_pass, never certified. Throws on empty
// regions or count mismatches.
VerificationReport verify_max_representation_nd(const PwqND& f, const PwaND& h,
                                                const SamplingConfig& sampling = {},
                                                const ToleranceConfig& tol = {});

struct GammaSearchResult {
    std::optional<double> gamma;                    // smallest passing grid value
    VerificationReport report;                      // report at that gamma (or the best seen)
    std::vector<std::pair<double, double>> profile; // (gamma, min margin) per grid point tried
};

// Scans gamma over a uniform grid in [gamma_min, gamma_max] and returns the
// smallest value for which f with lift gamma * H passes the sampling check.
GammaSearchResult gamma_lift_search(const PwqND& f, const PwaND& H, double gamma_min,
                                    double gamma_max, std::size_t steps,
                                    const SamplingConfig& sampling = {},
                                    const ToleranceConfig& tol = {});

// 1D transcriptions onto interval regions.
PwqND to_nd(const Pwq1D& f);
PwaND to_nd(const Pwa1D& h);

// Strictly interior point of {x : Ax <= b} via the Chebyshev-center QP.
// Returns nullopt when the region has no interior.
std::optional<Eigen::VectorXd> find_interior_point(const Eigen::MatrixXd& A,
                                                   const Eigen::VectorXd& b);

}  // namespace pwqnet
