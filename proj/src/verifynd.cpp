#include "pwqnet/verifynd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pwqnet/qp.hpp"
#include "pwqnet/rng.hpp"

namespace pwqnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool inside(const PolyRegion& r, const Eigen::VectorXd& x, double eps) {
    for (Eigen::Index i = 0; i < r.A.rows(); ++i) {
        if (r.A.row(i).dot(x) > r.b[i] + ToleranceConfig::scaled(eps, r.b[i])) return false;
    }
    return true;
}

// chord of {x + t u : A(x + t u) <= b}
bool chord(const PolyRegion& r, const Eigen::VectorXd& x, const Eigen::VectorXd& u, double& t_lo,
           double& t_hi) {
    t_lo = -kInf;
    t_hi = kInf;
    for (Eigen::Index i = 0; i < r.A.rows(); ++i) {
        const double du = r.A.row(i).dot(u);
        const double slack = r.b[i] - r.A.row(i).dot(x);
        if (std::abs(du) < 1e-14) {
            if (slack < 0.0) return false;
            continue;
        }
        const double t = slack / du;
        if (du > 0.0) {
            t_hi = std::min(t_hi, t);
        } else {
            t_lo = std::max(t_lo, t);
        }
    }
    return t_lo <= t_hi && std::isfinite(t_lo) && std::isfinite(t_hi);
}

std::vector<Eigen::VectorXd> hit_and_run(const PolyRegion& r, const Eigen::VectorXd& start,
                                         std::size_t count, std::size_t thinning, Rng& rng) {
    const Eigen::Index n = start.size();
    std::vector<Eigen::VectorXd> out;
    out.reserve(count);
    Eigen::VectorXd x = start;
    for (std::size_t k = 0; k < count; ++k) {
        for (std::size_t step = 0; step < thinning; ++step) {
            Eigen::VectorXd u(n);
            double norm = 0.0;
            do {
                for (Eigen::Index d = 0; d < n; ++d) u[d] = rng.normal();
                norm = u.norm();
            } while (norm < 1e-12);
            u /= norm;
            double t_lo = 0.0, t_hi = 0.0;
            if (!chord(r, x, u, t_lo, t_hi)) continue;
            x += rng.uniform(t_lo, t_hi) * u;
        }
        out.push_back(x);
    }
    return out;
}

std::vector<Eigen::VectorXd> facet_vertices_2d(const PolyRegion& r, double eps) {
    std::vector<Eigen::VectorXd> out;
    const Eigen::Index m = r.A.rows();
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i + 1; j < m; ++j) {
            Eigen::Matrix2d M;
            M.row(0) = r.A.row(i);
            M.row(1) = r.A.row(j);
            const double det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
            if (std::abs(det) < 1e-12 * (1.0 + M.cwiseAbs().maxCoeff())) continue;
            Eigen::Vector2d rhs(r.b[i], r.b[j]);
            Eigen::VectorXd x = M.inverse() * rhs;
            if (inside(r, x, eps)) out.push_back(x);
        }
    }
    return out;
}

void check_instance(const PwqND& f, const PwaND& h) {
    if (f.pieces.empty() || f.pieces.size() != f.regions.size()) {
        throw std::invalid_argument("PwqND piece/region counts inconsistent");
    }
    if (h.pieces.size() != f.pieces.size()) {
        throw std::invalid_argument("PwaND piece count does not match partition");
    }
    const Eigen::Index n = f.dim();
    for (const auto& p : f.pieces) {
        if (p.Q.rows() != n || p.Q.cols() != n || p.l.size() != n) {
            throw std::invalid_argument("PwqND piece dimension mismatch");
        }
        if ((p.Q - p.Q.transpose()).cwiseAbs().maxCoeff() >
            1e-9 * std::max(1.0, p.Q.cwiseAbs().maxCoeff())) {
            throw std::invalid_argument("PwqND piece Q not symmetric");
        }
    }
    for (const auto& p : h.pieces) {
        if (p.a.size() != n) throw std::invalid_argument("PwaND piece dimension mismatch");
    }
    for (const auto& r : f.regions) {
        if (r.A.cols() != n || r.A.rows() != r.b.size()) {
            throw std::invalid_argument("region halfspace dimension mismatch");
        }
    }
}

}  // namespace

std::optional<Eigen::VectorXd> find_interior_point(const Eigen::MatrixXd& A,
                                                   const Eigen::VectorXd& b) {
    const Eigen::Index n = A.cols();
    const Eigen::Index m = A.rows();
    // Chebyshev center: maximize r subject to a_i'x + ||a_i|| r <= b_i, with a
    // small quadratic regularizer so the problem is strictly convex, plus a
    // cap on r for unbounded regions.
    QpProblem p;
    p.H = 1e-9 * Eigen::MatrixXd::Identity(n + 1, n + 1);
    p.g = Eigen::VectorXd::Zero(n + 1);
    p.g[n] = -1.0;
    p.A.resize(m + 1, n + 1);
    p.b.resize(m + 1);
    for (Eigen::Index i = 0; i < m; ++i) {
        p.A.row(i).head(n) = A.row(i);
        p.A(i, n) = A.row(i).norm();
        p.b[i] = b[i];
    }
    p.A.row(m).setZero();
    p.A(m, n) = 1.0;
    p.b[m] = 1e6;

    Eigen::VectorXd start = Eigen::VectorXd::Zero(n + 1);
    double r0 = kInf;
    for (Eigen::Index i = 0; i < m; ++i) {
        const double norm = A.row(i).norm();
        if (norm > 0.0) r0 = std::min(r0, b[i] / norm);
    }
    start[n] = std::min(r0 - 1.0, 1e6 - 1.0);

    QpSolution s = solve_qp_warm(p, start, QpConfig{0, 1e-9});
    if (s.status == QpStatus::numerical_failure) return std::nullopt;
    if (s.z[n] <= 1e-9) return std::nullopt;
    return Eigen::VectorXd(s.z.head(n));
}

VerificationReport verify_max_representation_nd(const PwqND& f, const PwaND& h,
                                                const SamplingConfig& sampling,
                                                const ToleranceConfig& tol) {
    tol.check();
    check_instance(f, h);
    const std::size_t regions = f.regions.size();
    const Eigen::Index n = f.dim();

    VerificationReport rep;
    rep.verdict = Verdict::sampled_pass;
    rep.min_margin = kInf;

    auto lifted = [&](std::size_t k, const Eigen::VectorXd& x) {
        return f.pieces[k].value(x) + h.pieces[k].value(x);
    };

    for (std::size_t ri = 0; ri < regions; ++ri) {
        const PolyRegion& region = f.regions[ri];
        Eigen::VectorXd center;
        if (region.interior_point) {
            center = *region.interior_point;
            if (!inside(region, center, tol.eps_c)) {
                throw std::invalid_argument("region " + std::to_string(ri) +
                                            ": provided interior point is outside");
            }
        } else {
            auto found = find_interior_point(region.A, region.b);
            if (!found) {
                throw std::invalid_argument("region " + std::to_string(ri) +
                                            " has no interior point");
            }
            center = *found;
        }

        Rng rng(sampling.seed * 0x2545f4914f6cdd1dULL + ri + 1);
        std::vector<Eigen::VectorXd> points =
            hit_and_run(region, center, sampling.per_region, sampling.thinning, rng);
        points.push_back(center);
        if (n == 2) {
            const auto verts = facet_vertices_2d(region, tol.eps_c);
            points.insert(points.end(), verts.begin(), verts.end());
        }

        for (const Eigen::VectorXd& x : points) {
            // a point on a shared facet is checked against every owning piece
            for (std::size_t oi = 0; oi < regions; ++oi) {
                if (oi != ri && !inside(f.regions[oi], x, tol.eps_c)) continue;
                const double own = lifted(oi, x);
                for (std::size_t j = 0; j < f.pieces.size(); ++j) {
                    if (j == oi) continue;
                    const double margin = own - lifted(j, x);
                    if (margin < rep.min_margin) {
                        rep.min_margin = margin;
                        if (margin < -ToleranceConfig::scaled(tol.eps_v, own)) {
                            rep.verdict = Verdict::counterexample;
                            Witness w;
                            w.x.assign(x.data(), x.data() + x.size());
                            w.margin = margin;
                            w.piece_i = oi;
                            w.piece_j = j;
                            rep.witness = w;
                        }
                    }
                }
            }
            ++rep.samples_used;
        }
    }
    if (!std::isfinite(rep.min_margin)) rep.min_margin = 0.0;
    return rep;
}

GammaSearchResult gamma_lift_search(const PwqND& f, const PwaND& H, double gamma_min,
                                    double gamma_max, std::size_t steps,
                                    const SamplingConfig& sampling, const ToleranceConfig& tol) {
    if (steps == 0 || !(gamma_min <= gamma_max)) {
        throw std::invalid_argument("gamma_lift_search: bad grid");
    }
    GammaSearchResult out;
    double best_margin = -kInf;
    for (std::size_t k = 0; k < steps; ++k) {
        const double gamma =
            steps == 1 ? gamma_min
                       : gamma_min + (gamma_max - gamma_min) * static_cast<double>(k) /
                                         static_cast<double>(steps - 1);
        PwaND scaled;
        scaled.pieces.reserve(H.pieces.size());
        for (const auto& p : H.pieces) scaled.pieces.push_back({gamma * p.a, gamma * p.d});
        VerificationReport rep = verify_max_representation_nd(f, scaled, sampling, tol);
        out.profile.emplace_back(gamma, rep.min_margin);
        if (rep.verdict == Verdict::sampled_pass) {
            out.gamma = gamma;
            out.report = rep;
            return out;
        }
        if (rep.min_margin > best_margin) {
            best_margin = rep.min_margin;
            out.report = rep;
        }
    }
    return out;
}

PwqND to_nd(const Pwq1D& f) {
    PwqND out;
    const std::size_t s = f.piece_count();
    out.pieces.reserve(s);
    out.regions.reserve(s);
    for (std::size_t i = 0; i < s; ++i) {
        QuadPieceND p;
        p.Q = Eigen::MatrixXd::Constant(1, 1, f.segments[i].q);
        p.l = Eigen::VectorXd::Constant(1, f.segments[i].l);
        p.c = f.segments[i].c;
        out.pieces.push_back(std::move(p));

        PolyRegion r;
        r.A.resize(2, 1);
        r.A << -1.0, 1.0;
        r.b.resize(2);
        r.b << -f.lower(i), f.upper(i);
        r.interior_point = Eigen::VectorXd::Constant(1, 0.5 * (f.lower(i) + f.upper(i)));
        out.regions.push_back(std::move(r));
    }
    return out;
}

PwaND to_nd(const Pwa1D& h) {
    PwaND out;
    out.pieces.reserve(h.piece_count());
    for (const auto& p : h.pieces) {
        out.pieces.push_back({Eigen::VectorXd::Constant(1, p.alpha), p.beta});
    }
    return out;
}

}  // namespace pwqnet
