#include "pwqnet/verify1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pwqnet/lifting.hpp"
#include "pwqnet/rng.hpp"

namespace pwqnet {

namespace {

struct Quadratic {
    double a = 0.0, b = 0.0, c = 0.0;  // a x^2 + b x + c
    double value(double x) const { return (a * x + b) * x + c; }
};

// exact minimum over [lo, hi]: endpoints, plus the vertex when convex
void min_over_interval(const Quadratic& d, double lo, double hi, double& min_val,
                       double& min_arg) {
    min_val = d.value(lo);
    min_arg = lo;
    const double at_hi = d.value(hi);
    if (at_hi < min_val) {
        min_val = at_hi;
        min_arg = hi;
    }
    if (d.a > 0.0) {
        const double vertex = -d.b / (2.0 * d.a);
        if (vertex > lo && vertex < hi) {
            const double at_v = d.value(vertex);
            if (at_v < min_val) {
                min_val = at_v;
                min_arg = vertex;
            }
        }
    }
}

// sub-interval of [lo, hi] where d(x) < -threshold; empty when none
bool violation_interval(const Quadratic& d, double lo, double hi, double threshold, double& out_lo,
                        double& out_hi) {
    const Quadratic shifted{d.a, d.b, d.c + threshold};
    // roots of shifted == 0 bound the region where d < -threshold
    std::vector<double> cuts{lo, hi};
    if (shifted.a != 0.0) {
        const double disc = shifted.b * shifted.b - 4.0 * shifted.a * shifted.c;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            cuts.push_back((-shifted.b - sq) / (2.0 * shifted.a));
            cuts.push_back((-shifted.b + sq) / (2.0 * shifted.a));
        }
    } else if (shifted.b != 0.0) {
        cuts.push_back(-shifted.c / shifted.b);
    }
    std::sort(cuts.begin(), cuts.end());
    out_lo = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = std::max(lo, cuts[k]);
        const double b = std::min(hi, cuts[k + 1]);
        if (a >= b) continue;
        if (shifted.value(0.5 * (a + b)) < 0.0) {
            if (std::isnan(out_lo)) out_lo = a;
            out_hi = b;
        }
    }
    return !std::isnan(out_lo);
}

}  // namespace

VerificationReport verify_max_representation_1d(const Pwq1D& f, const Pwa1D& h,
                                                const ToleranceConfig& tol) {
    tol.check();
    if (f.breakpoints != h.breakpoints || f.piece_count() != h.piece_count()) {
        throw std::invalid_argument("verify_max_representation_1d: breakpoint mismatch");
    }
    const std::size_t s = f.piece_count();

    VerificationReport rep;
    rep.min_margin = 0.0;
    bool first_pair = true;

    auto consider_pair = [&](std::size_t i, std::size_t j) {
        const Quadratic d{
            f.segments[i].q - f.segments[j].q,
            (f.segments[i].l + h.pieces[i].alpha) - (f.segments[j].l + h.pieces[j].alpha),
            (f.segments[i].c + h.pieces[i].beta) - (f.segments[j].c + h.pieces[j].beta)};
        const double lo = f.lower(i);
        const double hi = f.upper(i);
        double mval = 0.0, marg = 0.0;
        min_over_interval(d, lo, hi, mval, marg);
        if (first_pair || mval < rep.min_margin) {
            rep.min_margin = mval;
            first_pair = false;
        }
        const double ref = f.segments[i].value(marg) + h.pieces[i].value(marg);
        const double threshold = ToleranceConfig::scaled(tol.eps_v, ref);
        if (mval < -threshold && rep.verdict != Verdict::counterexample) {
            rep.verdict = Verdict::counterexample;
            double vlo = lo, vhi = hi;
            if (!violation_interval(d, lo, hi, threshold, vlo, vhi)) {
                vlo = vhi = marg;
            }
            const double wx = 0.5 * (vlo + vhi);
            rep.witness = Witness{{wx}, d.value(wx), i, j};
        }
    };

    // the left-of-i families first, mirroring the condition order
    for (std::size_t i = 1; i < s; ++i)
        for (std::size_t j = 0; j < i; ++j) consider_pair(i, j);
    for (std::size_t i = 0; i + 1 < s; ++i)
        for (std::size_t j = i + 1; j < s; ++j) consider_pair(i, j);
    return rep;
}

PipelineResult verify_representation_pipeline(const Pwq1D& f, const ToleranceConfig& tol) {
    const ValidationResult v = validate_pwq(f, tol);
    if (!v.ok()) {
        throw PreconditionError("pipeline rejected input at validation stage (" +
                                std::to_string(v.violations.size()) + " violations)");
    }
    PipelineResult out;
    out.lift = algorithm1(f, tol);

    const LiftConditionsReport cond = check_lift_conditions(f, out.lift, tol);
    out.report = verify_max_representation_1d(f, out.lift, tol);
    if (!cond.feasible()) {
        out.failed_stage = "conditions";
        return out;
    }
    if (out.report.verdict == Verdict::counterexample) {
        out.failed_stage = "certify";
        return out;
    }

    const FeedForwardNet net = build_maxout_net(f, out.lift, tol);
    const double lo = f.domain_lo();
    const double hi = f.domain_hi();
    const std::size_t grid_n = 10000;
    std::vector<double> points;
    points.reserve(grid_n + f.breakpoints.size() + 1000);
    for (std::size_t k = 0; k < grid_n; ++k) {
        points.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(grid_n - 1));
    }
    points.insert(points.end(), f.breakpoints.begin(), f.breakpoints.end());
    Rng rng(0x5eedULL);
    for (std::size_t k = 0; k < 1000; ++k) points.push_back(rng.uniform(lo, hi));

    double worst = 0.0;
    double worst_x = lo;
    for (double x : points) {
        const double err = std::abs(eval_net_1d(net, x) - eval_pwq(f, x));
        if (err > worst) {
            worst = err;
            worst_x = x;
        }
    }
    out.report.samples_used = points.size();
    const double ref = eval_pwq(f, worst_x);
    if (worst > ToleranceConfig::scaled(tol.eps_v, ref)) {
        out.failed_stage = "network";
        out.report.verdict = Verdict::counterexample;
        out.report.witness = Witness{{worst_x}, -worst, find_segment(f.breakpoints, worst_x), 0};
        out.report.min_margin = std::min(out.report.min_margin, -worst);
    }
    return out;
}

}  // namespace pwqnet
