#include "pwqnet/pwq1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pwqnet/rng.hpp"

namespace pwqnet {

namespace {

bool all_finite(const Pwq1D& f) {
    for (double b : f.breakpoints)
        if (!std::isfinite(b)) return false;
    for (const auto& s : f.segments)
        if (!std::isfinite(s.q) || !std::isfinite(s.l) || !std::isfinite(s.c)) return false;
    return true;
}

void append_structure_checks(std::vector<Violation>& out, const std::vector<double>& bp,
                             std::size_t piece_count) {
    if (piece_count == 0) {
        out.push_back({ViolationKind::structure, 0, 0.0, "no segments"});
    }
    if (bp.size() != piece_count + 1) {
        out.push_back({ViolationKind::structure, 0, 0.0,
                       "breakpoint count must be segment count + 1"});
        return;
    }
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        if (!(bp[i] < bp[i + 1])) {
            out.push_back({ViolationKind::structure, i, bp[i] - bp[i + 1],
                           "breakpoints not strictly increasing"});
        }
    }
}

}  // namespace

ValidationResult validate_pwq(const Pwq1D& f, const ToleranceConfig& tol) {
    tol.check();
    ValidationResult res;
    if (f.breakpoints.empty()) {
        res.violations.push_back({ViolationKind::structure, 0, 0.0, "empty breakpoint list"});
        return res;
    }
    if (!all_finite(f)) {
        res.violations.push_back({ViolationKind::structure, 0, 0.0, "non-finite entry"});
        return res;
    }
    append_structure_checks(res.violations, f.breakpoints, f.piece_count());
    if (!res.ok()) return res;

    for (std::size_t i = 0; i < f.piece_count(); ++i) {
        if (f.segments[i].q < -tol.eps_c) {
            res.violations.push_back(
                {ViolationKind::negative_curvature, i, -f.segments[i].q, "q < 0"});
        }
    }
    for (std::size_t i = 0; i + 1 < f.piece_count(); ++i) {
        const double xb = f.upper(i);
        const double left = f.segments[i].value(xb);
        const double right = f.segments[i + 1].value(xb);
        const double jump = std::abs(left - right);
        if (jump > ToleranceConfig::scaled(tol.eps_c, std::max(std::abs(left), std::abs(right)))) {
            res.violations.push_back(
                {ViolationKind::continuity, i + 1, jump, "value jump at breakpoint"});
        }
        const double sl = f.segments[i].slope(xb);
        const double sr = f.segments[i + 1].slope(xb);
        if (sl > sr + ToleranceConfig::scaled(tol.eps_c, std::max(std::abs(sl), std::abs(sr)))) {
            res.violations.push_back(
                {ViolationKind::slope_monotonicity, i + 1, sl - sr, "slope decreases at breakpoint"});
        }
    }
    return res;
}

ValidationResult validate_pwa(const Pwa1D& h, const ToleranceConfig& tol) {
    tol.check();
    ValidationResult res;
    append_structure_checks(res.violations, h.breakpoints, h.piece_count());
    if (!res.ok()) return res;

    for (std::size_t i = 0; i + 1 < h.piece_count(); ++i) {
        const double xb = h.upper(i);
        const double left = h.pieces[i].value(xb);
        const double right = h.pieces[i + 1].value(xb);
        const double jump = std::abs(left - right);
        if (jump > ToleranceConfig::scaled(tol.eps_c, std::max(std::abs(left), std::abs(right)))) {
            res.violations.push_back(
                {ViolationKind::continuity, i + 1, jump, "value jump at breakpoint"});
        }
        const double al = h.pieces[i].alpha;
        const double ar = h.pieces[i + 1].alpha;
        if (al > ar + ToleranceConfig::scaled(tol.eps_c, std::max(std::abs(al), std::abs(ar)))) {
            res.violations.push_back(
                {ViolationKind::slope_monotonicity, i + 1, al - ar, "alpha decreases"});
        }
    }
    return res;
}

std::size_t find_segment(const std::vector<double>& breakpoints, double x) {
    if (breakpoints.size() < 2 || x < breakpoints.front() || x > breakpoints.back()) {
        throw std::domain_error("point outside function domain");
    }
    // half-open [lo_i, hi_i), last interval closed
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - breakpoints.begin());
    if (idx == 0) return 0;
    if (idx >= breakpoints.size()) return breakpoints.size() - 2;
    return idx - 1;
}

double eval_pwq(const Pwq1D& f, double x) {
    return f.segments[find_segment(f.breakpoints, x)].value(x);
}

double eval_pwa(const Pwa1D& h, double x) {
    return h.pieces[find_segment(h.breakpoints, x)].value(x);
}

double eval_pwa_as_max(const Pwa1D& h, double x) {
    if (h.pieces.empty()) throw std::invalid_argument("empty PWA function");
    double best = h.pieces[0].value(x);
    for (std::size_t i = 1; i < h.pieces.size(); ++i) {
        best = std::max(best, h.pieces[i].value(x));
    }
    return best;
}

Pwq1D add_pwa(const Pwq1D& f, const Pwa1D& h) {
    if (f.breakpoints != h.breakpoints) {
        throw std::invalid_argument("add_pwa: breakpoint lists differ");
    }
    Pwq1D out;
    out.breakpoints = f.breakpoints;
    out.segments.reserve(f.piece_count());
    for (std::size_t i = 0; i < f.piece_count(); ++i) {
        out.segments.push_back({f.segments[i].q, f.segments[i].l + h.pieces[i].alpha,
                                f.segments[i].c + h.pieces[i].beta});
    }
    return out;
}

Pwq1D generate_random_convex_pwq(std::uint64_t seed, std::size_t s, double domain_lo,
                                 double domain_hi, double coefficient_scale) {
    if (s == 0) throw std::invalid_argument("segment count must be >= 1");
    if (!(domain_lo < domain_hi) || !std::isfinite(domain_lo) || !std::isfinite(domain_hi)) {
        throw std::invalid_argument("domain must be bounded with lo < hi");
    }
    if (!(coefficient_scale > 0.0)) throw std::invalid_argument("scale must be positive");

    Rng rng(seed);
    const double span = domain_hi - domain_lo;
    const double min_gap = 1e-3 * span / static_cast<double>(s);

    std::vector<double> bp;
    for (;;) {
        bp.assign(1, domain_lo);
        for (std::size_t i = 0; i + 1 < s; ++i) bp.push_back(rng.uniform(domain_lo, domain_hi));
        bp.push_back(domain_hi);
        std::sort(bp.begin(), bp.end());
        bool ok = true;
        for (std::size_t i = 0; i + 1 < bp.size(); ++i)
            if (bp[i + 1] - bp[i] < min_gap) ok = false;
        if (ok) break;
    }

    Pwq1D f;
    f.breakpoints = bp;
    f.segments.resize(s);
    f.segments[0].q = rng.uniform(0.0, coefficient_scale);
    f.segments[0].l = rng.uniform(-coefficient_scale, coefficient_scale);
    f.segments[0].c = rng.uniform(-coefficient_scale, coefficient_scale);
    for (std::size_t i = 0; i + 1 < s; ++i) {
        const double xb = bp[i + 1];
        const double q_next = rng.uniform(0.0, coefficient_scale);
        const double slope_step = rng.uniform(0.0, coefficient_scale);
        const double l_next = f.segments[i].slope(xb) + slope_step - 2.0 * q_next * xb;
        const double c_next = f.segments[i].value(xb) - (q_next * xb + l_next) * xb;
        f.segments[i + 1] = {q_next, l_next, c_next};
    }
    return f;
}

}  // namespace pwqnet
