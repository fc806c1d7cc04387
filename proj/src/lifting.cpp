#include "pwqnet/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pwqnet/errors.hpp"

namespace pwqnet {

namespace {

double lifted_value(const Pwq1D& f, const Pwa1D& h, std::size_t seg, double x) {
    return f.segments[seg].value(x) + h.pieces[seg].value(x);
}

void require_matching(const Pwq1D& f, const Pwa1D& h) {
    if (f.breakpoints != h.breakpoints || f.piece_count() != h.piece_count()) {
        throw std::invalid_argument("lift and function breakpoints differ");
    }
}

void require_valid(const Pwq1D& f, const ToleranceConfig& tol) {
    const ValidationResult v = validate_pwq(f, tol);
    if (!v.ok()) {
        throw PreconditionError("input PWQ function fails validation (" +
                                std::to_string(v.violations.size()) + " violations)");
    }
}

}  // namespace

LiftConditionsReport check_lift_conditions(const Pwq1D& f, const Pwa1D& h,
                                           const ToleranceConfig& tol) {
    tol.check();
    require_matching(f, h);
    const std::size_t s = f.piece_count();
    LiftConditionsReport rep;

    auto slack_tol = [&](double lhs, double rhs) {
        return ToleranceConfig::scaled(tol.eps_v, std::max(std::abs(lhs), std::abs(rhs)));
    };

    for (std::size_t i = 0; i + 1 < s; ++i) {
        const double xb = f.upper(i);
        const double left = h.pieces[i].value(xb);
        const double right = h.pieces[i + 1].value(xb);
        if (std::abs(left - right) > slack_tol(left, right)) {
            rep.violations.push_back(
                {ConditionFamily::continuity_12a, i, i + 1, std::abs(left - right)});
        }
        if (h.pieces[i].alpha - h.pieces[i + 1].alpha >
            slack_tol(h.pieces[i].alpha, h.pieces[i + 1].alpha)) {
            rep.violations.push_back({ConditionFamily::convexity_12b, i, i + 1,
                                      h.pieces[i].alpha - h.pieces[i + 1].alpha});
        }
    }

    for (std::size_t i = 1; i < s; ++i) {
        const double lo = f.lower(i);
        const double hi = f.upper(i);
        const double anchor = lifted_value(f, h, i, lo);
        const double tangent_end =
            anchor + (hi - lo) * (f.segments[i].slope(lo) + h.pieces[i].alpha);
        for (std::size_t j = 0; j < i; ++j) {
            const double at_lo = lifted_value(f, h, j, lo);
            if (at_lo - anchor > slack_tol(at_lo, anchor)) {
                rep.violations.push_back({ConditionFamily::left_13a, i, j, at_lo - anchor});
            }
            const double at_hi = lifted_value(f, h, j, hi);
            if (at_hi - tangent_end > slack_tol(at_hi, tangent_end)) {
                rep.violations.push_back({ConditionFamily::left_13b, i, j, at_hi - tangent_end});
            }
        }
    }

    for (std::size_t i = 0; i + 1 < s; ++i) {
        const double lo = f.lower(i);
        const double hi = f.upper(i);
        const double anchor = lifted_value(f, h, i, hi);
        const double tangent_start =
            anchor - (hi - lo) * (f.segments[i].slope(hi) + h.pieces[i].alpha);
        for (std::size_t j = i + 1; j < s; ++j) {
            const double at_hi = lifted_value(f, h, j, hi);
            if (at_hi - anchor > slack_tol(at_hi, anchor)) {
                rep.violations.push_back({ConditionFamily::right_13a, i, j, at_hi - anchor});
            }
            const double at_lo = lifted_value(f, h, j, lo);
            if (at_lo - tangent_start > slack_tol(at_lo, tangent_start)) {
                rep.violations.push_back(
                    {ConditionFamily::right_13b, i, j, at_lo - tangent_start});
            }
        }
    }
    return rep;
}

Pwa1D algorithm1(const Pwq1D& f, const ToleranceConfig& tol) {
    require_valid(f, tol);
    const std::size_t s = f.piece_count();
    const std::vector<double>& bp = f.breakpoints;

    std::vector<double> alpha(s, 0.0);
    std::vector<double> beta(s, 0.0);

    auto piece_value = [&](std::size_t j, double x) {
        return f.segments[j].value(x) + alpha[j] * x + beta[j];
    };

    for (std::size_t i = 0; i < s; ++i) {
        const double lo = bp[i];
        const double hi = bp[i + 1];
        const double g1 = piece_value(i, lo);
        const double g2 = g1 + (hi - lo) * (f.segments[i].slope(lo) + alpha[i]);
        const double g3 = piece_value(i, hi);
        const double g4 = g3 - (hi - lo) * (f.segments[i].slope(hi) + alpha[i]);

        for (std::size_t j = 0; j < i; ++j) {
            const double hinge = bp[j + 1];  // upper breakpoint of segment j
            double da = 0.0;
            const double at_lo = piece_value(j, lo);
            if (at_lo > g1 && lo != hinge) {
                da = (g1 - at_lo) / (lo - hinge);
            }
            const double at_hi = piece_value(j, hi);
            if (at_hi > g2) {
                // min with the possibly-zero da keeps da <= 0, which the sign
                // gate below relies on
                da = std::min(da, (g2 - at_hi) / (hi - hinge));
            }
            if (da < 0.0) {
                for (std::size_t k = 0; k <= j; ++k) {
                    alpha[k] += da;
                    beta[k] -= da * hinge;
                }
            }
        }
        for (std::size_t j = i + 1; j < s; ++j) {
            const double hinge = bp[j];  // lower breakpoint of segment j
            double da = 0.0;
            const double at_hi = piece_value(j, hi);
            if (at_hi > g3 && hinge != hi) {
                da = (at_hi - g3) / (hinge - hi);
            }
            const double at_lo = piece_value(j, lo);
            if (at_lo > g4) {
                // max with the possibly-zero da keeps da >= 0 for the gate below
                da = std::max(da, (at_lo - g4) / (hinge - lo));
            }
            if (da > 0.0) {
                for (std::size_t k = j; k < s; ++k) {
                    alpha[k] += da;
                    beta[k] -= da * hinge;
                }
            }
        }
    }

    Pwa1D h;
    h.breakpoints = bp;
    h.pieces.resize(s);
    for (std::size_t i = 0; i < s; ++i) h.pieces[i] = {alpha[i], beta[i]};
    return h;
}

LiftConstraintMatrices build_lift_constraints(const Pwq1D& f) {
    const std::size_t s = f.piece_count();
    const std::vector<double>& bp = f.breakpoints;
    const Eigen::Index n = static_cast<Eigen::Index>(2 * s);
    const Eigen::Index m =
        static_cast<Eigen::Index>((s - 1) + 2 * s * (s - 1));

    LiftConstraintMatrices out;
    out.A = Eigen::MatrixXd::Zero(m, n);
    out.b = Eigen::VectorXd::Zero(m);

    auto a_idx = [](std::size_t i) { return static_cast<Eigen::Index>(2 * i); };
    auto b_idx = [](std::size_t i) { return static_cast<Eigen::Index>(2 * i + 1); };

    Eigen::Index row = 0;
    // convexity: alpha_i - alpha_{i+1} <= 0
    for (std::size_t i = 0; i + 1 < s; ++i, ++row) {
        out.A(row, a_idx(i)) = 1.0;
        out.A(row, a_idx(i + 1)) = -1.0;
    }
    // dominance conditions; each row shaped as
    //   alpha_j * x + beta_j - alpha_i * x - beta_i <= rhs
    auto fill_row = [&](std::size_t i, std::size_t j, double x, double rhs) {
        out.A(row, a_idx(j)) = x;
        out.A(row, b_idx(j)) = 1.0;
        out.A(row, a_idx(i)) -= x;
        out.A(row, b_idx(i)) -= 1.0;
        out.b(row) = rhs;
        ++row;
    };
    for (std::size_t i = 1; i < s; ++i) {
        const double lo = bp[i];
        const double hi = bp[i + 1];
        for (std::size_t j = 0; j < i; ++j) {
            fill_row(i, j, lo, f.segments[i].value(lo) - f.segments[j].value(lo));
            fill_row(i, j, hi,
                     f.segments[i].value(lo) + (hi - lo) * f.segments[i].slope(lo) -
                         f.segments[j].value(hi));
        }
    }
    for (std::size_t i = 0; i + 1 < s; ++i) {
        const double lo = bp[i];
        const double hi = bp[i + 1];
        for (std::size_t j = i + 1; j < s; ++j) {
            fill_row(i, j, hi, f.segments[i].value(hi) - f.segments[j].value(hi));
            fill_row(i, j, lo,
                     f.segments[i].value(hi) - (hi - lo) * f.segments[i].slope(hi) -
                         f.segments[j].value(lo));
        }
    }

    // continuity elimination: z = reduce * (alpha_1..alpha_s, beta_1) with
    // beta_{i+1} = beta_i + (alpha_i - alpha_{i+1}) * xbar_i
    out.reduce = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(s + 1));
    const Eigen::Index beta1_col = static_cast<Eigen::Index>(s);
    Eigen::VectorXd beta_row = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s + 1));
    beta_row[beta1_col] = 1.0;
    for (std::size_t i = 0; i < s; ++i) {
        out.reduce(a_idx(i), static_cast<Eigen::Index>(i)) = 1.0;
        if (i > 0) {
            const double xb = bp[i];
            beta_row[static_cast<Eigen::Index>(i - 1)] += xb;
            beta_row[static_cast<Eigen::Index>(i)] -= xb;
        }
        out.reduce.row(b_idx(i)) = beta_row;
    }
    return out;
}

double evaluate_cost(const CostSpec& cost, const Pwa1D& h) {
    const std::size_t s = h.piece_count();
    Eigen::VectorXd z(static_cast<Eigen::Index>(2 * s));
    for (std::size_t i = 0; i < s; ++i) {
        z[static_cast<Eigen::Index>(2 * i)] = h.pieces[i].alpha;
        z[static_cast<Eigen::Index>(2 * i + 1)] = h.pieces[i].beta;
    }
    if (cost.kind == CostSpec::Kind::sum_squares) {
        return z.squaredNorm();
    }
    if (cost.H.rows() != z.size() || cost.H.cols() != z.size() || cost.g.size() != z.size()) {
        throw std::invalid_argument("CostSpec dimensions do not match 2s variables");
    }
    return 0.5 * z.dot(cost.H * z) + cost.g.dot(z);
}

LiftQpResult solve_lift_qp(const Pwq1D& f, const CostSpec& cost, const ToleranceConfig& tol) {
    require_valid(f, tol);
    const std::size_t s = f.piece_count();
    const Eigen::Index n_full = static_cast<Eigen::Index>(2 * s);

    Eigen::MatrixXd H_full;
    Eigen::VectorXd g_full;
    if (cost.kind == CostSpec::Kind::sum_squares) {
        H_full = 2.0 * Eigen::MatrixXd::Identity(n_full, n_full);
        g_full = Eigen::VectorXd::Zero(n_full);
    } else {
        if (cost.H.rows() != n_full || cost.H.cols() != n_full || cost.g.size() != n_full) {
            throw std::invalid_argument("CostSpec dimensions do not match 2s variables");
        }
        H_full = cost.H;
        g_full = cost.g;
    }

    const LiftConstraintMatrices lcm = build_lift_constraints(f);
    QpProblem reduced;
    reduced.H = lcm.reduce.transpose() * H_full * lcm.reduce;
    reduced.g = lcm.reduce.transpose() * g_full;
    reduced.A = lcm.A * lcm.reduce;
    reduced.b = lcm.b;

    const Pwa1D warm = algorithm1(f, tol);
    Eigen::VectorXd y0(static_cast<Eigen::Index>(s + 1));
    for (std::size_t i = 0; i < s; ++i) y0[static_cast<Eigen::Index>(i)] = warm.pieces[i].alpha;
    y0[static_cast<Eigen::Index>(s)] = warm.pieces[0].beta;

    QpConfig cfg;
    cfg.eps_q = tol.eps_q;
    QpSolution sol = solve_qp_warm(reduced, y0, cfg);

    const Eigen::VectorXd z = lcm.reduce * sol.z;
    LiftQpResult res;
    res.lift.breakpoints = f.breakpoints;
    res.lift.pieces.resize(s);
    for (std::size_t i = 0; i < s; ++i) {
        res.lift.pieces[i] = {z[static_cast<Eigen::Index>(2 * i)],
                              z[static_cast<Eigen::Index>(2 * i + 1)]};
    }
    res.qp = sol;
    res.cost_value = evaluate_cost(cost, res.lift);
    return res;
}

}  // namespace pwqnet
