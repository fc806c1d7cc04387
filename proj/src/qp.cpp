#include "pwqnet/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pwqnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_problem(const QpProblem& p) {
    const Eigen::Index n = p.H.rows();
    if (p.H.cols() != n || p.g.size() != n) {
        throw std::invalid_argument("solve_qp: H/g dimension mismatch");
    }
    if (p.A.rows() != p.b.size() || (p.A.rows() > 0 && p.A.cols() != n)) {
        throw std::invalid_argument("solve_qp: A/b dimension mismatch");
    }
    if (!p.H.allFinite() || !p.g.allFinite() || !p.A.allFinite() || !p.b.allFinite()) {
        throw std::invalid_argument("solve_qp: non-finite entry");
    }
    const double hscale = std::max(1.0, p.H.cwiseAbs().maxCoeff());
    if ((p.H - p.H.transpose()).cwiseAbs().maxCoeff() > 1e-9 * hscale) {
        throw std::invalid_argument("solve_qp: H not symmetric");
    }
    // PSD gate: LDL' pivots must not be meaningfully negative.
    Eigen::LDLT<Eigen::MatrixXd> ldlt(p.H);
    if (ldlt.info() == Eigen::Success) {
        if (ldlt.vectorD().minCoeff() < -1e-8 * hscale) {
            throw std::invalid_argument("solve_qp: H is indefinite");
        }
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p.H, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-8 * hscale) {
            throw std::invalid_argument("solve_qp: H is indefinite");
        }
    }
}

struct ActiveSetWorkspace {
    std::vector<Eigen::Index> working;  // constraint rows treated as equalities
};

// Equality-constrained step at z for the current working set, via the
// null-space method. Returns the step p (in full space); `ray` is set when
// the reduced Hessian is singular along a descent direction, in which case p
// is a direction of linear decrease rather than a step to a minimizer.
bool compute_step(const QpProblem& p, const Eigen::VectorXd& z,
                  const std::vector<Eigen::Index>& working, Eigen::VectorXd& step, bool& ray,
                  Eigen::VectorXd& lambda_w) {
    const Eigen::Index n = p.dim();
    const Eigen::Index k = static_cast<Eigen::Index>(working.size());
    const Eigen::VectorXd grad = p.H * z + p.g;
    ray = false;

    Eigen::MatrixXd At(n, k);
    for (Eigen::Index c = 0; c < k; ++c) At.col(c) = p.A.row(working[c]).transpose();

    Eigen::MatrixXd Z;       // null-space basis of A_W
    Eigen::MatrixXd Q1;      // range basis
    Eigen::MatrixXd R;       // k x k upper triangular, A_W' = Q1 R
    if (k == 0) {
        Z = Eigen::MatrixXd::Identity(n, n);
    } else {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(At);
        Eigen::MatrixXd Qfull = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
        Q1 = Qfull.leftCols(k);
        Z = Qfull.rightCols(n - k);
        R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
        double rmin = kInf, rmax = 0.0;
        for (Eigen::Index i = 0; i < k; ++i) {
            rmin = std::min(rmin, std::abs(R(i, i)));
            rmax = std::max(rmax, std::abs(R(i, i)));
        }
        if (rmin <= 1e-12 * std::max(1.0, rmax)) return false;  // dependent working set
        lambda_w = R.triangularView<Eigen::Upper>().solve(-(Q1.transpose() * grad));
    }

    if (Z.cols() == 0) {
        step = Eigen::VectorXd::Zero(n);
        return true;
    }

    const Eigen::MatrixXd Hr = Z.transpose() * p.H * Z;
    const Eigen::VectorXd gr = Z.transpose() * grad;

    Eigen::LLT<Eigen::MatrixXd> llt(Hr);
    if (llt.info() == Eigen::Success) {
        const double dmin = llt.matrixLLT().diagonal().minCoeff();
        if (dmin > 1e-10 * std::max(1.0, Hr.cwiseAbs().maxCoeff())) {
            step = Z * llt.solve(-gr);
            return true;
        }
    }

    // Singular or near-singular reduced Hessian: minimum-norm least-squares
    // solve; a nonzero residual exposes a zero-curvature descent ray.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Hr);
    const Eigen::VectorXd pz = cod.solve(-gr);
    const Eigen::VectorXd resid = Hr * pz + gr;
    if (resid.cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, gr.cwiseAbs().maxCoeff())) {
        step = Z * pz;
        return true;
    }
    // residual = component of gr in null(Hr); -residual is a descent ray
    step = Z * (-resid);
    ray = true;
    return true;
}

QpSolution finish(const QpProblem& p, const Eigen::VectorXd& z,
                  const std::vector<Eigen::Index>& working, const Eigen::VectorXd& lambda_w,
                  QpStatus status, int iters, double eps_q) {
    QpSolution s;
    s.z = z;
    s.lambda = Eigen::VectorXd::Zero(p.row_count());
    for (std::size_t c = 0; c < working.size(); ++c) {
        s.lambda[working[c]] = (c < static_cast<std::size_t>(lambda_w.size())) ? lambda_w[c] : 0.0;
    }
    s.status = status;
    s.iterations = iters;
    s.objective = 0.5 * z.dot(p.H * z) + p.g.dot(z);
    if (p.row_count() > 0) {
        const Eigen::VectorXd slack = p.A * z - p.b;
        s.primal_residual = std::max(0.0, slack.maxCoeff());
        s.complementarity = (s.lambda.array() * slack.array()).abs().maxCoeff();
    }
    s.dual_residual = (p.H * z + p.g + p.A.transpose() * s.lambda).cwiseAbs().maxCoeff();
    // optimal status is a promise about the residuals; do not overclaim
    if (s.status == QpStatus::optimal &&
        (s.primal_residual > eps_q || s.dual_residual > eps_q || s.complementarity > eps_q ||
         (s.lambda.size() > 0 && s.lambda.minCoeff() < -eps_q))) {
        s.status = QpStatus::numerical_failure;
    }
    return s;
}

QpSolution run_active_set(const QpProblem& p, Eigen::VectorXd z, const QpConfig& cfg) {
    const Eigen::Index n = p.dim();
    const Eigen::Index m = p.row_count();
    const int max_iter =
        cfg.max_iter > 0 ? cfg.max_iter : 50 * static_cast<int>(n + m);

    std::vector<Eigen::Index> working;
    Eigen::VectorXd lambda_w;
    int iter = 0;

    while (iter < max_iter) {
        ++iter;
        Eigen::VectorXd step;
        bool ray = false;
        lambda_w.resize(0);
        if (!compute_step(p, z, working, step, ray, lambda_w)) {
            return finish(p, z, working, lambda_w, QpStatus::numerical_failure, iter, cfg.eps_q);
        }

        const double step_norm = step.size() ? step.cwiseAbs().maxCoeff() : 0.0;
        const double z_norm = z.size() ? z.cwiseAbs().maxCoeff() : 0.0;
        if (!ray && step_norm <= 1e-11 * (1.0 + z_norm)) {
            // at the working-set minimizer: check multiplier signs
            if (working.empty()) {
                return finish(p, z, working, lambda_w, QpStatus::optimal, iter, cfg.eps_q);
            }
            Eigen::Index drop_pos = -1;
            double most_negative = -cfg.eps_q;
            for (std::size_t c = 0; c < working.size(); ++c) {
                if (lambda_w[static_cast<Eigen::Index>(c)] < most_negative) {
                    most_negative = lambda_w[static_cast<Eigen::Index>(c)];
                    drop_pos = static_cast<Eigen::Index>(c);
                } else if (drop_pos >= 0 &&
                           lambda_w[static_cast<Eigen::Index>(c)] == most_negative &&
                           working[c] < working[static_cast<std::size_t>(drop_pos)]) {
                    drop_pos = static_cast<Eigen::Index>(c);
                }
            }
            if (drop_pos < 0) {
                return finish(p, z, working, lambda_w, QpStatus::optimal, iter, cfg.eps_q);
            }
            working.erase(working.begin() + drop_pos);
            continue;
        }

        // ratio test: largest alpha in [0, cap] keeping all rows feasible
        double alpha = ray ? kInf : 1.0;
        Eigen::Index blocking = -1;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (std::find(working.begin(), working.end(), i) != working.end()) continue;
            const double denom = p.A.row(i).dot(step);
            const double denom_tol =
                1e-13 * (1.0 + p.A.row(i).cwiseAbs().maxCoeff()) * (1.0 + step_norm);
            if (denom <= denom_tol) continue;
            double slack = p.b[i] - p.A.row(i).dot(z);
            if (slack < 0.0) slack = 0.0;  // clamp round-off from earlier exact hits
            const double cand = slack / denom;
            if (cand < alpha) {
                alpha = cand;
                blocking = i;
            }
        }
        if (ray && blocking < 0) {
            // unbounded descent direction
            return finish(p, z, working, lambda_w, QpStatus::numerical_failure, iter, cfg.eps_q);
        }
        if (std::isfinite(alpha) && alpha > 0.0) z += alpha * step;
        if (blocking >= 0 && (ray || alpha < 1.0)) {
            working.push_back(blocking);
            if (static_cast<Eigen::Index>(working.size()) > n) {
                return finish(p, z, working, lambda_w, QpStatus::numerical_failure, iter, cfg.eps_q);
            }
        }
    }
    return finish(p, z, working, lambda_w, QpStatus::max_iter, iter, cfg.eps_q);
}

// Phase 1: min 1/2 t^2 over (z, t) subject to Az - t*1 <= b, started strictly
// feasible at z = 0, t = max(0, max(-b)) + 1. At the optimum t == 0 iff the
// original constraints admit a feasible point.
std::optional<Eigen::VectorXd> find_feasible_point(const QpProblem& p, const QpConfig& cfg) {
    const Eigen::Index n = p.dim();
    const Eigen::Index m = p.row_count();
    if (m == 0) return Eigen::VectorXd::Zero(n);

    QpProblem aux;
    aux.H = Eigen::MatrixXd::Zero(n + 1, n + 1);
    aux.H(n, n) = 1.0;
    aux.g = Eigen::VectorXd::Zero(n + 1);
    aux.A.resize(m, n + 1);
    aux.A.leftCols(n) = p.A;
    aux.A.col(n).setConstant(-1.0);
    aux.b = p.b;

    Eigen::VectorXd start = Eigen::VectorXd::Zero(n + 1);
    start[n] = std::max(0.0, -p.b.minCoeff()) + 1.0;

    QpSolution s = run_active_set(aux, start, cfg);
    if (s.status == QpStatus::numerical_failure) return std::nullopt;
    const double t = s.z[n];
    if (t > cfg.eps_q * (1.0 + p.b.cwiseAbs().maxCoeff())) return std::nullopt;
    return Eigen::VectorXd(s.z.head(n));
}

}  // namespace

QpSolution solve_qp(const QpProblem& p, const QpConfig& cfg) {
    check_problem(p);
    auto z0 = find_feasible_point(p, cfg);
    if (!z0) {
        QpSolution s;
        s.z = Eigen::VectorXd::Zero(p.dim());
        s.lambda = Eigen::VectorXd::Zero(p.row_count());
        s.status = QpStatus::numerical_failure;
        if (p.row_count() > 0) s.primal_residual = std::max(0.0, (p.A * s.z - p.b).maxCoeff());
        return s;
    }
    return run_active_set(p, *z0, cfg);
}

QpSolution solve_qp_warm(const QpProblem& p, const Eigen::VectorXd& z0, const QpConfig& cfg) {
    check_problem(p);
    if (z0.size() != p.dim()) throw std::invalid_argument("solve_qp_warm: start dimension mismatch");
    bool feasible = true;
    if (p.row_count() > 0) {
        const Eigen::VectorXd slack = p.b - p.A * z0;
        for (Eigen::Index i = 0; i < slack.size(); ++i) {
            if (slack[i] < -1e-9 * (1.0 + std::abs(p.b[i]))) feasible = false;
        }
    }
    if (!feasible) return solve_qp(p, cfg);
    return run_active_set(p, z0, cfg);
}

}  // namespace pwqnet
