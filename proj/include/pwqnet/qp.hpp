#pragma once

#include <Eigen/Dense>
#include <optional>

namespace pwqnet {

// min 1/2 z'Hz + g'z  s.t.  Az <= b, with H symmetric positive semidefinite.
struct QpProblem {
    Eigen::MatrixXd H;
    Eigen::VectorXd g;
    Eigen::MatrixXd A;  // m x n; m == 0 for unconstrained problems
    Eigen::VectorXd b;

    Eigen::Index dim() const { return H.rows(); }
    Eigen::Index row_count() const { return A.rows(); }
};

enum class QpStatus { optimal, max_iter, numerical_failure };

struct QpSolution {
    Eigen::VectorXd z;
    Eigen::VectorXd lambda;  // one multiplier per constraint row, zero when inactive
    QpStatus status = QpStatus::numerical_failure;
    double primal_residual = 0.0;  // max(0, max_i (a_i'z - b_i))
    double dual_residual = 0.0;    // ||Hz + g + A'lambda||_inf
    double complementarity = 0.0;  // max_i |lambda_i (a_i'z - b_i)|
    int iterations = 0;
    double objective = 0.0;
};

struct QpConfig {
    int max_iter = 0;  // 0 -> 50 * (n + m)
    double eps_q = 1e-6;
};

// Primal active-set solve. Starts from an internally computed feasible point
// (a phase-1 subproblem minimizing the worst constraint violation). Throws
// std::invalid_argument on dimension mismatch or an indefinite H. An
// infeasible constraint set surfaces as QpStatus::numerical_failure with a
// nonzero primal residual.
QpSolution solve_qp(const QpProblem& p, const QpConfig& cfg = {});

// Same, but starts at z0. If z0 violates some row by more than a small
// tolerance the solver falls back to phase 1.
QpSolution solve_qp_warm(const QpProblem& p, const Eigen::VectorXd& z0, const QpConfig& cfg = {});

}  // namespace pwqnet
