#include <doctest.h>

#include <cmath>

#include "pwqnet/qp.hpp"
#include "support/qp_enum_oracle.hpp"

using namespace pwqnet;
using pwqnet::testing::enumerate_qp_objective;
using pwqnet::testing::random_qp;

TEST_CASE("textbook single-constraint problem") {
    // min 1/2 z^2 s.t. z >= 1
    QpProblem p;
    p.H = Eigen::MatrixXd::Identity(1, 1);
    p.g = Eigen::VectorXd::Zero(1);
    p.A = Eigen::MatrixXd::Constant(1, 1, -1.0);
    p.b = Eigen::VectorXd::Constant(1, -1.0);
    const QpSolution s = solve_qp(p);
    REQUIRE(s.status == QpStatus::optimal);
    CHECK(s.z[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s.lambda[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s.primal_residual <= 1e-6);
    CHECK(s.dual_residual <= 1e-6);
    CHECK(s.complementarity <= 1e-6);
}

TEST_CASE("unconstrained minimum") {
    QpProblem p;
    p.H = Eigen::MatrixXd::Identity(2, 2);
    p.g = Eigen::VectorXd::Zero(2);
    p.A = Eigen::MatrixXd(0, 2);
    p.b = Eigen::VectorXd(0);
    const QpSolution s = solve_qp(p);
    REQUIRE(s.status == QpStatus::optimal);
    CHECK(s.z.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("structural rejections") {
    QpProblem p;
    p.H = Eigen::MatrixXd::Identity(2, 2);
    p.H(1, 1) = -1.0;  // indefinite
    p.g = Eigen::VectorXd::Zero(2);
    p.A = Eigen::MatrixXd(0, 2);
    p.b = Eigen::VectorXd(0);
    CHECK_THROWS_AS(solve_qp(p), std::invalid_argument);

    QpProblem bad;
    bad.H = Eigen::MatrixXd::Identity(2, 2);
    bad.g = Eigen::VectorXd::Zero(3);
    bad.A = Eigen::MatrixXd(0, 2);
    bad.b = Eigen::VectorXd(0);
    CHECK_THROWS_AS(solve_qp(bad), std::invalid_argument);
}

TEST_CASE("infeasible constraints reported as failure, not fake optimum") {
    // z <= -2 and z >= 2
    QpProblem p;
    p.H = Eigen::MatrixXd::Identity(1, 1);
    p.g = Eigen::VectorXd::Zero(1);
    p.A = Eigen::MatrixXd(2, 1);
    p.A << 1.0, -1.0;
    p.b = Eigen::VectorXd(2);
    p.b << -2.0, -2.0;
    const QpSolution s = solve_qp(p);
    CHECK(s.status == QpStatus::numerical_failure);
}

TEST_CASE("deterministic output") {
    Rng rng(1234);
    const auto inst = random_qp(rng, 6, 14);
    const QpSolution a = solve_qp(inst.problem);
    const QpSolution b = solve_qp(inst.problem);
    REQUIRE(a.z.size() == b.z.size());
    for (Eigen::Index i = 0; i < a.z.size(); ++i) CHECK(a.z[i] == b.z[i]);
    for (Eigen::Index i = 0; i < a.lambda.size(); ++i) CHECK(a.lambda[i] == b.lambda[i]);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("random problems match the enumeration oracle") {
    Rng rng(2024);
    int solved = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.next_u64() % 6);
        const Eigen::Index m = static_cast<Eigen::Index>(rng.next_u64() % 13);
        const auto inst = random_qp(rng, n, m);
        const auto oracle = enumerate_qp_objective(inst.problem);
        REQUIRE_MESSAGE(oracle.has_value(), "oracle failed on trial ", trial);

        // alternate warm and cold starts
        const QpSolution s = (trial % 2 == 0)
                                 ? solve_qp(inst.problem)
                                 : solve_qp_warm(inst.problem, inst.feasible_point);
        REQUIRE_MESSAGE(s.status == QpStatus::optimal, "trial ", trial);
        CHECK_MESSAGE(std::abs(s.objective - *oracle) <= 1e-6 * (1.0 + std::abs(*oracle)),
                      "trial ", trial, " objective ", s.objective, " oracle ", *oracle);
        CHECK((s.lambda.size() == 0 || s.lambda.minCoeff() >= -1e-6));
        CHECK(s.complementarity <= 1e-6 * (1.0 + std::abs(s.objective)));
        ++solved;
    }
    CHECK(solved == 60);
}

TEST_CASE("warm start on an active vertex still reaches the optimum") {
    // min 1/2 ||z||^2 - (1,1)'z s.t. z <= 0 componentwise; optimum at origin
    QpProblem p;
    p.H = Eigen::MatrixXd::Identity(2, 2);
    p.g = Eigen::VectorXd::Constant(2, -1.0);
    p.A = Eigen::MatrixXd::Identity(2, 2);
    p.b = Eigen::VectorXd::Zero(2);
    const QpSolution s = solve_qp_warm(p, Eigen::VectorXd::Zero(2));
    REQUIRE(s.status == QpStatus::optimal);
    CHECK(s.z.cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(s.lambda.minCoeff() >= -1e-9);
}
