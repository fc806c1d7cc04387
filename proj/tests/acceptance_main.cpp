// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pwqnet/cli.hpp"
#include "pwqnet/fixtures.hpp"
#include "pwqnet/json_io.hpp"
#include "pwqnet/lifting.hpp"
#include "pwqnet/net.hpp"
#include "pwqnet/verify1d.hpp"
#include "pwqnet/verifynd.hpp"
#include "support/qp_enum_oracle.hpp"

using namespace pwqnet;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& label, const std::string& detail) {
    std::printf("[%s] %2d. %s (%s)\n", pass ? "PASS" : "FAIL", criterion, label.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

double lift_deviation(const Pwa1D& a, const Pwa1D& b) {
    double dev = 0.0;
    for (std::size_t i = 0; i < a.piece_count(); ++i) {
        dev = std::max(dev, std::abs(a.pieces[i].alpha - b.pieces[i].alpha));
        dev = std::max(dev, std::abs(a.pieces[i].beta - b.pieces[i].beta));
    }
    return dev;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

const fs::path kFixtures = PWQNET_FIXTURES_DIR;
const fs::path kWork = "acceptance_tmp";

// ---------------------------------------------------------------------------

void criterion_1_algorithm1_values() {
    const Pwq1D f = fixtures::ovf_1d();
    const auto t0 = std::chrono::steady_clock::now();
    const Pwa1D h = algorithm1(f);
    const double elapsed = ms_since(t0);

    const fs::path out = kWork / "c1_lift.json";
    const int code = run_cli({"lift", "--input", (kFixtures / "pwq1d_example.json").string(),
                              "--method", "alg1", "--output", out.string()});
    double dev = 1e300;
    if (code == 0) {
        const Pwa1D from_cli = io::pwa1d_from_json(io::load_json(out));
        dev = std::max(lift_deviation(from_cli, fixtures::ovf_1d_lift_direct()),
                       lift_deviation(h, fixtures::ovf_1d_lift_direct()));
    }
    report(1, code == 0 && dev <= 1e-9 && elapsed < 10.0,
           "direct lift reproduces the reference coefficients",
           "max dev " + fmt(dev) + ", " + fmt(elapsed) + " ms");
}

void criterion_2_qp_values() {
    const Pwq1D f = fixtures::ovf_1d();
    const auto t0 = std::chrono::steady_clock::now();
    const LiftQpResult res = solve_lift_qp(f, CostSpec::sum_squares());
    const double elapsed = ms_since(t0);

    const double dev = lift_deviation(res.lift, fixtures::ovf_1d_lift_opt());
    const bool kkt_ok = res.qp.status == QpStatus::optimal && res.qp.primal_residual <= 1e-6 &&
                        res.qp.dual_residual <= 1e-6 && res.qp.complementarity <= 1e-6;

    const fs::path out = kWork / "c2_lift.json";
    const int code = run_cli({"lift", "--input", (kFixtures / "pwq1d_example.json").string(),
                              "--method", "qp", "--output", out.string()});
    double cli_dev = 1e300;
    if (code == 0) {
        cli_dev = lift_deviation(io::pwa1d_from_json(io::load_json(out)),
                                 fixtures::ovf_1d_lift_opt());
    }
    report(2, kkt_ok && dev <= 1e-6 && code == 0 && cli_dev <= 1e-6 && elapsed < 100.0,
           "minimum-norm lift reproduces the reference optimum with clean KKT",
           "max dev " + fmt(std::max(dev, cli_dev)) + ", KKT " +
               fmt(std::max({res.qp.primal_residual, res.qp.dual_residual,
                             res.qp.complementarity})) +
               ", " + fmt(elapsed) + " ms");
}

void criterion_3_maxout_rows() {
    const FeedForwardNet net =
        build_maxout_net(fixtures::ovf_1d(), fixtures::ovf_1d_lift_direct());
    const Layer& hidden = net.layers[0];
    double dev = 0.0;
    auto push = [&](double got, double want) { dev = std::max(dev, std::abs(got - want)); };
    push(hidden.W.at(0, 0), -20.0 / 3.0);
    push(hidden.W.at(0, 1), 11.0);
    push(hidden.b[0], -38.0 / 3.0);
    push(hidden.W.at(1, 0), 10.0 / 3.0);
    push(hidden.W.at(1, 1), 5.0);
    push(hidden.b[1], 10.0 / 3.0);
    push(hidden.W.at(2, 0), 40.0 / 3.0);
    push(hidden.W.at(2, 1), 11.0);
    push(hidden.b[2], -38.0 / 3.0);
    push(hidden.W.at(3, 0), -56.0 / 3.0);
    push(hidden.W.at(4, 0), 10.0 / 3.0);
    push(hidden.W.at(5, 0), 76.0 / 3.0);
    push(hidden.W.at(3, 1), 0.0);
    push(hidden.b[3], -56.0 / 3.0);
    push(hidden.b[4], 10.0 / 3.0);
    push(hidden.b[5], -56.0 / 3.0);
    report(3, dev <= 1e-9, "max-out weight table matches the lifted segments",
           "max dev " + fmt(dev));
}

void criterion_4_representation_exactness() {
    const Pwq1D f = fixtures::ovf_1d();
    const std::vector<FeedForwardNet> nets = {
        build_maxout_net(f, fixtures::ovf_1d_lift_direct()),
        build_maxout_net(f, fixtures::ovf_1d_lift_opt()),
        build_relu_net(f),
    };
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    const std::size_t n = 100000;
    for (const auto& net : nets) {
        for (std::size_t k = 0; k < n; ++k) {
            const double x = f.domain_lo() + (f.domain_hi() - f.domain_lo()) *
                                                 static_cast<double>(k) /
                                                 static_cast<double>(n - 1);
            worst = std::max(worst, std::abs(eval_net_1d(net, x) - eval_pwq(f, x)));
        }
    }
    const double elapsed = ms_since(t0);
    report(4, worst <= 1e-8 && elapsed < 1000.0,
           "max-out (both lifts) and relu nets match f on 1e5 uniform points",
           "max err " + fmt(worst) + ", " + fmt(elapsed) + " ms");
}

void criterion_5_negative_control() {
    const Pwq1D f = fixtures::ovf_1d();
    const VerificationReport rep = verify_max_representation_1d(f, Pwa1D::zero_like(f));
    const bool ok = rep.verdict == Verdict::counterexample && rep.witness &&
                    rep.witness->x[0] > -1.0 && rep.witness->x[0] < 1.0;
    report(5, ok, "zero lift is refuted with a witness inside (-1, 1)",
           rep.witness ? "witness x = " + fmt(rep.witness->x[0]) +
                             ", margin " + fmt(rep.witness->margin)
                       : "no witness");
}

struct PropertySuiteData {
    std::vector<Pwq1D> instances;
    std::vector<Pwa1D> direct_lifts;
};

PropertySuiteData g_suite;

void criterion_6_feasibility_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t feasible = 0, certified = 0;
    const std::size_t total = 1000;
    g_suite.instances.reserve(total);
    g_suite.direct_lifts.reserve(total);
    for (std::uint64_t seed = 0; seed < total; ++seed) {
        const Pwq1D f = generate_random_convex_pwq(seed, 1 + seed % 20, -2.0, 2.0, 3.0);
        const Pwa1D h = algorithm1(f);
        if (check_lift_conditions(f, h).feasible()) ++feasible;
        const PipelineResult pipe = verify_representation_pipeline(f);
        if (pipe.failed_stage.empty() && pipe.report.verdict == Verdict::certified) ++certified;
        g_suite.instances.push_back(f);
        g_suite.direct_lifts.push_back(h);
    }
    const double elapsed = ms_since(t0);
    report(6, feasible == total && certified == total && elapsed < 30000.0,
           "direct lift feasible and pipeline certified on 1000 random instances",
           std::to_string(feasible) + "/1000 feasible, " + std::to_string(certified) +
               "/1000 certified, " + fmt(elapsed) + " ms");
}

void criterion_7_qp_cost_ordering() {
    const CostSpec cost = CostSpec::sum_squares();
    std::size_t ordered = 0;
    std::size_t optimal = 0;
    const std::size_t total = g_suite.instances.size();
    for (std::size_t k = 0; k < total; ++k) {
        const LiftQpResult res = solve_lift_qp(g_suite.instances[k], cost);
        if (res.qp.status == QpStatus::optimal) ++optimal;
        if (res.cost_value <= evaluate_cost(cost, g_suite.direct_lifts[k]) + 1e-6) ++ordered;
    }
    report(7, total == 1000 && ordered == total && optimal == total,
           "optimized cost never exceeds the direct construction's cost",
           std::to_string(ordered) + "/" + std::to_string(total) + " ordered, " +
               std::to_string(optimal) + " optimal");
}

void criterion_8_qp_oracle() {
    Rng rng(0xacce97);
    std::size_t matched = 0;
    const std::size_t total = 200;
    double worst_gap = 0.0;
    for (std::size_t trial = 0; trial < total; ++trial) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.next_u64() % 12);
        const Eigen::Index m = static_cast<Eigen::Index>(rng.next_u64() % 31);
        const auto inst = pwqnet::testing::random_qp(rng, n, m);
        const QpSolution s = (trial % 2 == 0)
                                 ? solve_qp(inst.problem)
                                 : solve_qp_warm(inst.problem, inst.feasible_point);
        // the solver's active rows only seed the oracle's search order; the
        // oracle re-derives and re-checks everything itself
        std::vector<Eigen::Index> hint;
        for (Eigen::Index i = 0; i < s.lambda.size(); ++i) {
            if (s.lambda[i] != 0.0) hint.push_back(i);
        }
        const auto oracle = pwqnet::testing::enumerate_qp_objective(inst.problem, 1e-7, hint);
        if (!oracle) continue;
        const double gap = std::abs(s.objective - *oracle) / (1.0 + std::abs(*oracle));
        worst_gap = std::max(worst_gap, gap);
        if (s.status == QpStatus::optimal && gap <= 1e-6) ++matched;
    }
    report(8, matched == total, "solver matches the active-set enumeration oracle on 200 QPs",
           std::to_string(matched) + "/" + std::to_string(total) + ", worst gap " +
               fmt(worst_gap));
}

void criterion_9_2d_and_gamma() {
    SamplingConfig sampling;
    sampling.per_region = 2000;
    sampling.seed = 0;
    const VerificationReport rep =
        verify_max_representation_nd(fixtures::ovf_2d(), fixtures::ovf_2d_lift(), sampling);

    const Pwq1D f1 = fixtures::ovf_1d();
    SamplingConfig s1;
    s1.per_region = 200;
    s1.seed = 0;
    const PwqND f1_nd = to_nd(f1);
    const PwaND h1_nd = to_nd(algorithm1(f1));
    const GammaSearchResult gamma = gamma_lift_search(f1_nd, h1_nd, 0.01, 1.0, 100, s1);
    const bool small_gamma_fails = !gamma.profile.empty() &&
                                   gamma.profile.front().first <= 0.01 &&
                                   gamma.profile.front().second < 0.0;
    const GammaSearchResult at_one = gamma_lift_search(f1_nd, h1_nd, 1.0, 1.0, 1, s1);
    const bool ok = rep.verdict == Verdict::sampled_pass && gamma.gamma.has_value() &&
                    *gamma.gamma <= 1.0 && at_one.gamma.has_value() && small_gamma_fails;
    report(9, ok, "2D fixture passes sampling; gamma scan separates 1 from 0.01",
           "2D min margin " + fmt(rep.min_margin) + " on " + std::to_string(rep.samples_used) +
               " samples, gamma " + (gamma.gamma ? fmt(*gamma.gamma) : std::string("none")));
}

void criterion_10_repro_determinism() {
    const fs::path a = kWork / "repro_a";
    const fs::path b = kWork / "repro_b";
    fs::remove_all(a);
    fs::remove_all(b);
    const int ca = run_cli({"repro", "--example", "1d", "--outdir", a.string()});
    const int cb = run_cli({"repro", "--example", "1d", "--outdir", b.string()});

    auto read_file = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    bool identical = ca == 0 && cb == 0;
    std::size_t files = 0;
    if (identical) {
        for (const auto& entry : fs::directory_iterator(a)) {
            const fs::path other = b / entry.path().filename();
            if (!fs::exists(other) || read_file(entry.path()) != read_file(other)) {
                identical = false;
                break;
            }
            ++files;
        }
        identical = identical && files > 0;
    }
    report(10, identical, "two repro runs produce byte-identical output trees",
           std::to_string(files) + " files compared, exits " + std::to_string(ca) + "/" +
               std::to_string(cb));
}

}  // namespace

int main() {
    fs::create_directories(kWork);
    criterion_1_algorithm1_values();
    criterion_2_qp_values();
    criterion_3_maxout_rows();
    criterion_4_representation_exactness();
    criterion_5_negative_control();
    criterion_6_feasibility_suite();
    criterion_7_qp_cost_ordering();
    criterion_8_qp_oracle();
    criterion_9_2d_and_gamma();
    criterion_10_repro_determinism();
    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criteria FAILED\n", g_failures);
    }
    return g_failures;
}
