#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pwqnet/cli.hpp"
#include "pwqnet/fixtures.hpp"
#include "pwqnet/json_io.hpp"
#include "pwqnet/qp.hpp"
#include "pwqnet/rng.hpp"

using namespace pwqnet;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = PWQNET_FIXTURES_DIR;

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::path("cli_test_tmp") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("JSON round trips preserve values bit-exactly") {
    const Pwq1D f = fixtures::ovf_1d();
    const Pwq1D f2 = io::pwq1d_from_json(io::Json::parse(io::to_json(f).dump()));
    CHECK(f2.breakpoints == f.breakpoints);
    for (std::size_t i = 0; i < f.piece_count(); ++i) {
        CHECK(f2.segments[i].q == f.segments[i].q);
        CHECK(f2.segments[i].l == f.segments[i].l);
        CHECK(f2.segments[i].c == f.segments[i].c);
    }

    const Pwa1D h = fixtures::ovf_1d_lift_direct();
    const Pwa1D h2 = io::pwa1d_from_json(io::Json::parse(io::to_json(h).dump()));
    CHECK(h2.breakpoints == h.breakpoints);
    for (std::size_t i = 0; i < h.piece_count(); ++i) {
        CHECK(h2.pieces[i].alpha == h.pieces[i].alpha);
        CHECK(h2.pieces[i].beta == h.pieces[i].beta);
    }

    const PwqND fn = fixtures::ovf_2d();
    const PwqND fn2 = io::pwqnd_from_json(io::Json::parse(io::to_json(fn).dump()));
    REQUIRE(fn2.pieces.size() == fn.pieces.size());
    for (std::size_t i = 0; i < fn.pieces.size(); ++i) {
        CHECK((fn2.pieces[i].Q - fn.pieces[i].Q).cwiseAbs().maxCoeff() == 0.0);
        CHECK((fn2.regions[i].A - fn.regions[i].A).cwiseAbs().maxCoeff() == 0.0);
        REQUIRE(fn2.regions[i].interior_point.has_value());
    }
}

TEST_CASE("qp problems serialize for debugging") {
    QpProblem p;
    p.H = Eigen::MatrixXd::Identity(2, 2);
    p.g = Eigen::VectorXd::Constant(2, -0.125);
    p.A = Eigen::MatrixXd::Constant(1, 2, 1.0);
    p.b = Eigen::VectorXd::Constant(1, 3.0);
    const QpProblem q = io::qp_problem_from_json(io::Json::parse(io::to_json(p).dump()));
    CHECK((q.H - p.H).cwiseAbs().maxCoeff() == 0.0);
    CHECK((q.A - p.A).cwiseAbs().maxCoeff() == 0.0);
    CHECK(q.g == p.g);
    CHECK(q.b == p.b);
}

TEST_CASE("documented field order in serialized functions") {
    const std::string dumped = io::to_json(fixtures::ovf_1d()).dump();
    CHECK(dumped.find("\"breakpoints\"") < dumped.find("\"segments\""));
    const auto qpos = dumped.find("\"q\"");
    CHECK(qpos < dumped.find("\"l\""));
    CHECK(dumped.find("\"l\"") < dumped.find("\"c\""));
}

TEST_CASE("net export/import round trip, bit-exact evaluation") {
    const Pwq1D f = fixtures::ovf_1d();
    const FeedForwardNet net = build_maxout_net(f, fixtures::ovf_1d_lift_direct());
    const FeedForwardNet back = io::net_from_json(io::Json::parse(io::to_json(net).dump()));
    REQUIRE(back.layers.size() == 1);
    CHECK(back.layers[0].maxout_channels == 3);
    CHECK(back.layers[0].W.data == net.layers[0].W.data);
    CHECK(back.layers[0].b == net.layers[0].b);
    CHECK(back.output_W.data == net.output_W.data);

    Rng rng(77);
    for (int k = 0; k < 100; ++k) {
        const double x = rng.uniform(f.domain_lo(), f.domain_hi());
        CHECK(eval_net_1d(back, x) == eval_net_1d(net, x));
    }
}

TEST_CASE("schema violations carry a JSON path") {
    io::Json j = io::to_json(build_maxout_net(fixtures::ovf_1d(), fixtures::ovf_1d_lift_direct()));
    j["layers"][0]["activation"]["maxout"] = 4;  // 4 does not divide 6
    try {
        io::net_from_json(j);
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("layer 0") != std::string::npos);
    }

    io::Json missing = io::to_json(fixtures::ovf_1d());
    missing.erase("segments");
    try {
        io::pwq1d_from_json(missing);
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("/segments") != std::string::npos);
    }
}

TEST_CASE("shipped fixture files match the built-in instances") {
    const Pwq1D f = io::pwq1d_from_json(io::load_json(kFixtures / "pwq1d_example.json"));
    const Pwq1D ref = fixtures::ovf_1d();
    CHECK(f.breakpoints == ref.breakpoints);
    for (std::size_t i = 0; i < ref.piece_count(); ++i) {
        CHECK(f.segments[i].q == ref.segments[i].q);
        CHECK(f.segments[i].l == ref.segments[i].l);
        CHECK(f.segments[i].c == ref.segments[i].c);
    }
    const Pwa1D h17 = io::pwa1d_from_json(io::load_json(kFixtures / "lift_direct.json"));
    const Pwa1D ref17 = fixtures::ovf_1d_lift_direct();
    for (std::size_t i = 0; i < ref17.piece_count(); ++i) {
        CHECK(h17.pieces[i].alpha == ref17.pieces[i].alpha);
        CHECK(h17.pieces[i].beta == ref17.pieces[i].beta);
    }
    CHECK(validate_pwq(io::pwq1d_from_json(io::load_json(kFixtures / "single_segment.json"))).ok());
    CHECK_FALSE(validate_pwq(io::pwq1d_from_json(io::load_json(kFixtures / "nonconvex.json"))).ok());
}

TEST_CASE("cli validate") {
    CHECK(run_cli({"validate", "--input", (kFixtures / "pwq1d_example.json").string()}) == 0);
    CHECK(run_cli({"validate", "--input", (kFixtures / "nonconvex.json").string()}) == 1);

    const fs::path dir = temp_dir("truncated");
    std::ofstream(dir / "bad.json") << "{\"breakpoints\": [1, 2";
    CHECK(run_cli({"validate", "--input", (dir / "bad.json").string()}) == 2);
    CHECK(run_cli({"validate", "--input", (dir / "missing.json").string()}) == 2);
}

TEST_CASE("cli lift both methods") {
    const fs::path dir = temp_dir("lift");
    const std::string input = (kFixtures / "pwq1d_example.json").string();

    CHECK(run_cli({"lift", "--input", input, "--method", "alg1", "--output",
                   (dir / "h1.json").string()}) == 0);
    const Pwa1D h1 = io::pwa1d_from_json(io::load_json(dir / "h1.json"));
    const Pwa1D ref = fixtures::ovf_1d_lift_direct();
    for (std::size_t i = 0; i < ref.piece_count(); ++i) {
        CHECK(std::abs(h1.pieces[i].alpha - ref.pieces[i].alpha) <= 1e-9);
        CHECK(std::abs(h1.pieces[i].beta - ref.pieces[i].beta) <= 1e-9);
    }

    CHECK(run_cli({"lift", "--input", input, "--method", "qp", "--output",
                   (dir / "h2.json").string()}) == 0);
    const Pwa1D h2 = io::pwa1d_from_json(io::load_json(dir / "h2.json"));
    const Pwa1D ref_opt = fixtures::ovf_1d_lift_opt();
    for (std::size_t i = 0; i < ref_opt.piece_count(); ++i) {
        CHECK(std::abs(h2.pieces[i].alpha - ref_opt.pieces[i].alpha) <= 1e-6);
        CHECK(std::abs(h2.pieces[i].beta - ref_opt.pieces[i].beta) <= 1e-6);
    }

    CHECK(run_cli({"lift", "--input", (kFixtures / "single_segment.json").string(), "--method",
                   "alg1", "--output", (dir / "h3.json").string()}) == 0);
    const Pwa1D h3 = io::pwa1d_from_json(io::load_json(dir / "h3.json"));
    CHECK(h3.pieces[0].alpha == 0.0);
    CHECK(h3.pieces[0].beta == 0.0);
}

TEST_CASE("cli build and verify") {
    const fs::path dir = temp_dir("build");
    const std::string input = (kFixtures / "pwq1d_example.json").string();
    const std::string lift = (kFixtures / "lift_direct.json").string();

    CHECK(run_cli({"build", "--input", input, "--lift", lift, "--arch", "maxout", "--output",
                   (dir / "net.json").string()}) == 0);
    const FeedForwardNet net = io::net_from_json(io::load_json(dir / "net.json"));
    CHECK(net.layers[0].W.at(0, 0) == doctest::Approx(-20.0 / 3.0).epsilon(1e-12));
    CHECK(net.layers[0].W.at(0, 1) == doctest::Approx(11.0));

    CHECK(run_cli({"build", "--input", input, "--arch", "relu", "--output",
                   (dir / "relu.json").string()}) == 0);
    const FeedForwardNet relu = io::net_from_json(io::load_json(dir / "relu.json"));
    CHECK(relu.layers[0].b.size() == 6);

    // infeasible pair: zero lift
    io::save_json(dir / "zero.json", io::to_json(Pwa1D::zero_like(fixtures::ovf_1d())));
    CHECK(run_cli({"build", "--input", input, "--lift", (dir / "zero.json").string(), "--arch",
                   "maxout", "--output", (dir / "no.json").string()}) == 4);

    CHECK(run_cli({"verify", "--input", input, "--lift", lift}) == 0);
    const int zero_code = run_cli({"verify", "--input", input, "--lift",
                                   (dir / "zero.json").string(), "--report",
                                   (dir / "zero_report.json").string()});
    CHECK(zero_code == 1);
    const io::Json rep = io::load_json(dir / "zero_report.json");
    CHECK(rep.at("verdict") == "counterexample");
    const double wx = rep.at("witness").at("x")[0].get<double>();
    CHECK(std::abs(wx) < 1.0);

    CHECK(run_cli({"verify", "--input", input, "--net", (dir / "net.json").string(), "--samples",
                   "20000"}) == 0);
}

TEST_CASE("cli nd verify on the shipped 2D fixture") {
    CHECK(run_cli({"verify", "--nd", "--input", (kFixtures / "pwq2d_example.json").string(),
                   "--lift", (kFixtures / "lift2d.json").string(), "--samples", "300"}) == 0);
}

TEST_CASE("cli export-samples") {
    const fs::path dir = temp_dir("export");
    const std::string input = (kFixtures / "pwq1d_example.json").string();
    const std::string lift = (kFixtures / "lift_direct.json").string();
    CHECK(run_cli({"build", "--input", input, "--lift", lift, "--arch", "maxout", "--output",
                   (dir / "net.json").string()}) == 0);
    CHECK(run_cli({"export-samples", "--input", input, "--lift", lift, "--net",
                   (dir / "net.json").string(), "--grid", "1001", "--output",
                   (dir / "samples.csv").string()}) == 0);

    std::ifstream csv(dir / "samples.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "x,phi,h,phi_plus_h,net,phi_ext_1,phi_ext_2,phi_ext_3");
    std::size_t rows = 0;
    bool saw_origin = false;
    double ext2_at_15 = 0.0, ext3_at_15 = 0.0;
    double max_net_phi_gap = 0.0;
    for (std::string line; std::getline(csv, line);) {
        ++rows;
        std::istringstream ss(line);
        std::vector<double> cols;
        for (std::string cell; std::getline(ss, cell, ',');) cols.push_back(std::stod(cell));
        REQUIRE(cols.size() == 8);
        max_net_phi_gap = std::max(max_net_phi_gap, std::abs(cols[4] - cols[1]));
        if (cols[0] == 0.0) {
            saw_origin = true;
            CHECK(cols[1] == 0.0);
        }
        if (std::abs(cols[0] - 1.5) < 1e-12) {
            ext2_at_15 = cols[6];
            ext3_at_15 = cols[7];
        }
    }
    CHECK(rows >= 1001);
    CHECK(saw_origin);
    CHECK(max_net_phi_gap <= 1e-8);
    CHECK(ext2_at_15 == doctest::Approx(11.25));
    CHECK(ext3_at_15 == doctest::Approx(12.75));
}

TEST_CASE("cli repro is deterministic") {
    const fs::path a = temp_dir("repro_a");
    const fs::path b = temp_dir("repro_b");
    CHECK(run_cli({"repro", "--example", "1d", "--outdir", a.string()}) == 0);
    CHECK(run_cli({"repro", "--example", "1d", "--outdir", b.string()}) == 0);
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        const fs::path other = b / entry.path().filename();
        REQUIRE(fs::exists(other));
        CHECK_MESSAGE(read_file(entry.path()) == read_file(other), entry.path().filename());
        ++compared;
    }
    CHECK(compared >= 8);

    // a path under a regular file cannot be created
    std::ofstream(a / "blocker") << "x";
    CHECK(run_cli({"repro", "--example", "1d", "--outdir", (a / "blocker" / "out").string()}) == 2);
}

TEST_CASE("tolerance override from the environment is honored") {
    const std::string input = (kFixtures / "nonconvex.json").string();
    CHECK(run_cli({"validate", "--input", input}) == 1);
    setenv("PWQ_TOL_OVERRIDE", "{\"eps_c\": 10.0}", 1);
    CHECK(run_cli({"validate", "--input", input}) == 0);
    setenv("PWQ_TOL_OVERRIDE", "not json", 1);
    CHECK(run_cli({"validate", "--input", input}) == 2);
    unsetenv("PWQ_TOL_OVERRIDE");
}
