#include "pwqnet/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "pwqnet/fixtures.hpp"
#include "pwqnet/json_io.hpp"
#include "pwqnet/lifting.hpp"
#include "pwqnet/net.hpp"
#include "pwqnet/pwq1d.hpp"
#include "pwqnet/verify1d.hpp"
#include "pwqnet/verifynd.hpp"

namespace pwqnet {

namespace {

namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kMathFailure = 1;
constexpr int kStructural = 2;
constexpr int kSolverFailure = 3;
constexpr int kPrecondition = 4;

ToleranceConfig tolerances_from_env() {
    const char* env = std::getenv("PWQ_TOL_OVERRIDE");
    if (!env || !*env) return {};
    return io::tolerances_from_json(io::Json::parse(env));
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> sample_grid(const Pwq1D& f, std::size_t n) {
    const double lo = f.domain_lo();
    const double hi = f.domain_hi();
    std::vector<double> xs;
    xs.reserve(n + f.breakpoints.size());
    for (std::size_t k = 0; k < n; ++k) {
        xs.push_back(n == 1 ? lo
                            : lo + (hi - lo) * static_cast<double>(k) /
                                       static_cast<double>(n - 1));
    }
    xs.insert(xs.end(), f.breakpoints.begin(), f.breakpoints.end());
    std::sort(xs.begin(), xs.end());
    std::vector<double> out;
    for (double x : xs) {
        if (out.empty() || std::abs(x - out.back()) > 1e-12 * (1.0 + std::abs(x))) {
            out.push_back(x);
        }
    }
    return out;
}

void write_samples_csv(const fs::path& path, const Pwq1D& f, const Pwa1D* h,
                       const FeedForwardNet* net, std::size_t grid_n) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path.string());

    out << "x,phi";
    if (h) out << ",h,phi_plus_h";
    if (net) out << ",net";
    for (std::size_t j = 0; j < f.piece_count(); ++j) out << ",phi_ext_" << (j + 1);
    out << '\n';

    for (double x : sample_grid(f, grid_n)) {
        const double phi = eval_pwq(f, x);
        out << fmt17(x) << ',' << fmt17(phi);
        if (h) {
            const double hv = eval_pwa(*h, x);
            out << ',' << fmt17(hv) << ',' << fmt17(phi + hv);
        }
        if (net) out << ',' << fmt17(eval_net_1d(*net, x));
        for (const auto& seg : f.segments) out << ',' << fmt17(seg.value(x));
        out << '\n';
    }
    if (!out) throw std::invalid_argument("write failed for " + path.string());
}

struct NetCheck {
    double max_err = 0.0;
    double argmax = 0.0;
    std::size_t samples = 0;
};

NetCheck compare_net(const Pwq1D& f, const FeedForwardNet& net, std::size_t n) {
    NetCheck res;
    for (double x : sample_grid(f, n)) {
        const double err = std::abs(eval_net_1d(net, x) - eval_pwq(f, x));
        if (err > res.max_err) {
            res.max_err = err;
            res.argmax = x;
        }
        ++res.samples;
    }
    return res;
}

int cmd_validate(const std::string& input, const ToleranceConfig& tol) {
    const Pwq1D f = io::pwq1d_from_json(io::load_json(input));
    const ValidationResult res = validate_pwq(f, tol);
    if (res.ok()) {
        std::cout << "ok\n";
        return kOk;
    }
    const io::Json j = io::to_json(res);
    for (const auto& v : j.at("violations")) std::cout << v.dump() << '\n';
    return kMathFailure;
}

int cmd_lift(const std::string& input, const std::string& method, const std::string& cost_path,
             const std::string& output, const ToleranceConfig& tol) {
    const Pwq1D f = io::pwq1d_from_json(io::load_json(input));
    Pwa1D h;
    if (method == "alg1") {
        h = algorithm1(f, tol);
    } else {
        CostSpec cost;
        if (!cost_path.empty()) cost = io::cost_from_json(io::load_json(cost_path));
        const LiftQpResult res = solve_lift_qp(f, cost, tol);
        io::Json diag = io::to_json(res.qp);
        diag["cost"] = res.cost_value;
        std::cout << diag.dump() << '\n';
        if (res.qp.status != QpStatus::optimal) return kSolverFailure;
        h = res.lift;
    }
    const LiftConditionsReport rep = check_lift_conditions(f, h, tol);
    std::cout << io::to_json(rep).dump() << '\n';
    io::save_json(output, io::to_json(h));
    return rep.feasible() ? kOk : kMathFailure;
}

int cmd_build(const std::string& input, const std::string& lift_path, const std::string& arch,
              const std::string& output, const ToleranceConfig& tol) {
    const Pwq1D f = io::pwq1d_from_json(io::load_json(input));
    FeedForwardNet net;
    if (arch == "maxout") {
        if (lift_path.empty()) {
            throw std::invalid_argument("--arch maxout requires --lift");
        }
        const Pwa1D h = io::pwa1d_from_json(io::load_json(lift_path));
        net = build_maxout_net(f, h, tol);
    } else {
        net = build_relu_net(f, tol);
    }
    io::save_json(output, io::to_json(net));
    io::Json info;
    info["arch"] = arch;
    info["hidden_rows"] = net.layers.front().b.size();
    info["channels"] = net.layers.front().maxout_channels;
    std::cout << info.dump() << '\n';
    return kOk;
}

int cmd_verify(const std::string& input, const std::string& lift_path,
               const std::string& net_path, bool nd, std::size_t samples, std::uint64_t seed,
               const std::string& report_path, const ToleranceConfig& tol) {
    VerificationReport rep;
    if (nd) {
        if (lift_path.empty()) throw std::invalid_argument("--nd requires --lift");
        const PwqND f = io::pwqnd_from_json(io::load_json(input));
        const PwaND h = io::pwand_from_json(io::load_json(lift_path));
        SamplingConfig sampling;
        sampling.per_region = samples;
        sampling.seed = seed;
        rep = verify_max_representation_nd(f, h, sampling, tol);
    } else if (!net_path.empty()) {
        const Pwq1D f = io::pwq1d_from_json(io::load_json(input));
        const FeedForwardNet net = io::net_from_json(io::load_json(net_path));
        const NetCheck chk = compare_net(f, net, samples);
        rep.samples_used = chk.samples;
        rep.min_margin = -chk.max_err;
        const double ref = eval_pwq(f, chk.argmax);
        if (chk.max_err > ToleranceConfig::scaled(tol.eps_v, ref)) {
            rep.verdict = Verdict::counterexample;
            rep.witness = Witness{{chk.argmax}, -chk.max_err, 0, 0};
        } else {
            rep.verdict = Verdict::sampled_pass;
        }
        std::cout << "max_error " << fmt17(chk.max_err) << " over " << chk.samples
                  << " samples\n";
    } else {
        const Pwq1D f = io::pwq1d_from_json(io::load_json(input));
        Pwa1D h = Pwa1D::zero_like(f);
        if (!lift_path.empty()) h = io::pwa1d_from_json(io::load_json(lift_path));
        rep = verify_max_representation_1d(f, h, tol);
    }
    const io::Json j = io::to_json(rep);
    std::cout << j.dump() << '\n';
    if (!report_path.empty()) io::save_json(report_path, j);
    return rep.verdict == Verdict::counterexample ? kMathFailure : kOk;
}

int cmd_export_samples(const std::string& input, const std::string& lift_path,
                       const std::string& net_path, std::size_t grid_n,
                       const std::string& output) {
    const Pwq1D f = io::pwq1d_from_json(io::load_json(input));
    std::optional<Pwa1D> h;
    if (!lift_path.empty()) h = io::pwa1d_from_json(io::load_json(lift_path));
    std::optional<FeedForwardNet> net;
    if (!net_path.empty()) net = io::net_from_json(io::load_json(net_path));
    write_samples_csv(output, f, h ? &*h : nullptr, net ? &*net : nullptr, grid_n);
    return kOk;
}

struct ReproCheck {
    bool ok = true;
    void expect(bool cond, const std::string& label) {
        std::cout << (cond ? "[PASS] " : "[FAIL] ") << label << '\n';
        ok = ok && cond;
    }
};

double max_lift_deviation(const Pwa1D& a, const Pwa1D& b) {
    double dev = 0.0;
    for (std::size_t i = 0; i < a.piece_count(); ++i) {
        dev = std::max(dev, std::abs(a.pieces[i].alpha - b.pieces[i].alpha));
        dev = std::max(dev, std::abs(a.pieces[i].beta - b.pieces[i].beta));
    }
    return dev;
}

int cmd_repro_1d(const fs::path& outdir, const ToleranceConfig& tol) {
    const Pwq1D f = fixtures::ovf_1d();
    io::save_json(outdir / "pwq1d.json", io::to_json(f));

    ReproCheck chk;

    const Pwa1D h_direct = algorithm1(f, tol);
    io::save_json(outdir / "lift_direct.json", io::to_json(h_direct));
    const double dev_direct = max_lift_deviation(h_direct, fixtures::ovf_1d_lift_direct());
    chk.expect(dev_direct <= 1e-9,
               "direct lift matches reference coefficients (max dev " + fmt17(dev_direct) + ")");

    const LiftQpResult qp_res = solve_lift_qp(f, CostSpec::sum_squares(), tol);
    io::save_json(outdir / "lift_opt.json", io::to_json(qp_res.lift));
    const double dev_opt = max_lift_deviation(qp_res.lift, fixtures::ovf_1d_lift_opt());
    chk.expect(qp_res.qp.status == QpStatus::optimal && dev_opt <= 1e-6,
               "minimum-norm lift matches reference coefficients (max dev " + fmt17(dev_opt) + ")");
    chk.expect(qp_res.qp.primal_residual <= tol.eps_q && qp_res.qp.dual_residual <= tol.eps_q &&
                   qp_res.qp.complementarity <= tol.eps_q,
               "minimum-norm lift KKT residuals within tolerance");

    const FeedForwardNet net_direct = build_maxout_net(f, h_direct, tol);
    const FeedForwardNet net_opt = build_maxout_net(f, qp_res.lift, tol);
    const FeedForwardNet net_relu = build_relu_net(f, tol);
    io::save_json(outdir / "net_maxout_direct.json", io::to_json(net_direct));
    io::save_json(outdir / "net_maxout_opt.json", io::to_json(net_opt));
    io::save_json(outdir / "net_relu.json", io::to_json(net_relu));

    const double row_dev = std::max(
        {std::abs(net_direct.layers[0].W.at(0, 0) - (-20.0 / 3.0)),
         std::abs(net_direct.layers[0].W.at(0, 1) - 11.0),
         std::abs(net_direct.layers[0].b[0] - (-38.0 / 3.0)),
         std::abs(net_direct.layers[0].W.at(3, 0) - (-56.0 / 3.0)),
         std::abs(net_direct.layers[0].b[3] - (-56.0 / 3.0))});
    chk.expect(row_dev <= 1e-9,
               "max-out channel rows reproduce lifted segments (max dev " + fmt17(row_dev) + ")");

    for (const auto& [net, label] :
         {std::pair{&net_direct, "max-out net (direct lift)"},
          std::pair{&net_opt, "max-out net (minimum-norm lift)"},
          std::pair{&net_relu, "relu net"}}) {
        const NetCheck nc = compare_net(f, *net, 100000);
        chk.expect(nc.max_err <= 1e-8, std::string(label) + " matches f on " +
                                           std::to_string(nc.samples) + " points (max err " +
                                           fmt17(nc.max_err) + ")");
    }

    const VerificationReport rep_direct = verify_max_representation_1d(f, h_direct, tol);
    const VerificationReport rep_opt = verify_max_representation_1d(f, qp_res.lift, tol);
    io::save_json(outdir / "verify_direct.json", io::to_json(rep_direct));
    io::save_json(outdir / "verify_opt.json", io::to_json(rep_opt));
    chk.expect(rep_direct.verdict == Verdict::certified &&
                   rep_opt.verdict == Verdict::certified,
               "max representation certified for both lifts");

    const VerificationReport rep_zero = verify_max_representation_1d(f, Pwa1D::zero_like(f), tol);
    const bool witness_inside = rep_zero.verdict == Verdict::counterexample && rep_zero.witness &&
                                rep_zero.witness->x[0] > -1.0 && rep_zero.witness->x[0] < 1.0;
    chk.expect(witness_inside, std::string("zero lift refuted with witness inside (-1, 1)") +
                                   (rep_zero.witness
                                        ? " at x = " + fmt17(rep_zero.witness->x[0])
                                        : ""));

    write_samples_csv(outdir / "samples.csv", f, &h_direct, &net_direct, 1001);
    return chk.ok ? kOk : kMathFailure;
}

int cmd_repro_2d(const fs::path& outdir, std::uint64_t seed, const ToleranceConfig& tol) {
    std::cout << "note: the 2D partition is reconstructed from the lift's dominance cells;"
                 " it is not an exact reproduction of any reference geometry\n";
    const PwqND f2 = fixtures::ovf_2d();
    const PwaND h2 = fixtures::ovf_2d_lift();
    io::save_json(outdir / "pwq2d.json", io::to_json(f2));
    io::save_json(outdir / "lift2d.json", io::to_json(h2));

    ReproCheck chk;

    SamplingConfig sampling;
    sampling.per_region = 2000;
    sampling.seed = seed;
    const VerificationReport rep = verify_max_representation_nd(f2, h2, sampling, tol);
    io::save_json(outdir / "verify2d.json", io::to_json(rep));
    chk.expect(rep.verdict == Verdict::sampled_pass,
               "2D lifted dominance sampled_pass (min margin " + fmt17(rep.min_margin) + " over " +
                   std::to_string(rep.samples_used) + " samples)");

    // gamma scan on the 1D instance, where small gamma provably fails
    const Pwq1D f1 = fixtures::ovf_1d();
    const PwqND f1_nd = to_nd(f1);
    const PwaND h1_nd = to_nd(algorithm1(f1, tol));
    SamplingConfig s1;
    s1.per_region = 200;
    s1.seed = seed;
    const GammaSearchResult gamma = gamma_lift_search(f1_nd, h1_nd, 0.01, 1.0, 100, s1, tol);
    {
        std::ofstream out(outdir / "gamma_profile.csv");
        if (!out) throw std::invalid_argument("cannot write gamma_profile.csv");
        out << "gamma,min_margin\n";
        for (const auto& [g, m] : gamma.profile) out << fmt17(g) << ',' << fmt17(m) << '\n';
    }
    chk.expect(gamma.gamma.has_value(),
               gamma.gamma ? "gamma scan finds a feasible scaling (gamma = " +
                                 fmt17(*gamma.gamma) + ")"
                           : "gamma scan finds a feasible scaling");
    chk.expect(!gamma.profile.empty() && gamma.profile.front().second < 0.0,
               "smallest scaling gamma = 0.01 is infeasible");
    return chk.ok ? kOk : kMathFailure;
}

int cmd_repro(const std::string& example, const std::string& outdir_str, std::uint64_t seed,
              const ToleranceConfig& tol) {
    const fs::path outdir(outdir_str);
    std::error_code ec;
    fs::create_directories(outdir, ec);
    if (ec || !fs::is_directory(outdir)) {
        throw std::invalid_argument("cannot create output directory " + outdir_str);
    }
    if (example == "1d") return cmd_repro_1d(outdir, tol);
    return cmd_repro_2d(outdir, seed, tol);
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Exact shallow-network representations of convex piecewise-quadratic functions"};
    app.require_subcommand(1);

    std::string input, lift_path, net_path, cost_path, output, report_path;
    std::string method = "alg1", arch = "maxout", example = "1d", outdir;
    std::size_t samples = 0, grid_n = 1001;  // samples 0 -> per-mode default
    std::uint64_t seed = 0;
    bool nd = false;

    auto* validate = app.add_subcommand("validate", "check a PWQ function file");
    validate->add_option("--input", input, "PWQ JSON file")->required();

    auto* lift = app.add_subcommand("lift", "compute a compensating lift");
    lift->add_option("--input", input)->required();
    lift->add_option("--method", method)->check(CLI::IsMember({"alg1", "qp"}));
    lift->add_option("--cost", cost_path, "cost JSON (qp method)");
    lift->add_option("--output", output)->required();

    auto* build = app.add_subcommand("build", "build a network from a function (and lift)");
    build->add_option("--input", input)->required();
    build->add_option("--lift", lift_path);
    build->add_option("--arch", arch)->check(CLI::IsMember({"maxout", "relu"}));
    build->add_option("--output", output)->required();

    auto* verify = app.add_subcommand("verify", "verify a representation");
    verify->add_option("--input", input)->required();
    verify->add_option("--lift", lift_path);
    verify->add_option("--net", net_path);
    verify->add_flag("--nd", nd, "inputs use the n-dimensional schema");
    verify->add_option("--samples", samples);
    verify->add_option("--seed", seed);
    verify->add_option("--report", report_path, "write the report JSON here");

    auto* exports = app.add_subcommand("export-samples", "write evaluation samples as CSV");
    exports->add_option("--input", input)->required();
    exports->add_option("--lift", lift_path);
    exports->add_option("--net", net_path);
    exports->add_option("--grid", grid_n);
    exports->add_option("--output", output)->required();

    auto* repro = app.add_subcommand("repro", "reproduce the bundled examples end to end");
    repro->add_option("--example", example)->check(CLI::IsMember({"1d", "2d"}));
    repro->add_option("--outdir", outdir)->required();
    repro->add_option("--seed", seed);

    std::vector<const char*> argv;
    argv.push_back("pwqnet");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kStructural;
    }

    try {
        const ToleranceConfig tol = tolerances_from_env();
        if (validate->parsed()) return cmd_validate(input, tol);
        if (lift->parsed()) return cmd_lift(input, method, cost_path, output, tol);
        if (build->parsed()) return cmd_build(input, lift_path, arch, output, tol);
        if (verify->parsed()) {
            if (samples == 0) samples = nd ? 2000 : 100000;
            return cmd_verify(input, lift_path, net_path, nd, samples, seed, report_path, tol);
        }
        if (exports->parsed()) return cmd_export_samples(input, lift_path, net_path, grid_n, output);
        if (repro->parsed()) return cmd_repro(example, outdir, seed, tol);
    } catch (const PreconditionError& e) {
        std::cerr << "precondition failure: " << e.what() << '\n';
        return kPrecondition;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kStructural;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kStructural;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kStructural;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kStructural;
    }
    return kStructural;
}

}  // namespace pwqnet
