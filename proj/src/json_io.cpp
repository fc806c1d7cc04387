#include "pwqnet/json_io.hpp"

#include <fstream>
#include <limits>
#include <stdexcept>

namespace pwqnet::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::invalid_argument(path + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected object");
    auto it = j.find(key);
    if (it == j.end()) fail(path + "/" + key, "missing field");
    return *it;
}

double number(const Json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected number");
    return j.get<double>();
}

std::vector<double> vector_of(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected array");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t k = 0; k < j.size(); ++k) {
        out.push_back(number(j[k], path + "/" + std::to_string(k)));
    }
    return out;
}

Json matrix_json(const Eigen::MatrixXd& M) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_of(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected non-empty array of rows");
    const std::size_t rows = j.size();
    std::vector<double> first = vector_of(j[0], path + "/0");
    Eigen::MatrixXd M(rows, first.size());
    for (std::size_t c = 0; c < first.size(); ++c) M(0, static_cast<Eigen::Index>(c)) = first[c];
    for (std::size_t r = 1; r < rows; ++r) {
        std::vector<double> row = vector_of(j[r], path + "/" + std::to_string(r));
        if (row.size() != first.size()) fail(path + "/" + std::to_string(r), "ragged matrix");
        for (std::size_t c = 0; c < row.size(); ++c) {
            M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
        }
    }
    return M;
}

Eigen::VectorXd eigen_vector_of(const Json& j, const std::string& path) {
    const std::vector<double> v = vector_of(j, path);
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Json vector_json(const Eigen::VectorXd& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Json dense_json(const DenseMatrix& M) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < M.rows; ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < M.cols; ++c) row.push_back(M.at(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

DenseMatrix dense_of(const Json& j, const std::string& path) {
    const Eigen::MatrixXd M = matrix_of(j, path);
    DenseMatrix out = DenseMatrix::zeros(static_cast<std::size_t>(M.rows()),
                                         static_cast<std::size_t>(M.cols()));
    for (Eigen::Index r = 0; r < M.rows(); ++r)
        for (Eigen::Index c = 0; c < M.cols(); ++c)
            out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = M(r, c);
    return out;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::certified: return "certified";
        case Verdict::sampled_pass: return "sampled_pass";
        case Verdict::counterexample: return "counterexample";
    }
    return "?";
}

const char* family_name(ConditionFamily f) {
    switch (f) {
        case ConditionFamily::continuity_12a: return "12a";
        case ConditionFamily::convexity_12b: return "12b";
        case ConditionFamily::left_13a: return "13a-left";
        case ConditionFamily::left_13b: return "13b-left";
        case ConditionFamily::right_13a: return "13a-right";
        case ConditionFamily::right_13b: return "13b-right";
    }
    return "?";
}

const char* violation_kind_name(ViolationKind k) {
    switch (k) {
        case ViolationKind::structure: return "structure";
        case ViolationKind::negative_curvature: return "negative_curvature";
        case ViolationKind::continuity: return "continuity";
        case ViolationKind::slope_monotonicity: return "slope_monotonicity";
    }
    return "?";
}

}  // namespace

Json to_json(const Pwq1D& f) {
    Json j;
    j["breakpoints"] = f.breakpoints;
    Json segs = Json::array();
    for (const auto& s : f.segments) {
        Json seg;
        seg["q"] = s.q;
        seg["l"] = s.l;
        seg["c"] = s.c;
        segs.push_back(std::move(seg));
    }
    j["segments"] = std::move(segs);
    return j;
}

Pwq1D pwq1d_from_json(const Json& j) {
    Pwq1D f;
    f.breakpoints = vector_of(field(j, "breakpoints", ""), "/breakpoints");
    const Json& segs = field(j, "segments", "");
    if (!segs.is_array()) fail("/segments", "expected array");
    for (std::size_t k = 0; k < segs.size(); ++k) {
        const std::string path = "/segments/" + std::to_string(k);
        f.segments.push_back({number(field(segs[k], "q", path), path + "/q"),
                              number(field(segs[k], "l", path), path + "/l"),
                              number(field(segs[k], "c", path), path + "/c")});
    }
    return f;
}

Json to_json(const Pwa1D& h) {
    Json j;
    j["breakpoints"] = h.breakpoints;
    Json pieces = Json::array();
    for (const auto& p : h.pieces) {
        Json piece;
        piece["alpha"] = p.alpha;
        piece["beta"] = p.beta;
        pieces.push_back(std::move(piece));
    }
    j["pieces"] = std::move(pieces);
    return j;
}

Pwa1D pwa1d_from_json(const Json& j) {
    Pwa1D h;
    h.breakpoints = vector_of(field(j, "breakpoints", ""), "/breakpoints");
    const Json& pieces = field(j, "pieces", "");
    if (!pieces.is_array()) fail("/pieces", "expected array");
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const std::string path = "/pieces/" + std::to_string(k);
        h.pieces.push_back({number(field(pieces[k], "alpha", path), path + "/alpha"),
                            number(field(pieces[k], "beta", path), path + "/beta")});
    }
    return h;
}

Json to_json(const ToleranceConfig& tol) {
    Json j;
    j["eps_c"] = tol.eps_c;
    j["eps_v"] = tol.eps_v;
    j["eps_q"] = tol.eps_q;
    return j;
}

ToleranceConfig tolerances_from_json(const Json& j) {
    ToleranceConfig tol;
    if (j.contains("eps_c")) tol.eps_c = number(j.at("eps_c"), "/eps_c");
    if (j.contains("eps_v")) tol.eps_v = number(j.at("eps_v"), "/eps_v");
    if (j.contains("eps_q")) tol.eps_q = number(j.at("eps_q"), "/eps_q");
    tol.check();
    return tol;
}

Json to_json(const CostSpec& cost) {
    Json j;
    if (cost.kind == CostSpec::Kind::sum_squares) {
        j["kind"] = "sum_squares";
    } else {
        j["kind"] = "quadratic";
        j["H"] = matrix_json(cost.H);
        j["g"] = vector_json(cost.g);
    }
    return j;
}

CostSpec cost_from_json(const Json& j) {
    CostSpec cost;
    const Json& kind = field(j, "kind", "");
    if (!kind.is_string()) fail("/kind", "expected string");
    const std::string name = kind.get<std::string>();
    if (name == "sum_squares") {
        cost.kind = CostSpec::Kind::sum_squares;
    } else if (name == "quadratic") {
        cost.kind = CostSpec::Kind::quadratic;
        cost.H = matrix_of(field(j, "H", ""), "/H");
        cost.g = eigen_vector_of(field(j, "g", ""), "/g");
    } else {
        fail("/kind", "unknown cost kind '" + name + "'");
    }
    return cost;
}

Json to_json(const FeedForwardNet& net) {
    Json j;
    Json layers = Json::array();
    for (const auto& layer : net.layers) {
        Json lj;
        lj["W"] = dense_json(layer.W);
        lj["b"] = layer.b;
        if (layer.activation == ActivationKind::relu) {
            lj["activation"] = "relu";
        } else {
            lj["activation"] = Json{{"maxout", layer.maxout_channels}};
        }
        layers.push_back(std::move(lj));
    }
    j["layers"] = std::move(layers);
    Json out;
    out["W"] = dense_json(net.output_W);
    out["b"] = net.output_b;
    j["output"] = std::move(out);
    return j;
}

FeedForwardNet net_from_json(const Json& j) {
    FeedForwardNet net;
    const Json& layers = field(j, "layers", "");
    if (!layers.is_array()) fail("/layers", "expected array");
    for (std::size_t k = 0; k < layers.size(); ++k) {
        const std::string path = "/layers/" + std::to_string(k);
        Layer layer;
        layer.W = dense_of(field(layers[k], "W", path), path + "/W");
        layer.b = vector_of(field(layers[k], "b", path), path + "/b");
        const Json& act = field(layers[k], "activation", path);
        if (act.is_string() && act.get<std::string>() == "relu") {
            layer.activation = ActivationKind::relu;
            layer.maxout_channels = 1;
        } else if (act.is_object() && act.contains("maxout")) {
            layer.activation = ActivationKind::maxout;
            const Json& p = act.at("maxout");
            if (!p.is_number_integer() || p.get<long long>() <= 0) {
                fail(path + "/activation/maxout", "expected positive integer");
            }
            layer.maxout_channels = p.get<std::size_t>();
        } else {
            fail(path + "/activation", "expected \"relu\" or {\"maxout\": p}");
        }
        net.layers.push_back(std::move(layer));
    }
    const Json& out = field(j, "output", "");
    net.output_W = dense_of(field(out, "W", "/output"), "/output/W");
    net.output_b = vector_of(field(out, "b", "/output"), "/output/b");
    net.input_dim = net.layers.empty() ? net.output_W.cols : net.layers.front().W.cols;
    try {
        check_net_structure(net);
    } catch (const std::invalid_argument& e) {
        fail("/layers", e.what());
    }
    return net;
}

Json to_json(const PwqND& f) {
    Json j;
    Json pieces = Json::array();
    for (const auto& p : f.pieces) {
        Json pj;
        pj["Q"] = matrix_json(p.Q);
        pj["l"] = vector_json(p.l);
        pj["c"] = p.c;
        pieces.push_back(std::move(pj));
    }
    j["pieces"] = std::move(pieces);
    Json regions = Json::array();
    for (const auto& r : f.regions) {
        Json rj;
        rj["A"] = matrix_json(r.A);
        rj["b"] = vector_json(r.b);
        if (r.interior_point) rj["interior_point"] = vector_json(*r.interior_point);
        regions.push_back(std::move(rj));
    }
    j["regions"] = std::move(regions);
    return j;
}

PwqND pwqnd_from_json(const Json& j) {
    PwqND f;
    const Json& pieces = field(j, "pieces", "");
    if (!pieces.is_array()) fail("/pieces", "expected array");
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const std::string path = "/pieces/" + std::to_string(k);
        QuadPieceND p;
        p.Q = matrix_of(field(pieces[k], "Q", path), path + "/Q");
        p.l = eigen_vector_of(field(pieces[k], "l", path), path + "/l");
        p.c = number(field(pieces[k], "c", path), path + "/c");
        f.pieces.push_back(std::move(p));
    }
    const Json& regions = field(j, "regions", "");
    if (!regions.is_array()) fail("/regions", "expected array");
    for (std::size_t k = 0; k < regions.size(); ++k) {
        const std::string path = "/regions/" + std::to_string(k);
        PolyRegion r;
        r.A = matrix_of(field(regions[k], "A", path), path + "/A");
        r.b = eigen_vector_of(field(regions[k], "b", path), path + "/b");
        if (regions[k].contains("interior_point")) {
            r.interior_point =
                eigen_vector_of(regions[k].at("interior_point"), path + "/interior_point");
        }
        f.regions.push_back(std::move(r));
    }
    return f;
}

Json to_json(const PwaND& h) {
    Json j;
    Json pieces = Json::array();
    for (const auto& p : h.pieces) {
        Json pj;
        pj["a"] = vector_json(p.a);
        pj["d"] = p.d;
        pieces.push_back(std::move(pj));
    }
    j["pieces"] = std::move(pieces);
    return j;
}

PwaND pwand_from_json(const Json& j) {
    PwaND h;
    const Json& pieces = field(j, "pieces", "");
    if (!pieces.is_array()) fail("/pieces", "expected array");
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const std::string path = "/pieces/" + std::to_string(k);
        AffinePieceND p;
        p.a = eigen_vector_of(field(pieces[k], "a", path), path + "/a");
        p.d = number(field(pieces[k], "d", path), path + "/d");
        h.pieces.push_back(std::move(p));
    }
    return h;
}

Json to_json(const VerificationReport& rep) {
    Json j;
    j["verdict"] = verdict_name(rep.verdict);
    if (rep.witness) {
        Json w;
        w["x"] = rep.witness->x;
        w["margin"] = rep.witness->margin;
        w["piece_i"] = rep.witness->piece_i;
        w["piece_j"] = rep.witness->piece_j;
        j["witness"] = std::move(w);
    } else {
        j["witness"] = nullptr;
    }
    j["samples_used"] = rep.samples_used;
    j["min_margin"] = rep.min_margin;
    return j;
}

Json to_json(const LiftConditionsReport& rep) {
    Json j;
    j["feasible"] = rep.feasible();
    Json v = Json::array();
    for (const auto& viol : rep.violations) {
        Json vj;
        vj["family"] = family_name(viol.family);
        vj["i"] = viol.i;
        vj["j"] = viol.j;
        vj["slack"] = viol.slack;
        v.push_back(std::move(vj));
    }
    j["violations"] = std::move(v);
    return j;
}

Json to_json(const ValidationResult& res) {
    Json j;
    j["ok"] = res.ok();
    Json v = Json::array();
    for (const auto& viol : res.violations) {
        Json vj;
        vj["kind"] = violation_kind_name(viol.kind);
        vj["index"] = viol.index;
        vj["magnitude"] = viol.magnitude;
        vj["detail"] = viol.detail;
        v.push_back(std::move(vj));
    }
    j["violations"] = std::move(v);
    return j;
}

Json to_json(const QpSolution& sol) {
    Json j;
    switch (sol.status) {
        case QpStatus::optimal: j["status"] = "optimal"; break;
        case QpStatus::max_iter: j["status"] = "max_iter"; break;
        case QpStatus::numerical_failure: j["status"] = "numerical_failure"; break;
    }
    j["objective"] = sol.objective;
    j["primal_residual"] = sol.primal_residual;
    j["dual_residual"] = sol.dual_residual;
    j["complementarity"] = sol.complementarity;
    j["iterations"] = sol.iterations;
    return j;
}

Json to_json(const QpProblem& p) {
    Json j;
    j["H"] = matrix_json(p.H);
    j["g"] = vector_json(p.g);
    j["A"] = p.A.rows() > 0 ? matrix_json(p.A) : Json::array();
    j["b"] = vector_json(p.b);
    return j;
}

QpProblem qp_problem_from_json(const Json& j) {
    QpProblem p;
    p.H = matrix_of(field(j, "H", ""), "/H");
    p.g = eigen_vector_of(field(j, "g", ""), "/g");
    const Json& a = field(j, "A", "");
    if (a.is_array() && a.empty()) {
        p.A = Eigen::MatrixXd(0, p.H.cols());
        p.b = Eigen::VectorXd(0);
    } else {
        p.A = matrix_of(a, "/A");
        p.b = eigen_vector_of(field(j, "b", ""), "/b");
    }
    return p;
}

Json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path.string());
    Json j;
    in >> j;
    return j;
}

void save_json(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw std::invalid_argument("write failed for " + path.string());
}

}  // namespace pwqnet::io
