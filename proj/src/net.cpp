#include "pwqnet/net.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pwqnet {

namespace {

void affine(const DenseMatrix& W, const std::vector<double>& b, const std::vector<double>& y,
            std::vector<double>& out) {
    out.resize(W.rows);
    for (std::size_t r = 0; r < W.rows; ++r) {
        double acc = b[r];
        for (std::size_t c = 0; c < W.cols; ++c) acc += W.at(r, c) * y[c];
        out[r] = acc;
    }
}

}  // namespace

void check_net_structure(const FeedForwardNet& net) {
    std::size_t prev = net.input_dim;
    for (std::size_t li = 0; li < net.layers.size(); ++li) {
        const Layer& layer = net.layers[li];
        const std::string where = "layer " + std::to_string(li);
        if (layer.W.data.size() != layer.W.rows * layer.W.cols || layer.W.rows != layer.b.size()) {
            throw std::invalid_argument(where + ": weight/bias shape mismatch");
        }
        if (layer.W.cols != prev) {
            throw std::invalid_argument(where + ": expects input width " +
                                        std::to_string(layer.W.cols) + ", got " +
                                        std::to_string(prev));
        }
        if (layer.activation == ActivationKind::relu) {
            if (layer.maxout_channels != 1) {
                throw std::invalid_argument(where + ": relu layers must have p == 1");
            }
        } else {
            if (layer.maxout_channels == 0 || layer.W.rows % layer.maxout_channels != 0) {
                throw std::invalid_argument(where + ": maxout channels " +
                                            std::to_string(layer.maxout_channels) +
                                            " do not divide " + std::to_string(layer.W.rows) +
                                            " preactivation rows");
            }
        }
        prev = layer.width();
    }
    if (net.output_W.data.size() != net.output_W.rows * net.output_W.cols ||
        net.output_W.rows != net.output_b.size()) {
        throw std::invalid_argument("output layer: weight/bias shape mismatch");
    }
    if (net.output_W.cols != prev) {
        throw std::invalid_argument("output layer: expects input width " +
                                    std::to_string(net.output_W.cols) + ", got " +
                                    std::to_string(prev));
    }
}

std::vector<double> eval_net(const FeedForwardNet& net, const std::vector<double>& xi) {
    if (xi.size() != net.input_dim) {
        throw std::invalid_argument("eval_net: input size " + std::to_string(xi.size()) +
                                    ", expected " + std::to_string(net.input_dim));
    }
    std::vector<double> y = xi;
    std::vector<double> z;
    for (const Layer& layer : net.layers) {
        affine(layer.W, layer.b, y, z);
        if (layer.activation == ActivationKind::relu) {
            y.resize(z.size());
            for (std::size_t r = 0; r < z.size(); ++r) y[r] = std::max(0.0, z[r]);
        } else {
            const std::size_t p = layer.maxout_channels;
            const std::size_t w = z.size() / p;
            y.resize(w);
            for (std::size_t k = 0; k < w; ++k) {
                double best = z[k * p];
                for (std::size_t c = 1; c < p; ++c) best = std::max(best, z[k * p + c]);
                y[k] = best;
            }
        }
    }
    affine(net.output_W, net.output_b, y, z);
    return z;
}

double eval_net_1d(const FeedForwardNet& net, double x) {
    const auto xi = augment_1d(x);
    return eval_net(net, {xi[0], xi[1]})[0];
}

FeedForwardNet build_maxout_net(const Pwq1D& f, const Pwa1D& h, const ToleranceConfig& tol) {
    const LiftConditionsReport rep = check_lift_conditions(f, h, tol);
    if (!rep.feasible()) {
        throw PreconditionError("build_maxout_net: lift conditions infeasible (" +
                                std::to_string(rep.violations.size()) + " violations)");
    }
    const std::size_t s = f.piece_count();

    FeedForwardNet net;
    net.input_dim = 2;
    Layer hidden;
    hidden.activation = ActivationKind::maxout;
    hidden.maxout_channels = s;
    hidden.W = DenseMatrix::zeros(2 * s, 2);
    hidden.b.assign(2 * s, 0.0);
    for (std::size_t i = 0; i < s; ++i) {
        hidden.W.at(i, 0) = h.pieces[i].alpha + f.segments[i].l;
        hidden.W.at(i, 1) = f.segments[i].q;
        hidden.b[i] = h.pieces[i].beta + f.segments[i].c;
        hidden.W.at(s + i, 0) = h.pieces[i].alpha;
        hidden.W.at(s + i, 1) = 0.0;
        hidden.b[s + i] = h.pieces[i].beta;
    }
    net.layers.push_back(std::move(hidden));
    net.output_W = DenseMatrix{1, 2, {1.0, -1.0}};
    net.output_b = {0.0};
    check_net_structure(net);
    return net;
}

FeedForwardNet build_relu_net(const Pwq1D& f, const ToleranceConfig& tol) {
    const ValidationResult v = validate_pwq(f, tol);
    for (const Violation& viol : v.violations) {
        // convexity is not needed here; structure and continuity are
        if (viol.kind == ViolationKind::structure || viol.kind == ViolationKind::continuity) {
            throw PreconditionError("build_relu_net: " + viol.detail);
        }
    }
    const std::size_t s = f.piece_count();
    const std::vector<double>& bp = f.breakpoints;

    FeedForwardNet net;
    net.input_dim = 2;
    Layer hidden;
    hidden.activation = ActivationKind::relu;
    hidden.maxout_channels = 1;
    hidden.W = DenseMatrix::zeros(2 * s, 2);
    hidden.b.assign(2 * s, 0.0);
    // rows 0..s-1: bump of segment i, positive exactly inside [lo_i, hi_i]
    for (std::size_t i = 0; i < s; ++i) {
        hidden.W.at(i, 0) = bp[i] + bp[i + 1];
        hidden.W.at(i, 1) = -1.0;
        hidden.b[i] = -bp[i] * bp[i + 1];
    }
    // row s: downward hinge active left of the first interior breakpoint
    hidden.W.at(s, 0) = -1.0;
    hidden.b[s] = bp[1];
    // rows s+1..2s-1: upward hinges at the interior breakpoints
    for (std::size_t k = 1; k < s; ++k) {
        hidden.W.at(s + k, 0) = 1.0;
        hidden.b[s + k] = -bp[k];
    }
    net.layers.push_back(std::move(hidden));

    std::vector<double> kappa(s);
    for (std::size_t i = 0; i < s; ++i) {
        kappa[i] = f.segments[i].l + f.segments[i].q * (bp[i] + bp[i + 1]);
    }
    net.output_W = DenseMatrix::zeros(1, 2 * s);
    for (std::size_t i = 0; i < s; ++i) net.output_W.at(0, i) = -f.segments[i].q;
    net.output_W.at(0, s) = -kappa[0];
    for (std::size_t k = 1; k < s; ++k) {
        net.output_W.at(0, s + k) = (k == 1) ? kappa[1] : kappa[k] - kappa[k - 1];
    }
    net.output_b = {f.segments[0].value(bp[1])};
    check_net_structure(net);
    return net;
}

}  // namespace pwqnet
