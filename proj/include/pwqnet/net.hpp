#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "pwqnet/errors.hpp"
#include "pwqnet/lifting.hpp"
#include "pwqnet/pwq1d.hpp"

namespace pwqnet {

enum class ActivationKind { relu, maxout };

// Dense weights stored row-major; tiny layers, no linear algebra needed.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // rows * cols

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    static DenseMatrix zeros(std::size_t r, std::size_t c) {
        return DenseMatrix{r, c, std::vector<double>(r * c, 0.0)};
    }
};

struct Layer {
    DenseMatrix W;  // (channels * width) x previous width
    std::vector<double> b;
    ActivationKind activation = ActivationKind::relu;
    std::size_t maxout_channels = 1;  // p; must be 1 for relu

    std::size_t width() const { return b.size() / maxout_channels; }
};

struct FeedForwardNet {
    std::size_t input_dim = 0;
    std::vector<Layer> layers;
    DenseMatrix output_W;
    std::vector<double> output_b;
};

// Structural invariants: maxout row counts divisible by p, chained layer
// dimensions, relu layers with p == 1. Throws std::invalid_argument with the
// offending layer index in the message.
void check_net_structure(const FeedForwardNet& net);

// Forward pass: affine, activation, ..., affine. Throws on input size mismatch.
std::vector<double> eval_net(const FeedForwardNet& net, const std::vector<double>& xi);

// (x, x^2) augmentation for scalar inputs.
inline std::array<double, 2> augment_1d(double x) { return {x, x * x}; }

// Convenience for scalar nets on the augmented input.
double eval_net_1d(const FeedForwardNet& net, double x);

// Two-neuron max-out net: one hidden layer of width 2 with s channels each.
// Channel rows of the first neuron hold the lifted quadratic segments
// (alpha_i + l_i, q_i | beta_i + c_i); the second neuron holds the lift
// (alpha_i, 0 | beta_i); the output computes first - second. Requires
// check_lift_conditions(f, h) to be feasible, else throws PreconditionError.
FeedForwardNet build_maxout_net(const Pwq1D& f, const Pwa1D& h, const ToleranceConfig& tol = {});

// One hidden ReLU layer of width 2s on the augmented input. Requires a
// structurally sound, continuous f; convexity is not needed for this
// construction.
FeedForwardNet build_relu_net(const Pwq1D& f, const ToleranceConfig& tol = {});

}  // namespace pwqnet
