#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fileprint/linalg.hpp"

namespace fileprint {

enum class Activation { Linear, Tanh, Logistic };

struct LayerSpec {
    std::size_t size = 0;
    Activation activation = Activation::Linear;

    bool operator==(const LayerSpec&) const = default;
};

// Plain feed-forward network. layers[0] describes the input (its activation
// is unused); weights[l] has shape layers[l+1].size x layers[l].size.
struct MlpNetwork {
    std::vector<LayerSpec> layers;
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;

    std::size_t input_size() const { return layers.front().size; }
    std::size_t output_size() const { return layers.back().size; }

    // Final layer of forward().
    std::vector<double> output(std::span<const double> x) const;

    bool operator==(const MlpNetwork&) const = default;
};

struct Gradients {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
};

struct TrainingConfig {
    // Per-sample updates with momentum 0.9 overshoot on unit-scale data when
    // the rate is much above 0.02; 0.01 is stable across the library's uses.
    double learning_rate = 0.01;
    double momentum = 0.9;
    std::size_t max_epochs = 2000;
    double mse_goal = 1e-6;
    // Plateau rule: if the relative MSE improvement over the last
    // plateau_window epochs falls below plateau_rel_improvement, uniform
    // noise of the given magnitude is added to all weights and training
    // continues. Keeps descent from idling in a flat spot.
    std::size_t plateau_window = 10;
    double plateau_rel_improvement = 1e-6;
    double perturb_magnitude = 1e-3;
    std::uint64_t seed = 0;

    bool operator==(const TrainingConfig&) const = default;
};

struct TrainingReport {
    std::size_t epochs_run = 0;
    double final_mse = 0.0;
    std::vector<double> mse_history;  // one entry per epoch; last == final_mse
    std::size_t perturbations_applied = 0;
};

// Weights i.i.d. uniform on [-1/sqrt(fan_in), +1/sqrt(fan_in)] from a seeded
// generator, biases zero. Same (specs, seed) gives an identical network.
MlpNetwork init_network(const std::vector<LayerSpec>& specs, std::uint64_t seed);

// Per-layer activations; entry 0 is x itself, the last entry is the output.
std::vector<std::vector<double>> forward(const MlpNetwork& net, std::span<const double> x);

// Sum of squared component differences.
double loss(std::span<const double> output, std::span<const double> target);

// Exact gradients of loss(net(x), target) for every weight and bias.
Gradients backprop_gradients(const MlpNetwork& net, std::span<const double> x,
                             std::span<const double> target);

// Epoch-wise stochastic gradient descent with momentum, samples visited in
// row order. An epoch evaluates the dataset MSE (mean per-sample loss) and,
// unless the goal is met or the epoch budget is exhausted, runs one update
// pass, so final_mse always describes the returned weights. Deterministic
// given config.seed. Throws NonFiniteLoss if the MSE diverges.
TrainingReport train(MlpNetwork& net, const Matrix& inputs, const Matrix& targets,
                     const TrainingConfig& config);

// Activation of one designated layer, e.g. the bottleneck of a compressor.
std::vector<double> encode(const MlpNetwork& net, std::span<const double> x,
                           std::size_t bottleneck_layer);

}  // namespace fileprint
