#include "fileprint/mlp.hpp"

#include <cmath>
#include <string>

#include "fileprint/errors.hpp"
#include "fileprint/rng.hpp"

namespace fileprint {

namespace {

double activate(Activation fn, double x) {
    switch (fn) {
        case Activation::Linear: return x;
        case Activation::Tanh: return std::tanh(x);
        case Activation::Logistic: return 1.0 / (1.0 + std::exp(-x));
    }
    return x;
}

// Derivative expressed through the activation's own output value.
double activate_derivative(Activation fn, double y) {
    switch (fn) {
        case Activation::Linear: return 1.0;
        case Activation::Tanh: return 1.0 - y * y;
        case Activation::Logistic: return y * (1.0 - y);
    }
    return 1.0;
}

void check_input_size(const MlpNetwork& net, std::size_t got) {
    if (got != net.input_size())
        throw DimensionMismatch("input has " + std::to_string(got) + " components, expected " +
                                std::to_string(net.input_size()));
}

void forward_into(const MlpNetwork& net, std::span<const double> x,
                  std::vector<std::vector<double>>& act) {
    act.resize(net.layers.size());
    act[0].assign(x.begin(), x.end());
    for (std::size_t l = 0; l + 1 < net.layers.size(); ++l) {
        const Matrix& w = net.weights[l];
        const Activation fn = net.layers[l + 1].activation;
        const std::vector<double>& in = act[l];
        std::vector<double>& out = act[l + 1];
        out.resize(w.rows());
        for (std::size_t o = 0; o < w.rows(); ++o) {
            const auto wr = w.row(o);
            double sum = net.biases[l][o];
            for (std::size_t i = 0; i < in.size(); ++i) sum += wr[i] * in[i];
            out[o] = activate(fn, sum);
        }
    }
}

// Error signals per layer for the squared-error loss; deltas[l] pairs with
// act[l]. Entry 0 is left empty (no parameters feed the input).
void compute_deltas(const MlpNetwork& net, const std::vector<std::vector<double>>& act,
                    std::span<const double> target, std::vector<std::vector<double>>& deltas) {
    const std::size_t last = net.layers.size() - 1;
    deltas.resize(net.layers.size());

    const std::vector<double>& out = act[last];
    deltas[last].resize(out.size());
    for (std::size_t j = 0; j < out.size(); ++j)
        deltas[last][j] =
            2.0 * (out[j] - target[j]) * activate_derivative(net.layers[last].activation, out[j]);

    for (std::size_t l = last; l-- > 1;) {
        const Matrix& w = net.weights[l];  // maps layer l to layer l+1
        const std::vector<double>& up = deltas[l + 1];
        std::vector<double>& down = deltas[l];
        down.assign(act[l].size(), 0.0);
        for (std::size_t o = 0; o < w.rows(); ++o) {
            const auto wr = w.row(o);
            const double d = up[o];
            for (std::size_t i = 0; i < down.size(); ++i) down[i] += d * wr[i];
        }
        const Activation fn = net.layers[l].activation;
        for (std::size_t i = 0; i < down.size(); ++i)
            down[i] *= activate_derivative(fn, act[l][i]);
    }
}

double dataset_mse(const MlpNetwork& net, const Matrix& inputs, const Matrix& targets,
                   std::vector<std::vector<double>>& act) {
    double total = 0.0;
    for (std::size_t r = 0; r < inputs.rows(); ++r) {
        forward_into(net, inputs.row(r), act);
        total += loss(act.back(), targets.row(r));
    }
    return total / static_cast<double>(inputs.rows());
}

}  // namespace

std::vector<double> MlpNetwork::output(std::span<const double> x) const {
    return forward(*this, x).back();
}

MlpNetwork init_network(const std::vector<LayerSpec>& specs, std::uint64_t seed) {
    if (specs.size() < 2)
        throw BadArchitecture("a network needs an input and an output layer");
    for (const LayerSpec& spec : specs)
        if (spec.size == 0) throw BadArchitecture("layer sizes must be positive");

    MlpNetwork net;
    net.layers = specs;
    net.layers[0].activation = Activation::Linear;  // input carries no activation

    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < specs.size(); ++l) {
        const std::size_t fan_in = specs[l].size;
        const std::size_t fan_out = specs[l + 1].size;
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        Matrix w(fan_out, fan_in);
        for (std::size_t o = 0; o < fan_out; ++o)
            for (std::size_t i = 0; i < fan_in; ++i) w(o, i) = rng.uniform(-bound, bound);
        net.weights.push_back(std::move(w));
        net.biases.emplace_back(fan_out, 0.0);
    }
    return net;
}

std::vector<std::vector<double>> forward(const MlpNetwork& net, std::span<const double> x) {
    check_input_size(net, x.size());
    std::vector<std::vector<double>> act;
    forward_into(net, x, act);
    return act;
}

double loss(std::span<const double> output, std::span<const double> target) {
    if (output.size() != target.size())
        throw DimensionMismatch("output has " + std::to_string(output.size()) +
                                " components, target has " + std::to_string(target.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i < output.size(); ++i) {
        const double diff = output[i] - target[i];
        sum += diff * diff;
    }
    return sum;
}

Gradients backprop_gradients(const MlpNetwork& net, std::span<const double> x,
                             std::span<const double> target) {
    check_input_size(net, x.size());
    if (target.size() != net.output_size())
        throw DimensionMismatch("target has " + std::to_string(target.size()) +
                                " components, expected " + std::to_string(net.output_size()));

    std::vector<std::vector<double>> act;
    std::vector<std::vector<double>> deltas;
    forward_into(net, x, act);
    compute_deltas(net, act, target, deltas);

    Gradients g;
    for (std::size_t l = 0; l + 1 < net.layers.size(); ++l) {
        const std::vector<double>& up = deltas[l + 1];
        const std::vector<double>& in = act[l];
        Matrix gw(up.size(), in.size());
        for (std::size_t o = 0; o < up.size(); ++o)
            for (std::size_t i = 0; i < in.size(); ++i) gw(o, i) = up[o] * in[i];
        g.weights.push_back(std::move(gw));
        g.biases.push_back(up);
    }
    return g;
}

TrainingReport train(MlpNetwork& net, const Matrix& inputs, const Matrix& targets,
                     const TrainingConfig& config) {
    if (inputs.rows() != targets.rows())
        throw DimensionMismatch("inputs have " + std::to_string(inputs.rows()) +
                                " rows, targets " + std::to_string(targets.rows()));
    if (inputs.rows() == 0) throw InsufficientSamples("training set is empty");
    check_input_size(net, inputs.cols());
    if (targets.cols() != net.output_size())
        throw DimensionMismatch("targets have " + std::to_string(targets.cols()) +
                                " columns, expected " + std::to_string(net.output_size()));

    std::vector<std::vector<double>> act;
    std::vector<std::vector<double>> deltas;
    std::vector<Matrix> wvel;
    std::vector<std::vector<double>> bvel;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        wvel.emplace_back(net.weights[l].rows(), net.weights[l].cols());
        bvel.emplace_back(net.biases[l].size(), 0.0);
    }

    Rng perturb_rng(splitmix64(config.seed + 1));
    TrainingReport report;
    std::size_t last_perturb_epoch = 0;

    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        const double mse = dataset_mse(net, inputs, targets, act);
        if (!std::isfinite(mse))
            throw NonFiniteLoss("MSE diverged at epoch " + std::to_string(epoch) +
                                "; lower the learning rate");
        report.mse_history.push_back(mse);
        report.epochs_run = epoch;
        if (mse <= config.mse_goal) break;
        if (epoch == config.max_epochs) break;  // a further pass would go unmeasured

        // Plateau rule: compare against the MSE plateau_window epochs back,
        // over a window clear of the previous perturbation.
        const std::size_t w = config.plateau_window;
        if (epoch > w && epoch - last_perturb_epoch > w) {
            const double ref = report.mse_history[epoch - 1 - w];
            const double rel = (ref - mse) / std::max(ref, 1e-300);
            if (rel < config.plateau_rel_improvement) {
                for (Matrix& wm : net.weights)
                    for (std::size_t o = 0; o < wm.rows(); ++o) {
                        const auto row = wm.row(o);
                        for (std::size_t i = 0; i < row.size(); ++i)
                            row[i] += perturb_rng.uniform(-config.perturb_magnitude,
                                                          config.perturb_magnitude);
                    }
                ++report.perturbations_applied;
                last_perturb_epoch = epoch;
            }
        }

        for (std::size_t r = 0; r < inputs.rows(); ++r) {
            forward_into(net, inputs.row(r), act);
            compute_deltas(net, act, targets.row(r), deltas);
            for (std::size_t l = 0; l < net.weights.size(); ++l) {
                Matrix& wm = net.weights[l];
                Matrix& vm = wvel[l];
                const std::vector<double>& up = deltas[l + 1];
                const std::vector<double>& in = act[l];
                for (std::size_t o = 0; o < wm.rows(); ++o) {
                    const double step = -config.learning_rate * up[o];
                    const auto wr = wm.row(o);
                    const auto vr = vm.row(o);
                    for (std::size_t i = 0; i < in.size(); ++i) {
                        vr[i] = config.momentum * vr[i] + step * in[i];
                        wr[i] += vr[i];
                    }
                    bvel[l][o] = config.momentum * bvel[l][o] + step;
                    net.biases[l][o] += bvel[l][o];
                }
            }
        }
    }

    report.final_mse = report.mse_history.back();
    return report;
}

std::vector<double> encode(const MlpNetwork& net, std::span<const double> x,
                           std::size_t bottleneck_layer) {
    if (bottleneck_layer >= net.layers.size())
        throw OutOfRange("layer " + std::to_string(bottleneck_layer) + " of " +
                         std::to_string(net.layers.size()));
    return forward(net, x)[bottleneck_layer];
}

}  // namespace fileprint
