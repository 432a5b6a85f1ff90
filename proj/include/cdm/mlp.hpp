#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cdm/point.hpp"

namespace cdm {

struct TripleSet; // estimator.hpp

/// One-hidden-layer perceptron: tanh hidden units, linear output.
/// Weights are stored flat, hidden rows first (inputs then bias per unit),
/// then the output row (hidden weights then bias). This is also the order of
/// the persistence format.
struct MlpModel {
    int n_inputs = 0;
    int n_hidden = 0;
    std::vector<double> weights;

    static int weight_count(int n_inputs, int n_hidden) {
        return n_hidden * (n_inputs + 1) + n_hidden + 1;
    }
    int weight_count() const { return weight_count(n_inputs, n_hidden); }

    double hidden_weight(int unit, int input) const { return weights[unit * (n_inputs + 1) + input]; }
    double hidden_bias(int unit) const { return weights[unit * (n_inputs + 1) + n_inputs]; }
    double output_weight(int unit) const { return weights[n_hidden * (n_inputs + 1) + unit]; }
    double output_bias() const { return weights[n_hidden * (n_inputs + 1) + n_hidden]; }
};

/// Zero-weight model of the given architecture.
MlpModel make_mlp(int n_inputs, int n_hidden);

/// Weights uniform in [-init_scale, init_scale], drawn from the given seed.
MlpModel init_mlp(int n_inputs, int n_hidden, std::uint64_t seed, double init_scale = 0.1);

/// Raw network output for the concatenated input vector.
double forward_vector(const MlpModel& model, std::span<const double> inputs);

/// Raw network output for the ordered pair (x, x').
double forward(const MlpModel& model, const Point& x, const Point& xp);

/// Order-invariant output: the mean of the two argument orderings.
double symmetric_output(const MlpModel& model, const Point& x, const Point& xp);

/// Mean squared error of the symmetrized output against the triple targets,
/// together with its analytic gradient (backpropagation through both
/// orderings of every pair).
std::pair<double, std::vector<double>> loss_and_gradient(const MlpModel& model,
                                                         const TripleSet& triples);

/// Plain regression objective: mean of (f(x_i) - y_i)^2 with its gradient.
std::pair<double, std::vector<double>> mse_loss_and_gradient(const MlpModel& model,
                                                             std::span<const Point> xs,
                                                             std::span<const double> ys);

struct TrainConfig {
    int max_iters = 2000;
    int patience = 5; // consecutive non-improving iterations before stopping
    std::uint64_t seed = 0;
    double init_scale = 0.1;
};

/// Trains on the symmetrized pairwise objective with conjugate gradient,
/// evaluating the validation error after every iteration and returning the
/// weights with the best validation error seen.
MlpModel train(const TripleSet& train_set, const TripleSet& val_set, const TrainConfig& cfg,
               int n_hidden = 20);

/// Plain-text persistence: header "mlp <n_inputs> <n_hidden>", then one
/// weight per line at full round-trip precision.
void save_mlp(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_mlp(const std::filesystem::path& path);

} // namespace cdm
