#pragma once

#include <cstdint>
#include <vector>

#include "cdm/environment.hpp"
#include "cdm/mlp.hpp"
#include "cdm/quantizer.hpp"

namespace cdm {

/// Piecewise-constant approximation of a function: the stored values at the
/// codebook points, looked up through the codebook's nearest-index rule.
struct PiecewiseApprox {
    Codebook codebook;
    std::vector<double> values; // f(q_i) per codebook point
};

/// Stores f(q_i) for every codebook point (all points must lie inside the
/// environment domain).
PiecewiseApprox fit_piecewise(const FunctionHandle& f, const Environment& env,
                              const Codebook& cb);

/// values[nearest_index(cb, x)].
double predict(const PiecewiseApprox& pa, const Point& x);

/// Mean sigma-discrepancy between f and the piecewise prediction over the
/// centers of a grid_per_axis^dim grid on the environment domain.
double generalization_error(const PiecewiseApprox& pa, const FunctionHandle& f,
                            const Environment& env, int grid_per_axis, int threads = 1);

struct BaselineResult {
    MlpModel model;
    double gen_error = 0.0;
};

/// Learns one function from scratch: samples n_train input/value pairs,
/// trains a small tanh MLP on squared error with an 80/20 validation split
/// and early stopping, and evaluates the grid generalization error.
BaselineResult train_direct_baseline(const FunctionHandle& f, const Environment& env,
                                     int n_train, std::uint64_t seed, int grid_per_axis = 250,
                                     int n_hidden = 10, int max_iters = 500);

} // namespace cdm
