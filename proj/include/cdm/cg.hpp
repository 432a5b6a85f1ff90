#pragma once

#include <functional>
#include <vector>

namespace cdm {

/// Objective callback: fills the gradient and returns the value.
using ValueAndGradFn = std::function<double(const std::vector<double>&, std::vector<double>&)>;
using ValidationFn = std::function<double(const std::vector<double>&)>;

struct CgOptions {
    int max_iters = 1000;
    int patience = 5;
    double armijo_c = 1e-4;
    int max_halvings = 60;
};

struct CgResult {
    std::vector<double> best_weights;
    double best_validation = 0.0;
    int iterations = 0;
    std::vector<double> train_trace; // objective after each accepted step
};

/// Polak-Ribiere nonlinear conjugate gradient with backtracking Armijo line
/// search. The direction restarts to steepest descent every n-weights
/// iterations and whenever the conjugate direction fails to descend. After
/// each iteration the validation objective is evaluated; the search stops
/// once it has not improved for `patience` consecutive iterations (or at
/// max_iters, or when the line search cannot make progress) and the weights
/// with the best validation value are returned.
///
/// Throws std::runtime_error naming the iteration if the objective becomes
/// non-finite.
CgResult minimize_cg(const ValueAndGradFn& value_and_grad, const ValidationFn& validation,
                     std::vector<double> w0, const CgOptions& opts);

} // namespace cdm
