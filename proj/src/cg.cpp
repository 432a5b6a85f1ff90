#include "cdm/cg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cdm {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

CgResult minimize_cg(const ValueAndGradFn& value_and_grad, const ValidationFn& validation,
                     std::vector<double> w0, const CgOptions& opts) {
    const std::size_t n = w0.size();
    std::vector<double> w = std::move(w0);
    std::vector<double> grad(n), grad_prev(n), dir(n), trial(n);

    double f = value_and_grad(w, grad);
    if (!std::isfinite(f)) throw std::runtime_error("cg: non-finite objective at iteration 0");

    CgResult res;
    res.best_weights = w;
    res.best_validation = validation(w);
    int stale = 0;

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        if (iter == 0) {
            for (std::size_t i = 0; i < n; ++i) dir[i] = -grad[i];
        } else {
            // Polak-Ribiere, restarted periodically and on non-descent
            double denom = dot(grad_prev, grad_prev);
            double beta = 0.0;
            if (denom > 0.0 && (iter % static_cast<int>(n) != 0)) {
                double num = 0.0;
                for (std::size_t i = 0; i < n; ++i) num += grad[i] * (grad[i] - grad_prev[i]);
                beta = std::max(0.0, num / denom);
            }
            for (std::size_t i = 0; i < n; ++i) dir[i] = -grad[i] + beta * dir[i];
            if (dot(dir, grad) >= 0.0)
                for (std::size_t i = 0; i < n; ++i) dir[i] = -grad[i];
        }

        double slope = dot(dir, grad);
        if (slope >= 0.0) break; // gradient vanished

        // backtracking Armijo: f(w + a d) <= f + c a slope
        double alpha = 1.0;
        double f_trial = 0.0;
        bool accepted = false;
        for (int h = 0; h < opts.max_halvings; ++h) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = w[i] + alpha * dir[i];
            f_trial = value_and_grad(trial, grad_prev); // grad_prev reused as scratch
            if (!std::isfinite(f_trial))
                throw std::runtime_error("cg: non-finite objective at iteration " +
                                         std::to_string(iter + 1));
            if (f_trial <= f + opts.armijo_c * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break; // no progress possible along this direction

        w.swap(trial);
        std::swap(grad, grad_prev); // grad now holds the gradient at the new w
        f = f_trial;
        res.train_trace.push_back(f);
        res.iterations = iter + 1;

        double v = validation(w);
        if (v < res.best_validation) {
            res.best_validation = v;
            res.best_weights = w;
            stale = 0;
        } else if (++stale >= opts.patience) {
            break;
        }
    }
    return res;
}

} // namespace cdm
