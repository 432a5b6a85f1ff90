#include "cdm/approx.hpp"

#include <cmath>
#include <stdexcept>

#include "cdm/cg.hpp"
#include "cdm/parallel.hpp"

namespace cdm {

PiecewiseApprox fit_piecewise(const FunctionHandle& f, const Environment& env,
                              const Codebook& cb) {
    PiecewiseApprox pa;
    pa.codebook = cb;
    pa.values.reserve(cb.points.size());
    for (const Point& q : cb.points) {
        if (!env.input_domain.contains(q))
            throw std::invalid_argument("fit_piecewise: codebook point outside the domain");
        pa.values.push_back(eval_function(env, f, q));
    }
    return pa;
}

double predict(const PiecewiseApprox& pa, const Point& x) {
    return pa.values[nearest_index(pa.codebook, x)];
}

namespace {

// Row-major centers of a grid_per_axis^dim grid over the domain box.
std::vector<Point> grid_centers(const Box& domain, int grid_per_axis) {
    const int dim = domain.dim();
    std::size_t total = 1;
    for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(grid_per_axis);
    std::vector<Point> centers;
    centers.reserve(total);
    Point p(dim);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (int d = 0; d < dim; ++d) {
            std::size_t cell = rem % grid_per_axis;
            rem /= grid_per_axis;
            p[d] = domain.lo[d] +
                   (static_cast<double>(cell) + 0.5) * (domain.hi[d] - domain.lo[d]) / grid_per_axis;
        }
        centers.push_back(p);
    }
    return centers;
}

} // namespace

double generalization_error(const PiecewiseApprox& pa, const FunctionHandle& f,
                            const Environment& env, int grid_per_axis, int threads) {
    if (grid_per_axis < 2)
        throw std::invalid_argument("generalization_error: grid needs at least 2 cells per axis");
    std::vector<Point> centers = grid_centers(env.input_domain, grid_per_axis);
    std::vector<double> per_cell(centers.size());
    parallel_for(centers.size(), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i)
            per_cell[i] = eval_sigma(env, eval_function(env, f, centers[i]), predict(pa, centers[i]));
    });
    double sum = 0.0;
    for (double v : per_cell) sum += v;
    return sum / static_cast<double>(centers.size());
}

BaselineResult train_direct_baseline(const FunctionHandle& f, const Environment& env,
                                     int n_train, std::uint64_t seed, int grid_per_axis,
                                     int n_hidden, int max_iters) {
    if (n_train < 1) throw std::invalid_argument("train_direct_baseline: need training samples");

    Rng rng(substream_seed(seed, "baseline.samples"));
    std::vector<Point> xs;
    std::vector<double> ys;
    xs.reserve(n_train);
    ys.reserve(n_train);
    for (int i = 0; i < n_train; ++i) {
        xs.push_back(sample_input(env, rng));
        ys.push_back(eval_function(env, f, xs.back()));
    }

    // 80/20 split, at least one sample on each side when possible
    int n_val = n_train / 5;
    if (n_val == 0 && n_train > 1) n_val = 1;
    const int n_fit = n_train - n_val;
    std::span<const Point> fit_x(xs.data(), n_fit);
    std::span<const double> fit_y(ys.data(), n_fit);
    std::span<const Point> val_x(xs.data() + n_fit, n_val);
    std::span<const double> val_y(ys.data() + n_fit, n_val);

    MlpModel model = init_mlp(env.dim, n_hidden, substream_seed(seed, "baseline.init"));
    auto objective = [&](const std::vector<double>& w, std::vector<double>& g) {
        model.weights = w;
        auto [loss, grad] = mse_loss_and_gradient(model, fit_x, fit_y);
        g = std::move(grad);
        return loss;
    };
    // with a single sample there is nothing to hold out: stop on train loss
    std::span<const Point> stop_x = val_x.empty() ? fit_x : val_x;
    std::span<const double> stop_y = val_x.empty() ? fit_y : val_y;
    auto validation = [&](const std::vector<double>& w) {
        model.weights = w;
        double loss = 0.0;
        for (std::size_t i = 0; i < stop_x.size(); ++i) {
            double r = forward_vector(model, stop_x[i]) - stop_y[i];
            loss += r * r;
        }
        return loss / static_cast<double>(stop_x.size());
    };

    CgOptions opts;
    opts.max_iters = max_iters;
    CgResult res = minimize_cg(objective, validation, model.weights, opts);
    model.weights = std::move(res.best_weights);

    // grid generalization error of the trained net
    std::vector<Point> centers = grid_centers(env.input_domain, grid_per_axis);
    double sum = 0.0;
    for (const Point& c : centers)
        sum += eval_sigma(env, eval_function(env, f, c), forward_vector(model, c));
    return {std::move(model), sum / static_cast<double>(centers.size())};
}

} // namespace cdm
