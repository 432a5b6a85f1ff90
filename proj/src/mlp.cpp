#include "cdm/mlp.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cdm/cg.hpp"
#include "cdm/estimator.hpp"
#include "cdm/io.hpp"
#include "cdm/rng.hpp"

namespace cdm {

MlpModel make_mlp(int n_inputs, int n_hidden) {
    if (n_inputs <= 0 || n_hidden <= 0)
        throw std::invalid_argument("make_mlp: architecture counts must be positive");
    MlpModel m;
    m.n_inputs = n_inputs;
    m.n_hidden = n_hidden;
    m.weights.assign(MlpModel::weight_count(n_inputs, n_hidden), 0.0);
    return m;
}

MlpModel init_mlp(int n_inputs, int n_hidden, std::uint64_t seed, double init_scale) {
    MlpModel m = make_mlp(n_inputs, n_hidden);
    Rng rng(seed);
    for (double& w : m.weights) w = rng.uniform(-init_scale, init_scale);
    return m;
}

double forward_vector(const MlpModel& model, std::span<const double> inputs) {
    if (static_cast<int>(inputs.size()) != model.n_inputs)
        throw std::invalid_argument("forward: input size does not match the architecture");
    const int ni = model.n_inputs;
    const int nh = model.n_hidden;
    const double* w = model.weights.data();
    const double* out_w = w + nh * (ni + 1);
    double y = out_w[nh]; // output bias
    for (int j = 0; j < nh; ++j) {
        const double* row = w + j * (ni + 1);
        double z = row[ni]; // hidden bias
        for (int i = 0; i < ni; ++i) z += row[i] * inputs[i];
        y += out_w[j] * std::tanh(z);
    }
    return y;
}

namespace {

void concat_pair(const MlpModel& model, const Point& x, const Point& xp,
                 std::vector<double>& buf) {
    if (static_cast<int>(x.size() + xp.size()) != model.n_inputs)
        throw std::invalid_argument("forward: pair dimensions do not match the architecture");
    buf.clear();
    buf.insert(buf.end(), x.begin(), x.end());
    buf.insert(buf.end(), xp.begin(), xp.end());
}

// Forward pass keeping the hidden activations, then accumulate the gradient
// of (scale * output) into grad.
double forward_backward(const MlpModel& model, std::span<const double> inputs, double scale,
                        std::vector<double>& hidden, std::vector<double>& grad) {
    const int ni = model.n_inputs;
    const int nh = model.n_hidden;
    const double* w = model.weights.data();
    const double* out_w = w + nh * (ni + 1);
    hidden.resize(nh);
    double y = out_w[nh];
    for (int j = 0; j < nh; ++j) {
        const double* row = w + j * (ni + 1);
        double z = row[ni];
        for (int i = 0; i < ni; ++i) z += row[i] * inputs[i];
        hidden[j] = std::tanh(z);
        y += out_w[j] * hidden[j];
    }
    double* g_out = grad.data() + nh * (ni + 1);
    g_out[nh] += scale;
    for (int j = 0; j < nh; ++j) {
        g_out[j] += scale * hidden[j];
        double dz = scale * out_w[j] * (1.0 - hidden[j] * hidden[j]);
        double* g_row = grad.data() + j * (ni + 1);
        for (int i = 0; i < ni; ++i) g_row[i] += dz * inputs[i];
        g_row[ni] += dz;
    }
    return y;
}

} // namespace

double forward(const MlpModel& model, const Point& x, const Point& xp) {
    std::vector<double> buf;
    concat_pair(model, x, xp, buf);
    return forward_vector(model, buf);
}

double symmetric_output(const MlpModel& model, const Point& x, const Point& xp) {
    return 0.5 * (forward(model, x, xp) + forward(model, xp, x));
}

std::pair<double, std::vector<double>> loss_and_gradient(const MlpModel& model,
                                                         const TripleSet& triples) {
    if (triples.triples.empty()) throw std::invalid_argument("loss_and_gradient: empty triple set");
    const std::size_t n = triples.triples.size();
    std::vector<double> grad(model.weights.size(), 0.0);
    std::vector<double> fwd, bwd, hidden;
    double loss = 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (const TrainingTriple& t : triples.triples) {
        concat_pair(model, t.x, t.xp, fwd);
        concat_pair(model, t.xp, t.x, bwd);
        // residual first, gradient second: both orderings contribute half
        double s = 0.5 * (forward_vector(model, fwd) + forward_vector(model, bwd));
        double r = s - t.target;
        loss += r * r * inv_n;
        double scale = inv_n * r; // d/dw of r^2/n through each ordering
        forward_backward(model, fwd, scale, hidden, grad);
        forward_backward(model, bwd, scale, hidden, grad);
    }
    return {loss, std::move(grad)};
}

std::pair<double, std::vector<double>> mse_loss_and_gradient(const MlpModel& model,
                                                             std::span<const Point> xs,
                                                             std::span<const double> ys) {
    if (xs.empty() || xs.size() != ys.size())
        throw std::invalid_argument("mse_loss_and_gradient: bad sample arrays");
    std::vector<double> grad(model.weights.size(), 0.0);
    std::vector<double> hidden;
    double loss = 0.0;
    const double inv_n = 1.0 / static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double y = forward_vector(model, xs[i]);
        double r = y - ys[i];
        loss += r * r * inv_n;
        forward_backward(model, xs[i], 2.0 * inv_n * r, hidden, grad);
    }
    return {loss, std::move(grad)};
}

MlpModel train(const TripleSet& train_set, const TripleSet& val_set, const TrainConfig& cfg,
               int n_hidden) {
    if (train_set.triples.empty() || val_set.triples.empty())
        throw std::invalid_argument("train: triple sets must be non-empty");
    const int n_inputs =
        static_cast<int>(train_set.triples.front().x.size() + train_set.triples.front().xp.size());
    MlpModel model = init_mlp(n_inputs, n_hidden, cfg.seed, cfg.init_scale);

    auto objective = [&](const std::vector<double>& w, std::vector<double>& g) {
        model.weights = w;
        auto [loss, grad] = loss_and_gradient(model, train_set);
        g = std::move(grad);
        return loss;
    };
    auto validation = [&](const std::vector<double>& w) {
        model.weights = w;
        double loss = 0.0;
        const double inv_n = 1.0 / static_cast<double>(val_set.triples.size());
        for (const TrainingTriple& t : val_set.triples) {
            double r = symmetric_output(model, t.x, t.xp) - t.target;
            loss += r * r * inv_n;
        }
        return loss;
    };

    CgOptions opts;
    opts.max_iters = cfg.max_iters;
    opts.patience = cfg.patience;
    CgResult res = minimize_cg(objective, validation, model.weights, opts);
    model.weights = std::move(res.best_weights);
    return model;
}

void save_mlp(const MlpModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "mlp " << model.n_inputs << ' ' << model.n_hidden << '\n';
    for (double w : model.weights) out << format_double(w) << '\n';
    if (!out) throw std::runtime_error("write failed on " + path.string());
}

MlpModel load_mlp(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string tag;
    int n_inputs = 0, n_hidden = 0;
    in >> tag >> n_inputs >> n_hidden;
    if (!in || tag != "mlp" || n_inputs <= 0 || n_hidden <= 0)
        throw std::runtime_error("bad model header in " + path.string());
    MlpModel model = make_mlp(n_inputs, n_hidden);
    for (double& w : model.weights) {
        if (!(in >> w)) throw std::runtime_error("truncated model file " + path.string());
    }
    double extra;
    if (in >> extra) throw std::runtime_error("trailing weights in " + path.string());
    return model;
}

} // namespace cdm
