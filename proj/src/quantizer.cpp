#include "cdm/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cdm/io.hpp"
#include "cdm/parallel.hpp"

namespace cdm {

int nearest_index(const Codebook& cb, const Point& x) {
    if (cb.points.empty()) throw std::invalid_argument("nearest_index: empty codebook");
    int best = 0;
    double best_d = eval_distortion(cb.measure, cb.points[0], x);
    for (std::size_t i = 1; i < cb.points.size(); ++i) {
        double d = eval_distortion(cb.measure, cb.points[i], x);
        if (d < best_d) { // strict: ties stay with the smallest index
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

std::vector<int> induced_labels(const Codebook& cb, std::span<const Point> samples) {
    std::vector<int> labels(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) labels[i] = nearest_index(cb, samples[i]);
    return labels;
}

double reconstruction_error_input(const Codebook& cb, std::span<const Point> samples,
                                  int threads) {
    if (samples.empty()) throw std::invalid_argument("reconstruction_error_input: no samples");
    std::vector<double> per_sample(samples.size());
    parallel_for(samples.size(), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i)
            per_sample[i] = eval_distortion(cb.measure, samples[i], cb.points[nearest_index(cb, samples[i])]);
    });
    double sum = 0.0;
    for (double v : per_sample) sum += v;
    return sum / static_cast<double>(samples.size());
}

namespace {

// m distinct indices drawn uniformly from [0, n) by partial Fisher-Yates.
std::vector<std::size_t> distinct_indices(std::size_t n, int m, Rng& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (int i = 0; i < m; ++i)
        std::swap(idx[i], idx[i + rng.uniform_index(n - i)]);
    idx.resize(m);
    return idx;
}

} // namespace

Codebook lloyd_medoid(const DistortionMeasure& measure, std::span<const Point> samples, int m,
                      std::uint64_t seed, int max_iters, LloydTrace* trace) {
    if (m < 1) throw std::invalid_argument("lloyd_medoid: m must be at least 1");
    if (static_cast<std::size_t>(m) > samples.size())
        throw std::invalid_argument("lloyd_medoid: m exceeds the sample count");

    Rng rng(substream_seed(seed, "lloyd.init"));
    std::vector<std::size_t> member_idx = distinct_indices(samples.size(), m, rng);

    Codebook cb;
    cb.measure = measure;
    cb.points.reserve(m);
    for (std::size_t idx : member_idx) cb.points.push_back(samples[idx]);

    std::vector<int> labels(samples.size());
    std::vector<double> dist_to_q(samples.size());
    if (trace) *trace = {};

    for (int iter = 0; iter < max_iters; ++iter) {
        // assignment
        double err = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            labels[i] = nearest_index(cb, samples[i]);
            dist_to_q[i] = eval_distortion(measure, samples[i], cb.points[labels[i]]);
            err += dist_to_q[i];
        }
        err /= static_cast<double>(samples.size());

        // empty-cell repair: move the point onto the worst-quantized sample
        bool reseeded = false;
        std::vector<int> cell_size(m, 0);
        for (int l : labels) ++cell_size[l];
        for (int c = 0; c < m; ++c) {
            if (cell_size[c] > 0) continue;
            std::size_t worst = 0;
            for (std::size_t i = 1; i < samples.size(); ++i)
                if (dist_to_q[i] > dist_to_q[worst]) worst = i;
            int old_cell = labels[worst];
            cb.points[c] = samples[worst];
            labels[worst] = c;
            --cell_size[old_cell];
            cell_size[c] = 1;
            dist_to_q[worst] = eval_distortion(measure, samples[worst], cb.points[c]);
            reseeded = true;
        }
        if (trace) {
            trace->errors.push_back(err);
            trace->reseeded.push_back(reseeded);
            trace->iterations = iter + 1;
        }

        // medoid update: cheapest cell member, ties to the smallest sample
        // index; the incumbent stays unless a member strictly beats it, which
        // keeps the error non-increasing under any measure
        std::vector<std::vector<std::size_t>> cells(m);
        for (std::size_t i = 0; i < samples.size(); ++i) cells[labels[i]].push_back(i);
        bool changed = false;
        for (int c = 0; c < m; ++c) {
            const auto& cell = cells[c];
            if (cell.empty()) continue;
            double incumbent_cost = 0.0;
            for (std::size_t other : cell)
                incumbent_cost += eval_distortion(measure, cb.points[c], samples[other]);
            std::size_t best = cell.front();
            double best_cost = std::numeric_limits<double>::infinity();
            for (std::size_t cand : cell) {
                double cost = 0.0;
                for (std::size_t other : cell)
                    cost += eval_distortion(measure, samples[cand], samples[other]);
                if (cost < best_cost) {
                    best_cost = cost;
                    best = cand;
                }
            }
            if (best_cost < incumbent_cost && samples[best] != cb.points[c]) {
                cb.points[c] = samples[best];
                changed = true;
            }
        }
        if (!changed && !reseeded) break;
    }
    return cb;
}

VoronoiRaster voronoi_raster(const Codebook& cb, int width, int height, const Box& domain,
                             int threads) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("voronoi_raster: grid dimensions must be positive");
    if (domain.dim() != 2 || cb.measure.dimension != 2)
        throw std::invalid_argument("voronoi_raster: needs a two-dimensional domain");

    VoronoiRaster r;
    r.width = width;
    r.height = height;
    r.num_points = static_cast<int>(cb.points.size());
    r.labels.resize(static_cast<std::size_t>(width) * height);

    const double dx = (domain.hi[0] - domain.lo[0]) / width;
    const double dy = (domain.hi[1] - domain.lo[1]) / height;
    parallel_for(r.labels.size(), threads, [&](std::size_t b, std::size_t e) {
        Point p(2);
        for (std::size_t i = b; i < e; ++i) {
            int row = static_cast<int>(i) / width;
            int col = static_cast<int>(i) % width;
            p[0] = domain.lo[0] + (col + 0.5) * dx;
            p[1] = domain.lo[1] + (row + 0.5) * dy;
            r.labels[i] = nearest_index(cb, p);
        }
    });

    r.point_pixels.reserve(cb.points.size());
    for (const Point& q : cb.points) {
        int px = std::clamp(static_cast<int>((q[0] - domain.lo[0]) / dx), 0, width - 1);
        int py = std::clamp(static_cast<int>((q[1] - domain.lo[1]) / dy), 0, height - 1);
        r.point_pixels.push_back({px, py});
    }
    return r;
}

namespace {

void check_faithful(const Codebook& cb, std::span<const int> labels,
                    std::span<const Point> x_samples) {
    if (labels.size() != x_samples.size())
        throw std::invalid_argument("partition labels do not cover the samples");
    const int k = static_cast<int>(cb.points.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= k)
            throw std::invalid_argument("partition label out of range");
        for (int c = 0; c < k; ++c) {
            if (x_samples[i] == cb.points[c] && labels[i] != c)
                throw std::invalid_argument("partition is not faithful to the codebook");
        }
    }
}

} // namespace

MonteCarloStat reconstruction_error_env_stats(const Environment& env, const Codebook& cb,
                                              std::span<const int> labels, int f_samples,
                                              std::span<const Point> x_samples,
                                              std::uint64_t seed) {
    if (f_samples < 1) throw std::invalid_argument("reconstruction_error_env: need f samples");
    if (x_samples.empty()) throw std::invalid_argument("reconstruction_error_env: no x samples");
    check_faithful(cb, labels, x_samples);

    Rng rng(substream_seed(seed, "env.functions"));
    const double inv_n = 1.0 / static_cast<double>(x_samples.size());
    double sum = 0.0, sum_sq = 0.0;
    for (int k = 0; k < f_samples; ++k) {
        FunctionHandle f = sample_function(env, rng);
        double per_f = 0.0;
        for (std::size_t i = 0; i < x_samples.size(); ++i) {
            double y = eval_function(env, f, x_samples[i]);
            double yq = eval_function(env, f, cb.points[labels[i]]);
            per_f += eval_sigma(env, y, yq);
        }
        per_f *= inv_n;
        sum += per_f;
        sum_sq += per_f * per_f;
    }
    MonteCarloStat s;
    s.mean = sum / f_samples;
    if (f_samples > 1) {
        double var = (sum_sq - sum * sum / f_samples) / (f_samples - 1);
        s.se = std::sqrt(std::max(0.0, var) / f_samples);
    }
    return s;
}

double reconstruction_error_env(const Environment& env, const Codebook& cb,
                                std::span<const int> labels, int f_samples,
                                std::span<const Point> x_samples, std::uint64_t seed) {
    return reconstruction_error_env_stats(env, cb, labels, f_samples, x_samples, seed).mean;
}

Codebook solve_quadratic_codebook(int k) {
    if (k < 1) throw std::invalid_argument("solve_quadratic_codebook: k must be at least 1");
    constexpr double kDamping = 0.5;
    constexpr double kTol = 1e-10;
    constexpr int kMaxIters = 100000;

    std::vector<double> q(k);
    for (int i = 0; i < k; ++i) q[i] = static_cast<double>(i + 1) / (k + 1);

    for (int iter = 0; iter < kMaxIters; ++iter) {
        std::vector<double> s(k);
        for (int i = 0; i < k; ++i) s[i] = q[i] * q[i];
        double delta = 0.0;
        std::vector<double> next(q);
        for (int i = 0; i < k; ++i) {
            double target;
            if (k == 1) {
                target = 0.5; // lone cell spans all of [0,1] in x^2 space
            } else if (i == 0) {
                target = q[1] / std::sqrt(7.0);
            } else if (i == k - 1) {
                target = (4.0 + std::sqrt(2.0 + 7.0 * s[k - 2])) / 7.0;
            } else {
                double a = s[i - 1], b = s[i + 1];
                double si = 0.25 * (a + b) +
                            std::sqrt(a * a + 6.0 * a * b + b * b) / (4.0 * std::sqrt(2.0));
                target = std::sqrt(si);
            }
            next[i] = (1.0 - kDamping) * q[i] + kDamping * target;
            delta = std::max(delta, std::abs(next[i] - q[i]));
        }
        q = std::move(next);
        if (delta < kTol) {
            Codebook cb;
            cb.measure = DistortionMeasure::quadratic_cdm();
            for (double v : q) cb.points.push_back({v});
            return cb;
        }
    }
    throw std::runtime_error("solve_quadratic_codebook: fixed-point iteration did not converge");
}

BruteForceResult brute_force_optimal_partition(const Environment& env, const Codebook& cb,
                                               std::span<const Point> finite_X, int f_samples,
                                               std::uint64_t seed) {
    if (f_samples < 1) throw std::invalid_argument("brute force: need f samples");
    Rng rng(substream_seed(seed, "bf.functions"));
    std::vector<FunctionHandle> functions;
    functions.reserve(f_samples);
    for (int i = 0; i < f_samples; ++i) functions.push_back(sample_function(env, rng));
    return brute_force_optimal_partition(env, cb, finite_X, functions);
}

BruteForceResult brute_force_optimal_partition(const Environment& env, const Codebook& cb,
                                               std::span<const Point> finite_X,
                                               std::span<const FunctionHandle> functions) {
    const int n = static_cast<int>(finite_X.size());
    const int k = static_cast<int>(cb.points.size());
    if (n < 1 || n > 12 || k < 1 || k > 3)
        throw std::invalid_argument("brute force: instance exceeds the enumeration limits");
    if (functions.empty()) throw std::invalid_argument("brute force: no functions");

    // mean-over-f cost of sending x_i to cell c; the energy of an assignment
    // is then a plain average of matrix entries
    std::vector<double> cost(static_cast<std::size_t>(n) * k);
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < k; ++c) {
            double sum = 0.0;
            for (const FunctionHandle& f : functions)
                sum += eval_sigma(env, eval_function(env, f, finite_X[i]),
                                  eval_function(env, f, cb.points[c]));
            cost[static_cast<std::size_t>(i) * k + c] = sum / functions.size();
        }
    }

    // faithfulness: a point equal to a codebook point is pinned to that cell
    std::vector<int> pinned(n, -1);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < k; ++c)
            if (finite_X[i] == cb.points[c]) pinned[i] = c;

    std::vector<int> assign(n, 0), best_assign;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        if (pinned[i] >= 0) assign[i] = pinned[i];
    for (;;) {
        double e = 0.0;
        for (int i = 0; i < n; ++i) e += cost[static_cast<std::size_t>(i) * k + assign[i]];
        e /= n;
        if (e < best) {
            best = e;
            best_assign = assign;
        }
        // odometer increment over the free coordinates
        int pos = 0;
        while (pos < n) {
            if (pinned[pos] >= 0) { ++pos; continue; }
            if (++assign[pos] < k) break;
            assign[pos] = 0;
            ++pos;
        }
        if (pos == n) break;
    }
    return {std::move(best_assign), best};
}

MonteCarloStat partition_env_error(const Environment& env, const Codebook& cb,
                                   std::span<const Point> finite_X, std::span<const int> labels,
                                   std::span<const FunctionHandle> functions) {
    if (labels.size() != finite_X.size())
        throw std::invalid_argument("partition_env_error: labels do not cover the points");
    double sum = 0.0, sum_sq = 0.0;
    const double inv_n = 1.0 / static_cast<double>(finite_X.size());
    for (const FunctionHandle& f : functions) {
        double per_f = 0.0;
        for (std::size_t i = 0; i < finite_X.size(); ++i)
            per_f += eval_sigma(env, eval_function(env, f, finite_X[i]),
                                eval_function(env, f, cb.points[labels[i]]));
        per_f *= inv_n;
        sum += per_f;
        sum_sq += per_f * per_f;
    }
    const double m = static_cast<double>(functions.size());
    MonteCarloStat s;
    s.mean = sum / m;
    if (functions.size() > 1) {
        double var = (sum_sq - sum * sum / m) / (m - 1.0);
        s.se = std::sqrt(std::max(0.0, var) / m);
    }
    return s;
}

void write_codebook_csv(const Codebook& cb, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (int i = 0; i < cb.measure.dimension; ++i) out << (i ? "," : "") << 'x' << (i + 1);
    out << '\n';
    for (const Point& p : cb.points) {
        for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << format_double(p[i]);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed on " + path.string());
}

std::vector<Point> read_points_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty codebook file " + path.string());
    std::vector<Point> points;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        Point p;
        while (std::getline(row, cell, ',')) p.push_back(std::stod(cell));
        points.push_back(std::move(p));
    }
    return points;
}

void write_raster_pgm(const VoronoiRaster& raster, const std::filesystem::path& pgm_path) {
    std::ofstream out(pgm_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + pgm_path.string());
    out << "P5\n" << raster.width << ' ' << raster.height << "\n255\n";
    std::vector<unsigned char> row(raster.width);
    for (int r = 0; r < raster.height; ++r) {
        for (int c = 0; c < raster.width; ++c) {
            int label = raster.labels[static_cast<std::size_t>(r) * raster.width + c];
            int byte = raster.num_points <= 1 ? 0 : label * 255 / (raster.num_points - 1);
            row[c] = static_cast<unsigned char>(byte);
        }
        out.write(reinterpret_cast<const char*>(row.data()), row.size());
    }
    if (!out) throw std::runtime_error("write failed on " + pgm_path.string());
}

void write_raster_points_csv(const VoronoiRaster& raster, const std::filesystem::path& csv_path) {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + csv_path.string());
    out << "index,px,py\n";
    for (std::size_t i = 0; i < raster.point_pixels.size(); ++i)
        out << i << ',' << raster.point_pixels[i][0] << ',' << raster.point_pixels[i][1] << '\n';
    if (!out) throw std::runtime_error("write failed on " + csv_path.string());
}

} // namespace cdm
