#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cdm/distortion.hpp"
#include "cdm/environment.hpp"
#include "cdm/point.hpp"

namespace cdm {

/// Ordered quantization points plus the measure that defines nearness.
struct Codebook {
    std::vector<Point> points;
    DistortionMeasure measure;
};

/// Index of the nearest codebook point under the codebook's measure, ties
/// resolved to the smallest index.
int nearest_index(const Codebook& cb, const Point& x);

/// Per-sample nearest indices.
std::vector<int> induced_labels(const Codebook& cb, std::span<const Point> samples);

/// Mean distortion between each sample and its nearest codebook point.
double reconstruction_error_input(const Codebook& cb, std::span<const Point> samples,
                                  int threads = 1);

struct LloydTrace {
    std::vector<double> errors;   // empirical error after each assignment
    std::vector<bool> reseeded;   // iteration repaired an empty cell
    int iterations = 0;
};

/// Lloyd iteration generalized to an arbitrary distortion: initializes with
/// m distinct samples drawn uniformly, then alternates nearest-index
/// assignment with a medoid update (each point is replaced by the cell
/// member minimizing the summed distortion to the cell). A point whose cell
/// comes up empty is reseeded to the sample with the largest current
/// distortion to its quantizer; such iterations are flagged in the trace and
/// are the only ones where the error may rise. Stops when the codebook is
/// unchanged or after max_iters.
Codebook lloyd_medoid(const DistortionMeasure& measure, std::span<const Point> samples, int m,
                      std::uint64_t seed, int max_iters, LloydTrace* trace = nullptr);

/// Nearest-index labels over a grid of cell centers, row r holding the
/// second coordinate ascending. point_pixels records each codebook point's
/// grid cell for the raster overlay.
struct VoronoiRaster {
    int width = 0;
    int height = 0;
    std::vector<int> labels; // row-major, height*width
    std::vector<std::array<int, 2>> point_pixels;
    int num_points = 0;
};

VoronoiRaster voronoi_raster(const Codebook& cb, int width, int height, const Box& domain,
                             int threads = 1);

struct MonteCarloStat {
    double mean = 0.0;
    double se = 0.0; // standard error over the sampled functions
};

/// Monte-Carlo estimate of the environment reconstruction error of a
/// partition: mean over sampled functions and over x_samples of
/// sigma(f(x), f(q_label(x))). The labels must be faithful to the codebook
/// over x_samples (a sample equal to a codebook point must carry that
/// point's index); otherwise std::invalid_argument.
MonteCarloStat reconstruction_error_env_stats(const Environment& env, const Codebook& cb,
                                              std::span<const int> labels, int f_samples,
                                              std::span<const Point> x_samples,
                                              std::uint64_t seed);

double reconstruction_error_env(const Environment& env, const Codebook& cb,
                                std::span<const int> labels, int f_samples,
                                std::span<const Point> x_samples, std::uint64_t seed);

/// Optimal quantization points of the quadratic-family measure on [-1,1],
/// positive ascending. Solves the stationarity system
///   q_1 = q_2 / sqrt(7)
///   q_i^2 = (q_{i-1}^2 + q_{i+1}^2)/4
///           + sqrt(q_{i-1}^4 + 6 q_{i-1}^2 q_{i+1}^2 + q_{i+1}^4) / (4 sqrt(2))
///   q_k = (4 + sqrt(2 + 7 q_{k-1}^2)) / 7
/// by damped fixed-point iteration (factor 0.5) from an equally spaced start
/// until the largest coordinate change is below 1e-10. Throws
/// std::runtime_error if 1e5 iterations do not converge.
Codebook solve_quadratic_codebook(int k);

struct BruteForceResult {
    std::vector<int> partition; // per finite_X point
    double error = 0.0;
};

/// Exhaustively enumerates every faithful assignment of finite_X to codebook
/// indices and returns the minimizer of the empirical environment
/// reconstruction error, using one shared function sample of size f_samples
/// drawn from the "bf.functions" substream of the seed. Limits:
/// |finite_X| <= 12 and |cb| <= 3.
BruteForceResult brute_force_optimal_partition(const Environment& env, const Codebook& cb,
                                               std::span<const Point> finite_X, int f_samples,
                                               std::uint64_t seed);

/// Same search over an explicit function sample (shared-noise comparisons).
BruteForceResult brute_force_optimal_partition(const Environment& env, const Codebook& cb,
                                               std::span<const Point> finite_X,
                                               std::span<const FunctionHandle> functions);

/// Empirical environment reconstruction error of an explicit assignment
/// under an explicit function sample, plus its per-function standard error.
MonteCarloStat partition_env_error(const Environment& env, const Codebook& cb,
                                   std::span<const Point> finite_X, std::span<const int> labels,
                                   std::span<const FunctionHandle> functions);

/// CSV with header x1..xd, one point per row.
void write_codebook_csv(const Codebook& cb, const std::filesystem::path& path);
std::vector<Point> read_points_csv(const std::filesystem::path& path);

/// Binary PGM (P5), one byte per pixel, labels scaled onto 0..255; the
/// sidecar CSV (header index,px,py) receives the codebook pixel coordinates.
void write_raster_pgm(const VoronoiRaster& raster, const std::filesystem::path& pgm_path);
void write_raster_points_csv(const VoronoiRaster& raster, const std::filesystem::path& csv_path);

} // namespace cdm
