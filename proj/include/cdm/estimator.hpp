#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "cdm/distortion.hpp"
#include "cdm/environment.hpp"
#include "cdm/point.hpp"

namespace cdm {

/// One supervised example: an input pair and the sampled-environment
/// estimate of the measure between the two inputs.
struct TrainingTriple {
    Point x;
    Point xp;
    double target = 0.0;
};

/// Triples for all unordered input pairs (i <= j, self-pairs included), so
/// |triples| = N(N+1)/2.
struct TripleSet {
    std::vector<TrainingTriple> triples;
    int m_functions = 0; // M
    int n_inputs = 0;    // N
    EnvKind env = EnvKind::Quadratic;
    std::uint64_t seed = 0;
};

/// Sampled-environment estimate of the measure between x and x':
/// (1/M) sum_k sigma(f_k(x), f_k(x')). Throws std::invalid_argument on an
/// empty function list.
double estimate_cdm_pair(std::span<const FunctionHandle> functions, const Environment& env,
                         const Point& x, const Point& xp);

/// Samples f_1..f_M and x_1..x_N from the seed's "functions" and "inputs"
/// substreams and emits the estimate for every unordered pair. Deterministic
/// under a fixed seed; growing M or N extends the draws without perturbing
/// the shared prefix.
TripleSet build_triple_set(const Environment& env, int m_functions, int n_inputs,
                           std::uint64_t seed);

/// Monte-Carlo estimate of the mean squared difference between two measures,
/// integral (a(x,x') - b(x,x'))^2 dP dP, over n_samples independent pairs.
double measure_distance(const DistortionMeasure& a, const DistortionMeasure& b,
                        const Environment& env, int n_samples, std::uint64_t seed);

/// CSV with header x1..xd,xp1..xpd,target, one row per unordered pair.
void write_triples_csv(const TripleSet& set, std::ostream& out);
void write_triples_csv(const TripleSet& set, const std::filesystem::path& path);
std::vector<TrainingTriple> read_triples_csv(std::istream& in);

} // namespace cdm
