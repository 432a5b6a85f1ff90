#pragma once

#include <cstdint>
#include <string>

#include "cdm/mlp.hpp"
#include "cdm/quantizer.hpp"

namespace cdm {

/// How far the experiment runs. Later stages imply the earlier ones.
enum class Stage { Triples, Train, Quantize, Evaluate };

Stage parse_stage(const std::string& name);

struct ExperimentConfig {
    int m_functions = 100; // M: sampled functions for the triple targets
    int n_inputs = 100;    // N: sampled inputs
    int m_codebook = 20;   // m: quantization points
    std::uint64_t seed = 42;
    int grid = 250;        // grid cells per axis for the exact errors
    int n_hidden = 20;
    int max_iters = 2000;
    int eval_functions = 100; // fresh functions for the environment error
    int threads = 1;
    Stage through = Stage::Evaluate;
    std::string outdir; // empty: compute only, write nothing

    std::string canonical_string() const;
};

struct ExperimentResult {
    // Table columns; NaN until the Evaluate stage fills them.
    double recon_empirical = 0.0; // learned measure, training inputs
    double recon_grid = 0.0;      // learned measure, grid
    double recon_env = 0.0;       // fresh functions, piecewise approximation

    double final_val_loss = 0.0;
    double distance_to_true = 0.0; // measure_distance(learned, closed form)

    MlpModel model;
    Codebook learned_codebook;
    Codebook true_codebook;
    VoronoiRaster learned_raster;
    VoronoiRaster true_raster;
};

/// The full robot-arm experiment: triple generation, measure training,
/// Lloyd quantization under the learned measure, the three reconstruction
/// errors, and the comparison quantization under the closed-form measure.
/// With a non-empty outdir writes table.csv, voronoi_learned.pgm,
/// voronoi_true.pgm (with point sidecars), model.txt, codebook_learned.csv,
/// codebook_true.csv and a manifest.csv of checksums. A failing stage
/// removes the files written so far and rethrows with the stage name.
ExperimentResult run_robot_arm_experiment(const ExperimentConfig& cfg);

} // namespace cdm
