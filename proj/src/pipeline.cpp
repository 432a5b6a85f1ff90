#include "cdm/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "cdm/approx.hpp"
#include "cdm/estimator.hpp"
#include "cdm/io.hpp"

namespace cdm {

namespace fs = std::filesystem;

Stage parse_stage(const std::string& name) {
    if (name == "triples") return Stage::Triples;
    if (name == "train") return Stage::Train;
    if (name == "quantize") return Stage::Quantize;
    if (name == "evaluate" || name == "all") return Stage::Evaluate;
    throw std::invalid_argument("unknown stage: " + name);
}

std::string ExperimentConfig::canonical_string() const {
    std::ostringstream s;
    s << "env=robot-arm,M=" << m_functions << ",N=" << n_inputs << ",m=" << m_codebook
      << ",seed=" << seed << ",grid=" << grid << ",hidden=" << n_hidden
      << ",max_iters=" << max_iters << ",eval_functions=" << eval_functions;
    return s.str();
}

namespace {

// Tracks artifacts so a failed stage can remove everything written so far.
class OutputTracker {
public:
    explicit OutputTracker(const std::string& outdir, std::string config)
        : enabled_(!outdir.empty()), dir_(outdir), config_(std::move(config)) {
        if (enabled_) fs::create_directories(dir_);
    }

    bool enabled() const { return enabled_; }
    fs::path path(const std::string& name) const { return dir_ / name; }

    void record(const std::string& name) { written_.push_back(name); }

    void write_manifest() {
        if (!enabled_) return;
        std::ofstream out(dir_ / "manifest.csv", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write manifest.csv");
        out << "file,fnv1a64,config\n";
        for (const std::string& name : written_) {
            std::uint64_t h = fnv1a64_file(dir_ / name);
            out << name << ',' << std::hex << h << std::dec << ',' << '"' << config_ << '"' << '\n';
        }
    }

    void remove_partial() {
        for (const std::string& name : written_) {
            std::error_code ec;
            fs::remove(dir_ / name, ec);
        }
        written_.clear();
    }

private:
    bool enabled_;
    fs::path dir_;
    std::string config_;
    std::vector<std::string> written_;
};

} // namespace

ExperimentResult run_robot_arm_experiment(const ExperimentConfig& cfg) {
    if (cfg.m_functions < 1 || cfg.n_inputs < 1 || cfg.m_codebook < 1 || cfg.grid < 2 ||
        cfg.n_hidden < 1 || cfg.eval_functions < 1)
        throw std::invalid_argument("robot-arm experiment: all counts must be positive");
    if (cfg.m_codebook > cfg.n_inputs)
        throw std::invalid_argument("robot-arm experiment: m cannot exceed N");

    const Environment env = Environment::robot_arm();
    ExperimentResult res;
    OutputTracker out(cfg.outdir, cfg.canonical_string());
    std::string stage = "triples";

    try {
        // triples: training and validation sets from separate substreams
        TripleSet train_set =
            build_triple_set(env, cfg.m_functions, cfg.n_inputs, substream_seed(cfg.seed, "triples"));
        TripleSet val_set = build_triple_set(env, cfg.m_functions, cfg.n_inputs,
                                             substream_seed(cfg.seed, "validation"));
        if (cfg.through == Stage::Triples) {
            out.write_manifest();
            return res;
        }

        stage = "train";
        TrainConfig tc;
        tc.max_iters = cfg.max_iters;
        tc.seed = substream_seed(cfg.seed, "train.init");
        res.model = train(train_set, val_set, tc, cfg.n_hidden);
        {
            double loss = 0.0;
            for (const TrainingTriple& t : val_set.triples) {
                double r = symmetric_output(res.model, t.x, t.xp) - t.target;
                loss += r * r;
            }
            res.final_val_loss = loss / static_cast<double>(val_set.triples.size());
        }
        auto learned =
            DistortionMeasure::learned(std::make_shared<MlpModel>(res.model));
        res.distance_to_true = measure_distance(learned, true_cdm(env), env, 20000,
                                                substream_seed(cfg.seed, "distance"));
        if (out.enabled()) {
            save_mlp(res.model, out.path("model.txt"));
            out.record("model.txt");
        }
        if (cfg.through == Stage::Train) {
            out.write_manifest();
            return res;
        }

        stage = "quantize";
        // the first N triples are the pairs (x_0, x_j), so they carry the
        // training inputs in order
        std::vector<Point> inputs;
        inputs.reserve(cfg.n_inputs);
        for (int j = 0; j < cfg.n_inputs; ++j) inputs.push_back(train_set.triples[j].xp);
        // the same initial medoids under both measures, so the rasters differ
        // only through the measures themselves
        std::uint64_t lloyd_seed = substream_seed(cfg.seed, "lloyd");
        res.learned_codebook = lloyd_medoid(learned, inputs, cfg.m_codebook, lloyd_seed, 200);
        res.true_codebook = lloyd_medoid(true_cdm(env), inputs, cfg.m_codebook, lloyd_seed, 200);
        if (out.enabled()) {
            write_codebook_csv(res.learned_codebook, out.path("codebook_learned.csv"));
            out.record("codebook_learned.csv");
            write_codebook_csv(res.true_codebook, out.path("codebook_true.csv"));
            out.record("codebook_true.csv");
        }
        if (cfg.through == Stage::Quantize) {
            out.write_manifest();
            return res;
        }

        stage = "evaluate";
        res.recon_empirical = reconstruction_error_input(res.learned_codebook, inputs, cfg.threads);

        res.learned_raster =
            voronoi_raster(res.learned_codebook, cfg.grid, cfg.grid, env.input_domain, cfg.threads);
        res.true_raster =
            voronoi_raster(res.true_codebook, cfg.grid, cfg.grid, env.input_domain, cfg.threads);

        // exact reconstruction error over the raster grid centers
        {
            std::vector<Point> centers;
            centers.reserve(res.learned_raster.labels.size());
            const double dx = (env.input_domain.hi[0] - env.input_domain.lo[0]) / cfg.grid;
            const double dy = (env.input_domain.hi[1] - env.input_domain.lo[1]) / cfg.grid;
            for (int row = 0; row < cfg.grid; ++row)
                for (int col = 0; col < cfg.grid; ++col)
                    centers.push_back({env.input_domain.lo[0] + (col + 0.5) * dx,
                                       env.input_domain.lo[1] + (row + 0.5) * dy});
            res.recon_grid = reconstruction_error_input(res.learned_codebook, centers, cfg.threads);

            // environment error: fresh functions approximated piecewise on the
            // learned partition, averaged over the same grid
            Rng f_rng(substream_seed(cfg.seed, "eval.functions"));
            double sum = 0.0;
            for (int i = 0; i < cfg.eval_functions; ++i) {
                FunctionHandle f = sample_function(env, f_rng);
                PiecewiseApprox pa = fit_piecewise(f, env, res.learned_codebook);
                double per_f = 0.0;
                for (std::size_t c = 0; c < centers.size(); ++c) {
                    double y = eval_function(env, f, centers[c]);
                    double yq = pa.values[res.learned_raster.labels[c]];
                    per_f += eval_sigma(env, y, yq);
                }
                sum += per_f / static_cast<double>(centers.size());
            }
            res.recon_env = sum / cfg.eval_functions;
        }

        if (out.enabled()) {
            write_raster_pgm(res.learned_raster, out.path("voronoi_learned.pgm"));
            out.record("voronoi_learned.pgm");
            write_raster_points_csv(res.learned_raster, out.path("voronoi_learned_points.csv"));
            out.record("voronoi_learned_points.csv");
            write_raster_pgm(res.true_raster, out.path("voronoi_true.pgm"));
            out.record("voronoi_true.pgm");
            write_raster_points_csv(res.true_raster, out.path("voronoi_true_points.csv"));
            out.record("voronoi_true_points.csv");

            std::ofstream table(out.path("table.csv"), std::ios::binary);
            if (!table) throw std::runtime_error("cannot write table.csv");
            table << "M,N,m,seed,recon_empirical,recon_grid,recon_env\n"
                  << cfg.m_functions << ',' << cfg.n_inputs << ',' << cfg.m_codebook << ','
                  << cfg.seed << ',' << format_double(res.recon_empirical) << ','
                  << format_double(res.recon_grid) << ',' << format_double(res.recon_env) << '\n';
            table.close();
            if (!table) throw std::runtime_error("write failed on table.csv");
            out.record("table.csv");
            out.write_manifest();
        }
        return res;
    } catch (const std::exception& e) {
        out.remove_partial();
        throw std::runtime_error("robot-arm experiment failed in stage '" + stage + "': " + e.what());
    }
}

} // namespace cdm
