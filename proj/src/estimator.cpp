#include "cdm/estimator.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cdm/io.hpp"

namespace cdm {

double estimate_cdm_pair(std::span<const FunctionHandle> functions, const Environment& env,
                         const Point& x, const Point& xp) {
    if (functions.empty()) throw std::invalid_argument("estimate_cdm_pair: no functions");
    double sum = 0.0;
    for (const FunctionHandle& f : functions)
        sum += eval_sigma(env, eval_function(env, f, x), eval_function(env, f, xp));
    return sum / static_cast<double>(functions.size());
}

TripleSet build_triple_set(const Environment& env, int m_functions, int n_inputs,
                           std::uint64_t seed) {
    if (m_functions < 1 || n_inputs < 1)
        throw std::invalid_argument("build_triple_set: M and N must be at least 1");

    Rng f_rng(substream_seed(seed, "functions"));
    Rng x_rng(substream_seed(seed, "inputs"));

    std::vector<FunctionHandle> functions;
    functions.reserve(m_functions);
    for (int k = 0; k < m_functions; ++k) functions.push_back(sample_function(env, f_rng));

    std::vector<Point> inputs;
    inputs.reserve(n_inputs);
    for (int i = 0; i < n_inputs; ++i) inputs.push_back(sample_input(env, x_rng));

    // cache f_k(x_i) once; targets are plain means over it
    std::vector<double> values(static_cast<std::size_t>(m_functions) * n_inputs);
    for (int k = 0; k < m_functions; ++k)
        for (int i = 0; i < n_inputs; ++i)
            values[static_cast<std::size_t>(k) * n_inputs + i] =
                eval_function(env, functions[k], inputs[i]);

    TripleSet set;
    set.m_functions = m_functions;
    set.n_inputs = n_inputs;
    set.env = env.kind;
    set.seed = seed;
    set.triples.reserve(static_cast<std::size_t>(n_inputs) * (n_inputs + 1) / 2);
    for (int i = 0; i < n_inputs; ++i) {
        for (int j = i; j < n_inputs; ++j) {
            double sum = 0.0;
            for (int k = 0; k < m_functions; ++k) {
                std::size_t row = static_cast<std::size_t>(k) * n_inputs;
                sum += eval_sigma(env, values[row + i], values[row + j]);
            }
            set.triples.push_back({inputs[i], inputs[j], sum / m_functions});
        }
    }
    return set;
}

double measure_distance(const DistortionMeasure& a, const DistortionMeasure& b,
                        const Environment& env, int n_samples, std::uint64_t seed) {
    if (a.dimension != b.dimension)
        throw std::invalid_argument("measure_distance: incompatible dimensions");
    if (n_samples < 1) throw std::invalid_argument("measure_distance: need at least one sample");
    Rng rng(substream_seed(seed, "measure_distance"));
    double sum = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        Point x = sample_input(env, rng);
        Point xp = sample_input(env, rng);
        double d = eval_distortion(a, x, xp) - eval_distortion(b, x, xp);
        sum += d * d;
    }
    return sum / n_samples;
}

void write_triples_csv(const TripleSet& set, std::ostream& out) {
    if (set.triples.empty()) throw std::invalid_argument("write_triples_csv: empty set");
    const std::size_t dim = set.triples.front().x.size();
    for (std::size_t i = 0; i < dim; ++i) out << 'x' << (i + 1) << ',';
    for (std::size_t i = 0; i < dim; ++i) out << "xp" << (i + 1) << ',';
    out << "target\n";
    for (const TrainingTriple& t : set.triples) {
        for (double v : t.x) out << format_double(v) << ',';
        for (double v : t.xp) out << format_double(v) << ',';
        out << format_double(t.target) << '\n';
    }
}

void write_triples_csv(const TripleSet& set, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_triples_csv(set, out);
    if (!out) throw std::runtime_error("write failed on " + path.string());
}

std::vector<TrainingTriple> read_triples_csv(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("read_triples_csv: empty stream");
    std::size_t columns = 1 + static_cast<std::size_t>(std::count(header.begin(), header.end(), ','));
    if (columns < 3 || columns % 2 == 0)
        throw std::runtime_error("read_triples_csv: malformed header");
    const std::size_t dim = (columns - 1) / 2;

    std::vector<TrainingTriple> triples;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        TrainingTriple t;
        t.x.resize(dim);
        t.xp.resize(dim);
        for (std::size_t c = 0; c < columns; ++c) {
            if (!std::getline(row, cell, ',')) throw std::runtime_error("read_triples_csv: short row");
            double v = std::stod(cell);
            if (c < dim) t.x[c] = v;
            else if (c < 2 * dim) t.xp[c - dim] = v;
            else t.target = v;
        }
        triples.push_back(std::move(t));
    }
    return triples;
}

} // namespace cdm
