#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "drmx/parser.hpp"
#include "drmx/rng.hpp"
#include "drmx/sampler.hpp"
#include "drmx/vectorizer.hpp"

using namespace drmx;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "cannot open " << path << "\n";
        std::exit(1);
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

} // namespace

int main(int argc, char** argv) {
    std::string dir = argc > 1 ? argv[1] : "data/trains";
    int replicas = argc > 2 ? std::stoi(argv[2]) : 50;

    Program kb = parse_program(slurp(dir + "/trains.pl"));
    auto modes = parse_modes(slurp(dir + "/modes.pl"), 10);
    auto examples = parse_examples(slurp(dir + "/examples.pl"));
    SplitKb split = split_dataset(kb, examples);

    RunConfig cfg;
    cfg.seed = 7;
    cfg.max_draws = 500;
    Rng rng(cfg.seed);
    FeatureSet fs = draw_features(split.background, split.dataset, modes, cfg, rng);

    // replicate the instance list to give the parallel loop real work
    Dataset big = split.dataset;
    for (int r = 1; r < replicas; ++r)
        for (const auto& id : split.dataset.instance_order) big.instance_order.push_back(id);

    auto t0 = std::chrono::steady_clock::now();
    VectorizedDataset serial = vectorize_serial(big, fs, split.background, cfg.sld_depth);
    double t_serial = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    VectorizedDataset parallel = vectorize(big, fs, split.background, cfg.sld_depth);
    double t_parallel = ms_since(t0);

    bool identical = serialize_vectors(serial) == serialize_vectors(parallel);
    std::cout << "features " << fs.size() << " instances " << big.instance_order.size() << "\n";
    std::cout << "serial   " << t_serial << " ms\n";
    std::cout << "parallel " << t_parallel << " ms\n";
    std::cout << "speedup  " << (t_parallel > 0 ? t_serial / t_parallel : 0.0) << "x\n";
    std::cout << "identical " << (identical ? "yes" : "NO") << "\n";
    return identical ? 0 : 1;
}
