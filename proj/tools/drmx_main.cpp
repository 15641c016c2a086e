#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "drmx/errors.hpp"
#include "drmx/eval.hpp"
#include "drmx/explain.hpp"
#include "drmx/network.hpp"
#include "drmx/parser.hpp"
#include "drmx/report.hpp"
#include "drmx/rng.hpp"
#include "drmx/sampler.hpp"
#include "drmx/saturation.hpp"
#include "drmx/vectorizer.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using namespace drmx;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Usage, "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Usage, "cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

std::string header_comment(unsigned long long seed, const RunConfig& cfg) {
    return "% seed " + std::to_string(seed) + "\n% config " + cfg.to_json() + "\n";
}

struct Paths {
    std::string kb, modes, examples, relevance, features, model, vectors, out;
    std::string instance;
};

struct Inputs {
    Program kb;
    std::vector<ModeDecl> modes;
    std::vector<std::pair<std::string, std::string>> examples;
    RelevanceMap relevance;
    FeatureSet features;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deep relational machine toolkit"};
    app.require_subcommand(1);

    Paths paths;
    RunConfig cfg;
    bool default_lowest = false;
    std::string hidden_spec = "64,64";

    unsigned long long seed = 0;
    if (const char* env = std::getenv("DRMX_SEED")) seed = std::strtoull(env, nullptr, 10);
    bool seed_given = false;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--kb", paths.kb, "knowledge file");
        c->add_option("--modes", paths.modes, "mode declarations");
        c->add_option("--examples", paths.examples, "examples file");
        c->add_option("--relevance", paths.relevance, "relevance file");
        c->add_option("--features", paths.features, "feature definitions");
        c->add_option("--model", paths.model, "network file");
        c->add_option("--vectors", paths.vectors, "feature-vector file");
        c->add_option("--out", paths.out, "output directory");
        c->add_option("--seed", seed, "rng seed (overrides DRMX_SEED)")
            ->each([&](const std::string&) { seed_given = true; });
        c->add_option("--instance", paths.instance, "instance id");
        c->add_option("--depth", cfg.depth, "saturation depth");
        c->add_option("--recall-cap", cfg.recall_cap, "cap for unbounded recall");
        c->add_option("--max-draws", cfg.max_draws, "sampler draw budget");
        c->add_option("--clause-length", cfg.max_clause_len, "max feature body literals");
        c->add_option("--literal-cap", cfg.literal_cap, "bottom clause literal cap");
        c->add_option("--sld-depth", cfg.sld_depth, "resolution step bound");
        c->add_option("--hamming-k", cfg.hamming_k, "neighborhood radius");
        c->add_option("--beam", cfg.beam_width, "beam width");
        c->add_option("--max-body", cfg.max_body, "max explanation body size");
        c->add_option("--partitions", cfg.partition_count, "invented feature count");
        c->add_option("--epsilon", cfg.epsilon, "likelihood noise term");
        c->add_option("--compare-mode", cfg.compare_mode, "dictionary|qualitative");
        c->add_option("--hidden", hidden_spec, "hidden layer widths, comma separated");
        c->add_option("--dropout", cfg.dropout, "hidden dropout rate");
        c->add_option("--lr", cfg.learning_rate, "learning rate");
        c->add_option("--momentum", cfg.momentum, "momentum coefficient");
        c->add_option("--epochs", cfg.epochs, "epoch cap");
        c->add_option("--batch", cfg.batch_size, "mini-batch size, 0 = full");
        c->add_option("--val-fraction", cfg.validation_fraction, "validation holdout");
        c->add_option("--folds", cfg.folds, "cross-validation folds");
        c->add_option("--workers", cfg.workers, "thread count, 0 = default");
        c->add_flag("--default-lowest-relevance", default_lowest,
                    "unassigned predicates take the lowest rank");
    };

    CLI::App* cmd_check = app.add_subcommand("check", "parse and validate inputs");
    CLI::App* cmd_saturate = app.add_subcommand("saturate", "dump a bottom clause");
    CLI::App* cmd_sample = app.add_subcommand("sample", "draw random features");
    CLI::App* cmd_featurize = app.add_subcommand("featurize", "evaluate features to vectors");
    CLI::App* cmd_train = app.add_subcommand("train", "train the classifier");
    CLI::App* cmd_predict = app.add_subcommand("predict", "classify feature vectors");
    CLI::App* cmd_explain = app.add_subcommand("explain", "explain a prediction");
    CLI::App* cmd_eval = app.add_subcommand("eval", "cross-validated statistics");
    for (CLI::App* c : {cmd_check, cmd_saturate, cmd_sample, cmd_featurize, cmd_train,
                        cmd_predict, cmd_explain, cmd_eval})
        add_common(c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    (void)seed_given;

    try {
        cfg.seed = seed;
        {
            std::istringstream hs(hidden_spec);
            std::string tok;
            cfg.hidden.clear();
            while (std::getline(hs, tok, ','))
                if (!tok.empty()) cfg.hidden.push_back(std::stoi(tok));
        }
        cfg.validate();
        if (cfg.workers > 0) {
#ifdef _OPENMP
            omp_set_num_threads(cfg.workers);
#endif
        }

        auto need = [&](const std::string& p, const std::string& flag) -> const std::string& {
            if (p.empty()) throw Error(ErrorKind::Usage, "missing required option " + flag);
            return p;
        };
        auto out_dir = [&]() -> fs::path {
            fs::path dir = need(paths.out, "--out");
            fs::create_directories(dir);
            return dir;
        };

        Inputs in;
        auto load_kb = [&]() { in.kb = parse_program(slurp(need(paths.kb, "--kb"))); };
        auto load_modes = [&]() {
            in.modes = parse_modes(slurp(need(paths.modes, "--modes")), cfg.recall_cap);
            validate_modes(in.modes);
        };
        auto load_examples = [&]() {
            in.examples = parse_examples(slurp(need(paths.examples, "--examples")));
        };
        auto load_relevance = [&]() {
            in.relevance = parse_relevance(slurp(need(paths.relevance, "--relevance")));
            in.relevance.default_lowest = default_lowest;
        };
        auto load_features = [&]() {
            in.features.features = parse_features(slurp(need(paths.features, "--features")));
            for (const auto& f : in.features.features) validate_feature(f, cfg.max_clause_len);
        };

        if (*cmd_check) {
            if (!paths.kb.empty()) load_kb();
            if (!paths.modes.empty()) load_modes();
            if (!paths.examples.empty()) load_examples();
            if (!paths.relevance.empty()) load_relevance();
            if (!paths.features.empty()) load_features();
            std::cout << "ok\n";
            return 0;
        }

        if (*cmd_saturate) {
            load_kb();
            load_modes();
            load_examples();
            SplitKb split = split_dataset(in.kb, in.examples);
            const std::string& id = need(paths.instance, "--instance");
            if (!split.dataset.labels.count(id))
                throw Error(ErrorKind::Usage, "unknown instance " + id);
            Program prog = instance_program(split.background, split.dataset, id);
            BottomClause bc =
                build_bottom_clause(prog, id, split.dataset.labels.at(id), in.modes, cfg.depth,
                                    cfg.recall_cap, cfg.literal_cap, cfg.sld_depth);
            std::ostringstream os;
            os << header_comment(cfg.seed, cfg);
            os << "% instance " << id << (bc.truncated ? " (truncated)" : "") << "\n";
            os << clause_str(bc.clause) << ".\n";
            write_atomic(out_dir() / ("bottom_" + id + ".txt"), os.str());
            return 0;
        }

        if (*cmd_sample) {
            load_kb();
            load_modes();
            load_examples();
            SplitKb split = split_dataset(in.kb, in.examples);
            Rng rng(cfg.seed);
            DrawStats stats;
            FeatureSet fs =
                draw_features(split.background, split.dataset, in.modes, cfg, rng, &stats);
            std::ostringstream os;
            os << header_comment(cfg.seed, cfg);
            os << "% draws " << stats.attempts << " redundant " << stats.rejected_redundant
               << "\n";
            os << serialize_features(fs.features);
            write_atomic(out_dir() / "features.txt", os.str());
            std::cout << "features " << fs.size() << "\n";
            return 0;
        }

        if (*cmd_featurize) {
            load_kb();
            load_examples();
            load_features();
            SplitKb split = split_dataset(in.kb, in.examples);
            VectorizedDataset vec =
                vectorize(split.dataset, in.features, split.background, cfg.sld_depth);
            std::ostringstream os;
            os << header_comment(cfg.seed, cfg) << serialize_vectors(vec);
            write_atomic(out_dir() / "vectors.txt", os.str());
            return 0;
        }

        auto read_vectors = [&]() {
            std::string text = slurp(need(paths.vectors, "--vectors"));
            // strip leading comment lines
            size_t pos = 0;
            while (pos < text.size() && text[pos] == '%') {
                size_t nl = text.find('\n', pos);
                if (nl == std::string::npos) break;
                pos = nl + 1;
            }
            return parse_vectors(text.substr(pos));
        };

        if (*cmd_train) {
            VectorizedDataset vec = read_vectors();
            std::vector<std::string> classes;
            for (const auto& l : vec.labels)
                if (std::find(classes.begin(), classes.end(), l) == classes.end())
                    classes.push_back(l);
            auto [net, report] = train(vec, classes, cfg);
            net.class_names = classes;
            write_atomic(out_dir() / "model.txt", serialize_network(net, cfg.seed, cfg.to_json()));
            std::cout << "epochs " << report.epochs_run << " loss " << report.final_training_loss
                      << " val " << report.validation_score << "\n";
            return 0;
        }

        if (*cmd_predict) {
            Network net = parse_network(slurp(need(paths.model, "--model")));
            if (net.class_names.empty())
                throw Error(ErrorKind::Parse, "model file lacks a classes line");
            VectorizedDataset vec = read_vectors();
            Predictor p;
            p.class_set = net.class_names;
            p.network = std::move(net);
            std::ostringstream os;
            os << header_comment(cfg.seed, cfg);
            for (const auto& v : vec.vectors) os << v.instance_id << " " << predict(p, v) << "\n";
            write_atomic(out_dir() / "predictions.txt", os.str());
            return 0;
        }

        if (*cmd_explain) {
            load_features();
            load_relevance();
            Network net = parse_network(slurp(need(paths.model, "--model")));
            if (net.class_names.empty())
                throw Error(ErrorKind::Parse, "model file lacks a classes line");
            VectorizedDataset vec = read_vectors();
            Predictor p;
            p.class_set = net.class_names;
            p.network = std::move(net);
            const std::string& id = need(paths.instance, "--instance");
            const FeatureVector* center = nullptr;
            for (const auto& v : vec.vectors)
                if (v.instance_id == id) center = &v;
            if (!center) throw Error(ErrorKind::Usage, "instance " + id + " not in vectors");
            ExplainResult res = explain(*center, vec, p, in.features, in.relevance, cfg);
            fs::path dir = out_dir();
            write_atomic(dir / ("report_" + id + ".txt"),
                         header_comment(cfg.seed, cfg) +
                             serialize_report(res, in.features, in.relevance));
            write_atomic(dir / ("report_" + id + ".json"),
                         serialize_report_json(res, in.features, in.relevance, cfg.seed, cfg));
            return 0;
        }

        if (*cmd_eval) {
            load_kb();
            load_modes();
            load_examples();
            load_relevance();
            SplitKb split = split_dataset(in.kb, in.examples);
            EvalSummary s = crossval(split.background, split.dataset, in.modes, in.relevance, cfg);
            write_atomic(out_dir() / "eval.json", serialize_eval(s, cfg.seed, cfg));
            std::cout << "accuracy " << s.mean_accuracy << " fidelity " << s.mean_fidelity
                      << " relevance_effect " << s.mean_relevance_effect << "\n";
            return 0;
        }

        throw Error(ErrorKind::Usage, "no command");
    } catch (const Error& e) {
        std::cerr << "error kind=" << static_cast<int>(e.kind()) << " msg=" << e.what() << "\n";
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error kind=4 msg=" << e.what() << "\n";
        return 4;
    }
}
