#include "drmx/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "drmx/errors.hpp"

namespace drmx {

size_t Network::param_count() const {
    size_t n = 0;
    for (size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
    return n;
}

Network init_network(const std::vector<int>& dims, const std::vector<double>& dropout, Rng& rng,
                     double weight_std) {
    if (dims.size() < 3)
        throw Error(ErrorKind::Usage, "network needs at least one hidden layer");
    for (int d : dims)
        if (d <= 0) throw Error(ErrorKind::Usage, "network layer dims must be positive");
    size_t hidden = dims.size() - 2;
    if (!dropout.empty() && dropout.size() != hidden)
        throw Error(ErrorKind::Usage, "one dropout rate per hidden layer expected");
    for (double r : dropout)
        if (r < 0.0 || r >= 1.0) throw Error(ErrorKind::Usage, "dropout rate must be in [0,1)");

    Network n;
    n.layer_dims = dims;
    n.dropout_rates = dropout.empty() ? std::vector<double>(hidden, 0.0) : dropout;
    for (size_t l = 0; l + 1 < dims.size(); ++l) {
        size_t rows = static_cast<size_t>(dims[l + 1]);
        size_t cols = static_cast<size_t>(dims[l]);
        std::vector<double> w(rows * cols);
        for (auto& x : w) x = weight_std * rng.gaussian();
        n.weights.push_back(std::move(w));
        n.biases.emplace_back(rows, 0.0);
    }
    return n;
}

namespace {

struct ForwardCache {
    std::vector<std::vector<double>> activations; // per layer, post-nonlinearity
    std::vector<std::vector<double>> masks;       // dropout scale per hidden layer
};

std::vector<double> softmax(std::vector<double> z) {
    double m = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (auto& v : z) {
        v = std::exp(v - m);
        sum += v;
    }
    for (auto& v : z) v /= sum;
    return z;
}

std::vector<double> forward_cached(const Network& n, const std::vector<double>& x,
                                   ForwardMode mode, Rng* rng, ForwardCache* cache) {
    if (static_cast<int>(x.size()) != n.input_dim())
        throw Error(ErrorKind::Usage, "input width mismatch");
    std::vector<double> a = x;
    if (cache) cache->activations.push_back(a);
    size_t layers = n.weights.size();
    for (size_t l = 0; l < layers; ++l) {
        size_t rows = static_cast<size_t>(n.layer_dims[l + 1]);
        size_t cols = static_cast<size_t>(n.layer_dims[l]);
        std::vector<double> z(rows);
        for (size_t r = 0; r < rows; ++r) {
            double s = n.biases[l][r];
            const double* wrow = &n.weights[l][r * cols];
            for (size_t c = 0; c < cols; ++c) s += wrow[c] * a[c];
            z[r] = s;
        }
        if (l + 1 < layers) {
            for (auto& v : z) v = v > 0.0 ? v : 0.0; // ReLU
            double rate = n.dropout_rates[l];
            std::vector<double> mask(rows, 1.0);
            if (mode == ForwardMode::Train && rate > 0.0) {
                double keep = 1.0 - rate;
                for (size_t r = 0; r < rows; ++r)
                    mask[r] = (rng && rng->uniform01() < keep) ? 1.0 / keep : 0.0;
                for (size_t r = 0; r < rows; ++r) z[r] *= mask[r];
            }
            if (cache) cache->masks.push_back(std::move(mask));
        } else {
            z = softmax(std::move(z));
        }
        a = std::move(z);
        if (cache) cache->activations.push_back(a);
    }
    return a;
}

struct Gradients {
    std::vector<std::vector<double>> w, b;

    explicit Gradients(const Network& n) {
        for (size_t l = 0; l < n.weights.size(); ++l) {
            w.emplace_back(n.weights[l].size(), 0.0);
            b.emplace_back(n.biases[l].size(), 0.0);
        }
    }
    void scale(double s) {
        for (auto& v : w)
            for (auto& x : v) x *= s;
        for (auto& v : b)
            for (auto& x : v) x *= s;
    }
};

// accumulate d(cross-entropy)/d(params) for one sample; returns the sample loss
double backprop(const Network& n, const std::vector<double>& x, int target, ForwardMode mode,
                Rng* rng, Gradients& g) {
    ForwardCache cache;
    std::vector<double> probs = forward_cached(n, x, mode, rng, &cache);
    double p = std::max(probs[static_cast<size_t>(target)], 1e-300);
    double loss = -std::log(p);

    size_t layers = n.weights.size();
    std::vector<double> delta = probs; // softmax + cross-entropy
    delta[static_cast<size_t>(target)] -= 1.0;

    for (size_t l = layers; l-- > 0;) {
        size_t rows = static_cast<size_t>(n.layer_dims[l + 1]);
        size_t cols = static_cast<size_t>(n.layer_dims[l]);
        const std::vector<double>& a_prev = cache.activations[l];
        for (size_t r = 0; r < rows; ++r) {
            g.b[l][r] += delta[r];
            double* grow = &g.w[l][r * cols];
            for (size_t c = 0; c < cols; ++c) grow[c] += delta[r] * a_prev[c];
        }
        if (l == 0) break;
        std::vector<double> prev(cols, 0.0);
        for (size_t c = 0; c < cols; ++c) {
            double s = 0.0;
            for (size_t r = 0; r < rows; ++r) s += n.weights[l][r * cols + c] * delta[r];
            // through the dropout scale and the ReLU of layer l-1:
            // a = mask * relu(z), so da/dz = mask when a > 0 and 0 otherwise
            prev[c] = cache.activations[l][c] > 0.0 ? s * cache.masks[l - 1][c] : 0.0;
        }
        delta = std::move(prev);
    }
    return loss;
}

double dataset_loss(const Network& n, const std::vector<std::vector<double>>& xs,
                    const std::vector<int>& ys, const std::vector<size_t>& idx) {
    double total = 0.0;
    for (size_t i : idx) {
        std::vector<double> p = forward(n, xs[i], ForwardMode::Infer);
        total += -std::log(std::max(p[static_cast<size_t>(ys[i])], 1e-300));
    }
    return idx.empty() ? 0.0 : total / static_cast<double>(idx.size());
}

double dataset_accuracy(const Network& n, const std::vector<std::vector<double>>& xs,
                        const std::vector<int>& ys, const std::vector<size_t>& idx) {
    if (idx.empty()) return 0.0;
    int correct = 0;
    for (size_t i : idx) {
        std::vector<double> p = forward(n, xs[i], ForwardMode::Infer);
        int best = 0;
        for (size_t k = 1; k < p.size(); ++k)
            if (p[k] > p[static_cast<size_t>(best)]) best = static_cast<int>(k);
        if (best == ys[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(idx.size());
}

struct Velocity {
    std::vector<std::vector<double>> w, b;
    explicit Velocity(const Network& n) {
        for (size_t l = 0; l < n.weights.size(); ++l) {
            w.emplace_back(n.weights[l].size(), 0.0);
            b.emplace_back(n.biases[l].size(), 0.0);
        }
    }
};

void sgd_step(Network& n, const Gradients& g, Velocity& v, double lr, double momentum) {
    for (size_t l = 0; l < n.weights.size(); ++l) {
        for (size_t i = 0; i < n.weights[l].size(); ++i) {
            v.w[l][i] = momentum * v.w[l][i] - lr * g.w[l][i];
            n.weights[l][i] += v.w[l][i];
        }
        for (size_t i = 0; i < n.biases[l].size(); ++i) {
            v.b[l][i] = momentum * v.b[l][i] - lr * g.b[l][i];
            n.biases[l][i] += v.b[l][i];
        }
    }
}

// one epoch of mini-batch gradient descent over idx (pre-shuffled)
void run_epoch(Network& n, const std::vector<std::vector<double>>& xs, const std::vector<int>& ys,
               const std::vector<size_t>& idx, const RunConfig& cfg, Velocity& vel, Rng& rng) {
    size_t batch = cfg.batch_size <= 0 ? idx.size() : static_cast<size_t>(cfg.batch_size);
    for (size_t start = 0; start < idx.size(); start += batch) {
        size_t end = std::min(idx.size(), start + batch);
        Gradients g(n);
        for (size_t i = start; i < end; ++i)
            backprop(n, xs[idx[i]], ys[idx[i]], ForwardMode::Train, &rng, g);
        g.scale(1.0 / static_cast<double>(end - start));
        sgd_step(n, g, vel, cfg.learning_rate, cfg.momentum);
    }
}

std::vector<size_t> shuffled(size_t n, Rng& rng) {
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    for (size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
    return idx;
}

} // namespace

std::vector<double> to_input(const FeatureVector& v) {
    std::vector<double> x(static_cast<size_t>(v.width));
    for (int i = 0; i < v.width; ++i) x[static_cast<size_t>(i)] = v.get(i) ? 1.0 : 0.0;
    return x;
}

std::vector<double> forward(const Network& n, const std::vector<double>& x, ForwardMode mode,
                            Rng* rng) {
    return forward_cached(n, x, mode, rng, nullptr);
}

std::vector<double> forward(const Network& n, const FeatureVector& x) {
    return forward(n, to_input(x), ForwardMode::Infer);
}

std::pair<Network, TrainReport> train(const VectorizedDataset& data,
                                      const std::vector<std::string>& class_set,
                                      const RunConfig& cfg) {
    size_t n = data.vectors.size();
    if (n == 0) throw Error(ErrorKind::Usage, "empty training set");
    std::vector<std::vector<double>> xs;
    std::vector<int> ys;
    xs.reserve(n);
    std::set<int> classes_present;
    for (size_t i = 0; i < n; ++i) {
        xs.push_back(to_input(data.vectors[i]));
        int ci = -1;
        for (size_t k = 0; k < class_set.size(); ++k)
            if (class_set[k] == data.labels[i]) ci = static_cast<int>(k);
        if (ci < 0) throw Error(ErrorKind::Usage, "label outside class set: " + data.labels[i]);
        ys.push_back(ci);
        classes_present.insert(ci);
    }
    if (classes_present.size() < 2)
        throw Error(ErrorKind::Usage, "training data contains a single class");

    std::vector<int> dims;
    dims.push_back(data.feature_count);
    for (int h : cfg.hidden) dims.push_back(h);
    dims.push_back(static_cast<int>(class_set.size()));
    std::vector<double> dropout(cfg.hidden.size(), cfg.dropout);

    Rng master(cfg.seed);
    TrainReport report;
    report.seed = cfg.seed;

    Rng init_rng = master.substream(1);
    Network net = init_network(dims, dropout, init_rng);
    if (cfg.epochs == 0) {
        report.epoch_cap_zero = true;
        return {std::move(net), report};
    }

    // validation split
    Rng split_rng = master.substream(2);
    std::vector<size_t> order = shuffled(n, split_rng);
    size_t val_count = static_cast<size_t>(std::lround(cfg.validation_fraction * static_cast<double>(n)));
    if (val_count >= n) val_count = n - 1;
    std::vector<size_t> val_idx(order.begin(), order.begin() + static_cast<long>(val_count));
    std::vector<size_t> train_idx(order.begin() + static_cast<long>(val_count), order.end());

    // candidate training with validation selection
    Rng train_rng = master.substream(3);
    Velocity vel(net);
    double best_val = -1.0;
    double best_train_loss = 0.0;
    Network best_net = net;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::vector<size_t> idx = train_idx;
        for (size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[train_rng.below(i)]);
        run_epoch(net, xs, ys, idx, cfg, vel, train_rng);
        double loss = dataset_loss(net, xs, ys, train_idx);
        if (!std::isfinite(loss)) throw InternalError("non-finite training loss");
        double val = val_idx.empty() ? -dataset_loss(net, xs, ys, train_idx)
                                     : dataset_accuracy(net, xs, ys, val_idx);
        // equal validation scores break toward the lower training loss
        if (val > best_val || (val == best_val && loss < best_train_loss)) {
            best_val = val;
            best_train_loss = loss;
            best_net = net;
        }
    }
    report.validation_score = best_val;
    report.selection_training_loss = best_train_loss;

    // retrain on the full set until the loss reaches the selection-time loss
    Rng retrain_init = master.substream(1);
    Network full = init_network(dims, dropout, retrain_init);
    Velocity vel2(full);
    Rng retrain_rng = master.substream(4);
    std::vector<size_t> all(n);
    for (size_t i = 0; i < n; ++i) all[i] = i;
    double loss = dataset_loss(full, xs, ys, all);
    int epoch = 0;
    while (loss > best_train_loss && epoch < cfg.epochs) {
        std::vector<size_t> idx = all;
        for (size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[retrain_rng.below(i)]);
        run_epoch(full, xs, ys, idx, cfg, vel2, retrain_rng);
        loss = dataset_loss(full, xs, ys, all);
        if (!std::isfinite(loss)) throw InternalError("non-finite training loss");
        ++epoch;
    }
    report.retrain_hit_epoch_cap = loss > best_train_loss;
    report.epochs_run = epoch;
    report.final_training_loss = loss;
    report.retrain_stop_loss = loss;
    return {std::move(full), report};
}

std::string predict(const Predictor& p, const FeatureVector& x) {
    if (p.is_table()) {
        auto it = p.table.find(x.bitstring());
        return it == p.table.end() ? p.table_default : it->second;
    }
    std::vector<double> probs = forward(*p.network, x);
    size_t best = 0;
    for (size_t k = 1; k < probs.size(); ++k)
        if (probs[k] > probs[best]) best = k; // ties keep the lowest class index
    return p.class_set.at(best);
}

double gradient_check(const Network& n, const std::vector<double>& x, int target_class,
                      double step) {
    Network net = n; // mutable copy for the numeric sweeps
    Gradients g(net);
    backprop(net, x, target_class, ForwardMode::Infer, nullptr, g);

    auto loss_at = [&]() {
        std::vector<double> p = forward(net, x, ForwardMode::Infer);
        return -std::log(std::max(p[static_cast<size_t>(target_class)], 1e-300));
    };

    double max_rel = 0.0;
    auto check = [&](double& param, double analytic) {
        double saved = param;
        param = saved + step;
        double lp = loss_at();
        param = saved - step;
        double lm = loss_at();
        param = saved;
        double numeric = (lp - lm) / (2.0 * step);
        double rel = std::abs(analytic - numeric) /
                     std::max({1e-8, std::abs(analytic), std::abs(numeric)});
        max_rel = std::max(max_rel, rel);
    };
    for (size_t l = 0; l < net.weights.size(); ++l) {
        for (size_t i = 0; i < net.weights[l].size(); ++i) check(net.weights[l][i], g.w[l][i]);
        for (size_t i = 0; i < net.biases[l].size(); ++i) check(net.biases[l][i], g.b[l][i]);
    }
    return max_rel;
}

std::string serialize_network(const Network& n, unsigned long long seed,
                              const std::string& config_json) {
    std::ostringstream os;
    os.precision(17);
    os << "drmx-net 1\n";
    os << "seed " << seed << "\n";
    os << "config " << (config_json.empty() ? "{}" : config_json) << "\n";
    os << "layers";
    for (int d : n.layer_dims) os << " " << d;
    os << "\ndropout";
    for (double r : n.dropout_rates) os << " " << r;
    os << "\n";
    if (!n.class_names.empty()) {
        os << "classes";
        for (const auto& c : n.class_names) os << " " << c;
        os << "\n";
    }
    for (size_t l = 0; l < n.weights.size(); ++l) {
        os << "weights " << l << "\n";
        size_t cols = static_cast<size_t>(n.layer_dims[l]);
        for (size_t i = 0; i < n.weights[l].size(); ++i)
            os << n.weights[l][i] << (((i + 1) % cols == 0) ? "\n" : " ");
        os << "biases " << l << "\n";
        for (size_t i = 0; i < n.biases[l].size(); ++i)
            os << n.biases[l][i] << (i + 1 == n.biases[l].size() ? "\n" : " ");
    }
    return os.str();
}

Network parse_network(const std::string& text) {
    std::istringstream is(text);
    std::string kw;
    int version = 0;
    if (!(is >> kw >> version) || kw != "drmx-net" || version != 1)
        throw Error(ErrorKind::Parse, "bad network file format version");
    Network n;
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "seed" || tag == "config") continue;
        if (tag == "layers") {
            int d;
            while (ls >> d) n.layer_dims.push_back(d);
        } else if (tag == "dropout") {
            double r;
            while (ls >> r) n.dropout_rates.push_back(r);
        } else if (tag == "classes") {
            std::string c;
            while (ls >> c) n.class_names.push_back(c);
        } else if (tag == "weights") {
            size_t l;
            ls >> l;
            if (l != n.weights.size() || l + 1 >= n.layer_dims.size())
                throw Error(ErrorKind::Parse, "network weights out of order");
            size_t rows = static_cast<size_t>(n.layer_dims[l + 1]);
            size_t cols = static_cast<size_t>(n.layer_dims[l]);
            std::vector<double> w(rows * cols);
            for (auto& x : w)
                if (!(is >> x)) throw Error(ErrorKind::Parse, "truncated weight matrix");
            n.weights.push_back(std::move(w));
            std::getline(is, line);
        } else if (tag == "biases") {
            size_t l;
            ls >> l;
            if (l + 1 != n.weights.size())
                throw Error(ErrorKind::Parse, "network biases out of order");
            size_t rows = static_cast<size_t>(n.layer_dims[l + 1]);
            std::vector<double> b(rows);
            for (auto& x : b)
                if (!(is >> x)) throw Error(ErrorKind::Parse, "truncated bias vector");
            n.biases.push_back(std::move(b));
            std::getline(is, line);
        } else {
            throw Error(ErrorKind::Parse, "unknown network file tag: " + tag);
        }
    }
    if (n.layer_dims.size() < 3 || n.weights.size() + 1 != n.layer_dims.size() ||
        n.biases.size() != n.weights.size())
        throw Error(ErrorKind::Parse, "incomplete network file");
    return n;
}

} // namespace drmx
