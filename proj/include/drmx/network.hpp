#ifndef DRMX_NETWORK_HPP
#define DRMX_NETWORK_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drmx/kb.hpp"
#include "drmx/rng.hpp"
#include "drmx/vectorizer.hpp"

namespace drmx {

// Fully connected feed-forward net: ReLU hidden layers with inverted dropout,
// softmax output. layer_dims = input, hidden..., output.
struct Network {
    std::vector<int> layer_dims;
    std::vector<std::vector<double>> weights; // row-major, dims[l+1] x dims[l]
    std::vector<std::vector<double>> biases;
    std::vector<double> dropout_rates; // per hidden layer
    std::vector<std::string> class_names; // output order; optional

    int input_dim() const { return layer_dims.front(); }
    int output_dim() const { return layer_dims.back(); }
    size_t param_count() const;
};

Network init_network(const std::vector<int>& dims, const std::vector<double>& dropout, Rng& rng,
                     double weight_std = 0.05);

enum class ForwardMode { Train, Infer };

std::vector<double> forward(const Network& n, const std::vector<double>& x, ForwardMode mode,
                            Rng* rng = nullptr);
std::vector<double> forward(const Network& n, const FeatureVector& x);

std::vector<double> to_input(const FeatureVector& v);

struct TrainReport {
    int epochs_run = 0;
    double final_training_loss = 0.0;
    double validation_score = 0.0;      // accuracy of the selected model
    double selection_training_loss = 0.0; // retrain stopping target
    double retrain_stop_loss = 0.0;
    unsigned long long seed = 0;
    bool epoch_cap_zero = false;
    bool retrain_hit_epoch_cap = false;
};

// Validation-selected training: hold out a validation fraction, train by
// mini-batch gradient descent (optional momentum) on cross-entropy, select by
// validation accuracy, then retrain on the full set until training loss drops
// to the selection-time training loss or the epoch cap.
std::pair<Network, TrainReport> train(const VectorizedDataset& data,
                                      const std::vector<std::string>& class_set,
                                      const RunConfig& cfg);

// Black-box predictor: either a network or an explicit lookup table (the
// latter gives explainer tests exactly controlled neighborhoods).
struct Predictor {
    std::optional<Network> network;
    std::vector<std::string> class_set; // canonical order; argmax ties break to lowest index
    std::map<std::string, std::string> table; // bitstring -> class
    std::string table_default;

    bool is_table() const { return !network.has_value(); }
};

std::string predict(const Predictor& p, const FeatureVector& x);

// Max relative backprop-vs-central-finite-difference error over all
// parameters (dropout disabled).
double gradient_check(const Network& n, const std::vector<double>& x, int target_class,
                      double step = 1e-5);

// Network file: version line, layer dims, dropout rates, then row-major
// weight/bias matrices in decimal text.
std::string serialize_network(const Network& n, unsigned long long seed,
                              const std::string& config_json);
Network parse_network(const std::string& text);

} // namespace drmx

#endif
