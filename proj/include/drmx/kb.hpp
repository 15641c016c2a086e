#ifndef DRMX_KB_HPP
#define DRMX_KB_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drmx/program.hpp"

namespace drmx {

struct ModeArg {
    enum class Role { Input, Output, Constant }; // +type, -type, #type
    Role role;
    std::string type;
};

struct ModeDecl {
    bool head = false;
    int recall = 1; // -1 = unbounded marker "*", resolved against the recall cap
    std::string pred;
    std::vector<ModeArg> args;

    std::string indicator() const { return pred + "/" + std::to_string(args.size()); }
};

// Every body-mode input type must be producible by the head's inputs or some
// body mode's outputs; exactly one head mode is required.
void validate_modes(const std::vector<ModeDecl>& modes);
const ModeDecl& head_mode(const std::vector<ModeDecl>& modes);

struct RelevanceMap {
    std::vector<std::string> labels;      // declared order; position = rank
    std::map<std::string, int> assignment; // pred/arity -> rank
    bool default_lowest = false;

    int rank_of_label(const std::string& label) const; // -1 if unknown
    std::optional<int> rank_of(const std::string& indicator) const;
    const std::string& label_at(int rank) const { return labels.at(static_cast<size_t>(rank)); }
    bool single_rank() const;
};

struct Dataset {
    std::vector<std::string> instance_order;
    std::map<std::string, std::string> labels;
    std::vector<std::string> class_set; // order of first appearance
    std::map<std::string, std::vector<Clause>> facts;

    int class_index(const std::string& c) const;
};

// Split a knowledge program into shared background and per-instance facts.
// A ground fact describes instance `id` when its constants are reachable from
// `id` through other ground facts (e.g. short(c1) via has_car(t1,c1)).
// Non-ground clauses and unreachable facts stay in the background.
struct SplitKb {
    Program background;
    Dataset dataset;
};
SplitKb split_dataset(const Program& kb, const std::vector<std::pair<std::string, std::string>>& examples);

struct RunConfig {
    int depth = 2;
    int recall_cap = 10;
    int max_draws = 500;
    int max_clause_len = 3;
    int literal_cap = 256;
    int sld_depth = 64;
    unsigned long long seed = 0;
    int hamming_k = 5;
    int beam_width = 5;
    int max_body = 3;
    double epsilon = 0.05;
    int partition_count = 2;
    std::string compare_mode = "dictionary"; // dictionary | qualitative
    // network
    std::vector<int> hidden = {64, 64};
    double dropout = 0.0;
    double learning_rate = 1e-2;
    double momentum = 0.9;
    int epochs = 500;
    int batch_size = 0; // 0 = full batch
    double validation_fraction = 0.2;
    int folds = 10;
    int workers = 0; // 0 = library default

    void validate() const;
    std::string to_json() const;
};

} // namespace drmx

#endif
