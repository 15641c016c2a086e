#ifndef DRMX_EVAL_HPP
#define DRMX_EVAL_HPP

#include <string>
#include <vector>

#include "drmx/explain.hpp"
#include "drmx/kb.hpp"
#include "drmx/program.hpp"

namespace drmx {

struct FoldStats {
    int fold = 0;
    std::vector<std::string> test_ids;
    double accuracy = 0.0;
    double mean_fidelity = 0.0;
    double mean_explanation_size = 0.0;
    double fraction_structured = 0.0;
    double fraction_relevance_effect = 0.0;
    int feature_count = 0;
    std::vector<ExplainResult> explanations; // fold-test order
};

struct EvalSummary {
    std::vector<FoldStats> folds;
    double mean_accuracy = 0.0, sd_accuracy = 0.0;
    double mean_fidelity = 0.0, sd_fidelity = 0.0;
    double mean_explanation_size = 0.0, sd_explanation_size = 0.0;
    double mean_fraction_structured = 0.0, sd_fraction_structured = 0.0;
    double mean_relevance_effect = 0.0, sd_relevance_effect = 0.0;
};

// Seed-deterministic stratified fold assignment: per class, shuffle then deal
// round-robin. Returned vector maps instance position to fold id.
std::vector<int> assign_folds(const Dataset& data, int folds, unsigned long long seed);

// Per fold: draw features on the fold-train split, vectorize, train the
// network, then explain every fold-test instance. Deterministic for a fixed
// seed and config.
EvalSummary crossval(const Program& background, const Dataset& data,
                     const std::vector<ModeDecl>& modes, const RelevanceMap& relmap,
                     const RunConfig& cfg);

std::string serialize_eval(const EvalSummary& s, unsigned long long seed, const RunConfig& cfg);

} // namespace drmx

#endif
