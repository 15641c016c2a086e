#ifndef DRMX_FEATURE_HPP
#define DRMX_FEATURE_HPP

#include <string>
#include <vector>

#include "drmx/term.hpp"

namespace drmx {

// A named feature-clause f_i(X) :- Cp_i(X). The head variable is single and
// every body literal is head-connected through shared variables.
struct FeatureDef {
    int index = 0; // 1-based; head predicate is "f_<index>"
    Clause clause;
    std::string source_example;
    std::string source_class;

    std::string name() const { return "f_" + std::to_string(index); }
    const std::string& head_var() const;
};

// Canonically ordered, pairwise non-redundant (no equal-length
// subsumption-equivalent pair).
struct FeatureSet {
    std::vector<FeatureDef> features;

    size_t size() const { return features.size(); }
    bool empty() const { return features.empty(); }
};

void validate_feature(const FeatureDef& f, int max_clause_len);

} // namespace drmx

#endif
