#ifndef DRMX_SATURATION_HPP
#define DRMX_SATURATION_HPP

#include <map>
#include <string>
#include <vector>

#include "drmx/feature.hpp"
#include "drmx/kb.hpp"
#include "drmx/program.hpp"

namespace drmx {

struct BottomLiteralInfo {
    size_t mode_index;            // which body mode produced this literal
    std::vector<std::string> in_vars;  // variables filling the mode's "+" slots
    std::vector<std::string> out_vars; // variables introduced by "-" slots
};

// Depth-bounded most specific clause for an example under mode declarations.
struct BottomClause {
    Clause clause;                          // head from the head mode, body from saturation
    std::map<std::string, int> var_depth;   // head variables have depth 0
    std::vector<BottomLiteralInfo> provenance; // aligned with clause.body
    bool truncated = false;                 // literal cap reached
    std::string instance_id;
    std::string class_label;
};

// Layered saturation: depth-0 variables from the head's "+" slots; each layer
// instantiates every body mode over in-scope variables, proving against
// background plus the instance's facts and collecting up to `recall` distinct
// answers per call. "-" slots bind to (possibly shared) variables one layer
// deeper, "#" slots take the proved constant.
BottomClause build_bottom_clause(const Program& instance_program,
                                 const std::string& instance_id,
                                 const std::string& class_label,
                                 const std::vector<ModeDecl>& modes, int depth,
                                 int recall_cap, int literal_cap, int sld_depth);

// Class(x,c) <- conjunction of the instance's active features, in canonical
// feature order. Head-only (flagged via the bool) when no feature is active.
struct MostSpecificFeatureClause {
    Clause clause;
    bool no_active_features = false;
};
MostSpecificFeatureClause most_specific_feature_clause(const std::vector<int>& active_features,
                                                       const std::string& class_label);

// Per-instance program: background plus the instance's describing facts only.
Program instance_program(const Program& background, const Dataset& data, const std::string& id);

} // namespace drmx

#endif
