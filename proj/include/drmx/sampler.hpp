#ifndef DRMX_SAMPLER_HPP
#define DRMX_SAMPLER_HPP

#include "drmx/feature.hpp"
#include "drmx/rng.hpp"
#include "drmx/saturation.hpp"

namespace drmx {

// Randomly draw a head-connected classification clause whose body is a subset
// of the bottom body: target length uniform in {1..min(max_len,|body|)}, then
// uniform picks among not-yet-chosen literals whose input variables are in
// scope. Shorter clause returned when no extension exists.
Clause draw_clause(const BottomClause& bottom, Rng& rng, int max_len);

// True iff some prior clause has equal body length and mutual theta-subsumption.
// ResourceExceeded from the matcher is treated as "assume redundant" with a
// warning counter (conservative).
struct RedundancyFilter {
    std::vector<Clause> drawn;
    std::vector<std::string> drawn_keys; // canonical keys, fast path
    long long budget_warnings = 0;

    bool is_redundant(const Clause& c);
    void add(const Clause& c);
};

struct DrawStats {
    int attempts = 0;
    int rejected_redundant = 0;
    int rejected_empty_bottom = 0;
    long long budget_warnings = 0;
};

// The rejection-sampling loop: repeat max_draws times — sample an example with
// replacement, fetch its (cached) bottom clause, draw a clause, keep it unless
// redundant. Every draw attempt counts against max_draws.
FeatureSet draw_features(const Program& background, const Dataset& data,
                         const std::vector<ModeDecl>& modes, const RunConfig& cfg, Rng& rng,
                         DrawStats* stats = nullptr,
                         std::map<std::string, BottomClause>* bottom_cache = nullptr);

// Re-head a classification clause Class(x,c) <- Cp(x) as f_i(x) <- Cp(x).
FeatureDef to_feature(const Clause& classification, int index, const std::string& source_example,
                      const std::string& source_class);

// Inverse of to_feature; used by redundancy and relevance checks.
Clause to_classification(const FeatureDef& f, const std::string& head_pred,
                         const std::string& class_label);

} // namespace drmx

#endif
