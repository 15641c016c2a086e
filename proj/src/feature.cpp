#include "drmx/feature.hpp"

#include <set>

#include "drmx/errors.hpp"

namespace drmx {

const std::string& FeatureDef::head_var() const {
    if (!clause.head || clause.head->args.size() != 1 ||
        clause.head->args[0]->kind != Term::Kind::Variable)
        throw InternalError("feature head must be a single variable");
    return clause.head->args[0]->symbol;
}

void validate_feature(const FeatureDef& f, int max_clause_len) {
    const std::string& x = f.head_var();
    if (f.clause.body.empty()) throw InternalError("feature body must be nonempty");
    if (static_cast<int>(f.clause.body.size()) > max_clause_len)
        throw InternalError("feature body exceeds max clause length");

    // head-connectedness: every literal reachable from x through shared variables
    std::set<std::string> scope = {x};
    std::vector<bool> placed(f.clause.body.size(), false);
    bool progress = true;
    while (progress) {
        progress = false;
        for (size_t i = 0; i < f.clause.body.size(); ++i) {
            if (placed[i]) continue;
            std::vector<std::string> vars;
            for (const auto& a : f.clause.body[i].args) collect_vars(a, vars);
            bool connected = false;
            for (const auto& v : vars)
                if (scope.count(v)) connected = true;
            if (connected || vars.empty()) {
                placed[i] = true;
                progress = true;
                for (const auto& v : vars) scope.insert(v);
            }
        }
    }
    for (bool p : placed)
        if (!p) throw InternalError("feature body is not head-connected: " + clause_str(f.clause));
}

} // namespace drmx
