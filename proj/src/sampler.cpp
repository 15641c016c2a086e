#include "drmx/sampler.hpp"

#include <algorithm>
#include <set>

#include "drmx/errors.hpp"
#include "drmx/subsume.hpp"

namespace drmx {

Clause draw_clause(const BottomClause& bottom, Rng& rng, int max_len) {
    const auto& body = bottom.clause.body;
    if (body.empty()) throw InternalError("draw_clause on empty bottom body");

    int target = rng.range(1, std::min<int>(max_len, static_cast<int>(body.size())));

    // head variables start in scope
    std::vector<std::string> head_vars;
    for (const auto& a : bottom.clause.head->args) collect_vars(a, head_vars);
    std::set<std::string> scope(head_vars.begin(), head_vars.end());

    std::vector<bool> chosen(body.size(), false);
    std::vector<size_t> picked;
    while (static_cast<int>(picked.size()) < target) {
        std::vector<size_t> eligible;
        for (size_t i = 0; i < body.size(); ++i) {
            if (chosen[i]) continue;
            const auto& info = bottom.provenance[i];
            bool ok = true;
            for (const auto& v : info.in_vars) ok = ok && scope.count(v) > 0;
            if (ok) eligible.push_back(i);
        }
        if (eligible.empty()) break;
        size_t pick = eligible[rng.below(eligible.size())];
        chosen[pick] = true;
        picked.push_back(pick);
        for (const auto& v : bottom.provenance[pick].out_vars) scope.insert(v);
    }

    std::sort(picked.begin(), picked.end()); // keep bottom order in the clause
    Clause c;
    c.head = bottom.clause.head;
    for (size_t i : picked) c.body.push_back(body[i]);
    return c;
}

bool RedundancyFilter::is_redundant(const Clause& c) {
    std::string key = canonical_clause_key(c);
    for (const auto& k : drawn_keys)
        if (k == key) return true; // identical up to renaming, no matcher needed
    for (const auto& d : drawn) {
        if (d.body.size() != c.body.size()) continue; // |C| = |D| length gate
        try {
            if (subsumption_equivalent(c, d)) return true;
        } catch (const ResourceExceeded&) {
            ++budget_warnings;
            return true; // conservative: assume redundant
        }
    }
    return false;
}

void RedundancyFilter::add(const Clause& c) {
    drawn.push_back(c);
    drawn_keys.push_back(canonical_clause_key(c));
}

FeatureDef to_feature(const Clause& classification, int index, const std::string& source_example,
                      const std::string& source_class) {
    FeatureDef f;
    f.index = index;
    f.source_example = source_example;
    f.source_class = source_class;

    // single head variable: the "+" variable of the classification head
    TermPtr head_var;
    for (const auto& a : classification.head->args)
        if (a->kind == Term::Kind::Variable) {
            if (head_var) throw InternalError("classification head has multiple variables");
            head_var = a;
        }
    if (!head_var) throw InternalError("classification head has no variable");

    Literal h;
    h.pred = f.name();
    h.args = {head_var};
    f.clause.head = h;
    f.clause.body = classification.body;
    return f;
}

Clause to_classification(const FeatureDef& f, const std::string& head_pred,
                         const std::string& class_label) {
    Clause c;
    Literal h;
    h.pred = head_pred;
    h.args = {Term::variable(f.head_var()), Term::constant(class_label)};
    c.head = h;
    c.body = f.clause.body;
    return c;
}

FeatureSet draw_features(const Program& background, const Dataset& data,
                         const std::vector<ModeDecl>& modes, const RunConfig& cfg, Rng& rng,
                         DrawStats* stats, std::map<std::string, BottomClause>* bottom_cache) {
    if (data.instance_order.empty())
        throw Error(ErrorKind::Usage, "cannot draw features from an empty example set");
    head_mode(modes); // presence check

    std::map<std::string, BottomClause> local_cache;
    auto& cache = bottom_cache ? *bottom_cache : local_cache;

    FeatureSet out;
    RedundancyFilter filter;
    DrawStats local_stats;
    DrawStats& st = stats ? *stats : local_stats;

    for (int draw = 0; draw < cfg.max_draws; ++draw) {
        ++st.attempts;
        const std::string& id =
            data.instance_order[rng.below(data.instance_order.size())];
        auto it = cache.find(id);
        if (it == cache.end()) {
            Program prog = instance_program(background, data, id);
            it = cache
                     .emplace(id, build_bottom_clause(prog, id, data.labels.at(id), modes,
                                                      cfg.depth, cfg.recall_cap, cfg.literal_cap,
                                                      cfg.sld_depth))
                     .first;
        }
        const BottomClause& bottom = it->second;
        if (bottom.clause.body.empty()) {
            ++st.rejected_empty_bottom;
            continue;
        }
        Clause c = draw_clause(bottom, rng, cfg.max_clause_len);
        // features are class-agnostic: redundancy ignores the class constant
        Clause norm = c;
        Literal nh = *norm.head;
        for (auto& a : nh.args)
            if (a->kind == Term::Kind::Constant) a = Term::constant("c");
        norm.head = nh;
        if (filter.is_redundant(norm)) {
            ++st.rejected_redundant;
            continue;
        }
        filter.add(norm);
        out.features.push_back(to_feature(c, static_cast<int>(out.features.size()) + 1, id,
                                          data.labels.at(id)));
    }
    st.budget_warnings = filter.budget_warnings;
    return out;
}

} // namespace drmx
