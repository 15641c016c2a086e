#include "drmx/subsume.hpp"

#include <algorithm>
#include <map>

#include "drmx/errors.hpp"

namespace drmx {

namespace {

using Binding = std::map<std::string, TermPtr>;

// One-way matching: variables of the left term bind, the right term is frozen
// (its variables behave as constants).
bool match_term(const TermPtr& ct, const TermPtr& dt, Binding& theta) {
    if (ct->kind == Term::Kind::Variable) {
        auto it = theta.find(ct->symbol);
        if (it != theta.end()) return term_equal(it->second, dt);
        theta.emplace(ct->symbol, dt);
        return true;
    }
    if (ct->kind != dt->kind) return false;
    switch (ct->kind) {
    case Term::Kind::Constant: return ct->symbol == dt->symbol;
    case Term::Kind::Numeric: return ct->value == dt->value;
    case Term::Kind::Compound: {
        if (ct->symbol != dt->symbol || ct->args.size() != dt->args.size()) return false;
        for (size_t i = 0; i < ct->args.size(); ++i)
            if (!match_term(ct->args[i], dt->args[i], theta)) return false;
        return true;
    }
    default: return false;
    }
}

bool match_literal(const Literal& c, const Literal& d, Binding& theta) {
    if (c.pred != d.pred || c.positive != d.positive || c.args.size() != d.args.size())
        return false;
    for (size_t i = 0; i < c.args.size(); ++i)
        if (!match_term(c.args[i], d.args[i], theta)) return false;
    return true;
}

struct Matcher {
    const std::vector<Literal>& cbody;
    const std::vector<Literal>& dbody;
    long long budget;
    long long nodes = 0;

    bool search(std::vector<bool>& done, size_t remaining, const Binding& theta) {
        if (remaining == 0) return true;
        if (++nodes > budget) throw ResourceExceeded("subsumption node budget exceeded");

        // pick the unmatched C literal with the fewest candidates under theta
        size_t best = cbody.size();
        std::vector<std::pair<size_t, Binding>> best_cands;
        for (size_t i = 0; i < cbody.size(); ++i) {
            if (done[i]) continue;
            std::vector<std::pair<size_t, Binding>> cands;
            for (size_t j = 0; j < dbody.size(); ++j) {
                Binding t = theta;
                if (match_literal(cbody[i], dbody[j], t)) cands.emplace_back(j, std::move(t));
            }
            if (best == cbody.size() || cands.size() < best_cands.size()) {
                best = i;
                best_cands = std::move(cands);
                if (best_cands.empty()) return false;
            }
        }
        done[best] = true;
        for (auto& [j, t] : best_cands) {
            if (search(done, remaining - 1, t)) {
                done[best] = false;
                return true;
            }
        }
        done[best] = false;
        return false;
    }
};

} // namespace

bool theta_subsumes(const Clause& c, const Clause& d, long long node_budget) {
    if (!c.is_definite() || !d.is_definite()) return false;
    if (c.head->pred != d.head->pred || c.head->arity() != d.head->arity()) return false;

    // standardize C apart so its variables cannot collide with D's frozen ones
    Clause cr = rename_clause(c, "@c");
    Binding theta;
    if (!match_literal(*cr.head, *d.head, theta)) return false;

    Matcher m{cr.body, d.body, node_budget};
    std::vector<bool> done(cr.body.size(), false);
    return m.search(done, cr.body.size(), theta);
}

bool subsumption_equivalent(const Clause& c, const Clause& d, long long node_budget) {
    return theta_subsumes(c, d, node_budget) && theta_subsumes(d, c, node_budget);
}

} // namespace drmx
