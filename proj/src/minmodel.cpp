#include "drmx/minmodel.hpp"

#include <cmath>

#include "drmx/errors.hpp"
#include "drmx/sld.hpp"
#include "drmx/unify.hpp"

namespace drmx {

namespace {

bool builtin_ground_holds(const Literal& l) {
    if (l.args[0]->kind != Term::Kind::Numeric || l.args[1]->kind != Term::Kind::Numeric)
        return false;
    const Rational& x = l.args[0]->value;
    const Rational& y = l.args[1]->value;
    if (l.pred == "gteq") return !(x < y);
    if (l.pred == "lteq") return !(y < x);
    if (l.pred == "gt") return y < x;
    if (l.pred == "lt") return x < y;
    return false;
}

} // namespace

std::set<std::string> ground_minimal_model(const Program& program,
                                           const std::vector<TermPtr>& universe,
                                           long long instantiation_cap) {
    // pre-compute all ground instances of each clause
    std::vector<Clause> ground;
    long long total = 0;
    for (const auto& c : program.clauses()) {
        std::vector<std::string> vars = clause_vars(c);
        if (!vars.empty() && universe.empty()) continue;
        long long count = 1;
        for (size_t i = 0; i < vars.size(); ++i) {
            count *= static_cast<long long>(universe.size());
            if (count > instantiation_cap)
                throw ResourceExceeded("ground instantiation exceeds cap");
        }
        total += count;
        if (total > instantiation_cap)
            throw ResourceExceeded("ground instantiation exceeds cap");
        std::vector<size_t> pick(vars.size(), 0);
        while (true) {
            Substitution s;
            for (size_t i = 0; i < vars.size(); ++i) s.bindings[vars[i]] = universe[pick[i]];
            ground.push_back(s.apply(c));
            size_t i = 0;
            for (; i < pick.size(); ++i) {
                if (++pick[i] < universe.size()) break;
                pick[i] = 0;
            }
            if (i == pick.size()) break;
        }
    }

    std::set<std::string> model;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& c : ground) {
            bool fires = true;
            for (const auto& l : c.body) {
                if (is_builtin(l)) {
                    if (!builtin_ground_holds(l)) { fires = false; break; }
                } else if (!model.count(literal_str(l))) {
                    fires = false;
                    break;
                }
            }
            if (fires && model.insert(literal_str(*c.head)).second) changed = true;
        }
    }
    return model;
}

} // namespace drmx
