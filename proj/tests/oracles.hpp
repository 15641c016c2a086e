#ifndef DRMX_TESTS_ORACLES_HPP
#define DRMX_TESTS_ORACLES_HPP

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "drmx/kb.hpp"
#include "drmx/parser.hpp"
#include "drmx/rng.hpp"
#include "drmx/term.hpp"

namespace drmx::testing {

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline std::string fixture(const std::string& name) {
    return std::string(DRMX_FIXTURE_DIR) + "/" + name;
}

struct TrainsFixture {
    Program kb;
    std::vector<ModeDecl> modes;
    std::vector<std::pair<std::string, std::string>> examples;
    RelevanceMap relevance;
    SplitKb split;
};

inline TrainsFixture load_trains() {
    TrainsFixture t;
    t.kb = parse_program(slurp(fixture("trains.pl")));
    t.modes = parse_modes(slurp(fixture("modes.pl")), 10);
    t.examples = parse_examples(slurp(fixture("examples.pl")));
    t.relevance = parse_relevance(slurp(fixture("relevance.pl")));
    t.split = split_dataset(t.kb, t.examples);
    return t;
}

// every subterm occurring in d, the candidate range for oracle substitutions
inline void collect_subterms(const TermPtr& t, std::vector<TermPtr>& out) {
    out.push_back(t);
    for (const auto& a : t->args) collect_subterms(a, out);
}

inline std::vector<TermPtr> subterms_of(const Clause& d) {
    std::vector<TermPtr> raw;
    if (d.head)
        for (const auto& a : d.head->args) collect_subterms(a, raw);
    for (const auto& l : d.body)
        for (const auto& a : l.args) collect_subterms(a, raw);
    std::vector<TermPtr> out;
    std::set<std::string> seen;
    for (const auto& t : raw)
        if (seen.insert(term_str(t)).second) out.push_back(t);
    return out;
}

// Brute-force theta-subsumption: try every mapping from c's variables to
// subterms of d and test literal-set inclusion (heads must map too). Complete
// because a witnessing substitution can only send each variable to a subterm
// of d.
inline bool brute_subsumes(const Clause& c, const Clause& d) {
    if (c.head.has_value() != d.head.has_value()) return false;

    std::vector<std::string> vars = clause_vars(c);
    std::vector<TermPtr> range = subterms_of(d);
    if (range.empty()) range.push_back(Term::constant("brute_dummy"));

    std::set<std::string> d_body;
    for (const auto& l : d.body) d_body.insert(literal_str(l));
    std::string d_head = d.head ? literal_str(*d.head) : "";

    std::map<std::string, TermPtr> theta;
    std::vector<size_t> pick(vars.size(), 0);
    while (true) {
        theta.clear();
        for (size_t i = 0; i < vars.size(); ++i) theta[vars[i]] = range[pick[i]];

        auto apply = [&](const TermPtr& t) {
            auto rec = [&](const TermPtr& x, auto&& self) -> TermPtr {
                if (x->kind == Term::Kind::Variable) {
                    auto it = theta.find(x->symbol);
                    return it == theta.end() ? x : it->second;
                }
                if (x->kind == Term::Kind::Compound) {
                    std::vector<TermPtr> args;
                    for (const auto& a : x->args) args.push_back(self(a, self));
                    return Term::compound(x->symbol, std::move(args));
                }
                return x;
            };
            return rec(t, rec);
        };
        auto apply_lit = [&](const Literal& l) {
            Literal out = l;
            for (auto& a : out.args) a = apply(a);
            return out;
        };

        bool ok = true;
        if (c.head) ok = literal_str(apply_lit(*c.head)) == d_head;
        for (size_t i = 0; ok && i < c.body.size(); ++i)
            ok = d_body.count(literal_str(apply_lit(c.body[i]))) > 0;
        if (ok) return true;

        size_t i = 0;
        while (i < pick.size() && ++pick[i] == range.size()) pick[i++] = 0;
        if (i == pick.size()) return false;
    }
}

// random clauses over a tiny signature, for oracle agreement sweeps
inline Clause random_clause(Rng& rng, int max_body, int n_consts, int n_vars) {
    static const std::vector<std::pair<std::string, int>> preds = {
        {"p", 1}, {"q", 2}, {"r", 2}, {"s", 3}};
    auto term = [&]() -> TermPtr {
        if (rng.below(2) == 0)
            return Term::constant(std::string(1, static_cast<char>('a' + rng.below(n_consts))));
        return Term::variable("X" + std::to_string(rng.below(n_vars)));
    };
    Clause c;
    Literal h;
    h.pred = "h";
    h.args = {term(), term()};
    c.head = h;
    int len = 1 + static_cast<int>(rng.below(max_body));
    for (int i = 0; i < len; ++i) {
        const auto& [pred, arity] = preds[rng.below(preds.size())];
        Literal l;
        l.pred = pred;
        for (int a = 0; a < arity; ++a) l.args.push_back(term());
        c.body.push_back(l);
    }
    return c;
}

} // namespace drmx::testing

#endif
