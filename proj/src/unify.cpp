#include "drmx/unify.hpp"

namespace drmx {

TermPtr Substitution::apply(const TermPtr& t) const {
    switch (t->kind) {
    case Term::Kind::Variable: {
        auto it = bindings.find(t->symbol);
        return it == bindings.end() ? t : it->second;
    }
    case Term::Kind::Compound: {
        bool changed = false;
        std::vector<TermPtr> args;
        args.reserve(t->args.size());
        for (const auto& a : t->args) {
            args.push_back(apply(a));
            changed = changed || args.back().get() != a.get();
        }
        return changed ? Term::compound(t->symbol, std::move(args)) : t;
    }
    default: return t;
    }
}

Literal Substitution::apply(const Literal& l) const {
    Literal out = l;
    for (auto& a : out.args) a = apply(a);
    return out;
}

Clause Substitution::apply(const Clause& c) const {
    Clause out;
    if (c.head) out.head = apply(*c.head);
    for (const auto& l : c.body) out.body.push_back(apply(l));
    return out;
}

bool Substitution::bind(const std::string& var, const TermPtr& term) {
    TermPtr t = apply(term);
    if (t->kind == Term::Kind::Variable && t->symbol == var) return true;
    if (occurs_in(var, t)) return false;
    Substitution single;
    single.bindings.emplace(var, t);
    for (auto& [v, bound] : bindings) bound = single.apply(bound);
    bindings[var] = t;
    return true;
}

bool unify_into(const TermPtr& a, const TermPtr& b, Substitution& s) {
    TermPtr x = s.apply(a);
    TermPtr y = s.apply(b);
    if (x->kind == Term::Kind::Variable) return s.bind(x->symbol, y);
    if (y->kind == Term::Kind::Variable) return s.bind(y->symbol, x);
    if (x->kind != y->kind) return false;
    switch (x->kind) {
    case Term::Kind::Constant: return x->symbol == y->symbol;
    case Term::Kind::Numeric: return x->value == y->value;
    case Term::Kind::Compound: {
        if (x->symbol != y->symbol || x->args.size() != y->args.size()) return false;
        for (size_t i = 0; i < x->args.size(); ++i)
            if (!unify_into(x->args[i], y->args[i], s)) return false;
        return true;
    }
    default: return false;
    }
}

std::optional<Substitution> unify_terms(const TermPtr& a, const TermPtr& b) {
    Substitution s;
    if (unify_into(a, b, s)) return s;
    return std::nullopt;
}

std::optional<Substitution> unify(const Literal& a, const Literal& b) {
    if (a.pred != b.pred || a.positive != b.positive || a.args.size() != b.args.size())
        return std::nullopt;
    Substitution s;
    for (size_t i = 0; i < a.args.size(); ++i)
        if (!unify_into(a.args[i], b.args[i], s)) return std::nullopt;
    return s;
}

} // namespace drmx
