#include "drmx/term.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "drmx/errors.hpp"

namespace drmx {

Rational::Rational(long long n, long long d) {
    if (d == 0) throw InternalError("rational with zero denominator");
    if (d < 0) { n = -n; d = -d; }
    long long g = std::gcd(n < 0 ? -n : n, d);
    if (g == 0) g = 1;
    num = n / g;
    den = d / g;
}

bool Rational::operator<(const Rational& o) const {
    // denominators are positive after normalization
    return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

TermPtr Term::constant(std::string s) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Constant;
    t->symbol = std::move(s);
    return t;
}

TermPtr Term::variable(std::string s) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Variable;
    t->symbol = std::move(s);
    return t;
}

TermPtr Term::compound(std::string functor, std::vector<TermPtr> args) {
    assert(!args.empty());
    auto t = std::make_shared<Term>();
    t->kind = Kind::Compound;
    t->symbol = std::move(functor);
    t->args = std::move(args);
    return t;
}

TermPtr Term::numeric(Rational v) {
    auto t = std::make_shared<Term>();
    t->kind = Kind::Numeric;
    t->value = v;
    return t;
}

bool Term::is_ground() const {
    if (kind == Kind::Variable) return false;
    for (const auto& a : args)
        if (!a->is_ground()) return false;
    return true;
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case Term::Kind::Numeric: return a->value == b->value;
    case Term::Kind::Constant:
    case Term::Kind::Variable: return a->symbol == b->symbol;
    case Term::Kind::Compound:
        if (a->symbol != b->symbol || a->args.size() != b->args.size()) return false;
        for (size_t i = 0; i < a->args.size(); ++i)
            if (!term_equal(a->args[i], b->args[i])) return false;
        return true;
    }
    return false;
}

bool occurs_in(const std::string& var, const TermPtr& t) {
    if (t->kind == Term::Kind::Variable) return t->symbol == var;
    for (const auto& a : t->args)
        if (occurs_in(var, a)) return true;
    return false;
}

void collect_vars(const TermPtr& t, std::vector<std::string>& out) {
    if (t->kind == Term::Kind::Variable) {
        if (std::find(out.begin(), out.end(), t->symbol) == out.end()) out.push_back(t->symbol);
        return;
    }
    for (const auto& a : t->args) collect_vars(a, out);
}

std::string term_str(const TermPtr& t) {
    switch (t->kind) {
    case Term::Kind::Constant: return t->symbol;
    case Term::Kind::Variable: return t->symbol;
    case Term::Kind::Numeric: {
        if (t->value.den == 1) return std::to_string(t->value.num);
        // emit as exact decimal when possible, else num/den
        return t->value.str();
    }
    case Term::Kind::Compound: {
        std::string s = t->symbol + "(";
        for (size_t i = 0; i < t->args.size(); ++i) {
            if (i) s += ",";
            s += term_str(t->args[i]);
        }
        return s + ")";
    }
    }
    return "?";
}

bool literal_equal(const Literal& a, const Literal& b) {
    if (a.pred != b.pred || a.positive != b.positive || a.args.size() != b.args.size()) return false;
    for (size_t i = 0; i < a.args.size(); ++i)
        if (!term_equal(a.args[i], b.args[i])) return false;
    return true;
}

std::string literal_str(const Literal& a) {
    if (a.args.empty()) return a.pred;
    std::string s = a.pred + "(";
    for (size_t i = 0; i < a.args.size(); ++i) {
        if (i) s += ",";
        s += term_str(a.args[i]);
    }
    return s + ")";
}

std::string clause_str(const Clause& c) {
    std::string s;
    if (c.head) s = literal_str(*c.head);
    if (!c.body.empty()) {
        s += " :- ";
        for (size_t i = 0; i < c.body.size(); ++i) {
            if (i) s += ", ";
            s += literal_str(c.body[i]);
        }
    }
    return s;
}

std::vector<std::string> clause_vars(const Clause& c) {
    std::vector<std::string> vars;
    if (c.head)
        for (const auto& a : c.head->args) collect_vars(a, vars);
    for (const auto& l : c.body)
        for (const auto& a : l.args) collect_vars(a, vars);
    return vars;
}

namespace {

// Literal rendering with every variable replaced by "_", for name-insensitive sorting.
std::string skeleton(const TermPtr& t) {
    switch (t->kind) {
    case Term::Kind::Variable: return "_";
    case Term::Kind::Constant: return t->symbol;
    case Term::Kind::Numeric: return t->value.str();
    case Term::Kind::Compound: {
        std::string s = t->symbol + "(";
        for (size_t i = 0; i < t->args.size(); ++i) {
            if (i) s += ",";
            s += skeleton(t->args[i]);
        }
        return s + ")";
    }
    }
    return "?";
}

std::string literal_skeleton(const Literal& l) {
    std::string s = l.pred + "/";
    for (const auto& a : l.args) s += skeleton(a) + ";";
    return s;
}

TermPtr number_vars(const TermPtr& t, std::map<std::string, std::string>& names, int& next) {
    switch (t->kind) {
    case Term::Kind::Variable: {
        auto it = names.find(t->symbol);
        if (it == names.end())
            it = names.emplace(t->symbol, "V" + std::to_string(next++)).first;
        return Term::variable(it->second);
    }
    case Term::Kind::Compound: {
        std::vector<TermPtr> args;
        args.reserve(t->args.size());
        for (const auto& a : t->args) args.push_back(number_vars(a, names, next));
        return Term::compound(t->symbol, std::move(args));
    }
    default: return t;
    }
}

} // namespace

std::string canonical_clause_key(const Clause& c) {
    Clause sorted = c;
    std::stable_sort(sorted.body.begin(), sorted.body.end(),
                     [](const Literal& a, const Literal& b) {
                         return literal_skeleton(a) < literal_skeleton(b);
                     });
    std::map<std::string, std::string> names;
    int next = 0;
    Clause out;
    if (sorted.head) {
        Literal h = *sorted.head;
        for (auto& a : h.args) a = number_vars(a, names, next);
        out.head = h;
    }
    for (const auto& l : sorted.body) {
        Literal nl = l;
        for (auto& a : nl.args) a = number_vars(a, names, next);
        out.body.push_back(nl);
    }
    return clause_str(out);
}

namespace {
TermPtr rename_term(const TermPtr& t, const std::string& suffix) {
    switch (t->kind) {
    case Term::Kind::Variable: return Term::variable(t->symbol + suffix);
    case Term::Kind::Compound: {
        std::vector<TermPtr> args;
        args.reserve(t->args.size());
        for (const auto& a : t->args) args.push_back(rename_term(a, suffix));
        return Term::compound(t->symbol, std::move(args));
    }
    default: return t;
    }
}
} // namespace

Literal rename_literal(const Literal& l, const std::string& suffix) {
    Literal out = l;
    for (auto& a : out.args) a = rename_term(a, suffix);
    return out;
}

Clause rename_clause(const Clause& c, const std::string& suffix) {
    Clause out;
    if (c.head) out.head = rename_literal(*c.head, suffix);
    for (const auto& l : c.body) out.body.push_back(rename_literal(l, suffix));
    return out;
}

} // namespace drmx
