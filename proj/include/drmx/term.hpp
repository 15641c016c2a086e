#ifndef DRMX_TERM_HPP
#define DRMX_TERM_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace drmx {

// Exact rational for numeric constants (decimals in input files become ratios).
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d);

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator<(const Rational& o) const;
    std::string str() const;
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    enum class Kind { Constant, Variable, Compound, Numeric };

    Kind kind;
    std::string symbol;        // constant symbol, variable name, or functor
    std::vector<TermPtr> args; // Compound only, arity >= 1
    Rational value;            // Numeric only

    static TermPtr constant(std::string s);
    static TermPtr variable(std::string s);
    static TermPtr compound(std::string functor, std::vector<TermPtr> args);
    static TermPtr numeric(Rational v);

    bool is_ground() const;
};

bool term_equal(const TermPtr& a, const TermPtr& b);
bool occurs_in(const std::string& var, const TermPtr& t);
void collect_vars(const TermPtr& t, std::vector<std::string>& out);
std::string term_str(const TermPtr& t);

struct Literal {
    std::string pred;
    std::vector<TermPtr> args;
    bool positive = true;

    size_t arity() const { return args.size(); }
    std::string indicator() const { return pred + "/" + std::to_string(args.size()); }
};

bool literal_equal(const Literal& a, const Literal& b);
std::string literal_str(const Literal& a);

struct Clause {
    std::optional<Literal> head;
    std::vector<Literal> body;

    bool is_fact() const { return head.has_value() && body.empty(); }
    bool is_definite() const { return head.has_value(); }
};

std::string clause_str(const Clause& c);
std::vector<std::string> clause_vars(const Clause& c);

// Clause with variables renamed V0, V1, ... in order of first occurrence after
// sorting the body by a name-insensitive literal skeleton. Used as a cheap
// equality-up-to-renaming key for de-duplication; the exact notion is
// subsumption equivalence, checked separately where it matters.
std::string canonical_clause_key(const Clause& c);

// Rename every variable by appending a suffix; used to standardize apart.
Clause rename_clause(const Clause& c, const std::string& suffix);
Literal rename_literal(const Literal& l, const std::string& suffix);

} // namespace drmx

#endif
