#ifndef DRMX_UNIFY_HPP
#define DRMX_UNIFY_HPP

#include <map>
#include <optional>

#include "drmx/term.hpp"

namespace drmx {

// Idempotent substitution: no bound term contains a bound variable.
struct Substitution {
    std::map<std::string, TermPtr> bindings;

    TermPtr apply(const TermPtr& t) const;
    Literal apply(const Literal& l) const;
    Clause apply(const Clause& c) const;

    // Extend with var -> term (term is applied first), then re-apply to
    // existing bindings so the result stays idempotent. Occurs check enforced.
    bool bind(const std::string& var, const TermPtr& term);
};

// Most general unifier with occurs check; nullopt on failure.
std::optional<Substitution> unify_terms(const TermPtr& a, const TermPtr& b);
std::optional<Substitution> unify(const Literal& a, const Literal& b);

// Extend an existing substitution by unifying aσ with bσ.
bool unify_into(const TermPtr& a, const TermPtr& b, Substitution& s);

} // namespace drmx

#endif
