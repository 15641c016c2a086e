#ifndef DRMX_SUBSUME_HPP
#define DRMX_SUBSUME_HPP

#include "drmx/term.hpp"

namespace drmx {

inline constexpr long long kDefaultSubsumptionBudget = 1'000'000;

// True iff some substitution theta maps c's literals into d's literal set
// (heads included). Backtracking matcher, most-constrained-literal-first.
// Throws ResourceExceeded past the node budget (subsumption is NP-complete).
bool theta_subsumes(const Clause& c, const Clause& d,
                    long long node_budget = kDefaultSubsumptionBudget);

bool subsumption_equivalent(const Clause& c, const Clause& d,
                            long long node_budget = kDefaultSubsumptionBudget);

} // namespace drmx

#endif
