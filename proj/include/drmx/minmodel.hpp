#ifndef DRMX_MINMODEL_HPP
#define DRMX_MINMODEL_HPP

#include <set>
#include <string>

#include "drmx/program.hpp"

namespace drmx {

// Least fixpoint of the immediate-consequence operator over ground
// instantiations of `program` with variables drawn from `universe`.
// Test oracle for small fixtures only; throws ResourceExceeded when the
// grounding exceeds `instantiation_cap` clause instances.
std::set<std::string> ground_minimal_model(const Program& program,
                                           const std::vector<TermPtr>& universe,
                                           long long instantiation_cap = 5'000'000);

} // namespace drmx

#endif
