#ifndef DRMX_SLD_HPP
#define DRMX_SLD_HPP

#include <vector>

#include "drmx/program.hpp"
#include "drmx/unify.hpp"

namespace drmx {

struct SldResult {
    std::vector<Substitution> answers; // projected onto the goal's variables
    bool branch_cut = false;           // some branch hit the depth bound
};

// Depth-first SLD resolution over a definite program. Depth counts resolution
// steps; branches beyond the bound fail (branch_cut records that this
// happened). Deterministic given program clause order. Ground numeric
// comparisons gteq/lteq/gt/lt are built in.
SldResult sld_prove(const Program& program, const std::vector<Literal>& goal,
                    int depth_bound, int answer_cap);

bool provable(const Program& program, const std::vector<Literal>& goal, int depth_bound);

bool is_builtin(const Literal& l);

} // namespace drmx

#endif
