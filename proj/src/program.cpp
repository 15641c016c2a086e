#include "drmx/program.hpp"

#include "drmx/errors.hpp"

namespace drmx {

const std::vector<size_t> Program::empty_{};

Program::Program(std::vector<Clause> clauses) {
    for (auto& c : clauses) add(std::move(c));
}

void Program::add(Clause c) {
    if (!c.is_definite()) throw InternalError("program clause without head");
    index_[c.head->indicator()].push_back(clauses_.size());
    clauses_.push_back(std::move(c));
}

void Program::add_all(const std::vector<Clause>& cs) {
    for (const auto& c : cs) add(c);
}

const std::vector<size_t>& Program::matching(const Literal& goal) const {
    auto it = index_.find(goal.indicator());
    return it == index_.end() ? empty_ : it->second;
}

} // namespace drmx
