#ifndef DRMX_PROGRAM_HPP
#define DRMX_PROGRAM_HPP

#include <unordered_map>
#include <vector>

#include "drmx/term.hpp"

namespace drmx {

// Definite-clause program with a predicate/arity index over clause positions.
class Program {
public:
    Program() = default;
    explicit Program(std::vector<Clause> clauses);

    void add(Clause c);
    void add_all(const std::vector<Clause>& cs);

    const std::vector<Clause>& clauses() const { return clauses_; }
    const std::vector<size_t>& matching(const Literal& goal) const;

private:
    std::vector<Clause> clauses_;
    std::unordered_map<std::string, std::vector<size_t>> index_;
    static const std::vector<size_t> empty_;
};

} // namespace drmx

#endif
