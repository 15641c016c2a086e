#include "drmx/sld.hpp"

#include <deque>

namespace drmx {

namespace {

bool builtin_holds(const Literal& l) {
    if (l.args.size() != 2) return false;
    const TermPtr& a = l.args[0];
    const TermPtr& b = l.args[1];
    if (a->kind != Term::Kind::Numeric || b->kind != Term::Kind::Numeric) return false;
    const Rational& x = a->value;
    const Rational& y = b->value;
    if (l.pred == "gteq") return !(x < y);
    if (l.pred == "lteq") return !(y < x);
    if (l.pred == "gt") return y < x;
    if (l.pred == "lt") return x < y;
    return false;
}

struct Prover {
    const Program& program;
    int depth_bound;
    int answer_cap;
    SldResult result;
    std::vector<std::string> goal_vars;
    long long rename_counter = 0;

    bool solve(const std::deque<Literal>& goals, const Substitution& s, int depth) {
        if (goals.empty()) {
            Substitution answer;
            for (const auto& v : goal_vars) {
                TermPtr t = s.apply(Term::variable(v));
                if (t->kind != Term::Kind::Variable || t->symbol != v)
                    answer.bindings.emplace(v, t);
            }
            result.answers.push_back(std::move(answer));
            return static_cast<int>(result.answers.size()) >= answer_cap;
        }
        Literal selected = s.apply(goals.front());
        std::deque<Literal> rest(goals.begin() + 1, goals.end());
        if (is_builtin(selected)) {
            if (!builtin_holds(selected)) return false;
            return solve(rest, s, depth);
        }
        if (depth >= depth_bound) {
            result.branch_cut = true;
            return false;
        }
        for (size_t pos : program.matching(selected)) {
            Clause renamed =
                rename_clause(program.clauses()[pos], "#" + std::to_string(rename_counter++));
            Substitution s2 = s;
            bool ok = true;
            for (size_t i = 0; i < selected.args.size() && ok; ++i)
                ok = unify_into(selected.args[i], renamed.head->args[i], s2);
            if (!ok) continue;
            std::deque<Literal> next(renamed.body.begin(), renamed.body.end());
            for (const auto& g : rest) next.push_back(g);
            if (solve(next, s2, depth + 1)) return true;
        }
        return false;
    }
};

} // namespace

bool is_builtin(const Literal& l) {
    return l.args.size() == 2 &&
           (l.pred == "gteq" || l.pred == "lteq" || l.pred == "gt" || l.pred == "lt");
}

SldResult sld_prove(const Program& program, const std::vector<Literal>& goal,
                    int depth_bound, int answer_cap) {
    Prover p{program, depth_bound, answer_cap};
    for (const auto& l : goal)
        for (const auto& a : l.args) collect_vars(a, p.goal_vars);
    p.solve(std::deque<Literal>(goal.begin(), goal.end()), Substitution{}, 0);
    return std::move(p.result);
}

bool provable(const Program& program, const std::vector<Literal>& goal, int depth_bound) {
    return !sld_prove(program, goal, depth_bound, 1).answers.empty();
}

} // namespace drmx
