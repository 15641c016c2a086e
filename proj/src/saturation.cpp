#include "drmx/saturation.hpp"

#include <set>

#include "drmx/errors.hpp"
#include "drmx/sld.hpp"
#include "drmx/unify.hpp"

namespace drmx {

Program instance_program(const Program& background, const Dataset& data, const std::string& id) {
    Program p = background;
    auto it = data.facts.find(id);
    if (it != data.facts.end()) p.add_all(it->second);
    return p;
}

namespace {

struct VarInfo {
    std::string type;
    int depth;
    TermPtr ground; // the term this variable stands for during saturation
};

} // namespace

BottomClause build_bottom_clause(const Program& prog, const std::string& instance_id,
                                 const std::string& class_label,
                                 const std::vector<ModeDecl>& modes, int depth, int recall_cap,
                                 int literal_cap, int sld_depth) {
    const ModeDecl& hm = head_mode(modes);
    BottomClause bottom;
    bottom.instance_id = instance_id;
    bottom.class_label = class_label;

    int var_counter = 0;
    std::vector<std::string> var_order;         // creation order
    std::map<std::string, VarInfo> vars;        // name -> info
    std::map<std::string, std::string> by_term; // ground term string -> var name

    auto fresh_var = [&](const std::string& type, int d, const TermPtr& ground) {
        std::string name = "V" + std::to_string(var_counter++);
        vars[name] = {type, d, ground};
        var_order.push_back(name);
        by_term[term_str(ground)] = name;
        return name;
    };

    // head: "+" slots become depth-0 variables standing for the instance
    // constant; "#" slots take the class label
    Literal head;
    head.pred = hm.pred;
    TermPtr inst = Term::constant(instance_id);
    for (const auto& a : hm.args) {
        switch (a.role) {
        case ModeArg::Role::Input:
            head.args.push_back(Term::variable(fresh_var(a.type, 0, inst)));
            break;
        case ModeArg::Role::Constant:
            head.args.push_back(Term::constant(class_label));
            break;
        case ModeArg::Role::Output:
            throw Error(ErrorKind::Parse, "head mode may not contain an output placemarker");
        }
    }
    bottom.clause.head = head;
    for (const auto& v : var_order) bottom.var_depth[v] = 0;

    std::set<std::string> called; // (mode index, input tuple) calls already made

    for (int layer = 0; layer < depth; ++layer) {
        if (bottom.truncated) break;
        size_t vars_before_layer = var_order.size();
        for (size_t mi = 0; mi < modes.size() && !bottom.truncated; ++mi) {
            const ModeDecl& m = modes[mi];
            if (m.head) continue;

            // candidate variables per "+" slot: in-scope vars of the slot type
            std::vector<std::vector<std::string>> slot_cands;
            for (const auto& a : m.args) {
                if (a.role != ModeArg::Role::Input) continue;
                std::vector<std::string> cands;
                for (size_t vi = 0; vi < vars_before_layer; ++vi) {
                    const auto& v = var_order[vi];
                    if (vars[v].type == a.type && vars[v].depth <= layer) cands.push_back(v);
                }
                slot_cands.push_back(std::move(cands));
            }
            if (slot_cands.empty())
                throw Error(ErrorKind::Parse, "body mode without input placemarker: " + m.indicator());
            bool any_empty = false;
            for (const auto& c : slot_cands) any_empty = any_empty || c.empty();
            if (any_empty) continue;

            std::vector<size_t> pick(slot_cands.size(), 0);
            while (!bottom.truncated) {
                std::vector<std::string> tuple;
                for (size_t i = 0; i < pick.size(); ++i) tuple.push_back(slot_cands[i][pick[i]]);

                std::string call_key = std::to_string(mi);
                for (const auto& v : tuple) call_key += "," + v;
                if (called.insert(call_key).second) {
                    // build the query: "+" slots ground, "-"/"#" slots fresh
                    Literal query;
                    query.pred = m.pred;
                    int qv = 0;
                    size_t in_slot = 0;
                    for (const auto& a : m.args) {
                        if (a.role == ModeArg::Role::Input)
                            query.args.push_back(vars[tuple[in_slot++]].ground);
                        else
                            query.args.push_back(Term::variable("Q" + std::to_string(qv++)));
                    }
                    SldResult res =
                        sld_prove(prog, {query}, sld_depth, m.recall * 16 + 64);

                    int taken = 0;
                    std::set<std::string> seen;
                    for (const auto& ans : res.answers) {
                        if (taken >= std::min(m.recall, recall_cap)) break;
                        Literal ground = ans.apply(query);
                        if (!seen.insert(literal_str(ground)).second) continue; // duplicate answer
                        ++taken;

                        Literal lit;
                        lit.pred = m.pred;
                        BottomLiteralInfo info;
                        info.mode_index = mi;
                        info.in_vars = tuple;
                        size_t slot = 0, in2 = 0;
                        for (const auto& a : m.args) {
                            const TermPtr& gt = ground.args[slot++];
                            switch (a.role) {
                            case ModeArg::Role::Input:
                                lit.args.push_back(Term::variable(tuple[in2++]));
                                break;
                            case ModeArg::Role::Output: {
                                auto it = by_term.find(term_str(gt));
                                std::string v = it != by_term.end()
                                                    ? it->second
                                                    : fresh_var(a.type, layer + 1, gt);
                                bottom.var_depth[v] = vars[v].depth;
                                info.out_vars.push_back(v);
                                lit.args.push_back(Term::variable(v));
                                break;
                            }
                            case ModeArg::Role::Constant:
                                lit.args.push_back(gt);
                                break;
                            }
                        }

                        bool dup = false;
                        for (const auto& b : bottom.clause.body)
                            if (literal_equal(b, lit)) dup = true;
                        if (dup) continue;

                        if (static_cast<int>(bottom.clause.body.size()) >= literal_cap) {
                            bottom.truncated = true;
                            break;
                        }
                        bottom.clause.body.push_back(lit);
                        bottom.provenance.push_back(info);
                    }
                }

                size_t i = 0;
                for (; i < pick.size(); ++i) {
                    if (++pick[i] < slot_cands[i].size()) break;
                    pick[i] = 0;
                }
                if (i == pick.size()) break;
            }
        }
    }
    return bottom;
}

MostSpecificFeatureClause most_specific_feature_clause(const std::vector<int>& active_features,
                                                       const std::string& class_label) {
    MostSpecificFeatureClause out;
    Literal head;
    head.pred = "class";
    head.args = {Term::variable("X"), Term::constant(class_label)};
    out.clause.head = head;
    if (active_features.empty()) {
        out.no_active_features = true;
        return out;
    }
    for (int i : active_features) {
        Literal l;
        l.pred = "f_" + std::to_string(i + 1); // feature names are 1-based
        l.args = {Term::variable("X")};
        out.clause.body.push_back(l);
    }
    return out;
}

} // namespace drmx
