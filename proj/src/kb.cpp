#include "drmx/kb.hpp"

#include <algorithm>
#include <set>

#include "drmx/errors.hpp"
#include <json.hpp>

namespace drmx {

void validate_modes(const std::vector<ModeDecl>& modes) {
    int heads = 0;
    std::set<std::string> produced;
    for (const auto& m : modes) {
        if (m.head) {
            ++heads;
            for (const auto& a : m.args)
                if (a.role == ModeArg::Role::Input) produced.insert(a.type);
        } else {
            for (const auto& a : m.args)
                if (a.role == ModeArg::Role::Output) produced.insert(a.type);
        }
    }
    if (heads != 1)
        throw Error(ErrorKind::Parse, "expected exactly one head mode, found " + std::to_string(heads));
    for (const auto& m : modes) {
        if (m.head) continue;
        for (const auto& a : m.args)
            if (a.role == ModeArg::Role::Input && !produced.count(a.type))
                throw Error(ErrorKind::Parse, "unproducible input type: " + a.type);
    }
}

const ModeDecl& head_mode(const std::vector<ModeDecl>& modes) {
    for (const auto& m : modes)
        if (m.head) return m;
    throw Error(ErrorKind::Parse, "no head mode declared");
}

int RelevanceMap::rank_of_label(const std::string& label) const {
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return static_cast<int>(i);
    return -1;
}

std::optional<int> RelevanceMap::rank_of(const std::string& indicator) const {
    auto it = assignment.find(indicator);
    if (it == assignment.end()) return std::nullopt;
    return it->second;
}

bool RelevanceMap::single_rank() const {
    std::set<int> ranks;
    for (const auto& [_, r] : assignment) ranks.insert(r);
    return ranks.size() <= 1;
}

int Dataset::class_index(const std::string& c) const {
    auto it = std::find(class_set.begin(), class_set.end(), c);
    return it == class_set.end() ? -1 : static_cast<int>(it - class_set.begin());
}

namespace {

void collect_constants(const TermPtr& t, std::set<std::string>& out) {
    if (t->kind == Term::Kind::Constant) out.insert(t->symbol);
    for (const auto& a : t->args) collect_constants(a, out);
}

} // namespace

SplitKb split_dataset(const Program& kb,
                      const std::vector<std::pair<std::string, std::string>>& examples) {
    SplitKb out;
    for (const auto& [id, label] : examples) {
        if (out.dataset.labels.count(id))
            throw Error(ErrorKind::Parse, "duplicate example id: " + id);
        out.dataset.instance_order.push_back(id);
        out.dataset.labels[id] = label;
        if (out.dataset.class_index(label) < 0) out.dataset.class_set.push_back(label);
    }

    std::vector<std::pair<const Clause*, std::set<std::string>>> ground_facts;
    std::vector<const Clause*> rest;
    for (const auto& c : kb.clauses()) {
        bool ground_fact = c.is_fact();
        if (ground_fact)
            for (const auto& a : c.head->args)
                if (!a->is_ground()) ground_fact = false;
        if (ground_fact) {
            std::set<std::string> consts;
            for (const auto& a : c.head->args) collect_constants(a, consts);
            ground_facts.emplace_back(&c, std::move(consts));
        } else {
            rest.push_back(&c);
        }
    }

    // Synchronous multi-source closure: each round assigns every still-free
    // fact whose owned constants all belong to one instance. A constant later
    // claimed by two instances (a shared value like a wheel count or a shape
    // name) freezes and stops propagating, so t1's "2 wheels" never drags in
    // t2's cars.
    constexpr int kShared = -2, kFree = -1;
    std::map<std::string, int> owner;
    for (size_t i = 0; i < out.dataset.instance_order.size(); ++i)
        owner[out.dataset.instance_order[i]] = static_cast<int>(i);

    std::vector<int> fact_owner(ground_facts.size(), kFree);
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::pair<std::string, int>> claims;
        for (size_t f = 0; f < ground_facts.size(); ++f) {
            if (fact_owner[f] != kFree) continue;
            int who = kFree;
            bool conflict = false;
            for (const auto& s : ground_facts[f].second) {
                auto it = owner.find(s);
                if (it == owner.end() || it->second == kShared) continue;
                if (who == kFree)
                    who = it->second;
                else if (who != it->second)
                    conflict = true;
            }
            if (who == kFree || conflict) continue;
            fact_owner[f] = who;
            changed = true;
            for (const auto& s : ground_facts[f].second) claims.emplace_back(s, who);
        }
        for (const auto& [s, who] : claims) {
            auto it = owner.find(s);
            if (it == owner.end())
                owner[s] = who;
            else if (it->second != who)
                it->second = kShared;
        }
    }

    std::set<const Clause*> claimed;
    for (size_t f = 0; f < ground_facts.size(); ++f) {
        if (fact_owner[f] < 0) continue;
        const std::string& id =
            out.dataset.instance_order[static_cast<size_t>(fact_owner[f])];
        out.dataset.facts[id].push_back(*ground_facts[f].first);
        claimed.insert(ground_facts[f].first);
    }
    for (const auto& id : out.dataset.instance_order) out.dataset.facts[id]; // ensure key

    for (const Clause* c : rest) out.background.add(*c);
    for (auto& [c, _] : ground_facts)
        if (!claimed.count(c)) out.background.add(*c);
    return out;
}

void RunConfig::validate() const {
    auto req = [](bool ok, const char* msg) {
        if (!ok) throw Error(ErrorKind::Usage, msg);
    };
    req(depth >= 0, "depth must be >= 0");
    req(recall_cap > 0, "recall cap must be positive");
    req(max_draws >= 0, "max draws must be >= 0");
    req(max_clause_len > 0, "max clause length must be positive");
    req(literal_cap > 0, "literal cap must be positive");
    req(sld_depth > 0, "sld depth must be positive");
    req(hamming_k >= 0, "hamming k must be >= 0");
    req(beam_width >= 1, "beam width must be >= 1");
    req(max_body >= 1, "max body must be >= 1");
    req(epsilon > 0.0 && epsilon <= 1.0, "epsilon must be in (0,1]");
    req(partition_count >= 2, "partition count must be >= 2");
    req(compare_mode == "dictionary" || compare_mode == "qualitative",
        "compare mode must be dictionary or qualitative");
    req(validation_fraction >= 0.0 && validation_fraction < 1.0,
        "validation fraction must be in [0,1)");
    req(folds >= 2, "folds must be >= 2");
}

std::string RunConfig::to_json() const {
    nlohmann::ordered_json j;
    j["depth"] = depth;
    j["recall_cap"] = recall_cap;
    j["max_draws"] = max_draws;
    j["max_clause_len"] = max_clause_len;
    j["literal_cap"] = literal_cap;
    j["sld_depth"] = sld_depth;
    j["seed"] = seed;
    j["hamming_k"] = hamming_k;
    j["beam_width"] = beam_width;
    j["max_body"] = max_body;
    j["epsilon"] = epsilon;
    j["partition_count"] = partition_count;
    j["compare_mode"] = compare_mode;
    j["hidden"] = hidden;
    j["dropout"] = dropout;
    j["learning_rate"] = learning_rate;
    j["momentum"] = momentum;
    j["epochs"] = epochs;
    j["batch_size"] = batch_size;
    j["validation_fraction"] = validation_fraction;
    j["folds"] = folds;
    return j.dump();
}

} // namespace drmx
