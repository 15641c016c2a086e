#include "drmx/report.hpp"

#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "drmx/errors.hpp"

namespace drmx {

namespace {

const FeatureDef& feature_at(const FeatureSet& fs, int idx) {
    return fs.features.at(static_cast<size_t>(idx));
}

std::string interval_str(const RelevanceInterval& iv, const RelevanceMap& r) {
    return "[" + r.label_at(iv.lo) + "," + r.label_at(iv.hi) + "]";
}

std::string interval_set_str(const IntervalSet& s, const RelevanceMap& r) {
    std::string out = "{";
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += interval_str(s[i], r);
    }
    return out + "}";
}

std::string body_atoms(const Body& body, const FeatureSet& fs) {
    std::string out;
    for (size_t i = 0; i < body.size(); ++i) {
        if (i) out += ", ";
        out += feature_at(fs, body[static_cast<size_t>(i)]).name() + "(X)";
    }
    return out;
}

std::string top_clause_str(const Explanation& h, const FeatureSet& fs) {
    std::string head = "class(X," + h.class_label + ")";
    if (h.structured) {
        std::string out = head + " :- ";
        for (size_t b = 0; b < h.invented.size(); ++b) {
            if (b) out += ", ";
            out += "f_" + std::to_string(b + 1) + "_inv(X)";
        }
        return out;
    }
    return head + " :- " + body_atoms(h.top_body, fs);
}

std::string invented_name(size_t block) { return "f_" + std::to_string(block + 1) + "_inv"; }

std::string invented_clause_str(const Explanation& h, size_t block, const FeatureSet& fs) {
    return invented_name(block) + "(X) :- " + body_atoms(h.invented[block], fs);
}

void collect_mentioned(const ExplainResult& res, std::set<int>& idxs) {
    for (const auto& rk : res.ranked)
        for (int i : rk.explanation.unfolded()) idxs.insert(i);
}

} // namespace

std::string serialize_report(const ExplainResult& res, const FeatureSet& fs,
                             const RelevanceMap& relmap) {
    std::ostringstream os;
    os << "instance " << res.instance_id << "\n";
    os << "predicted class " << res.predicted_class << "\n";
    os << "neighborhood: k=" << res.nbd.k << ", |E+|=" << res.nbd.e_pos.size()
       << ", |E-|=" << res.nbd.e_neg.size() << "\n";
    if (res.nbd.empty_fallback)
        os << "note: empty neighborhood, explaining the instance alone\n";
    if (res.ranked.empty()) {
        os << "no explanations (instance has no active feature)\n";
        return os.str();
    }

    bool unstruct_header = false, struct_header = false;
    int hn = 0;
    for (const auto& rk : res.ranked) {
        const Explanation& h = rk.explanation;
        if (!h.structured && !unstruct_header) {
            os << "\nUnstructured explanation(s):\n";
            unstruct_header = true;
        }
        if (h.structured && !struct_header) {
            os << "\nStructured explanation(s):\n";
            struct_header = true;
        }
        ++hn;
        os << "Label: ⟨L=" << fraction_decimal(rk.label.fidelity)
           << ", P=" << interval_set_str(rk.label.relevance, relmap) << "⟩\n";
        os << "Explanation H" << hn << " (rank " << rk.tie_rank << "):\n";
        os << "  " << top_clause_str(h, fs) << "\n";
        if (h.structured)
            for (size_t b = 0; b < h.invented.size(); ++b)
                os << "  " << invented_clause_str(h, b, fs) << "   (relev = "
                   << interval_str(relev_block(h.invented[b], fs, relmap), relmap)
                   << ")\n";
    }

    std::set<int> mentioned;
    collect_mentioned(res, mentioned);
    os << "\nFeature-definitions:\n";
    for (int i : mentioned) {
        const FeatureDef& f = feature_at(fs, i);
        os << clause_str(f.clause) << "   (relev = "
           << interval_str(relev_feature(f, relmap), relmap) << ")\n";
    }
    return os.str();
}

std::string serialize_report_json(const ExplainResult& res, const FeatureSet& fs,
                                  const RelevanceMap& relmap, unsigned long long seed,
                                  const RunConfig& cfg) {
    using json = nlohmann::ordered_json;
    json doc;
    doc["run"]["seed"] = seed;
    doc["run"]["config"] = json::parse(cfg.to_json());
    doc["instance_id"] = res.instance_id;
    doc["prediction"] = res.predicted_class;
    doc["neighborhood"] = {{"k", res.nbd.k},
                           {"n_pos", res.nbd.e_pos.size()},
                           {"n_neg", res.nbd.e_neg.size()},
                           {"empty_fallback", res.nbd.empty_fallback}};
    doc["explanations"] = json::array();
    for (const auto& rk : res.ranked) {
        const Explanation& h = rk.explanation;
        json e;
        e["kind"] = h.structured ? "structured" : "unstructured";
        e["fidelity"] = rk.label.fidelity.value();
        e["relevance_intervals"] = json::array();
        for (const auto& iv : rk.label.relevance)
            e["relevance_intervals"].push_back({relmap.label_at(iv.lo), relmap.label_at(iv.hi)});
        e["top_clause"] = top_clause_str(h, fs);
        e["invented"] = json::array();
        if (h.structured)
            for (size_t b = 0; b < h.invented.size(); ++b) {
                RelevanceInterval iv = relev_block(h.invented[b], fs, relmap);
                e["invented"].push_back({{"name", invented_name(b)},
                                         {"clause", invented_clause_str(h, b, fs)},
                                         {"interval", {relmap.label_at(iv.lo), relmap.label_at(iv.hi)}}});
            }
        e["tie_rank"] = rk.tie_rank;
        doc["explanations"].push_back(std::move(e));
    }
    return doc.dump(2) + "\n";
}

} // namespace drmx
