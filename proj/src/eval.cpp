#include "drmx/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "drmx/errors.hpp"
#include "drmx/network.hpp"
#include "drmx/rng.hpp"
#include "drmx/sampler.hpp"
#include "drmx/vectorizer.hpp"

namespace drmx {

std::vector<int> assign_folds(const Dataset& data, int folds, unsigned long long seed) {
    size_t n = data.instance_order.size();
    if (folds < 2) throw Error(ErrorKind::Usage, "folds must be at least 2");
    if (static_cast<int>(n) < folds)
        throw Error(ErrorKind::Usage, "fewer instances than folds");
    std::map<std::string, std::vector<size_t>> by_class;
    for (size_t i = 0; i < n; ++i)
        by_class[data.labels.at(data.instance_order[i])].push_back(i);

    Rng rng(seed);
    Rng folds_rng = rng.substream(0x666f6c64); // "fold"
    std::vector<int> assign(n, 0);
    int next = 0;
    for (const auto& c : data.class_set) {
        auto& idxs = by_class[c];
        for (size_t i = idxs.size(); i > 1; --i)
            std::swap(idxs[i - 1], idxs[folds_rng.below(i)]);
        for (size_t i = 0; i < idxs.size(); ++i) {
            assign[idxs[i]] = next % folds;
            ++next;
        }
    }
    return assign;
}

namespace {

Dataset subset(const Dataset& data, const std::vector<size_t>& idxs) {
    Dataset out;
    for (size_t i : idxs) {
        const std::string& id = data.instance_order[i];
        out.instance_order.push_back(id);
        out.labels[id] = data.labels.at(id);
        auto it = data.facts.find(id);
        if (it != data.facts.end()) out.facts[id] = it->second;
    }
    out.class_set = data.class_set; // keep the full class order across folds
    return out;
}

struct Agg {
    std::vector<double> xs;
    void add(double x) { xs.push_back(x); }
    double mean() const {
        if (xs.empty()) return 0.0;
        double s = 0.0;
        for (double x : xs) s += x;
        return s / static_cast<double>(xs.size());
    }
    double sd() const {
        if (xs.size() < 2) return 0.0;
        double m = mean(), s = 0.0;
        for (double x : xs) s += (x - m) * (x - m);
        return std::sqrt(s / static_cast<double>(xs.size() - 1));
    }
};

} // namespace

EvalSummary crossval(const Program& background, const Dataset& data,
                     const std::vector<ModeDecl>& modes, const RelevanceMap& relmap,
                     const RunConfig& cfg) {
    cfg.validate();
    std::vector<int> assign = assign_folds(data, cfg.folds, cfg.seed);
    size_t n = data.instance_order.size();

    EvalSummary summary;
    Agg acc, fid, esz, fstruct, freff;
    for (int f = 0; f < cfg.folds; ++f) {
        std::vector<size_t> train_idx, test_idx;
        for (size_t i = 0; i < n; ++i)
            (assign[i] == f ? test_idx : train_idx).push_back(i);
        Dataset train_data = subset(data, train_idx);
        Dataset test_data = subset(data, test_idx);

        RunConfig fold_cfg = cfg;
        Rng fold_rng = Rng(cfg.seed).substream(0x65760000ULL + static_cast<unsigned>(f));
        fold_cfg.seed = fold_rng.below(1ULL << 62);

        Rng sample_rng(fold_cfg.seed);
        FeatureSet fs = draw_features(background, train_data, modes, fold_cfg, sample_rng);

        VectorizedDataset train_vec = vectorize(train_data, fs, background, cfg.sld_depth);
        VectorizedDataset test_vec = vectorize(test_data, fs, background, cfg.sld_depth);

        auto [net, report] = train(train_vec, data.class_set, fold_cfg);
        Predictor p;
        p.network = std::move(net);
        p.class_set = data.class_set;

        FoldStats fstats;
        fstats.fold = f;
        fstats.feature_count = static_cast<int>(fs.size());
        Agg a, fi, sz, st, re;
        for (size_t t = 0; t < test_vec.vectors.size(); ++t) {
            const FeatureVector& center = test_vec.vectors[t];
            fstats.test_ids.push_back(center.instance_id);
            ExplainResult res = explain(center, train_vec, p, fs, relmap, fold_cfg);
            a.add(res.predicted_class == test_vec.labels[t] ? 1.0 : 0.0);
            if (!res.ranked.empty()) {
                const RankedExplanation& top = res.ranked.front();
                fi.add(top.label.fidelity.value());
                sz.add(static_cast<double>(top.explanation.unfolded().size()));
                st.add(top.explanation.structured ? 1.0 : 0.0);
                re.add(res.relevance_changed_selection ? 1.0 : 0.0);
            }
            fstats.explanations.push_back(std::move(res));
        }
        fstats.accuracy = a.mean();
        fstats.mean_fidelity = fi.mean();
        fstats.mean_explanation_size = sz.mean();
        fstats.fraction_structured = st.mean();
        fstats.fraction_relevance_effect = re.mean();
        acc.add(fstats.accuracy);
        fid.add(fstats.mean_fidelity);
        esz.add(fstats.mean_explanation_size);
        fstruct.add(fstats.fraction_structured);
        freff.add(fstats.fraction_relevance_effect);
        summary.folds.push_back(std::move(fstats));
    }
    summary.mean_accuracy = acc.mean();
    summary.sd_accuracy = acc.sd();
    summary.mean_fidelity = fid.mean();
    summary.sd_fidelity = fid.sd();
    summary.mean_explanation_size = esz.mean();
    summary.sd_explanation_size = esz.sd();
    summary.mean_fraction_structured = fstruct.mean();
    summary.sd_fraction_structured = fstruct.sd();
    summary.mean_relevance_effect = freff.mean();
    summary.sd_relevance_effect = freff.sd();
    return summary;
}

std::string serialize_eval(const EvalSummary& s, unsigned long long seed, const RunConfig& cfg) {
    using json = nlohmann::ordered_json;
    json doc;
    doc["run"]["seed"] = seed;
    doc["run"]["config"] = json::parse(cfg.to_json());
    doc["folds"] = json::array();
    for (const auto& f : s.folds)
        doc["folds"].push_back({{"fold", f.fold},
                                {"test_ids", f.test_ids},
                                {"feature_count", f.feature_count},
                                {"accuracy", f.accuracy},
                                {"mean_fidelity", f.mean_fidelity},
                                {"mean_explanation_size", f.mean_explanation_size},
                                {"fraction_structured", f.fraction_structured},
                                {"fraction_relevance_effect", f.fraction_relevance_effect}});
    doc["summary"] = {{"accuracy", {{"mean", s.mean_accuracy}, {"sd", s.sd_accuracy}}},
                      {"fidelity", {{"mean", s.mean_fidelity}, {"sd", s.sd_fidelity}}},
                      {"explanation_size",
                       {{"mean", s.mean_explanation_size}, {"sd", s.sd_explanation_size}}},
                      {"fraction_structured",
                       {{"mean", s.mean_fraction_structured}, {"sd", s.sd_fraction_structured}}},
                      {"relevance_effect",
                       {{"mean", s.mean_relevance_effect}, {"sd", s.sd_relevance_effect}}}};
    return doc.dump(2) + "\n";
}

} // namespace drmx
