#include "drmx/vectorizer.hpp"

#include <bit>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "drmx/errors.hpp"
#include "drmx/saturation.hpp"
#include "drmx/sld.hpp"
#include "drmx/unify.hpp"

namespace drmx {

std::vector<int> FeatureVector::active() const {
    std::vector<int> out;
    for (int i = 0; i < width; ++i)
        if (get(i)) out.push_back(i);
    return out;
}

std::string FeatureVector::bitstring() const {
    std::string s(static_cast<size_t>(width), '0');
    for (int i = 0; i < width; ++i)
        if (get(i)) s[static_cast<size_t>(i)] = '1';
    return s;
}

int hamming(const FeatureVector& u, const FeatureVector& v) {
    if (u.width != v.width) throw InternalError("hamming width mismatch");
    int d = 0;
    for (size_t w = 0; w < u.words.size(); ++w)
        d += std::popcount(u.words[w] ^ v.words[w]);
    return d;
}

bool evaluate_feature(const FeatureDef& f, const Program& inst_prog, const std::string& instance_id,
                      int sld_depth, bool* branch_cut) {
    Substitution bind;
    bind.bindings.emplace(f.head_var(), Term::constant(instance_id));
    std::vector<Literal> goal;
    goal.reserve(f.clause.body.size());
    for (const auto& l : f.clause.body) goal.push_back(bind.apply(l));
    SldResult res = sld_prove(inst_prog, goal, sld_depth, 1);
    if (branch_cut && res.branch_cut) *branch_cut = true;
    return !res.answers.empty();
}

FeatureVector feature_vector(const std::string& instance_id, const FeatureSet& fs,
                             const Program& inst_prog, int sld_depth) {
    FeatureVector v;
    v.instance_id = instance_id;
    v.resize(static_cast<int>(fs.size()));
    for (size_t i = 0; i < fs.size(); ++i)
        v.set(static_cast<int>(i),
              evaluate_feature(fs.features[i], inst_prog, instance_id, sld_depth));
    return v;
}

namespace {

VectorizedDataset vectorize_impl(const Dataset& data, const FeatureSet& fs,
                                 const Program& background, int sld_depth, bool parallel) {
    VectorizedDataset out;
    out.feature_count = static_cast<int>(fs.size());
    size_t n = data.instance_order.size();
    out.vectors.resize(n);
    out.labels.resize(n);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        const std::string& id = data.instance_order[static_cast<size_t>(i)];
        Program prog = instance_program(background, data, id);
        out.vectors[static_cast<size_t>(i)] = feature_vector(id, fs, prog, sld_depth);
        out.labels[static_cast<size_t>(i)] = data.labels.at(id);
    }
    (void)parallel;
    return out;
}

} // namespace

VectorizedDataset vectorize(const Dataset& data, const FeatureSet& fs, const Program& background,
                            int sld_depth) {
    return vectorize_impl(data, fs, background, sld_depth, true);
}

VectorizedDataset vectorize_serial(const Dataset& data, const FeatureSet& fs,
                                   const Program& background, int sld_depth) {
    return vectorize_impl(data, fs, background, sld_depth, false);
}

std::string serialize_vectors(const VectorizedDataset& v) {
    std::ostringstream os;
    os << "features " << v.feature_count << " instances " << v.vectors.size() << "\n";
    for (size_t i = 0; i < v.vectors.size(); ++i)
        os << v.vectors[i].instance_id << " "
           << (v.feature_count == 0 ? "-" : v.vectors[i].bitstring()) << " " << v.labels[i]
           << "\n";
    return os.str();
}

VectorizedDataset parse_vectors(const std::string& text) {
    std::istringstream is(text);
    std::string kw1, kw2;
    VectorizedDataset out;
    size_t n = 0;
    if (!(is >> kw1 >> out.feature_count >> kw2 >> n) || kw1 != "features" || kw2 != "instances")
        throw Error(ErrorKind::Parse, "bad vector file header");
    for (size_t i = 0; i < n; ++i) {
        std::string id, bits, label;
        if (!(is >> id >> bits >> label)) throw Error(ErrorKind::Parse, "truncated vector file");
        FeatureVector v;
        v.instance_id = id;
        v.resize(out.feature_count);
        if (out.feature_count > 0) {
            if (static_cast<int>(bits.size()) != out.feature_count)
                throw Error(ErrorKind::Parse, "bitstring width mismatch for " + id);
            for (int b = 0; b < out.feature_count; ++b)
                v.set(b, bits[static_cast<size_t>(b)] == '1');
        }
        out.vectors.push_back(std::move(v));
        out.labels.push_back(label);
    }
    return out;
}

} // namespace drmx
