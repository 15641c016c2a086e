#ifndef DRMX_VECTORIZER_HPP
#define DRMX_VECTORIZER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "drmx/feature.hpp"
#include "drmx/kb.hpp"
#include "drmx/program.hpp"

namespace drmx {

// Packed Boolean feature vector; Hamming distance is popcount of XOR.
struct FeatureVector {
    std::string instance_id;
    int width = 0;
    std::vector<uint64_t> words;

    void resize(int w) {
        width = w;
        words.assign((static_cast<size_t>(w) + 63) / 64, 0);
    }
    bool get(int i) const { return (words[static_cast<size_t>(i) / 64] >> (i % 64)) & 1; }
    void set(int i, bool v) {
        uint64_t mask = 1ULL << (i % 64);
        if (v)
            words[static_cast<size_t>(i) / 64] |= mask;
        else
            words[static_cast<size_t>(i) / 64] &= ~mask;
    }
    std::vector<int> active() const;
    std::string bitstring() const;
};

int hamming(const FeatureVector& u, const FeatureVector& v);

struct VectorizedDataset {
    std::vector<FeatureVector> vectors;
    std::vector<std::string> labels; // aligned with vectors
    int feature_count = 0;
};

// True iff the feature's body proves against background + the instance facts.
bool evaluate_feature(const FeatureDef& f, const Program& inst_prog, const std::string& instance_id,
                      int sld_depth, bool* branch_cut = nullptr);

FeatureVector feature_vector(const std::string& instance_id, const FeatureSet& fs,
                             const Program& inst_prog, int sld_depth);

// Vectorize every instance. The parallel version partitions instances across
// OpenMP threads and is bit-identical to the serial reference.
VectorizedDataset vectorize(const Dataset& data, const FeatureSet& fs, const Program& background,
                            int sld_depth);
VectorizedDataset vectorize_serial(const Dataset& data, const FeatureSet& fs,
                                   const Program& background, int sld_depth);

// Vector file: header "features N instances M", then "id bitstring label" lines.
std::string serialize_vectors(const VectorizedDataset& v);
VectorizedDataset parse_vectors(const std::string& text);

} // namespace drmx

#endif
