#ifndef DRMX_EXPLAIN_HPP
#define DRMX_EXPLAIN_HPP

#include <optional>
#include <string>
#include <vector>

#include "drmx/feature.hpp"
#include "drmx/kb.hpp"
#include "drmx/network.hpp"
#include "drmx/vectorizer.hpp"

namespace drmx {

// Exact rational in [0,1]; fidelity must never round.
struct Fraction {
    long long num = 0;
    long long den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Fraction& o) const {
        return static_cast<__int128>(num) * o.den == static_cast<__int128>(o.num) * den;
    }
    bool operator<(const Fraction& o) const {
        return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
    }
};

std::string fraction_decimal(const Fraction& f); // "1.0", "0.8", "0.6667"

// Training instances within Hamming radius k of the center, split by predictor
// agreement with the center's predicted class. The center joins E+ when it is
// itself a training instance; an empty neighborhood falls back to E+={center}.
struct Neighborhood {
    std::string center_id;
    int k = 0;
    std::string predicted_class;
    std::vector<FeatureVector> e_pos;
    std::vector<FeatureVector> e_neg;
    bool empty_fallback = false;

    int size() const { return static_cast<int>(e_pos.size() + e_neg.size()); }
};

Neighborhood neighborhood(const FeatureVector& center, const VectorizedDataset& train,
                          const Predictor& p, int k);

// Body feature-index sets are kept sorted; coverage is bit-subset testing.
using Body = std::vector<int>;

bool covers(const Body& body, const FeatureVector& v);

struct RelevanceInterval {
    int lo = 0;
    int hi = 0; // ranks into RelevanceMap::labels; lo <= hi

    bool operator==(const RelevanceInterval& o) const { return lo == o.lo && hi == o.hi; }
    bool operator<(const RelevanceInterval& o) const {
        return lo != o.lo ? lo < o.lo : hi < o.hi;
    }
};

using IntervalSet = std::vector<RelevanceInterval>; // sorted, deduplicated

enum class Order { Less, Equal, Greater, Incomparable };

// S <= S' iff every interval of S is dominated by some interval of S'
// (componentwise on ranks). Mutually dominated unequal sets compare Equal.
Order compare_interval_sets(const IntervalSet& s, const IntervalSet& t);

struct Explanation {
    bool structured = false;
    std::string class_label;
    Body top_body;                  // unstructured: B-feature indices
    std::vector<Body> invented;     // structured: one block of B-features per invented feature
    // unfolded B-feature body (equals top_body when unstructured)
    const Body& unfolded() const;
    Body unfolded_storage;
};

struct ExplanationLabel {
    Fraction fidelity;
    IntervalSet relevance;
};

Fraction fidelity(const Body& unfolded_body, const Neighborhood& nbd);

struct LikelihoodConfig {
    double epsilon = 0.05;
    double theta_hat = 0.5; // clamped empirical coverage over the training vectors
};

double theta_estimate(const Body& body, const VectorizedDataset& train);
double log_likelihood(const Body& unfolded_body, const Neighborhood& nbd,
                      const LikelihoodConfig& cfg);

// Per-feature relevance interval: [min,max] rank over the definition's body
// predicates. Unassigned predicates take the highest rank among the feature's
// assigned predicates (structural-predicate convention), or the lowest rank
// under the default-lowest policy; a feature with no assigned predicate at all
// is an error unless default-lowest is active.
RelevanceInterval relev_feature(const FeatureDef& f, const RelevanceMap& r);

// [min,max] rank over a block of B-features (union of their intervals).
RelevanceInterval relev_block(const Body& block, const FeatureSet& fs, const RelevanceMap& r);

IntervalSet relev_explanation(const Explanation& h, const FeatureSet& fs, const RelevanceMap& r);

Order compare_labels(const ExplanationLabel& a, const ExplanationLabel& b,
                     const std::string& mode);

// Beam search over the subset lattice of the center's active features.
// Returns every body attaining the best fidelity seen, capped at beam_width
// (tie-break: fewer literals, then lexicographic index order).
struct UnstructResult {
    std::vector<Body> best_bodies;
    Fraction best_fidelity;
};
UnstructResult construct_unstruct(const FeatureVector& center, const Neighborhood& nbd,
                                  int beam_width, int max_body);

// Exhaustive enumeration of all qualifying k-partitions (some block of size
// >= 2, some block whose minimum relevance strictly exceeds the unstructured
// lower bound); returns the relevance-maximal one, or nullopt when none
// qualifies.
std::optional<Explanation> construct_struct(const Explanation& unstructured, const FeatureSet& fs,
                                            const RelevanceMap& r, int k);

Explanation unfold_explanation(const Explanation& structured);

// Lgg of two feature-clauses with the same class: body intersection (exact
// for unary feature literals over one shared variable). Throws on class
// mismatch; a disjoint pair yields an empty (head-only) body.
Explanation feature_clause_lgg(const Explanation& a, const Explanation& b);

struct RankedExplanation {
    Explanation explanation;
    ExplanationLabel label;
    int tie_rank = 0; // 0 = top; equal ranks are mutually non-dominated
};

struct ExplainResult {
    std::string instance_id;
    std::string predicted_class;
    Neighborhood nbd;
    std::vector<RankedExplanation> ranked;
    // index into `ranked` of the fidelity-only selection (beam tie-break
    // order, ignoring relevance); relevance changed the outcome when the
    // dictionary top differs from it
    bool relevance_changed_selection = false;
};

ExplainResult explain(const FeatureVector& center, const VectorizedDataset& train,
                      const Predictor& p, const FeatureSet& fs, const RelevanceMap& relmap,
                      const RunConfig& cfg);

} // namespace drmx

#endif
