#include "drmx/explain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "drmx/errors.hpp"

namespace drmx {

std::string fraction_decimal(const Fraction& f) {
    if (f.den == 0) throw InternalError("fraction with zero denominator");
    if (f.num % f.den == 0) return std::to_string(f.num / f.den) + ".0";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", f.value());
    std::string s(buf);
    while (s.size() > 3 && s.back() == '0') s.pop_back();
    return s;
}

const Body& Explanation::unfolded() const {
    return structured ? unfolded_storage : top_body;
}

Neighborhood neighborhood(const FeatureVector& center, const VectorizedDataset& train,
                          const Predictor& p, int k) {
    Neighborhood nbd;
    nbd.center_id = center.instance_id;
    nbd.k = k;
    nbd.predicted_class = predict(p, center);
    for (size_t i = 0; i < train.vectors.size(); ++i) {
        const FeatureVector& v = train.vectors[i];
        if (hamming(center, v) > k) continue;
        if (predict(p, v) == nbd.predicted_class)
            nbd.e_pos.push_back(v);
        else
            nbd.e_neg.push_back(v);
    }
    if (nbd.size() == 0) {
        nbd.e_pos.push_back(center);
        nbd.empty_fallback = true;
    }
    return nbd;
}

bool covers(const Body& body, const FeatureVector& v) {
    for (int i : body)
        if (!v.get(i)) return false;
    return true;
}

Fraction fidelity(const Body& unfolded_body, const Neighborhood& nbd) {
    if (nbd.size() == 0) throw InternalError("fidelity over empty neighborhood");
    long long agree = 0;
    for (const auto& v : nbd.e_pos)
        if (covers(unfolded_body, v)) ++agree;
    for (const auto& v : nbd.e_neg)
        if (!covers(unfolded_body, v)) ++agree;
    return Fraction{agree, nbd.size()};
}

double theta_estimate(const Body& body, const VectorizedDataset& train) {
    size_t n = train.vectors.size();
    if (n == 0) throw Error(ErrorKind::Usage, "theta estimate needs training vectors");
    double covered = 0.0;
    for (const auto& v : train.vectors)
        if (covers(body, v)) covered += 1.0;
    double theta = covered / static_cast<double>(n);
    double lo = 1.0 / (2.0 * static_cast<double>(n));
    return std::min(std::max(theta, lo), 1.0 - lo);
}

double log_likelihood(const Body& unfolded_body, const Neighborhood& nbd,
                      const LikelihoodConfig& cfg) {
    if (cfg.epsilon <= 0.0 || cfg.epsilon > 1.0)
        throw Error(ErrorKind::Usage, "epsilon must be in (0,1]");
    long long tp = 0, tn = 0;
    for (const auto& v : nbd.e_pos)
        if (covers(unfolded_body, v)) ++tp;
    for (const auto& v : nbd.e_neg)
        if (!covers(unfolded_body, v)) ++tn;
    long long fpn = nbd.size() - tp - tn;
    double e = cfg.epsilon, th = cfg.theta_hat;
    return static_cast<double>(tp) * std::log((1.0 - e) / th + e) +
           static_cast<double>(tn) * std::log((1.0 - e) / (1.0 - th) + e) +
           static_cast<double>(fpn) * std::log(e);
}

namespace {

bool dominates_into(const IntervalSet& s, const IntervalSet& t) {
    // every interval of s is componentwise below some interval of t
    for (const auto& a : s) {
        bool ok = false;
        for (const auto& b : t)
            if (a.lo <= b.lo && a.hi <= b.hi) {
                ok = true;
                break;
            }
        if (!ok) return false;
    }
    return true;
}

} // namespace

Order compare_interval_sets(const IntervalSet& s, const IntervalSet& t) {
    bool st = dominates_into(s, t);
    bool ts = dominates_into(t, s);
    if (st && ts) return Order::Equal;
    if (st) return Order::Less;
    if (ts) return Order::Greater;
    return Order::Incomparable;
}

RelevanceInterval relev_feature(const FeatureDef& f, const RelevanceMap& r) {
    std::set<std::string> preds;
    for (const auto& l : f.clause.body) preds.insert(l.indicator());
    std::vector<int> ranks;
    int unassigned = 0;
    for (const auto& ind : preds) {
        auto rk = r.rank_of(ind);
        if (rk)
            ranks.push_back(*rk);
        else
            ++unassigned;
    }
    if (ranks.empty()) {
        if (r.default_lowest) return RelevanceInterval{0, 0};
        throw Error(ErrorKind::Usage,
                    "feature " + f.name() + " has no relevance-assigned predicate");
    }
    int lo = *std::min_element(ranks.begin(), ranks.end());
    int hi = *std::max_element(ranks.begin(), ranks.end());
    // unassigned (structural) predicates take the highest assigned rank, or
    // the lowest rank under the default-lowest policy
    if (unassigned > 0 && r.default_lowest) lo = 0;
    return RelevanceInterval{lo, hi};
}

namespace {

IntervalSet normalize(IntervalSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

} // namespace

RelevanceInterval relev_block(const Body& block, const FeatureSet& fs, const RelevanceMap& r) {
    RelevanceInterval iv{0, 0};
    bool first = true;
    for (int idx : block) {
        RelevanceInterval fi = relev_feature(fs.features.at(static_cast<size_t>(idx)), r);
        if (first) {
            iv = fi;
            first = false;
        } else {
            iv.lo = std::min(iv.lo, fi.lo);
            iv.hi = std::max(iv.hi, fi.hi);
        }
    }
    if (first) throw InternalError("relevance of empty block");
    return iv;
}

IntervalSet relev_explanation(const Explanation& h, const FeatureSet& fs, const RelevanceMap& r) {
    IntervalSet out;
    if (h.structured) {
        for (const auto& block : h.invented) out.push_back(relev_block(block, fs, r));
    } else {
        out.push_back(relev_block(h.top_body, fs, r));
    }
    return normalize(out);
}

Order compare_labels(const ExplanationLabel& a, const ExplanationLabel& b,
                     const std::string& mode) {
    Order rel = compare_interval_sets(a.relevance, b.relevance);
    if (mode == "dictionary") {
        if (a.fidelity < b.fidelity) return Order::Less;
        if (b.fidelity < a.fidelity) return Order::Greater;
        return rel;
    }
    if (mode != "qualitative") throw Error(ErrorKind::Usage, "unknown compare mode " + mode);
    Order fid = Order::Equal;
    if (a.fidelity < b.fidelity)
        fid = Order::Less;
    else if (b.fidelity < a.fidelity)
        fid = Order::Greater;
    if (fid == Order::Equal) return rel;
    if (rel == Order::Equal) return fid;
    if (rel == fid) return fid;
    return Order::Incomparable;
}

namespace {

// tie-break for equal fidelity: fewer literals, then lexicographic indices
bool body_before(const Body& a, const Body& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

} // namespace

UnstructResult construct_unstruct(const FeatureVector& center, const Neighborhood& nbd,
                                  int beam_width, int max_body) {
    if (beam_width < 1 || max_body < 1)
        throw Error(ErrorKind::Usage, "beam width and body cap must be positive");
    std::vector<int> active = center.active();
    if (active.empty())
        throw Error(ErrorKind::Usage, "center " + center.instance_id + " has no active feature");

    UnstructResult best;
    best.best_fidelity = Fraction{-1, 1};
    auto offer = [&](const Body& b, const Fraction& f) {
        if (best.best_fidelity < f) {
            best.best_fidelity = f;
            best.best_bodies.clear();
            best.best_bodies.push_back(b);
        } else if (f == best.best_fidelity) {
            if (std::find(best.best_bodies.begin(), best.best_bodies.end(), b) ==
                best.best_bodies.end())
                best.best_bodies.push_back(b);
        }
    };

    std::vector<std::pair<Body, Fraction>> beam;
    for (int i : active) {
        Body b{i};
        Fraction f = fidelity(b, nbd);
        offer(b, f);
        beam.emplace_back(std::move(b), f);
    }
    auto prune = [&](std::vector<std::pair<Body, Fraction>>& level) {
        std::sort(level.begin(), level.end(), [](const auto& x, const auto& y) {
            if (x.second == y.second) return body_before(x.first, y.first);
            return y.second < x.second;
        });
        if (static_cast<int>(level.size()) > beam_width)
            level.resize(static_cast<size_t>(beam_width));
    };
    prune(beam);

    for (int len = 2; len <= max_body && !beam.empty(); ++len) {
        std::set<Body> seen;
        std::vector<std::pair<Body, Fraction>> next;
        for (const auto& [b, f] : beam) {
            for (int i : active) {
                if (std::binary_search(b.begin(), b.end(), i)) continue;
                Body child = b;
                child.insert(std::upper_bound(child.begin(), child.end(), i), i);
                if (!seen.insert(child).second) continue;
                Fraction cf = fidelity(child, nbd);
                offer(child, cf);
                next.emplace_back(std::move(child), cf);
            }
        }
        prune(next);
        beam.swap(next);
    }

    std::sort(best.best_bodies.begin(), best.best_bodies.end(), body_before);
    if (static_cast<int>(best.best_bodies.size()) > beam_width)
        best.best_bodies.resize(static_cast<size_t>(beam_width));
    return best;
}

namespace {

int mixed_block_count(const std::vector<Body>& blocks, const FeatureSet& fs,
                      const RelevanceMap& r) {
    int mixed = 0;
    for (const auto& b : blocks) {
        RelevanceInterval iv = relev_block(b, fs, r);
        if (iv.lo != iv.hi) ++mixed;
    }
    return mixed;
}

} // namespace

std::optional<Explanation> construct_struct(const Explanation& unstructured, const FeatureSet& fs,
                                            const RelevanceMap& r, int k) {
    if (unstructured.structured) throw Error(ErrorKind::Usage, "input is already structured");
    if (k < 2) return std::nullopt;
    const Body& body = unstructured.top_body;
    int n = static_cast<int>(body.size());
    if (n < k || n < 2) return std::nullopt;

    int alpha = relev_block(body, fs, r).lo;

    std::optional<std::vector<Body>> best_blocks;
    IntervalSet best_set;
    int best_mixed = 0;
    std::vector<int> best_rgs;

    // restricted growth strings enumerate set partitions exactly once
    std::vector<int> rgs(static_cast<size_t>(n), 0);
    auto consider = [&]() {
        int blocks_n = *std::max_element(rgs.begin(), rgs.end()) + 1;
        if (blocks_n != k) return;
        std::vector<Body> blocks(static_cast<size_t>(k));
        for (int i = 0; i < n; ++i)
            blocks[static_cast<size_t>(rgs[static_cast<size_t>(i)])].push_back(
                body[static_cast<size_t>(i)]);
        bool has_big = false, has_better = false;
        for (const auto& b : blocks) {
            if (b.size() >= 2) has_big = true;
            if (relev_block(b, fs, r).lo > alpha) has_better = true;
        }
        if (!has_big || !has_better) return;
        IntervalSet s;
        for (const auto& b : blocks) s.push_back(relev_block(b, fs, r));
        s = normalize(s);
        if (!best_blocks) {
            best_blocks = blocks;
            best_set = s;
            best_mixed = mixed_block_count(blocks, fs, r);
            best_rgs = rgs;
            return;
        }
        Order o = compare_interval_sets(best_set, s);
        bool take = false;
        if (o == Order::Less) {
            take = true;
        } else if (o == Order::Equal) {
            int mixed = mixed_block_count(blocks, fs, r);
            if (mixed < best_mixed || (mixed == best_mixed && rgs < best_rgs)) take = true;
        }
        if (take) {
            best_blocks = blocks;
            best_set = s;
            best_mixed = mixed_block_count(blocks, fs, r);
            best_rgs = rgs;
        }
    };

    while (true) {
        consider();
        int i = n - 1;
        for (; i > 0; --i) {
            int cap = *std::max_element(rgs.begin(), rgs.begin() + i) + 1;
            if (rgs[static_cast<size_t>(i)] < cap && rgs[static_cast<size_t>(i)] < k - 1) {
                ++rgs[static_cast<size_t>(i)];
                std::fill(rgs.begin() + i + 1, rgs.end(), 0);
                break;
            }
        }
        if (i == 0) break;
    }

    if (!best_blocks) return std::nullopt;
    Explanation out;
    out.structured = true;
    out.class_label = unstructured.class_label;
    out.invented = *best_blocks;
    out.unfolded_storage = body;
    return out;
}

Explanation unfold_explanation(const Explanation& structured) {
    if (!structured.structured) return structured;
    Body body;
    for (const auto& b : structured.invented) body.insert(body.end(), b.begin(), b.end());
    std::sort(body.begin(), body.end());
    body.erase(std::unique(body.begin(), body.end()), body.end());
    Explanation out;
    out.structured = false;
    out.class_label = structured.class_label;
    out.top_body = std::move(body);
    return out;
}

Explanation feature_clause_lgg(const Explanation& a, const Explanation& b) {
    if (a.class_label != b.class_label)
        throw Error(ErrorKind::Usage, "lgg over feature-clauses of different classes");
    const Body& ua = a.unfolded();
    const Body& ub = b.unfolded();
    Explanation out;
    out.class_label = a.class_label;
    std::set_intersection(ua.begin(), ua.end(), ub.begin(), ub.end(),
                          std::back_inserter(out.top_body));
    return out;
}

ExplainResult explain(const FeatureVector& center, const VectorizedDataset& train,
                      const Predictor& p, const FeatureSet& fs, const RelevanceMap& relmap,
                      const RunConfig& cfg) {
    ExplainResult res;
    res.instance_id = center.instance_id;
    res.nbd = neighborhood(center, train, p, cfg.hamming_k);
    res.predicted_class = res.nbd.predicted_class;
    if (center.active().empty()) return res;

    UnstructResult un = construct_unstruct(center, res.nbd, cfg.beam_width, cfg.max_body);

    std::vector<RankedExplanation> cand;
    for (const auto& body : un.best_bodies) {
        Explanation hu;
        hu.class_label = res.predicted_class;
        hu.top_body = body;
        RankedExplanation ru;
        ru.explanation = hu;
        ru.label = ExplanationLabel{un.best_fidelity, relev_explanation(hu, fs, relmap)};
        cand.push_back(std::move(ru));
        auto hs = construct_struct(hu, fs, relmap, cfg.partition_count);
        if (hs) {
            RankedExplanation rs;
            rs.label = ExplanationLabel{un.best_fidelity, relev_explanation(*hs, fs, relmap)};
            rs.explanation = std::move(*hs);
            cand.push_back(std::move(rs));
        }
    }

    // rank by how many rivals strictly dominate each candidate; stable order
    // keeps the beam tie-break among mutually non-dominated labels
    size_t m = cand.size();
    std::vector<int> dominated(m, 0);
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            if (compare_labels(cand[i].label, cand[j].label, cfg.compare_mode) == Order::Less)
                ++dominated[i];
        }
    std::vector<size_t> order(m);
    for (size_t i = 0; i < m; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t x, size_t y) { return dominated[x] < dominated[y]; });
    for (size_t i : order) {
        cand[i].tie_rank = dominated[i];
        res.ranked.push_back(cand[i]);
    }
    if (!res.ranked.empty()) {
        const Explanation& top = res.ranked.front().explanation;
        res.relevance_changed_selection =
            top.structured || top.top_body != un.best_bodies.front();
    }
    return res;
}

} // namespace drmx
