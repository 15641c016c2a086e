#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "drmx/errors.hpp"
#include "drmx/parser.hpp"
#include "drmx/sampler.hpp"
#include "drmx/sld.hpp"
#include "drmx/vectorizer.hpp"

#include "oracles.hpp"

using namespace drmx;
using drmx::testing::load_trains;

namespace {

FeatureSet trains_features(const testing::TrainsFixture& t, unsigned long long seed,
                           int draws = 300) {
    RunConfig cfg;
    cfg.seed = seed;
    cfg.max_draws = draws;
    Rng rng(seed);
    return draw_features(t.split.background, t.split.dataset, t.modes, cfg, rng);
}

} // namespace

TEST_CASE("hamming distance equals the naive bit loop") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        int width = 1 + static_cast<int>(rng.below(200));
        FeatureVector u, v;
        u.resize(width);
        v.resize(width);
        for (int i = 0; i < width; ++i) {
            u.set(i, rng.below(2) == 1);
            v.set(i, rng.below(2) == 1);
        }
        int naive = 0;
        for (int i = 0; i < width; ++i)
            if (u.get(i) != v.get(i)) ++naive;
        CHECK(hamming(u, v) == naive);
    }
    FeatureVector a, b;
    a.resize(3);
    b.resize(4);
    CHECK_THROWS_AS(hamming(a, b), Error);
}

TEST_CASE("bitstring and active agree with get") {
    FeatureVector v;
    v.resize(70);
    v.set(0, true);
    v.set(63, true);
    v.set(64, true);
    v.set(69, true);
    CHECK(v.bitstring().size() == 70);
    CHECK(v.active() == std::vector<int>{0, 63, 64, 69});
    for (int i = 0; i < 70; ++i) CHECK((v.bitstring()[static_cast<size_t>(i)] == '1') == v.get(i));
}

TEST_CASE("feature evaluation matches a direct proof") {
    auto t = load_trains();
    auto feats = parse_features(
        "feature(1, (f_1(V0) :- has_car(V0, V1), short(V1), closed(V1))).\n"
        "feature(2, (f_2(V0) :- has_car(V0, V1), shape(V1, elliptical))).\n");
    FeatureSet fs;
    fs.features = feats;

    for (const auto& id : t.split.dataset.instance_order) {
        Program prog = instance_program(t.split.background, t.split.dataset, id);
        FeatureVector v = feature_vector(id, fs, prog, 64);
        // f_1 is the separating rule
        CHECK(v.get(0) == (t.split.dataset.labels.at(id) == "east"));
        // f_2: only t3 and t8 have elliptical cars
        CHECK(v.get(1) == (id == "t3" || id == "t8"));
    }
}

TEST_CASE("parallel vectorization is bit-identical to the serial reference") {
    auto t = load_trains();
    FeatureSet fs = trains_features(t, 13);
    VectorizedDataset par = vectorize(t.split.dataset, fs, t.split.background, 64);
    VectorizedDataset ser = vectorize_serial(t.split.dataset, fs, t.split.background, 64);
    CHECK(serialize_vectors(par) == serialize_vectors(ser));
}

TEST_CASE("vector file round trips") {
    auto t = load_trains();
    FeatureSet fs = trains_features(t, 13, 100);
    VectorizedDataset v1 = vectorize(t.split.dataset, fs, t.split.background, 64);
    VectorizedDataset v2 = parse_vectors(serialize_vectors(v1));
    CHECK(serialize_vectors(v1) == serialize_vectors(v2));
    CHECK(v1.feature_count == v2.feature_count);
    REQUIRE(v1.vectors.size() == v2.vectors.size());
    for (size_t i = 0; i < v1.vectors.size(); ++i) {
        CHECK(v1.vectors[i].instance_id == v2.vectors[i].instance_id);
        CHECK(v1.labels[i] == v2.labels[i]);
    }
}

TEST_CASE("zero features serialize as a dash") {
    auto t = load_trains();
    FeatureSet fs;
    VectorizedDataset v = vectorize(t.split.dataset, fs, t.split.background, 64);
    std::string text = serialize_vectors(v);
    CHECK(text.find(" - ") != std::string::npos);
    VectorizedDataset back = parse_vectors(text);
    CHECK(back.feature_count == 0);
    CHECK(back.vectors.size() == 10);
}

TEST_CASE("malformed vector files are parse errors") {
    CHECK_THROWS_AS(parse_vectors("bogus"), Error);
    CHECK_THROWS_AS(parse_vectors("features 2 instances 1\nt1 101 east\n"), Error);
    CHECK_THROWS_AS(parse_vectors("features 2 instances 2\nt1 10 east\n"), Error);
}
