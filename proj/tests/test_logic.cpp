#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "drmx/errors.hpp"
#include "drmx/minmodel.hpp"
#include "drmx/parser.hpp"
#include "drmx/sld.hpp"
#include "drmx/subsume.hpp"
#include "drmx/unify.hpp"

#include "oracles.hpp"

using namespace drmx;
using drmx::testing::brute_subsumes;
using drmx::testing::random_clause;

namespace {

Clause clause(const std::string& text) {
    Program p = parse_program(text);
    REQUIRE(p.clauses().size() == 1);
    return p.clauses().front();
}

std::vector<Literal> goal(const std::string& text) {
    // parse "g :- Goal." and take the body
    return clause("g :- " + text + ".").body;
}

} // namespace

TEST_CASE("rational normalization and order") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, -4) == Rational(1, 2));
    CHECK(Rational(1, -2) == Rational(-1, 2));
    CHECK(Rational(0, 5) == Rational(0, 1));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(1, 3));
    CHECK_FALSE(Rational(1, 2) < Rational(1, 2));
}

TEST_CASE("unification basics") {
    auto X = Term::variable("X");
    auto Y = Term::variable("Y");
    auto a = Term::constant("a");

    SUBCASE("variable to constant") {
        auto s = unify_terms(X, a);
        REQUIRE(s);
        CHECK(term_equal(s->apply(X), a));
    }
    SUBCASE("occurs check rejects X = f(X)") {
        auto fx = Term::compound("f", {X});
        CHECK_FALSE(unify_terms(X, fx).has_value());
    }
    SUBCASE("mgu is idempotent") {
        auto s = unify_terms(Term::compound("f", {X, Y}), Term::compound("f", {Y, a}));
        REQUIRE(s);
        auto t = Term::compound("f", {X, Y});
        CHECK(term_str(s->apply(t)) == term_str(s->apply(s->apply(t))));
        CHECK(term_str(s->apply(t)) == "f(a,a)");
    }
    SUBCASE("functor clash fails") {
        CHECK_FALSE(
            unify_terms(Term::compound("f", {X}), Term::compound("g", {X})).has_value());
    }
    SUBCASE("distinct constants fail") { CHECK_FALSE(unify_terms(a, Term::constant("b"))); }
}

TEST_CASE("sld resolution on ground facts and rules") {
    Program p = parse_program(
        "parent(ann, bob). parent(bob, cat). parent(bob, dan)."
        "grand(X, Z) :- parent(X, Y), parent(Y, Z).");

    SUBCASE("enumerates answers in clause order") {
        SldResult r = sld_prove(p, goal("grand(ann, Z)"), 32, 10);
        REQUIRE(r.answers.size() == 2);
        CHECK(term_str(r.answers[0].apply(Term::variable("Z"))) == "cat");
        CHECK(term_str(r.answers[1].apply(Term::variable("Z"))) == "dan");
        CHECK_FALSE(r.branch_cut);
    }
    SUBCASE("answer cap truncates") {
        SldResult r = sld_prove(p, goal("parent(bob, Z)"), 32, 1);
        CHECK(r.answers.size() == 1);
    }
    SUBCASE("failure yields no answers") {
        CHECK(sld_prove(p, goal("grand(cat, Z)"), 32, 10).answers.empty());
    }
}

TEST_CASE("sld depth bound cuts branches without erroring") {
    Program p = parse_program("nat(z). nat(s(X)) :- nat(X).");
    SldResult r = sld_prove(p, goal("nat(Y)"), 5, 100);
    CHECK(r.answers.size() >= 1);
    CHECK(r.answers.size() <= 5);
    CHECK(r.branch_cut);
}

TEST_CASE("numeric builtins evaluate only on ground rationals") {
    Program empty;
    CHECK(provable(empty, goal("gteq(0.2, 0.1)"), 8));
    CHECK_FALSE(provable(empty, goal("gteq(0.1, 0.2)"), 8));
    CHECK(provable(empty, goal("lteq(1, 1)"), 8));
    CHECK(provable(empty, goal("lt(-1, 0)"), 8));
    CHECK(provable(empty, goal("gt(3, 2.99)"), 8));
    CHECK_FALSE(provable(empty, goal("gteq(X, 0.1)"), 8)); // nonground fails
    CHECK_FALSE(provable(empty, goal("gteq(a, b)"), 8));   // non-numeric fails
}

TEST_CASE("theta subsumption hand cases") {
    SUBCASE("renaming subsumes both ways") {
        Clause c = clause("h(X) :- p(X, Y).");
        Clause d = clause("h(A) :- p(A, B).");
        CHECK(theta_subsumes(c, d));
        CHECK(theta_subsumes(d, c));
        CHECK(subsumption_equivalent(c, d));
    }
    SUBCASE("generalization subsumes the specialization") {
        Clause c = clause("h(X) :- p(X, Y).");
        Clause d = clause("h(X) :- p(X, a), q(X).");
        CHECK(theta_subsumes(c, d));
        CHECK_FALSE(theta_subsumes(d, c));
    }
    SUBCASE("variable collapse is allowed") {
        Clause c = clause("h(X) :- p(X, Y), p(Y, X).");
        Clause d = clause("h(A) :- p(A, A).");
        CHECK(theta_subsumes(c, d));
    }
    SUBCASE("head must match") {
        Clause c = clause("h(a) :- p(X).");
        Clause d = clause("h(b) :- p(X).");
        CHECK_FALSE(theta_subsumes(c, d));
    }
    SUBCASE("longer clause can subsume a shorter one") {
        Clause c = clause("h(X) :- p(X, Y), p(X, Z).");
        Clause d = clause("h(X) :- p(X, a).");
        CHECK(theta_subsumes(c, d));
        CHECK(subsumption_equivalent(c, d) ==
              (theta_subsumes(c, d) && theta_subsumes(d, c)));
    }
}

TEST_CASE("theta subsumption agrees with the brute-force oracle") {
    Rng rng(2024);
    int checked = 0;
    for (int i = 0; i < 1500; ++i) {
        Clause c = random_clause(rng, 4, 3, 3);
        Clause d = random_clause(rng, 4, 3, 3);
        bool fast = theta_subsumes(c, d);
        bool brute = brute_subsumes(c, d);
        CHECK(fast == brute);
        ++checked;
    }
    CHECK(checked == 1500);
}

TEST_CASE("subsumption is reflexive and transitive on random clauses") {
    Rng rng(77);
    for (int i = 0; i < 200; ++i) {
        Clause c = random_clause(rng, 3, 3, 3);
        CHECK(theta_subsumes(c, c));
    }
    // build chains a <= b <= c by specializing, then check a <= c
    auto specialize = [&](Clause c) {
        Substitution s;
        for (const auto& v : clause_vars(c))
            if (rng.below(2) == 0)
                s.bind(v, Term::constant(std::string(1, static_cast<char>('a' + rng.below(3)))));
        c = s.apply(c);
        Clause extra = random_clause(rng, 2, 3, 3);
        for (const auto& l : extra.body) c.body.push_back(l);
        return c;
    };
    for (int i = 0; i < 200; ++i) {
        Clause a = random_clause(rng, 3, 3, 3);
        Clause b = specialize(a);
        Clause c = specialize(b);
        REQUIRE(theta_subsumes(a, b));
        REQUIRE(theta_subsumes(b, c));
        CHECK(theta_subsumes(a, c));
    }
}

TEST_CASE("subsumption budget raises ResourceExceeded") {
    // a directed cycle cannot map into a directed path, so the matcher must
    // exhaust every assignment before failing
    const int n = 10;
    std::string body, dbody;
    for (int i = 0; i < n; ++i) {
        body += (i ? ", " : "") + std::string("e(X") + std::to_string(i) + ", X" +
                std::to_string((i + 1) % n) + ")";
        dbody += (i ? ", " : "") + std::string("e(a") + std::to_string(i) + ", a" +
                 std::to_string(i + 1) + ")";
    }
    Clause c = clause("h(Z) :- " + body + ".");
    Clause d = clause("h(W) :- " + dbody + ".");
    CHECK_THROWS_AS(theta_subsumes(c, d, 30), ResourceExceeded);
}

TEST_CASE("ground minimal model equals hand enumeration") {
    Program p = parse_program(
        "edge(a, b). edge(b, c)."
        "path(X, Y) :- edge(X, Y)."
        "path(X, Z) :- edge(X, Y), path(Y, Z).");
    std::vector<TermPtr> universe = {Term::constant("a"), Term::constant("b"),
                                     Term::constant("c")};
    auto m = ground_minimal_model(p, universe);
    std::set<std::string> expect = {"edge(a,b)", "edge(b,c)", "path(a,b)",
                                    "path(b,c)", "path(a,c)"};
    CHECK(m == expect);
}

TEST_CASE("minimal model grows monotonically with added facts") {
    Program p = parse_program("edge(a, b). path(X, Y) :- edge(X, Y).");
    std::vector<TermPtr> universe = {Term::constant("a"), Term::constant("b")};
    auto m1 = ground_minimal_model(p, universe);
    p.add(clause("edge(b, a)."));
    auto m2 = ground_minimal_model(p, universe);
    for (const auto& atom : m1) CHECK(m2.count(atom) == 1);
    CHECK(m2.size() > m1.size());
}

TEST_CASE("minimal model instantiation cap raises ResourceExceeded") {
    Program p = parse_program("big(A, B, C, D, E) :- big(B, C, D, E, A).");
    std::vector<TermPtr> universe;
    for (int i = 0; i < 12; ++i) universe.push_back(Term::constant("c" + std::to_string(i)));
    CHECK_THROWS_AS(ground_minimal_model(p, universe, 1000), ResourceExceeded);
}

TEST_CASE("canonical clause key is renaming invariant") {
    Clause c = clause("h(X) :- p(X, Y), q(Y).");
    Clause d = clause("h(B) :- q(A), p(B, A).");
    CHECK(canonical_clause_key(c) == canonical_clause_key(d));
    Clause e = clause("h(X) :- p(X, Y), q(X).");
    CHECK(canonical_clause_key(c) != canonical_clause_key(e));
}
