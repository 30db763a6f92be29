#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ca/transform.hpp"
#include "oracles.hpp"

using namespace ca;

namespace {
const std::vector<std::string> kAB = {"a", "b"};
}

TEST_CASE("directional scalings compose to the uniform scaling") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        long long den = 1 + static_cast<long long>(rng() % 12);
        long long num = 1 + static_cast<long long>(rng() % den);
        Rational r(num, den);  // r in (0, 1]
        Mat2 d = Scaling::diagonal(r).matrix();
        Mat2 a = Scaling::anti_diagonal(r, 16).matrix();
        Mat2 u = Scaling::uniform(r, 16).matrix();
        CHECK(d * a == u);
    }
}

TEST_CASE("the diagonal scaling maps the unit links as published") {
    Rational r(1, 2);
    auto links = mapped_links(Scaling::diagonal(r));
    // (-1,1) -> (-r, r)
    CHECK(links[0].first == -r);
    CHECK(links[0].second == r);
    // (0,1) -> ((1-r)/2, (1+r)/2)
    CHECK(links[1].first == Rational(1, 4));
    CHECK(links[1].second == Rational(3, 4));
    // (1,1) -> (1,1)
    CHECK(links[2].first == Rational(1));
    CHECK(links[2].second == Rational(1));
    for (auto& [dc, dt] : links) CHECK(dc.abs() <= dt);
}

TEST_CASE("output segment formula") {
    TimeBound t{Rational(1), Rational(0)};  // t(n) = n
    OutputSegment seg = output_segment(9, Rational(1, 3), t);
    CHECK(seg.lo == Rational(8, 3));
    CHECK(seg.hi == Rational(16, 3));
    CHECK(seg.time == Rational(28, 3));

    OutputSegment id = output_segment(7, Rational(1), t);
    CHECK(id.lo == Rational(0));
    CHECK(id.hi == Rational(6));
    CHECK(id.time == Rational(14));

    OutputSegment one = output_segment(1, Rational(1, 2), t);
    CHECK(one.lo == Rational(0));
    CHECK(one.hi == Rational(0));
}

TEST_CASE("scaling an engine diagram preserves feasibility") {
    Construction mir = mirror_sync(kAB);
    Word w = word_from_string("abba");
    SpaceTimeDiagram d = run(mir.automaton, w, 6);
    RationalDiagram rd = diagram_from_run(d);
    CHECK(rd.feasible());

    Rational r(1, 2);
    Scaling s = Scaling::diagonal(r);
    auto region = [](const Rational& c, const Rational& t) {
        return t > c + Rational(1) || t == c + Rational(1);
    };
    RationalDiagram scaled = scale_diagram(rd, s, region);
    CHECK(scaled.feasible());

    Scaling s2 = Scaling::anti_diagonal(r, 4);
    auto region2 = [](const Rational& c, const Rational& t) {
        return Rational(3) - c < t;
    };
    RationalDiagram scaled2 = scale_diagram(scaled, s2, region2);
    CHECK(scaled2.feasible());
}

TEST_CASE("slowed mirror passes the linear contract at 2n") {
    Construction sm = slowed_mirror(kAB);
    for (size_t n : {1, 2, 3, 5, 8, 13}) {
        std::mt19937_64 rng(n);
        Word w = oracle::random_word(rng, kAB, n);
        VerificationReport rep = verify(sm.automaton, sm.contract, sm.spec, w);
        REQUIRE(rep.pass);
        CHECK(rep.observed == oracle::reverse(w));
    }
}

TEST_CASE("speedup with r = 1 returns the automaton unchanged") {
    Construction sm = slowed_mirror(kAB);
    TimeBound t{Rational(1), Rational(0)};
    SpedUp s = speedup(sm.automaton, sm.spec, t, Rational(1), false);
    VerificationReport rep =
        verify(s.automaton, s.contract, s.spec, word_from_string("ab"));
    CHECK(rep.pass);
}

TEST_CASE("speedup halves the slack of the slowed mirror") {
    Construction sm = slowed_mirror(kAB);
    TimeBound t{Rational(1), Rational(0)};
    SpedUp s = speedup(sm.automaton, sm.spec, t, Rational(1, 2));
    for (size_t n = 1; n <= 24; ++n) {
        std::mt19937_64 rng(n * 3 + 1);
        Word w = oracle::random_word(rng, kAB, n);
        size_t T = accelerated_time(n, Rational(1, 2), t);
        CHECK(T == n + (n + 1) / 2);
        VerificationReport rep = verify(s.automaton, s.contract, s.spec, w);
        INFO("n = ", n, " word ", word_to_string(w));
        REQUIRE(rep.pass);
        CHECK(rep.observed == oracle::reverse(w));
    }
}

TEST_CASE("speedup by a third") {
    Construction sm = slowed_mirror(kAB);
    TimeBound t{Rational(1), Rational(0)};
    SpedUp s = speedup(sm.automaton, sm.spec, t, Rational(1, 3));
    for (size_t n = 1; n <= 24; ++n) {
        std::mt19937_64 rng(n * 7 + 5);
        Word w = oracle::random_word(rng, kAB, n);
        VerificationReport rep = verify(s.automaton, s.contract, s.spec, w);
        INFO("n = ", n, " word ", word_to_string(w));
        REQUIRE(rep.pass);
    }
}

TEST_CASE("speedup rejects a falsified bound") {
    // an automaton that never computes its claimed function fails the
    // pre-transform verification of the declared bound
    Construction fake = construction_by_name("identity-as-mirror", kAB);
    TimeBound t{Rational(1), Rational(0)};
    CHECK_THROWS_AS(speedup(fake.automaton, fake.spec, t, Rational(1, 2)), bound_error);
}

TEST_CASE("composition of linear computers computes g after f") {
    Construction a = slowed_mirror(kAB);
    Construction b = slowed_mirror(kAB);
    ComposedLinear comp = compose_linear(a.automaton, a.contract, a.spec, b.automaton,
                                         b.contract, b.spec);
    std::mt19937_64 rng(17);
    for (int i = 0; i < 25; ++i) {
        size_t n = 1 + rng() % 16;
        Word w = oracle::random_word(rng, kAB, n);
        VerificationReport rep = verify(comp.automaton, comp.contract, comp.spec, w);
        INFO("mirror o mirror, n = ", n);
        REQUIRE(rep.pass);
        CHECK(rep.observed == w);  // mirror twice is the identity
    }
}

TEST_CASE("composition requires matching alphabets") {
    Construction a = slowed_mirror(kAB);
    Construction b = slowed_mirror({"x", "y"});
    CHECK_THROWS_AS(compose_linear(a.automaton, a.contract, a.spec, b.automaton,
                                   b.contract, b.spec),
                    domain_error);
}

TEST_CASE("strict algorithms with a synchronizing hold accelerate to linear time") {
    // strict real time, wrapped so the output holds, declared as t(n) = n,
    // then sped up: the result passes the faster linear contract
    for (const char* name : {"f", "g"}) {
        Construction strict = construction_by_name(name, kAB);
        Automaton held = hold_to_synchronous(strict.automaton);
        TimeBound t{Rational(1), Rational(0)};
        SpedUp sp = speedup(held, strict.spec, t, Rational(1, 2), false);
        std::mt19937_64 rng(5);
        for (int i = 0; i < 6; ++i) {
            size_t n = 2 * (1 + rng() % 5);
            Word w = oracle::random_word(rng, kAB, n);
            VerificationReport rep = verify(sp.automaton, sp.contract, sp.spec, w);
            INFO(name, " accelerated, n = ", n);
            REQUIRE(rep.pass);
        }
    }
}
