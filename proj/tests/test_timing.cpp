#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ca/algorithms.hpp"
#include "ca/build.hpp"
#include "ca/timing.hpp"
#include "oracles.hpp"

using namespace ca;

namespace {
const std::vector<std::string> kAB = {"a", "b"};
}

TEST_CASE("output sites match the definitional formulas") {
    auto strict4 = OutputContract::strict().sites(4);
    std::vector<std::pair<size_t, size_t>> want4 = {{0, 4}, {1, 3}, {2, 3}, {3, 4}};
    CHECK(strict4 == want4);

    auto strict1 = OutputContract::strict().sites(1);
    CHECK(strict1 == std::vector<std::pair<size_t, size_t>>{{0, 1}});

    auto sync5 = OutputContract::synchronous().sites(5);
    for (size_t i = 0; i < 5; ++i) {
        CHECK(sync5[i].first == i);
        CHECK(sync5[i].second == 5);
    }

    auto lin = OutputContract::linear(Rational(2)).sites(3);
    for (auto& [c, t] : lin) CHECK(t == 6);

    // ceiling for non-integral k*n
    auto lin32 = OutputContract::linear(Rational(3, 2)).sites(3);
    for (auto& [c, t] : lin32) CHECK(t == 5);

    // formula recomputation across kinds and sizes
    for (size_t n = 1; n <= 256; ++n) {
        auto s = OutputContract::strict().sites(n);
        auto o = oracle::strict_sites(n);
        REQUIRE(s.size() == n);
        for (size_t i = 0; i < n; ++i) {
            CHECK(s[i] == o[i]);
            CHECK(s[i].second == std::max(i + 1, n - i));
        }
        for (auto& [c, t] : OutputContract::synchronous().sites(n)) CHECK(t == n);
    }
}

TEST_CASE("read_output needs a tall enough diagram") {
    Automaton id = identity_automaton(kAB);
    SpaceTimeDiagram d = run(id, word_from_string("ab"), 1);
    CHECK_THROWS_AS(read_output(d, OutputContract::synchronous(), id.project),
                    trace_error);
}

TEST_CASE("verify reports mismatches with the earliest violation") {
    Construction mir = mirror_sync(kAB);
    VerificationReport rep = verify(mir.automaton, mir.contract, mir.spec,
                                    word_from_string("abba"));
    CHECK(rep.pass);
    CHECK(word_to_string(rep.observed) == "abba");

    rep = verify(mir.automaton, mir.contract, mir.spec, word_from_string("aab"));
    CHECK(rep.pass);
    CHECK(word_to_string(rep.observed) == "baa");

    // identity claimed as mirror fails at cell 0 time 2 on "ab"
    Construction fake = construction_by_name("identity-as-mirror", kAB);
    rep = verify(fake.automaton, fake.contract, fake.spec, word_from_string("ab"));
    CHECK(!rep.pass);
    CHECK(rep.first_violation.find("cell 0 time 2") != std::string::npos);

    CHECK_THROWS_AS(verify(mir.automaton, mir.contract, mir.spec, Word{}),
                    domain_error);
}

TEST_CASE("synchronization layer fires at exactly n") {
    for (size_t n = 1; n <= 64; ++n) {
        SquadComponent sc = fssp_component(n);
        CHECK(squad_fires_exactly(sc.automaton, sc.initial, n));
    }
    // and not one step earlier or later: spot checks
    SquadComponent sc = fssp_component(8);
    Configuration c = sc.initial;
    State fire = *sc.automaton.states->find(squad_fire_name());
    for (size_t t = 1; t <= 8; ++t) {
        c = step(sc.automaton, c);
        size_t fired = 0;
        for (State s : c)
            if (s == fire) ++fired;
        if (t < 8) CHECK(fired == 0);
        if (t == 8) CHECK(fired == 8);
    }
}

TEST_CASE("slowed squad fires at factor*n") {
    for (unsigned factor : {2u, 3u}) {
        Automaton layer = slowed_squad_layer(factor);
        for (size_t n : {1, 2, 3, 5, 8, 13}) {
            Configuration c(n, layer.input_states[0]);
            c.front() = layer.input_states[1];
            c.back() = layer.input_states[1];
            bool fired_early = false;
            size_t fire_time = 0;
            for (size_t t = 1; t <= factor * n; ++t) {
                c = step(layer, c);
                size_t fired = 0;
                for (State s : c)
                    if (layer.project(s) == "1") ++fired;
                if (fired > 0 && fired < n) fired_early = true;
                if (fired == n && fire_time == 0) fire_time = t;
                if (fired > 0 && t < factor * n) fired_early = true;
            }
            CHECK(!fired_early);
            CHECK(fire_time == factor * n);
        }
    }
}

TEST_CASE("strict marker marks exactly the strict sites") {
    for (size_t n = 1; n <= 64; ++n) {
        MarkerComponent mc = strict_site_marker(n);
        auto marks = marked_sites(mc.automaton, mc.initial, n + 2);
        auto want = OutputContract::strict().sites(n);
        std::sort(marks.begin(), marks.end());
        std::sort(want.begin(), want.end());
        CHECK(marks == want);
    }
}

TEST_CASE("hold layer turns a strict computer into a synchronous one") {
    for (const char* name : {"f", "g"}) {
        Construction strict = construction_by_name(name, kAB);
        Automaton synced = hold_to_synchronous(strict.automaton);
        OutputContract sync = OutputContract::synchronous();
        for (size_t n : {2, 4, 6, 8}) {
            std::mt19937_64 rng(n * 17);
            for (int i = 0; i < 8; ++i) {
                Word w = oracle::random_word(rng, kAB, n);
                VerificationReport rep = verify(synced, sync, strict.spec, w);
                CHECK(rep.pass);
            }
        }
    }
}

TEST_CASE("verification report serializes to JSON") {
    Construction mir = mirror_sync(kAB);
    VerificationReport rep =
        verify(mir.automaton, mir.contract, mir.spec, word_from_string("ab"));
    std::string j = rep.to_json();
    CHECK(j.find("\"pass\":true") != std::string::npos);
    CHECK(j.find("\"sites\"") != std::string::npos);
}
