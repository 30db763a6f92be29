#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ca/build.hpp"
#include "ca/core.hpp"
#include "oracles.hpp"

using namespace ca;

namespace {
const std::vector<std::string> kAB = {"a", "b"};
const std::vector<std::string> kABC = {"a", "b", "c"};
}  // namespace

TEST_CASE("step follows the rule with borders outside the segment") {
    Automaton right = copy_right_automaton(kABC);
    Configuration c = initial_configuration(right, word_from_string("abc"));
    Configuration s = step(right, c);
    CHECK(right.name(s[0]) == "b");
    CHECK(right.name(s[1]) == "c");
    CHECK(right.name(s[2]) == "#");

    Automaton left = copy_left_automaton(kABC);
    Configuration s2 = step(left, initial_configuration(left, word_from_string("abc")));
    CHECK(left.name(s2[0]) == "#");
    CHECK(left.name(s2[1]) == "a");
    CHECK(left.name(s2[2]) == "b");

    Automaton id = identity_automaton(kABC);
    Configuration s3 = step(id, initial_configuration(id, word_from_string("abc")));
    CHECK(id.name(s3[0]) == "a");
    CHECK(id.name(s3[1]) == "b");
    CHECK(id.name(s3[2]) == "c");
}

TEST_CASE("run produces T+1 rows and is deterministic") {
    Automaton id = identity_automaton(kAB);
    SpaceTimeDiagram d = run(id, word_from_string("ab"), 3);
    CHECK(d.rows.size() == 4);
    for (auto& row : d.rows) CHECK(row == d.rows[0]);

    Automaton right = copy_right_automaton(kAB);
    SpaceTimeDiagram d2 = run(right, word_from_string("ab"), 2);
    CHECK(right.name(d2.rows[1][0]) == "b");
    CHECK(right.name(d2.rows[1][1]) == "#");
    CHECK(right.name(d2.rows[2][0]) == "#");
    CHECK(right.name(d2.rows[2][1]) == "#");

    SpaceTimeDiagram d3 = run(right, word_from_string("ab"), 2);
    CHECK(d2.rows == d3.rows);
    CHECK(recompute_diagram(right, d2));

    SpaceTimeDiagram d0 = run(id, word_from_string("ab"), 0);
    CHECK(d0.rows.size() == 1);
}

TEST_CASE("run rejects words outside the input alphabet") {
    Automaton id = identity_automaton(kAB);
    CHECK_THROWS_AS(run(id, word_from_string("ax"), 1), domain_error);
    CHECK_THROWS_AS(run(id, Word{}, 1), domain_error);
}

TEST_CASE("product simulates componentwise") {
    Automaton id = identity_automaton(kAB);
    Automaton right = copy_right_automaton(kAB);
    Automaton p = product(right, id);

    Word w = word_from_string("ab");
    SpaceTimeDiagram dp = run(p, w, 5);
    SpaceTimeDiagram dr = run(right, w, 5);
    SpaceTimeDiagram di = run(id, w, 5);
    for (size_t t = 0; t <= 5; ++t)
        for (size_t c = 0; c < 2; ++c) {
            std::string pair = p.name(dp.rows[t][c]);
            CHECK(pair == product_label(right.name(dr.rows[t][c]), id.name(di.rows[t][c])));
            CHECK(p.project(dp.rows[t][c]) ==
                  product_label(right.project(dr.rows[t][c]), id.project(di.rows[t][c])));
        }
}

TEST_CASE("product requires matching input alphabets") {
    CHECK_THROWS_AS(product(identity_automaton(kAB), identity_automaton(kABC)),
                    domain_error);
}

TEST_CASE("dependency cone holds for fixtures and random rules") {
    Automaton id = identity_automaton(kAB);
    CHECK(dependency_cone_check(id, word_from_string("abab"), 2, word_from_string("abbb"),
                                6));
    Automaton right = copy_right_automaton(kAB);
    CHECK(dependency_cone_check(right, word_from_string("aaaa"), 2,
                                word_from_string("aaba"), 6));

    // random dense rules over {a, b, #}
    std::mt19937_64 rng(7);
    std::vector<std::string> states = {"a", "b", "#"};
    for (int trial = 0; trial < 200; ++trial) {
        std::map<std::string, std::string> table;
        auto rnd_state = [&](bool allow_border) {
            int k = static_cast<int>(rng() % (allow_border ? 3 : 2));
            return states[k];
        };
        Automaton a = make_dense_automaton(
            states, "#",
            [&](const std::string& l, const std::string& c, const std::string& r) {
                if (l == "#" && c == "#" && r == "#") return std::string("#");
                std::string key = l + c + r;
                auto it = table.find(key);
                if (it == table.end()) it = table.emplace(key, rnd_state(true)).first;
                return it->second;
            },
            kAB, kAB,
            [](const std::string& s) { return s == "#" ? "a" : s; });
        size_t n = 2 + rng() % 8;
        Word w = oracle::random_word(rng, kAB, n);
        size_t j = rng() % n;
        Word w2 = w;
        w2[j] = w[j] == "a" ? "b" : "a";
        CHECK(dependency_cone_check(a, w, j, w2, 12));
    }
}

TEST_CASE("grouped automaton advances q base steps per macro step") {
    std::mt19937_64 rng(11);
    std::vector<std::string> states = {"a", "b", "c", "#"};
    for (int trial = 0; trial < 40; ++trial) {
        std::map<std::string, std::string> table;
        Automaton a = make_dense_automaton(
            states, "#",
            [&](const std::string& l, const std::string& c, const std::string& r) {
                if (l == "#" && c == "#" && r == "#") return std::string("#");
                std::string key = l + c + r;
                auto it = table.find(key);
                if (it == table.end())
                    it = table.emplace(key, states[rng() % 4]).first;
                return it->second;
            },
            kABC, kABC,
            [](const std::string& s) { return s == "#" ? "a" : s; });

        for (unsigned q : {2u, 3u}) {
            GroupedAutomaton g = group_automaton(a, q);
            size_t n = 1 + rng() % 9;
            Word w = oracle::random_word(rng, kABC, n);
            Configuration base = initial_configuration(a, w);
            Configuration macro = group_configuration(g, base);
            for (int t = 0; t < 4; ++t) {
                macro = step(g.automaton, macro);
                for (unsigned s = 0; s < q; ++s) base = step(a, base);
                CHECK(ungroup_configuration(g, macro, n) == base);
            }
        }
    }
}

TEST_CASE("diagram and automaton JSON round trips") {
    Automaton right = copy_right_automaton(kAB);
    SpaceTimeDiagram d = run(right, word_from_string("ab"), 2);
    std::string dj = diagram_to_json(right, d);
    CHECK(dj.find("\"width\":2") != std::string::npos);
    std::string grid = diagram_to_text(right, d);
    CHECK(grid == "ab\nb#\n##\n");

    std::string aj = automaton_to_json(right);
    Automaton back = automaton_from_json(aj);
    SpaceTimeDiagram d2 = run(back, word_from_string("ab"), 2);
    for (size_t t = 0; t < d.rows.size(); ++t)
        for (size_t c = 0; c < 2; ++c)
            CHECK(back.name(d2.rows[t][c]) == right.name(d.rows[t][c]));
}

TEST_CASE("malformed automaton JSON is rejected") {
    CHECK_THROWS_AS(automaton_from_json("{"), malformed_input_error);
    CHECK_THROWS_AS(automaton_from_json(R"({"states":["a"],"border":"x",
        "input_alphabet":[],"output_alphabet":[],"projection":{"a":"a"},
        "transitions":[]})"),
                    malformed_input_error);
}
