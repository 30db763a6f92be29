#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ca/assembly.hpp"
#include "oracles.hpp"

using namespace ca;

namespace {

std::vector<MacroToken> values(std::initializer_list<uint64_t> vs) {
    std::vector<MacroToken> out;
    for (auto v : vs) out.push_back({{v}});
    return out;
}

std::vector<MacroToken> edges(std::initializer_list<std::pair<uint64_t, uint64_t>> es) {
    std::vector<MacroToken> out;
    for (auto& [a, b] : es) out.push_back({{a, b}});
    return out;
}

}  // namespace

TEST_CASE("macro sort orders the stream") {
    AgentProgram p = sort_program(4);
    CHECK(macro_run(p, values({3, 1, 2})).output == std::vector<uint64_t>{1, 2, 3});
    CHECK(macro_run(p, values({5, 5, 5})).output == std::vector<uint64_t>{5, 5, 5});

    std::mt19937_64 rng(21);
    for (int i = 0; i < 300; ++i) {
        size_t n = 1 + rng() % 8;
        std::vector<uint64_t> vals;
        std::vector<MacroToken> toks;
        for (size_t k = 0; k < n; ++k) {
            vals.push_back(rng() % 16);
            toks.push_back({{vals.back()}});
        }
        auto out = macro_run(p, toks).output;
        CHECK(out == oracle::sorted(vals));
        // permutation invariance
        auto copy = out;
        std::sort(copy.begin(), copy.end());
        CHECK(copy == oracle::sorted(vals));
    }
}

TEST_CASE("macro reorder reconstructs the path, anchored to the published example") {
    AgentProgram p = path_reorder_program(4);
    auto res = macro_run(
        p, edges({{6, 12}, {2, 6}, {1, 11}, {12, 7}, {8, 1}, {7, 8}}));
    CHECK(res.output == std::vector<uint64_t>{2, 6, 12, 7, 8, 1, 11});

    CHECK(macro_run(p, edges({{1, 2}})).output == std::vector<uint64_t>{1, 2});
    CHECK(macro_run(p, edges({{2, 3}, {1, 2}})).output ==
          std::vector<uint64_t>{1, 2, 3});

    // each merging agent removes exactly one vertex
    CHECK(res.eliminated.size() == 5);
    std::sort(res.eliminated.begin(), res.eliminated.end());
    CHECK(std::unique(res.eliminated.begin(), res.eliminated.end()) ==
          res.eliminated.end());

    // invalid instances
    CHECK_THROWS_AS(macro_run(p, edges({{1, 2}, {3, 4}})), instance_error);
    CHECK_THROWS_AS(macro_run(p, edges({{1, 2}, {2, 3}, {3, 1}})), instance_error);

    // random simple paths against the graph-walk oracle
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        size_t len = 1 + rng() % 8;
        std::vector<uint64_t> verts(len + 1);
        std::iota(verts.begin(), verts.end(), 1);
        std::shuffle(verts.begin(), verts.end(), rng);
        std::vector<std::pair<uint64_t, uint64_t>> path_edges;
        for (size_t i = 0; i < len; ++i) {
            if (rng() & 1)
                path_edges.emplace_back(verts[i], verts[i + 1]);
            else
                path_edges.emplace_back(verts[i + 1], verts[i]);
        }
        std::shuffle(path_edges.begin(), path_edges.end(), rng);
        std::vector<MacroToken> toks;
        for (auto& [a, b] : path_edges) toks.push_back({{a, b}});
        auto out = macro_run(p, toks).output;
        auto walk = oracle::path_walk(path_edges);
        REQUIRE(!walk.empty());
        if (out != walk) std::reverse(walk.begin(), walk.end());
        CHECK(out == walk);
    }
}

TEST_CASE("macro components label edges with their component minimum") {
    AgentProgram p = components_program(4);
    CHECK(macro_run(p, edges({{1, 2}, {3, 4}, {2, 5}})).output ==
          std::vector<uint64_t>{1, 3, 1});
    CHECK(macro_run(p, edges({{7, 9}})).output == std::vector<uint64_t>{7});

    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        size_t m = 1 + rng() % 10;
        std::vector<std::pair<uint64_t, uint64_t>> es;
        std::vector<MacroToken> toks;
        for (size_t i = 0; i < m; ++i) {
            uint64_t a = 1 + rng() % 12, b = 1 + rng() % 12;
            es.emplace_back(a, b);
            toks.push_back({{a, b}});
        }
        CHECK(macro_run(p, toks).output == oracle::component_labels(es));
    }
}

TEST_CASE("block encoding round trips") {
    AgentProgram p = sort_program(3);
    auto toks = values({5, 0, 7});
    Word w = encode_tokens(p, toks);
    CHECK(word_to_string(w) == "101|000|111");
    auto back = decode_tokens(p, w);
    REQUIRE(back.size() == 3);
    CHECK(back[0].fields[0] == 5);
    CHECK(back[2].fields[0] == 7);

    AgentProgram e = components_program(2);
    Word we = encode_tokens(e, edges({{1, 2}, {3, 0}}));
    CHECK(word_to_string(we) == "01|10|11|00");
    CHECK(decode_tokens(e, we).size() == 2);

    CHECK_THROWS_AS(decode_tokens(p, word_from_string("10")), malformed_input_error);
    CHECK_THROWS_AS(decode_tokens(p, word_from_string("101|")), malformed_input_error);
}

namespace {

void check_compiled(const AgentProgram& base, unsigned m, int trials, uint64_t seed,
                    bool edges_mode, bool paths_mode) {
    CompiledProgram cp = compile_to_ca(base, m);
    std::mt19937_64 rng(seed);
    uint64_t maxv = (1ull << m) - 1;
    for (int trial = 0; trial < trials; ++trial) {
        size_t n_tok = 1 + rng() % 8;
        std::vector<MacroToken> toks;
        if (paths_mode) {
            size_t len = 1 + rng() % std::min<size_t>(7, maxv);
            if (len + 1 > maxv) len = maxv > 1 ? maxv - 1 : 1;
            std::vector<uint64_t> verts(len + 1);
            std::iota(verts.begin(), verts.end(), 0);
            std::shuffle(verts.begin(), verts.end(), rng);
            std::vector<std::pair<uint64_t, uint64_t>> pe;
            for (size_t i = 0; i < len; ++i)
                pe.emplace_back(verts[i], verts[i + 1]);
            std::shuffle(pe.begin(), pe.end(), rng);
            for (auto& [a, b] : pe) toks.push_back({{a, b}});
        } else if (edges_mode) {
            for (size_t i = 0; i < n_tok; ++i)
                toks.push_back({{rng() % (maxv + 1), rng() % (maxv + 1)}});
        } else {
            for (size_t i = 0; i < n_tok; ++i) toks.push_back({{rng() % (maxv + 1)}});
        }
        Word input = encode_tokens(cp.program, toks);
        if (!cp.spec.domain(input)) continue;
        VerificationReport rep =
            verify(cp.automaton, cp.contract, cp.spec, input);
        INFO(base.name, " m=", m, " input ", word_to_string(input));
        REQUIRE(rep.pass);
    }
}

}  // namespace

TEST_CASE("compiled sort conveyor equals the macro scheme") {
    CompiledProgram cp = compile_to_ca(sort_program(2), 2);
    Word w = word_from_string("11|01|10");
    VerificationReport rep = verify(cp.automaton, cp.contract, cp.spec, w);
    REQUIRE(rep.pass);
    CHECK(word_to_string(rep.observed) == "01|10|11");

    Word single = word_from_string("10");
    CHECK(word_to_string(verify(cp.automaton, cp.contract, cp.spec, single).observed) ==
          "10");

    for (unsigned m : {2u, 3u, 4u}) check_compiled(sort_program(m), m, 60, 500 + m, false, false);
}

TEST_CASE("compiled reorder conveyor equals the macro scheme") {
    // the published example needs 4-bit vertices
    CompiledProgram cp = compile_to_ca(path_reorder_program(4), 4);
    auto toks = edges({{6, 12}, {2, 6}, {1, 11}, {12, 7}, {8, 1}, {7, 8}});
    Word input = encode_tokens(cp.program, toks);
    VerificationReport rep = verify(cp.automaton, cp.contract, cp.spec, input);
    REQUIRE(rep.pass);
    CHECK(rep.observed == expected_output_word(cp.program, input));

    for (unsigned m : {3u, 4u}) check_compiled(path_reorder_program(m), m, 50, 900 + m, false, true);
}

TEST_CASE("compiled components conveyor equals the macro scheme") {
    for (unsigned m : {2u, 3u, 4u}) check_compiled(components_program(m), m, 60, 300 + m, true, false);
}
