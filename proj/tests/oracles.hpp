#pragma once

// Test-side oracles, independent of the library's computation paths.

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "ca/core.hpp"

namespace oracle {

inline ca::Word reverse(const ca::Word& w) { return ca::Word(w.rbegin(), w.rend()); }

inline ca::Word rotate_half(const ca::Word& w) {
    size_t h = w.size() / 2;
    ca::Word out;
    for (size_t i = 0; i < w.size(); ++i) out.push_back(w[(i + h) % w.size()]);
    return out;
}

inline ca::Word cross_mirror(const ca::Word& w) {
    size_t n = w.size(), h = n / 2;
    ca::Word out;
    for (size_t i = 0; i < h; ++i) out.push_back(w[h - 1 - i]);
    for (size_t i = 0; i < h; ++i) out.push_back(w[n - 1 - i]);
    return out;
}

inline ca::Word reflect_blanks(const ca::Word& w, const std::string& blank) {
    size_t half = w.size() / 2;
    ca::Word out;
    for (size_t i = 0; i < half; ++i) out.push_back(w[w.size() - 1 - i]);
    for (size_t i = 0; i < half; ++i) out.push_back(blank);
    return out;
}

// strict real-time site times straight from the definition
inline std::vector<std::pair<size_t, size_t>> strict_sites(size_t n) {
    std::vector<std::pair<size_t, size_t>> s;
    for (size_t i = 0; i < n; ++i) {
        size_t ta = 2 * i <= n - 1 ? n - i : i + 1;  // first range
        s.emplace_back(i, ta);
    }
    return s;
}

// sorting
inline std::vector<uint64_t> sorted(std::vector<uint64_t> v) {
    std::sort(v.begin(), v.end());
    return v;
}

// union-find component minima per edge
inline std::vector<uint64_t> component_labels(
    const std::vector<std::pair<uint64_t, uint64_t>>& edges) {
    std::map<uint64_t, uint64_t> parent;
    std::function<uint64_t(uint64_t)> find = [&](uint64_t x) {
        if (!parent.count(x)) parent[x] = x;
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    auto unite = [&](uint64_t a, uint64_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };
    for (auto& [a, b] : edges) unite(a, b);
    // path-compress to minima
    std::vector<uint64_t> out;
    for (auto& [a, b] : edges) out.push_back(std::min(find(a), find(b)));
    return out;
}

// walks the path described by an edge list; returns empty when invalid
inline std::vector<uint64_t> path_walk(
    const std::vector<std::pair<uint64_t, uint64_t>>& edges) {
    std::map<uint64_t, std::vector<uint64_t>> adj;
    for (auto& [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<uint64_t> ends;
    for (auto& [v, nb] : adj) {
        if (nb.size() > 2) return {};
        if (nb.size() == 1) ends.push_back(v);
    }
    if (ends.size() != 2) return {};
    std::vector<uint64_t> walk{std::min(ends[0], ends[1]) == ends[0] ? ends[0] : ends[0]};
    walk[0] = ends[0];
    uint64_t prev = UINT64_MAX;
    uint64_t cur = ends[0];
    for (size_t i = 0; i < edges.size(); ++i) {
        auto& nb = adj[cur];
        uint64_t next = UINT64_MAX;
        for (uint64_t cand : nb)
            if (cand != prev || std::count(nb.begin(), nb.end(), prev) > 1) {
                if (cand != prev) {
                    next = cand;
                    break;
                }
            }
        if (next == UINT64_MAX) return {};
        walk.push_back(next);
        prev = cur;
        cur = next;
    }
    if (walk.size() != edges.size() + 1) return {};
    return walk;
}

// random words over a given alphabet
inline ca::Word random_word(std::mt19937_64& rng, const std::vector<std::string>& alpha,
                            size_t len) {
    ca::Word w;
    std::uniform_int_distribution<size_t> d(0, alpha.size() - 1);
    for (size_t i = 0; i < len; ++i) w.push_back(alpha[d(rng)]);
    return w;
}

}  // namespace oracle
