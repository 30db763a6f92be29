#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ca/core.hpp"

namespace ca {

// ---------------------------------------------------------------------------
// small dense rules over sigma states (census workloads bypass the engine's
// automaton machinery; bases range over the full state set)

struct SmallRule {
    int sigma = 2;
    std::vector<uint8_t> table;  // sigma^3 entries, index (l*sigma+c)*sigma+r

    uint8_t apply(uint8_t l, uint8_t c, uint8_t r) const {
        return table[(static_cast<size_t>(l) * sigma + c) * sigma + r];
    }
    static SmallRule random(int sigma, uint64_t seed);
    static SmallRule elementary(int wolfram_code);  // sigma = 2
    std::string id() const;
};

// two-part state partition
struct Partition {
    std::vector<uint8_t> part;  // per state, 0 or 1
    static Partition random(int sigma, uint64_t seed);
    std::string id() const;
};

// Triangular extract: row k has n-2k cells; row k+1 cell j follows from row k
// cells j, j+1, j+2. Computed border-free.
struct Triangle {
    std::vector<std::vector<uint8_t>> rows;
    size_t height() const { return rows.size(); }
};

Triangle triangle_of_base(const SmallRule& rule, const std::vector<uint8_t>& base);

// Characteristic word of a triangle under a partition; nullopt when some row
// mixes both parts.
std::optional<std::string> characteristic(const Partition& p, const Triangle& t);

// ---------------------------------------------------------------------------
// census

struct CensusMode {
    bool exhaustive = true;
    uint64_t samples = 0;
    uint64_t seed = 0;
    static CensusMode all() { return {true, 0, 0}; }
    static CensusMode sampled(uint64_t count, uint64_t s) { return {false, count, s}; }
};

struct CensusReport {
    size_t n = 0;
    std::string rule_id;
    std::string partition_id;
    bool exhaustive = true;
    uint64_t total_bases = 0;     // sigma^n in exhaustive mode, samples otherwise
    uint64_t non_uniform = 0;
    std::map<std::string, uint64_t> counts;     // characteristic -> bases
    std::vector<std::string> missing;           // characteristics with no base
    uint64_t min_count = 0;                     // over present characteristics
    std::string min_characteristic;

    std::string to_json() const;
};

// Exhaustive budget: sigma^n must not exceed this many bases.
uint64_t census_budget();

CensusReport census(const SmallRule& rule, const Partition& p, size_t n,
                    const CensusMode& mode, unsigned workers = 1);

std::vector<std::string> find_missing(const SmallRule& rule, const Partition& p, size_t n,
                                      unsigned workers = 1);

// ---------------------------------------------------------------------------
// v sequence: v_1 = sigma^4/4, v_{n+1} = v_n^2 / 2^{2^{n-1}}

// minimal unsigned bignum, enough for exact v_n comparisons
struct BigUint {
    std::vector<uint32_t> limbs;  // little endian, no trailing zeros

    static BigUint from_u64(uint64_t v);
    static BigUint pow(uint64_t base, uint64_t exp);
    static BigUint shl(const BigUint& a, uint64_t bits);  // a * 2^bits
    friend BigUint operator*(const BigUint& a, const BigUint& b);
    friend bool operator<(const BigUint& a, const BigUint& b);
    friend bool operator==(const BigUint& a, const BigUint& b);
    std::string to_decimal() const;
};

struct VEntry {
    uint64_t sigma_exp = 0;  // v = sigma^sigma_exp / 2^two_exp
    uint64_t two_exp = 0;
    bool below_one(int sigma) const;
    std::string str(int sigma) const;
};

struct VSequence {
    int sigma = 2;
    std::vector<VEntry> entries;             // v_1..v_k
    std::optional<size_t> first_below_one;   // 1-based index

    std::string to_json() const;
};

VSequence v_sequence(int sigma, size_t upto);

}  // namespace ca
