#include "ca/triangles.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace ca {

using nlohmann::json;

SmallRule SmallRule::random(int sigma, uint64_t seed) {
    if (sigma < 1 || sigma > 16) throw domain_error("sigma out of range");
    SmallRule r;
    r.sigma = sigma;
    size_t sz = static_cast<size_t>(sigma) * sigma * sigma;
    r.table.resize(sz);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(0, sigma - 1);
    for (auto& v : r.table) v = static_cast<uint8_t>(dist(rng));
    return r;
}

SmallRule SmallRule::elementary(int code) {
    if (code < 0 || code > 255) throw domain_error("elementary rule code out of range");
    SmallRule r;
    r.sigma = 2;
    r.table.resize(8);
    for (int l = 0; l < 2; ++l)
        for (int c = 0; c < 2; ++c)
            for (int rr = 0; rr < 2; ++rr) {
                int bit = (l << 2) | (c << 1) | rr;
                r.table[(l * 2 + c) * 2 + rr] = static_cast<uint8_t>((code >> bit) & 1);
            }
    return r;
}

std::string SmallRule::id() const {
    std::ostringstream os;
    os << "s" << sigma << ":";
    for (uint8_t v : table) os << std::hex << static_cast<int>(v);
    return os.str();
}

Partition Partition::random(int sigma, uint64_t seed) {
    Partition p;
    p.part.resize(sigma);
    std::mt19937_64 rng(seed);
    // avoid the two constant partitions when possible
    for (int tries = 0; tries < 64; ++tries) {
        for (auto& b : p.part) b = static_cast<uint8_t>(rng() & 1);
        bool all0 = true, all1 = true;
        for (auto b : p.part) (b ? all0 : all1) = false;
        if (sigma < 2 || (!all0 && !all1)) break;
    }
    return p;
}

std::string Partition::id() const {
    std::string s;
    for (auto b : part) s += b ? '1' : '0';
    return s;
}

Triangle triangle_of_base(const SmallRule& rule, const std::vector<uint8_t>& base) {
    if (base.empty()) throw domain_error("triangle base must be non-empty");
    Triangle t;
    size_t h = (base.size() + 1) / 2;
    t.rows.reserve(h);
    t.rows.push_back(base);
    while (t.rows.size() < h) {
        const auto& prev = t.rows.back();
        std::vector<uint8_t> next(prev.size() - 2);
        for (size_t j = 0; j + 2 < prev.size(); ++j)
            next[j] = rule.apply(prev[j], prev[j + 1], prev[j + 2]);
        t.rows.push_back(std::move(next));
    }
    return t;
}

std::optional<std::string> characteristic(const Partition& p, const Triangle& t) {
    std::string bits;
    bits.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        uint8_t first = p.part[row[0]];
        for (uint8_t s : row)
            if (p.part[s] != first) return std::nullopt;
        bits += first ? '1' : '0';
    }
    return bits;
}

uint64_t census_budget() { return 1ull << 26; }

namespace {

uint64_t pow_u64(uint64_t b, size_t e) {
    uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

struct Tally {
    std::map<std::string, uint64_t> counts;
    uint64_t non_uniform = 0;
};

// counts characteristics over base indices [lo, hi)
Tally tally_range(const SmallRule& rule, const Partition& p, size_t n, uint64_t lo,
                  uint64_t hi) {
    Tally t;
    size_t h = (n + 1) / 2;
    std::vector<uint8_t> base(n);
    std::vector<uint8_t> cur, next;
    std::string bits(h, '0');
    for (uint64_t ix = lo; ix < hi; ++ix) {
        uint64_t v = ix;
        for (size_t i = 0; i < n; ++i) {
            base[i] = static_cast<uint8_t>(v % rule.sigma);
            v /= rule.sigma;
        }
        // inline uniform-triangle walk; bail out on the first mixed row
        cur = base;
        bool uniform = true;
        for (size_t k = 0; k < h; ++k) {
            uint8_t part0 = p.part[cur[0]];
            for (uint8_t s : cur) {
                if (p.part[s] != part0) {
                    uniform = false;
                    break;
                }
            }
            if (!uniform) break;
            bits[k] = part0 ? '1' : '0';
            if (k + 1 == h) break;
            next.assign(cur.size() - 2, 0);
            for (size_t j = 0; j + 2 < cur.size(); ++j)
                next[j] = rule.apply(cur[j], cur[j + 1], cur[j + 2]);
            cur.swap(next);
        }
        if (uniform)
            ++t.counts[bits];
        else
            ++t.non_uniform;
    }
    return t;
}

}  // namespace

CensusReport census(const SmallRule& rule, const Partition& p, size_t n,
                    const CensusMode& mode, unsigned workers) {
    if (n == 0) throw domain_error("census needs n >= 1");
    if (static_cast<size_t>(rule.sigma) != p.part.size())
        throw domain_error("partition does not cover the state set");

    CensusReport rep;
    rep.n = n;
    rep.rule_id = rule.id();
    rep.partition_id = p.id();
    rep.exhaustive = mode.exhaustive;

    size_t h = (n + 1) / 2;
    Tally total;

    if (mode.exhaustive) {
        bool overflow = n >= 64 || pow_u64(rule.sigma, n) > census_budget();
        // pow_u64 overflows for large n; require n * log2(sigma) small first
        double bits = n * std::log2(static_cast<double>(rule.sigma));
        if (bits > 60 || overflow)
            throw budget_error("exhaustive census over " + std::to_string(rule.sigma) +
                               "^" + std::to_string(n) + " bases exceeds the budget of " +
                               std::to_string(census_budget()));
        uint64_t all = pow_u64(rule.sigma, n);
        rep.total_bases = all;
        workers = std::max(1u, workers);
        if (workers == 1 || all < 4096) {
            total = tally_range(rule, p, n, 0, all);
        } else {
            std::vector<Tally> parts(workers);
            std::vector<std::thread> threads;
            uint64_t chunk = (all + workers - 1) / workers;
            for (unsigned w = 0; w < workers; ++w) {
                uint64_t lo = w * chunk, hi = std::min(all, lo + chunk);
                threads.emplace_back([&, w, lo, hi] {
                    if (lo < hi) parts[w] = tally_range(rule, p, n, lo, hi);
                });
            }
            for (auto& th : threads) th.join();
            for (auto& part : parts) {
                total.non_uniform += part.non_uniform;
                for (auto& [k, v] : part.counts) total.counts[k] += v;
            }
        }
    } else {
        rep.total_bases = mode.samples;
        std::mt19937_64 rng(mode.seed);
        std::uniform_int_distribution<int> dist(0, rule.sigma - 1);
        std::vector<uint8_t> base(n);
        for (uint64_t s = 0; s < mode.samples; ++s) {
            for (auto& b : base) b = static_cast<uint8_t>(dist(rng));
            auto ch = characteristic(p, triangle_of_base(rule, base));
            if (ch)
                ++total.counts[*ch];
            else
                ++total.non_uniform;
        }
    }

    rep.counts = std::move(total.counts);
    rep.non_uniform = total.non_uniform;

    // enumerate missing characteristics (exhaustive mode only)
    if (mode.exhaustive) {
        if (h <= 24) {
            for (uint64_t m = 0; m < (1ull << h); ++m) {
                std::string bits(h, '0');
                for (size_t k = 0; k < h; ++k)
                    if (m & (1ull << k)) bits[k] = '1';
                if (!rep.counts.count(bits)) rep.missing.push_back(bits);
            }
            std::sort(rep.missing.begin(), rep.missing.end());
        }
        uint64_t mn = UINT64_MAX;
        for (auto& [k, v] : rep.counts)
            if (v < mn) {
                mn = v;
                rep.min_characteristic = k;
            }
        rep.min_count = mn == UINT64_MAX ? 0 : mn;
        // exhaustive totals must add up
        uint64_t sum = rep.non_uniform;
        for (auto& [k, v] : rep.counts) sum += v;
        if (sum != rep.total_bases)
            throw program_error("census total invariant violated");
    }
    return rep;
}

std::vector<std::string> find_missing(const SmallRule& rule, const Partition& p, size_t n,
                                      unsigned workers) {
    return census(rule, p, n, CensusMode::all(), workers).missing;
}

std::string CensusReport::to_json() const {
    json j;
    j["n"] = n;
    j["rule"] = rule_id;
    j["partition"] = partition_id;
    j["exhaustive"] = exhaustive;
    j["total_bases"] = total_bases;
    j["non_uniform"] = non_uniform;
    j["counts"] = counts;
    j["missing"] = missing;
    j["min_count"] = min_count;
    j["min_characteristic"] = min_characteristic;
    return j.dump();
}

// ---------------------------------------------------------------------------
// big integers and the v sequence

BigUint BigUint::from_u64(uint64_t v) {
    BigUint b;
    while (v) {
        b.limbs.push_back(static_cast<uint32_t>(v & 0xffffffffu));
        v >>= 32;
    }
    return b;
}

BigUint operator*(const BigUint& a, const BigUint& b) {
    if (a.limbs.empty() || b.limbs.empty()) return BigUint{};
    BigUint out;
    out.limbs.assign(a.limbs.size() + b.limbs.size(), 0);
    for (size_t i = 0; i < a.limbs.size(); ++i) {
        uint64_t carry = 0;
        for (size_t k = 0; k < b.limbs.size(); ++k) {
            uint64_t cur = static_cast<uint64_t>(a.limbs[i]) * b.limbs[k] +
                           out.limbs[i + k] + carry;
            out.limbs[i + k] = static_cast<uint32_t>(cur & 0xffffffffu);
            carry = cur >> 32;
        }
        size_t pos = i + b.limbs.size();
        while (carry) {
            uint64_t cur = out.limbs[pos] + carry;
            out.limbs[pos] = static_cast<uint32_t>(cur & 0xffffffffu);
            carry = cur >> 32;
            ++pos;
        }
    }
    while (!out.limbs.empty() && out.limbs.back() == 0) out.limbs.pop_back();
    return out;
}

BigUint BigUint::pow(uint64_t base, uint64_t exp) {
    BigUint result = from_u64(1);
    BigUint b = from_u64(base);
    while (exp) {
        if (exp & 1) result = result * b;
        b = b * b;
        exp >>= 1;
    }
    return result;
}

BigUint BigUint::shl(const BigUint& a, uint64_t bits) {
    if (a.limbs.empty()) return a;
    BigUint out;
    size_t words = bits / 32;
    unsigned rem = bits % 32;
    out.limbs.assign(a.limbs.size() + words + 1, 0);
    for (size_t i = 0; i < a.limbs.size(); ++i) {
        uint64_t v = static_cast<uint64_t>(a.limbs[i]) << rem;
        out.limbs[i + words] |= static_cast<uint32_t>(v & 0xffffffffu);
        out.limbs[i + words + 1] |= static_cast<uint32_t>(v >> 32);
    }
    while (!out.limbs.empty() && out.limbs.back() == 0) out.limbs.pop_back();
    return out;
}

bool operator<(const BigUint& a, const BigUint& b) {
    if (a.limbs.size() != b.limbs.size()) return a.limbs.size() < b.limbs.size();
    for (size_t i = a.limbs.size(); i-- > 0;)
        if (a.limbs[i] != b.limbs[i]) return a.limbs[i] < b.limbs[i];
    return false;
}

bool operator==(const BigUint& a, const BigUint& b) { return a.limbs == b.limbs; }

std::string BigUint::to_decimal() const {
    if (limbs.empty()) return "0";
    std::vector<uint32_t> work = limbs;
    std::string out;
    while (!work.empty()) {
        uint64_t rem = 0;
        for (size_t i = work.size(); i-- > 0;) {
            uint64_t cur = (rem << 32) | work[i];
            work[i] = static_cast<uint32_t>(cur / 1000000000u);
            rem = cur % 1000000000u;
        }
        while (!work.empty() && work.back() == 0) work.pop_back();
        std::string chunk = std::to_string(rem);
        if (!work.empty())
            chunk = std::string(9 - chunk.size(), '0') + chunk;
        out = chunk + out;
    }
    return out;
}

bool VEntry::below_one(int sigma) const {
    return BigUint::pow(static_cast<uint64_t>(sigma), sigma_exp) <
           BigUint::shl(BigUint::from_u64(1), two_exp);
}

std::string VEntry::str(int sigma) const {
    // reduce sigma^p / 2^q exactly
    uint64_t a = 0;
    uint64_t m = static_cast<uint64_t>(sigma);
    while (m % 2 == 0) {
        m /= 2;
        ++a;
    }
    uint64_t num_two = a * sigma_exp;
    uint64_t common = std::min(num_two, two_exp);
    BigUint num = BigUint::shl(BigUint::pow(m, sigma_exp), num_two - common);
    uint64_t den_two = two_exp - common;
    if (den_two == 0) return num.to_decimal();
    BigUint den = BigUint::shl(BigUint::from_u64(1), den_two);
    return num.to_decimal() + "/" + den.to_decimal();
}

VSequence v_sequence(int sigma, size_t upto) {
    if (sigma < 1) throw domain_error("sigma must be >= 1");
    if (upto < 1) throw domain_error("v sequence needs at least one entry");
    if (upto > 24) throw budget_error("v sequence exponents explode past k = 24");
    VSequence vs;
    vs.sigma = sigma;
    VEntry v{4, 2};  // sigma^4 / 4
    for (size_t k = 1; k <= upto; ++k) {
        vs.entries.push_back(v);
        if (!vs.first_below_one && v.below_one(sigma)) vs.first_below_one = k;
        // v_{k+1} = v_k^2 / 2^{2^{k-1}}
        VEntry next;
        next.sigma_exp = v.sigma_exp * 2;
        next.two_exp = v.two_exp * 2 + (1ull << (k - 1));
        v = next;
    }
    return vs;
}

std::string VSequence::to_json() const {
    json j;
    j["sigma"] = sigma;
    json arr = json::array();
    for (size_t i = 0; i < entries.size(); ++i) {
        json e;
        e["index"] = i + 1;
        e["value"] = entries[i].str(sigma);
        e["below_one"] = entries[i].below_one(sigma);
        arr.push_back(std::move(e));
    }
    j["values"] = std::move(arr);
    if (first_below_one) j["first_below_one"] = *first_below_one;
    return j.dump();
}

}  // namespace ca
