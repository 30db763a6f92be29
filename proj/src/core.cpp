#include "ca/core.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace ca {

using nlohmann::json;

Word word_from_string(const std::string& s) {
    Word w;
    w.reserve(s.size());
    for (char ch : s) w.push_back(std::string(1, ch));
    return w;
}

std::string word_to_string(const Word& w) {
    std::string s;
    for (const auto& sym : w) s += sym;
    return s;
}

State StateTable::intern(const std::string& name) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    State id = static_cast<State>(names_.size());
    names_.push_back(name);
    index_.emplace(names_.back(), id);
    return id;
}

std::optional<State> StateTable::find(const std::string& name) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const std::string& StateTable::name(State s) const {
    std::lock_guard<std::mutex> lock(mu_);
    if (s >= names_.size()) throw malformed_input_error("unknown state id");
    return names_[s];
}

size_t StateTable::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return names_.size();
}

Rule Rule::dense(size_t n_states, std::vector<State> table) {
    if (table.size() != n_states * n_states * n_states)
        throw program_error("dense rule table has wrong size");
    Rule r;
    r.n_states_ = n_states;
    r.table_ = std::make_shared<const std::vector<State>>(std::move(table));
    return r;
}

Rule Rule::func(std::function<State(State, State, State)> fn) {
    Rule r;
    r.fn_ = std::move(fn);
    return r;
}

State Rule::operator()(State l, State c, State r) const {
    if (table_) {
        if (l >= n_states_ || c >= n_states_ || r >= n_states_)
            throw malformed_input_error("state outside rule table");
        return (*table_)[(static_cast<size_t>(l) * n_states_ + c) * n_states_ + r];
    }
    return fn_(l, c, r);
}

const std::vector<State>& Rule::table() const {
    if (!table_) throw program_error("rule has no dense table");
    return *table_;
}

State Automaton::input_state(const std::string& symbol) const {
    for (size_t i = 0; i < input_alphabet.size(); ++i)
        if (input_alphabet[i] == symbol) return input_states[i];
    throw domain_error("symbol outside input alphabet: " + symbol);
}

const Configuration& SpaceTimeDiagram::row(size_t t) const {
    if (t >= rows.size()) throw trace_error("diagram too short");
    return rows[t];
}

Configuration step(const Automaton& a, const Configuration& c) {
    size_t n = c.size();
    Configuration next(n);
    for (size_t i = 0; i < n; ++i) {
        State l = i == 0 ? a.border : c[i - 1];
        State r = i + 1 == n ? a.border : c[i + 1];
        next[i] = a.rule(l, c[i], r);
    }
    return next;
}

Configuration initial_configuration(const Automaton& a, const Word& w) {
    if (w.empty()) throw domain_error("empty input word");
    Configuration c;
    c.reserve(w.size());
    for (const auto& sym : w) c.push_back(a.input_state(sym));
    return c;
}

SpaceTimeDiagram run(const Automaton& a, const Word& w, size_t T) {
    SpaceTimeDiagram d;
    d.width = w.size();
    d.rows.reserve(T + 1);
    d.rows.push_back(initial_configuration(a, w));
    for (size_t t = 0; t < T; ++t) d.rows.push_back(step(a, d.rows.back()));
    return d;
}

bool recompute_diagram(const Automaton& a, const SpaceTimeDiagram& d) {
    for (size_t t = 0; t + 1 < d.rows.size(); ++t)
        if (step(a, d.rows[t]) != d.rows[t + 1]) return false;
    return true;
}

std::string product_label(const std::string& a, const std::string& b) {
    return a + "|" + b;
}

Automaton product(const Automaton& a, const Automaton& b) {
    if (a.input_alphabet != b.input_alphabet)
        throw domain_error("product requires matching input alphabets");

    auto states = std::make_shared<StateTable>();
    auto pa = std::make_shared<Automaton>(a);
    auto pb = std::make_shared<Automaton>(b);

    // pair registry: product id -> (a id, b id)
    auto pairs = std::make_shared<std::vector<std::pair<State, State>>>();
    auto mu = std::make_shared<std::mutex>();
    auto pair_state = [states, pa, pb, pairs, mu](State x, State y) {
        std::string label = product_label(pa->name(x), pb->name(y));
        State id = states->intern(label);
        std::lock_guard<std::mutex> lock(*mu);
        if (id >= pairs->size()) pairs->resize(id + 1, {0, 0});
        (*pairs)[id] = {x, y};
        return id;
    };

    Automaton p;
    p.states = states;
    p.border = pair_state(a.border, b.border);
    auto decode = [pairs, mu](State s) {
        std::lock_guard<std::mutex> lock(*mu);
        return (*pairs)[s];
    };
    p.rule = Rule::func([pa, pb, pair_state, decode](State l, State c, State r) {
        auto [la, lb] = decode(l);
        auto [ca_, cb] = decode(c);
        auto [ra, rb] = decode(r);
        return pair_state(pa->rule(la, ca_, ra), pb->rule(lb, cb, rb));
    });
    p.input_alphabet = a.input_alphabet;
    for (size_t i = 0; i < a.input_alphabet.size(); ++i)
        p.input_states.push_back(pair_state(a.input_states[i], b.input_states[i]));
    for (const auto& x : a.output_alphabet)
        for (const auto& y : b.output_alphabet)
            p.output_alphabet.push_back(product_label(x, y));
    p.project = [pa, pb, decode](State s) {
        auto [x, y] = decode(s);
        return product_label(pa->project(x), pb->project(y));
    };
    return p;
}

bool dependency_cone_check(const Automaton& a, const Word& w, size_t j,
                           const Word& w2, size_t T) {
    if (w.size() != w2.size()) throw domain_error("words must have equal length");
    if (j >= w.size() || w[j] == w2[j]) throw domain_error("words must differ exactly at j");
    for (size_t i = 0; i < w.size(); ++i)
        if (i != j && w[i] != w2[i]) throw domain_error("words must differ exactly at j");

    SpaceTimeDiagram d1 = run(a, w, T);
    SpaceTimeDiagram d2 = run(a, w2, T);
    for (size_t t = 0; t <= T; ++t)
        for (size_t c = 0; c < w.size(); ++c) {
            size_t dist = c > j ? c - j : j - c;
            if (dist > t && d1.rows[t][c] != d2.rows[t][c]) return false;
        }
    return true;
}

// ---------------------------------------------------------------------------
// grouping

namespace {

// a macro block: q base states of which only the first `valid` lie inside
// the active segment; the rest are outside and stay `#` forever
std::string block_label(const Automaton& base, std::span<const State> block,
                        unsigned valid) {
    std::string s = "[";
    for (size_t i = 0; i < block.size(); ++i) {
        if (i) s += ",";
        s += base.name(block[i]);
    }
    return s + "|" + std::to_string(valid) + "]";
}

}  // namespace

GroupedAutomaton group_automaton(const Automaton& base, unsigned q) {
    if (q == 0) throw domain_error("group factor must be >= 1");

    auto states = std::make_shared<StateTable>();
    auto pbase = std::make_shared<Automaton>(base);
    auto blocks = std::make_shared<std::vector<std::pair<std::vector<State>, unsigned>>>();
    auto mu = std::make_shared<std::mutex>();

    auto pack_v = [states, pbase, blocks, mu](std::span<const State> block,
                                              unsigned valid) {
        State id = states->intern(block_label(*pbase, block, valid));
        std::lock_guard<std::mutex> lock(*mu);
        if (id >= blocks->size()) blocks->resize(id + 1);
        (*blocks)[id] = {std::vector<State>(block.begin(), block.end()), valid};
        return id;
    };
    auto unpack_v = [blocks, mu](State s) {
        std::lock_guard<std::mutex> lock(*mu);
        return (*blocks)[s];
    };

    GroupedAutomaton g;
    g.q = q;

    Automaton m;
    m.states = states;
    std::vector<State> border_block(q, base.border);
    m.border = pack_v(border_block, 0);
    m.rule = Rule::func([pbase, pack_v, unpack_v, q](State l, State c, State r) {
        // 3q base cells advance q steps; the middle q cells survive. Cells
        // beyond a block's validity are outside the segment and stay `#`.
        auto [lb, lv] = unpack_v(l);
        auto [cb, cv] = unpack_v(c);
        auto [rb, rv] = unpack_v(r);
        std::vector<State> cells;
        std::vector<bool> inside;
        cells.reserve(3 * q);
        auto push = [&](const std::vector<State>& b, unsigned valid) {
            for (unsigned i = 0; i < q; ++i) {
                cells.push_back(i < valid ? b[i] : pbase->border);
                inside.push_back(i < valid);
            }
        };
        push(lb, lv);
        push(cb, cv);
        push(rb, rv);
        for (unsigned t = 0; t < q; ++t) {
            std::vector<State> next(cells.size());
            for (size_t i = 0; i < cells.size(); ++i) {
                if (!inside[i]) {
                    next[i] = pbase->border;
                    continue;
                }
                State lvx = i == 0 ? pbase->border : cells[i - 1];
                State rvx = i + 1 == cells.size() ? pbase->border : cells[i + 1];
                next[i] = pbase->rule(lvx, cells[i], rvx);
            }
            cells = std::move(next);
        }
        std::span<const State> mid(cells.data() + q, q);
        return pack_v(mid, cv);
    });
    m.input_alphabet = base.input_alphabet;  // grouped automata are stepped on
    m.input_states = {};                     // packed configurations directly
    m.output_alphabet = base.output_alphabet;
    m.project = [pbase, unpack_v](State s) {
        auto [b, v] = unpack_v(s);
        return pbase->project(v ? b[0] : b[0]);
    };

    g.automaton = std::move(m);
    g.pack = [pack_v, q](std::span<const State> block) {
        return pack_v(block, q);
    };
    g.unpack = [unpack_v](State s) { return unpack_v(s).first; };
    g.pack_partial = pack_v;
    g.unpack_valid = [unpack_v](State s) { return unpack_v(s).second; };
    return g;
}

Configuration group_configuration(const GroupedAutomaton& g, const Configuration& base) {
    const unsigned q = g.q;
    Configuration macro;
    macro.reserve((base.size() + q - 1) / q);
    for (size_t i = 0; i < base.size(); i += q) {
        std::vector<State> block;
        unsigned valid = 0;
        for (size_t k = 0; k < q; ++k) {
            bool in = i + k < base.size();
            block.push_back(in ? base[i + k] : g.automaton.border);
            if (in) ++valid;
        }
        macro.push_back(g.pack_partial(block, valid));
    }
    return macro;
}

Configuration ungroup_configuration(const GroupedAutomaton& g, const Configuration& macro,
                                    size_t base_width) {
    Configuration base;
    for (State s : macro) {
        auto block = g.unpack(s);
        unsigned valid = g.unpack_valid(s);
        for (unsigned i = 0; i < valid && base.size() < base_width; ++i)
            base.push_back(block[i]);
    }
    base.resize(base_width, g.automaton.border);
    return base;
}

// ---------------------------------------------------------------------------
// import/export

namespace {

bool all_single_char(const Automaton& a, const SpaceTimeDiagram& d) {
    for (const auto& row : d.rows)
        for (State s : row)
            if (a.name(s).size() != 1) return false;
    return true;
}

}  // namespace

std::string diagram_to_json(const Automaton& a, const SpaceTimeDiagram& d) {
    json j;
    j["width"] = d.width;
    json rows = json::array();
    for (const auto& row : d.rows) {
        json r = json::array();
        for (State s : row) r.push_back(a.name(s));
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j.dump();
}

std::string diagram_to_text(const Automaton& a, const SpaceTimeDiagram& d) {
    bool single = all_single_char(a, d);
    std::string out;
    for (const auto& row : d.rows) {
        for (State s : row) {
            const std::string& name = a.name(s);
            if (single)
                out += name;
            else
                out += "[" + name + "]";
        }
        out += "\n";
    }
    return out;
}

std::string automaton_to_json(const Automaton& a) {
    if (!a.rule.is_dense())
        throw program_error("only dense-rule automata can be exported");
    size_t n = a.rule.dense_states();
    json j;
    json names = json::array();
    for (State s = 0; s < n; ++s) names.push_back(a.name(s));
    j["states"] = std::move(names);
    j["border"] = a.name(a.border);
    j["input_alphabet"] = a.input_alphabet;
    j["output_alphabet"] = a.output_alphabet;
    json proj = json::object();
    for (State s = 0; s < n; ++s) proj[a.name(s)] = a.project(s);
    j["projection"] = std::move(proj);
    json trans = json::array();
    for (State l = 0; l < n; ++l)
        for (State c = 0; c < n; ++c)
            for (State r = 0; r < n; ++r) {
                json t = json::array();
                t.push_back(a.name(l));
                t.push_back(a.name(c));
                t.push_back(a.name(r));
                t.push_back(a.name(a.rule(l, c, r)));
                trans.push_back(std::move(t));
            }
    j["transitions"] = std::move(trans);
    return j.dump();
}

Automaton automaton_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw malformed_input_error(std::string("bad automaton JSON: ") + e.what());
    }
    Automaton a;
    a.states = std::make_shared<StateTable>();
    std::vector<std::string> names = j.at("states").get<std::vector<std::string>>();
    for (const auto& nm : names) a.states->intern(nm);
    size_t n = names.size();
    if (n == 0) throw malformed_input_error("automaton has no states");

    std::string border = j.at("border").get<std::string>();
    auto bid = a.states->find(border);
    if (!bid) throw malformed_input_error("border state not in state set");
    a.border = *bid;

    a.input_alphabet = j.at("input_alphabet").get<std::vector<std::string>>();
    for (const auto& sym : a.input_alphabet) {
        auto id = a.states->find(sym);
        if (!id) throw malformed_input_error("input symbol not a state: " + sym);
        if (*id == a.border) throw malformed_input_error("border cannot be an input symbol");
        a.input_states.push_back(*id);
    }
    a.output_alphabet = j.at("output_alphabet").get<std::vector<std::string>>();

    auto proj = std::make_shared<std::vector<std::string>>(n);
    for (auto& [k, v] : j.at("projection").items()) {
        auto id = a.states->find(k);
        if (!id) throw malformed_input_error("projection key not a state: " + k);
        (*proj)[*id] = v.get<std::string>();
    }
    for (const auto& p : *proj)
        if (p.empty()) throw malformed_input_error("projection not total");
    a.project = [proj](State s) { return (*proj)[s]; };

    std::vector<State> table(n * n * n, UINT32_MAX);
    for (const auto& t : j.at("transitions")) {
        auto l = a.states->find(t.at(0).get<std::string>());
        auto c = a.states->find(t.at(1).get<std::string>());
        auto r = a.states->find(t.at(2).get<std::string>());
        auto v = a.states->find(t.at(3).get<std::string>());
        if (!l || !c || !r || !v) throw malformed_input_error("transition uses unknown state");
        table[(static_cast<size_t>(*l) * n + *c) * n + *r] = *v;
    }
    for (State v : table)
        if (v == UINT32_MAX)
            throw malformed_input_error("rule table is not total over state triples");
    size_t bi = (static_cast<size_t>(a.border) * n + a.border) * n + a.border;
    if (table[bi] != a.border)
        throw malformed_input_error("border state is not persistent under the rule");
    a.rule = Rule::dense(n, std::move(table));
    return a;
}

}  // namespace ca
