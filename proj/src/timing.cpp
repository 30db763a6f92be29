#include "ca/timing.hpp"

#include "ca/build.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace ca {

using nlohmann::json;

OutputContract OutputContract::linear(Rational k) {
    if (!(k > Rational(1))) throw domain_error("linear-time factor must exceed 1");
    return {ContractKind::LinearTime, k};
}

size_t strict_site_time(size_t cell, size_t n) {
    return std::max(cell + 1, n - cell);
}

std::vector<std::pair<size_t, size_t>> OutputContract::sites(size_t n) const {
    if (n == 0) throw domain_error("contract sites need n >= 1");
    std::vector<std::pair<size_t, size_t>> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        switch (kind) {
            case ContractKind::StrictRealTime:
                out.emplace_back(i, strict_site_time(i, n));
                break;
            case ContractKind::SynchronousRealTime:
                out.emplace_back(i, n);
                break;
            case ContractKind::LinearTime: {
                Rational t = k * Rational(static_cast<long long>(n));
                out.emplace_back(i, static_cast<size_t>(t.ceil()));
                break;
            }
        }
    }
    return out;
}

size_t OutputContract::horizon(size_t n) const {
    size_t h = 0;
    for (auto& [c, t] : sites(n)) h = std::max(h, t);
    return h;
}

std::string OutputContract::describe() const {
    switch (kind) {
        case ContractKind::StrictRealTime: return "strict";
        case ContractKind::SynchronousRealTime: return "synchronous";
        case ContractKind::LinearTime: return "linear k=" + k.str();
    }
    return "?";
}

Word read_output(const SpaceTimeDiagram& d, const OutputContract& c,
                 const std::function<std::string(State)>& project) {
    Word out;
    for (auto& [cell, time] : c.sites(d.width)) {
        if (time >= d.rows.size())
            throw trace_error("diagram too short for contract site");
        out.push_back(project(d.rows[time][cell]));
    }
    return out;
}

VerificationReport verify(const Automaton& a, const OutputContract& c,
                          const FunctionSpec& spec, const Word& w) {
    if (!spec.domain(w)) throw domain_error("word outside function domain");
    VerificationReport rep;
    rep.word = w;
    rep.expected = spec.oracle(w);
    if (rep.expected.size() != w.size())
        throw program_error("oracle is not length preserving");

    size_t n = w.size();
    SpaceTimeDiagram d = run(a, w, c.horizon(n));
    rep.observed = read_output(d, c, a.project);

    auto sites = c.sites(n);
    rep.pass = true;
    for (size_t i = 0; i < n; ++i) {
        SiteObservation so;
        so.cell = sites[i].first;
        so.time = sites[i].second;
        so.observed = rep.observed[i];
        so.expected = rep.expected[i];
        rep.sites.push_back(so);
        if (so.observed != so.expected) rep.pass = false;
    }
    if (!rep.pass) {
        auto worst = std::min_element(
            rep.sites.begin(), rep.sites.end(), [](const auto& x, const auto& y) {
                if (x.observed == x.expected) return false;
                if (y.observed == y.expected) return true;
                return x.time < y.time || (x.time == y.time && x.cell < y.cell);
            });
        std::ostringstream os;
        os << "cell " << worst->cell << " time " << worst->time << ": observed '"
           << worst->observed << "', expected '" << worst->expected << "'";
        rep.first_violation = os.str();
    }
    return rep;
}

std::string VerificationReport::to_json() const {
    json j;
    j["word"] = word;
    j["expected"] = expected;
    j["observed"] = observed;
    j["pass"] = pass;
    if (!pass) j["first_violation"] = first_violation;
    json s = json::array();
    for (const auto& so : sites)
        s.push_back({{"cell", so.cell},
                     {"time", so.time},
                     {"observed", so.observed},
                     {"expected", so.expected}});
    j["sites"] = std::move(s);
    return j.dump();
}

// ---------------------------------------------------------------------------
// synchronization layer

namespace {

constexpr size_t kSquadCap = 512;

// id layout: 0 '#', 1 'q', 2 'g', 3 'F', L_d -> 3+d, R_d -> 3+cap+d,
// C_k -> 3+2cap+k (k >= 1); C_0 is F itself.
constexpr State kWall = 0, kQ = 1, kG = 2, kFire = 3;
constexpr State kLBase = 3;                      // L_d = kLBase + d
constexpr State kRBase = 3 + kSquadCap;          // R_d = kRBase + d
constexpr State kCBase = 3 + 2 * kSquadCap;      // C_k = kCBase + k

bool sq_is_u(State s) { return s == kQ || s == kG; }
bool sq_is_l(State s) { return s > kLBase && s <= kLBase + kSquadCap; }
bool sq_is_r(State s) { return s > kRBase && s <= kRBase + kSquadCap; }
bool sq_is_c(State s) { return s > kCBase && s < kCBase + kSquadCap; }
size_t sq_l_dist(State s) { return s - kLBase; }
size_t sq_r_dist(State s) { return s - kRBase; }
size_t sq_count(State s) { return s - kCBase; }

State sq_countdown(size_t k) {
    return k == 0 ? kFire : static_cast<State>(kCBase + k);
}

// the cell is informed about its left (right) wall
bool sq_informed_left(State s) {
    return s == kWall || sq_is_l(s) || sq_is_c(s) || s == kFire;
}
bool sq_informed_right(State s) {
    return s == kWall || sq_is_r(s) || sq_is_c(s) || s == kFire;
}

State squad_rule(State l, State c, State r) {
    if (c == kWall) return kWall;
    if (c == kFire) return kFire;
    if (sq_is_c(c)) return sq_countdown(sq_count(c) - 1);
    if (sq_is_u(c)) {
        size_t dl = 0, dr = 0;
        if (l == kWall)
            dl = 1;
        else if (sq_is_l(l))
            dl = sq_l_dist(l) + 1;
        if (r == kWall)
            dr = 1;
        else if (sq_is_r(r))
            dr = sq_r_dist(r) + 1;
        if (dl > kSquadCap || dr > kSquadCap)
            throw budget_error("synchronization layer capacity exceeded");
        if (dl && dr) return sq_countdown(dl - 1);
        if (dl) return static_cast<State>(kLBase + dl);
        if (dr) return static_cast<State>(kRBase + dr);
        return kQ;
    }
    if (sq_is_l(c)) {
        if (sq_informed_right(r)) return sq_countdown(sq_l_dist(c) - 1);
        return c;
    }
    if (sq_is_r(c)) {
        if (sq_informed_left(l)) return sq_countdown(sq_r_dist(c) - 1);
        return c;
    }
    return kQ;
}

std::shared_ptr<StateTable> squad_states() {
    auto t = std::make_shared<StateTable>();
    t->intern("#");
    t->intern("q");
    t->intern("g");
    t->intern("F");
    for (size_t d = 1; d <= kSquadCap; ++d) t->intern("L" + std::to_string(d));
    for (size_t d = 1; d <= kSquadCap; ++d) t->intern("R" + std::to_string(d));
    for (size_t k = 1; k < kSquadCap; ++k) t->intern("C" + std::to_string(k));
    return t;
}

const std::string kFireName = "F";
const std::string kQuiescentName = "q";
const std::string kGeneralName = "g";
const std::string kMarkName = "M";

}  // namespace

size_t squad_capacity() { return kSquadCap; }
const std::string& squad_fire_name() { return kFireName; }
const std::string& squad_quiescent_name() { return kQuiescentName; }
const std::string& squad_general_name() { return kGeneralName; }

Automaton squad_layer() {
    auto states = squad_states();
    Automaton a;
    a.states = states;
    a.border = kWall;
    a.rule = Rule::func(squad_rule);
    a.input_alphabet = {"q", "g"};
    a.input_states = {kQ, kG};
    a.output_alphabet = {"0", "1"};
    a.project = [](State s) { return s == kFire ? std::string("1") : std::string("0"); };
    return a;
}

SquadComponent fssp_component(size_t n) {
    if (n == 0) throw domain_error("squad needs n >= 1");
    if (n > kSquadCap) throw budget_error("squad capacity exceeded");
    SquadComponent sc;
    sc.automaton = squad_layer();
    sc.initial.assign(n, kQ);
    sc.initial.front() = kG;
    sc.initial.back() = kG;
    return sc;
}

bool squad_fires_exactly(const Automaton& layer, const Configuration& start, size_t n) {
    Configuration c = start;
    State fire = *layer.states->find(kFireName);
    for (size_t t = 1; t <= n; ++t) {
        c = step(layer, c);
        bool any = false, all = true;
        for (State s : c) {
            if (s == fire)
                any = true;
            else
                all = false;
        }
        if (t < n && any) return false;
        if (t == n) return all;
    }
    return false;
}

Automaton slowed_squad_layer(unsigned factor) {
    if (factor == 0) throw domain_error("slowdown factor must be >= 1");
    if (factor == 1) return squad_layer();

    auto base_states = squad_states();
    auto states = std::make_shared<StateTable>();
    states->intern("#");
    // decode: id 0 is the wall; otherwise (squad_id, phase) with label "s@p"
    auto tuples = std::make_shared<std::vector<std::pair<State, unsigned>>>();
    auto mu = std::make_shared<std::mutex>();
    auto enc = [states, base_states, tuples, mu](State s, unsigned p) {
        State id = states->intern(base_states->name(s) + "@" + std::to_string(p));
        std::lock_guard<std::mutex> lock(*mu);
        if (id >= tuples->size()) tuples->resize(id + 1, {kQ, 0});
        (*tuples)[id] = {s, p};
        return id;
    };
    auto dec = [tuples, mu](State id) -> std::pair<State, unsigned> {
        if (id == 0) return {kWall, 0};
        std::lock_guard<std::mutex> lock(*mu);
        return (*tuples)[id];
    };

    Automaton a;
    a.states = states;
    a.border = 0;
    a.rule = Rule::func([enc, dec, factor](State l, State c, State r) -> State {
        if (c == 0) return 0;
        auto [cs, cp] = dec(c);
        if (cp + 1 < factor) return enc(cs, cp + 1);
        auto [ls, lp] = dec(l);
        auto [rs, rp] = dec(r);
        return enc(squad_rule(ls, cs, rs), 0);
    });
    a.input_alphabet = {"q", "g"};
    a.input_states = {enc(kQ, 0), enc(kG, 0)};
    a.output_alphabet = {"0", "1"};
    a.project = [dec](State s) {
        return dec(s).first == kFire ? std::string("1") : std::string("0");
    };
    return a;
}

// ---------------------------------------------------------------------------
// strict-site marker

Automaton strict_marker_layer() {
    auto informed_left = [](const std::string& s) {
        return s == "#" || s == "L" || s == "M" || s == "D";
    };
    auto informed_right = [](const std::string& s) {
        return s == "#" || s == "R" || s == "M" || s == "D";
    };
    return make_dense_automaton(
        {"q", "L", "R", "M", "D", "#"}, "#",
        [=](const std::string& l, const std::string& c, const std::string& r) -> std::string {
            if (c == "#") return "#";
            if (c == "M") return "D";
            if (c == "D") return "D";
            if (c == "q") {
                bool il = informed_left(l), ir = informed_right(r);
                if (il && ir) return "M";
                if (il) return "L";
                if (ir) return "R";
                return "q";
            }
            if (c == "L") return informed_right(r) ? "M" : "L";
            if (c == "R") return informed_left(l) ? "M" : "R";
            return "q";
        },
        {"q"}, {"0", "1"},
        [](const std::string& s) { return s == "M" ? "1" : "0"; });
}

const std::string& marker_mark_name() { return kMarkName; }

MarkerComponent strict_site_marker(size_t n) {
    if (n == 0) throw domain_error("marker needs n >= 1");
    MarkerComponent mc;
    mc.automaton = strict_marker_layer();
    mc.initial.assign(n, *mc.automaton.states->find("q"));
    return mc;
}

std::vector<std::pair<size_t, size_t>> marked_sites(const Automaton& layer,
                                                    const Configuration& start,
                                                    size_t horizon) {
    std::vector<std::pair<size_t, size_t>> out;
    State mark = *layer.states->find(kMarkName);
    Configuration c = start;
    for (size_t i = 0; i < c.size(); ++i)
        if (c[i] == mark) out.emplace_back(i, 0);
    for (size_t t = 1; t <= horizon; ++t) {
        c = step(layer, c);
        for (size_t i = 0; i < c.size(); ++i)
            if (c[i] == mark) out.emplace_back(i, t);
    }
    return out;
}

// ---------------------------------------------------------------------------
// layering

LayeredAutomaton attach_layer(const Automaton& data, const Automaton& layer,
                              const std::string& layer_init) {
    auto states = std::make_shared<StateTable>();
    auto pd = std::make_shared<Automaton>(data);
    auto pl = std::make_shared<Automaton>(layer);

    auto pairs = std::make_shared<std::vector<std::pair<State, State>>>();
    auto mu = std::make_shared<std::mutex>();
    auto enc = [states, pd, pl, pairs, mu](State x, State y) {
        State id = states->intern(pd->name(x) + "/" + pl->name(y));
        std::lock_guard<std::mutex> lock(*mu);
        if (id >= pairs->size()) pairs->resize(id + 1, {0, 0});
        (*pairs)[id] = {x, y};
        return id;
    };
    auto dec = [pairs, mu](State s) {
        std::lock_guard<std::mutex> lock(*mu);
        return (*pairs)[s];
    };

    auto init = pl->states->find(layer_init);
    if (!init) throw program_error("unknown layer init state: " + layer_init);

    LayeredAutomaton out;
    Automaton a;
    a.states = states;
    a.border = enc(data.border, layer.border);
    a.rule = Rule::func([pd, pl, enc, dec](State l, State c, State r) {
        auto [ld, ll] = dec(l);
        auto [cd, cl] = dec(c);
        auto [rd, rl] = dec(r);
        return enc(pd->rule(ld, cd, rd), pl->rule(ll, cl, rl));
    });
    a.input_alphabet = data.input_alphabet;
    for (State s : data.input_states) a.input_states.push_back(enc(s, *init));
    a.output_alphabet = data.output_alphabet;
    a.project = [pd, dec](State s) { return pd->project(dec(s).first); };
    out.automaton = std::move(a);
    out.data_part = [dec](State s) { return dec(s).first; };
    out.layer_part = [dec](State s) { return dec(s).second; };
    return out;
}

Automaton hold_to_synchronous(const Automaton& strict_algo) {
    Automaton marker = strict_marker_layer();
    auto states = std::make_shared<StateTable>();
    auto pd = std::make_shared<Automaton>(strict_algo);
    auto pm = std::make_shared<Automaton>(marker);
    State mark = *marker.states->find("M");
    State mq = *marker.states->find("q");

    struct Tuple {
        State data;
        State marker;
        int latch;  // -1 none, else output symbol index
    };
    auto tuples = std::make_shared<std::vector<Tuple>>();
    auto mu = std::make_shared<std::mutex>();
    auto outs = std::make_shared<std::vector<std::string>>(strict_algo.output_alphabet);
    auto enc = [states, pd, pm, tuples, mu, outs](State d, State m, int latch) {
        std::string label = pd->name(d) + "/" + pm->name(m) + "/" +
                            (latch < 0 ? std::string("_") : (*outs)[latch]);
        State id = states->intern(label);
        std::lock_guard<std::mutex> lock(*mu);
        if (id >= tuples->size()) tuples->resize(id + 1, {0, 0, -1});
        (*tuples)[id] = {d, m, latch};
        return id;
    };
    auto dec = [tuples, mu](State s) {
        std::lock_guard<std::mutex> lock(*mu);
        return (*tuples)[s];
    };
    auto out_index = [outs](const std::string& sym) -> int {
        for (size_t i = 0; i < outs->size(); ++i)
            if ((*outs)[i] == sym) return static_cast<int>(i);
        throw program_error("projection produced symbol outside output alphabet: " + sym);
    };

    Automaton a;
    a.states = states;
    a.border = enc(strict_algo.border, marker.border, -1);
    a.rule = Rule::func([pd, pm, enc, dec, mark, out_index](State l, State c, State r) {
        auto lt = dec(l);
        auto ct = dec(c);
        auto rt = dec(r);
        State d2 = pd->rule(lt.data, ct.data, rt.data);
        State m2 = pm->rule(lt.marker, ct.marker, rt.marker);
        int latch = ct.latch;
        if (m2 == mark) latch = out_index(pd->project(d2));
        return enc(d2, m2, latch);
    });
    a.input_alphabet = strict_algo.input_alphabet;
    for (State s : strict_algo.input_states) a.input_states.push_back(enc(s, mq, -1));
    a.output_alphabet = strict_algo.output_alphabet;
    a.project = [pd, dec, outs](State s) {
        auto t = dec(s);
        if (t.latch >= 0) return (*outs)[t.latch];
        return pd->project(t.data);
    };
    return a;
}

}  // namespace ca
