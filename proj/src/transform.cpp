#include "ca/transform.hpp"

#include <algorithm>
#include <cassert>
#include <map>

#include "ca/build.hpp"
#include "ca/encoding.hpp"

namespace ca {

// ---------------------------------------------------------------------------
// rational geometry

bool RationalDiagram::feasible() const {
    for (const auto& l : links) {
        const auto& a = sites[l.from];
        const auto& b = sites[l.to];
        Rational dc = (b.cell - a.cell).abs();
        Rational dt = b.time - a.time;
        if (!(dc <= dt)) return false;
    }
    return true;
}

RationalDiagram diagram_from_run(const SpaceTimeDiagram& d) {
    RationalDiagram out;
    size_t n = d.width;
    for (size_t t = 0; t < d.rows.size(); ++t)
        for (size_t c = 0; c < n; ++c)
            out.sites.push_back({Rational(static_cast<long long>(c)),
                                 Rational(static_cast<long long>(t)), d.rows[t][c]});
    auto index = [n](size_t c, size_t t) { return t * n + c; };
    for (size_t t = 0; t + 1 < d.rows.size(); ++t)
        for (size_t c = 0; c < n; ++c)
            for (int dc = -1; dc <= 1; ++dc) {
                long long src = static_cast<long long>(c) + dc;
                if (src < 0 || src >= static_cast<long long>(n)) continue;
                out.links.push_back({index(static_cast<size_t>(src), t), index(c, t + 1)});
            }
    return out;
}

Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

bool operator==(const Mat2& x, const Mat2& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
}

Mat2 Scaling::matrix() const {
    Rational one(1), two(2);
    Rational p = (one + ratio) / two;
    Rational q = (one - ratio) / two;
    switch (kind) {
        case ScalingKind::Diagonal: return {p, q, q, p};
        case ScalingKind::AntiDiagonal: return {p, -q, -q, p};
        case ScalingKind::Uniform: return {ratio, Rational(0), Rational(0), ratio};
    }
    return {Rational(1), Rational(0), Rational(0), Rational(1)};
}

std::pair<Rational, Rational> Scaling::apply(const Rational& cell,
                                             const Rational& time) const {
    Mat2 m = matrix();
    Rational dc = cell - origin_cell;
    Rational dt = time - origin_time;
    return {origin_cell + m.a * dc + m.b * dt, origin_time + m.c * dc + m.d * dt};
}

Scaling Scaling::diagonal(Rational r) {
    return {ScalingKind::Diagonal, r, Rational(0), Rational(1)};
}
Scaling Scaling::anti_diagonal(Rational r, size_t n) {
    return {ScalingKind::AntiDiagonal, r, Rational(static_cast<long long>(n) - 1),
            Rational(1)};
}
Scaling Scaling::uniform(Rational r, size_t n) {
    long long nn = static_cast<long long>(n);
    return {ScalingKind::Uniform, r, Rational(nn - 1, 2), Rational(nn + 1, 2)};
}

RationalDiagram scale_diagram(
    const RationalDiagram& d, const Scaling& s,
    const std::function<bool(const Rational&, const Rational&)>& region) {
    RationalDiagram out;
    out.sites.reserve(d.sites.size());
    for (const auto& site : d.sites) {
        if (region(site.cell, site.time)) {
            auto [c, t] = s.apply(site.cell, site.time);
            out.sites.push_back({c, t, site.state});
        } else {
            out.sites.push_back(site);
        }
    }
    out.links = d.links;
    if (!out.feasible())
        throw bound_error("scaled diagram violates the dependency constraints");
    return out;
}

std::vector<std::pair<Rational, Rational>> mapped_links(const Scaling& s) {
    Mat2 m = s.matrix();
    std::vector<std::pair<Rational, Rational>> out;
    for (long long dc : {-1ll, 0ll, 1ll}) {
        Rational c(dc), t(1);
        out.emplace_back(m.a * c + m.b * t, m.c * c + m.d * t);
    }
    return out;
}

OutputSegment output_segment(size_t n, Rational r, const TimeBound& t) {
    if (n == 0) throw domain_error("output segment needs n >= 1");
    Rational one(1), two(2);
    Rational nm1(static_cast<long long>(n) - 1);
    OutputSegment seg;
    seg.lo = (one - r) * nm1 / two;
    seg.hi = (one + r) * nm1 / two;
    seg.time = one + (one + r) * nm1 / two + r * t.at(n);
    return seg;
}

size_t accelerated_time(size_t n, Rational r, const TimeBound& t) {
    Rational rt = r * t.at(n);
    long long extra = rt.ceil();
    if (extra < 0) throw domain_error("negative accelerated bound");
    return n + static_cast<size_t>(extra);
}

std::vector<std::pair<size_t, size_t>> accelerated_sites(size_t n, Rational r,
                                                         const TimeBound& t) {
    std::vector<std::pair<size_t, size_t>> sites;
    size_t T = accelerated_time(n, r, t);
    for (size_t i = 0; i < n; ++i) sites.emplace_back(i, T);
    return sites;
}

// ---------------------------------------------------------------------------
// slowed mirror

Construction slowed_mirror(const std::vector<std::string>& alphabet) {
    Construction mir = mirror_sync(alphabet);

    auto states = std::make_shared<StateTable>();
    auto codec = std::make_shared<RecordCodec<2>>(states, "sm");  // [inner, parked]
    State border = states->intern("#");
    auto inner = std::make_shared<Automaton>(mir.automaton);
    auto layer_part = mir.sync_layer_part;
    State fire = *mir.sync_layer->states->find(squad_fire_name());

    Automaton a;
    a.states = states;
    a.border = border;
    a.rule = Rule::func([codec, border, inner, layer_part, fire](State ls, State cs,
                                                                 State rs) -> State {
        if (cs == border) return border;
        auto c = codec->decode(cs);
        State li = ls == border ? inner->border : static_cast<State>(codec->decode(ls)[0]);
        State ri = rs == border ? inner->border : static_cast<State>(codec->decode(rs)[0]);
        State next = inner->rule(li, static_cast<State>(c[0]), ri);
        int32_t parked = c[1];
        if (parked < 0 && layer_part(next) == fire) parked = static_cast<int32_t>(next);
        return codec->encode({static_cast<int32_t>(next), parked});
    });
    a.input_alphabet = mir.automaton.input_alphabet;
    for (State s : mir.automaton.input_states)
        a.input_states.push_back(codec->encode({static_cast<int32_t>(s), -1}));
    a.output_alphabet = mir.automaton.output_alphabet;
    auto proj_inner = mir.automaton.project;
    a.project = [codec, border, proj_inner](State s) {
        if (s == border) return std::string("#");
        auto c = codec->decode(s);
        return proj_inner(static_cast<State>(c[1] >= 0 ? c[1] : c[0]));
    };

    Construction out;
    out.name = "slowed-mirror";
    out.automaton = std::move(a);
    out.contract = OutputContract::linear(Rational(2));
    out.spec = mir.spec;
    return out;
}

// ---------------------------------------------------------------------------
// grouped acceleration
//
// Executable form of the two directional scalings. A column idles
// until the first border wave reaches it, then drifts toward the centre (one
// cell every q+1 steps) while its row index runs ahead of real time; where
// the opposite wave meets it, it freezes into the compressed central block
// and advances up to q rows per step; at the output row it launches its
// output symbol so that it lands on its home cell at exactly
// n + ceil(t(n)/q). Row advancement is greedy (dependency-driven); motion
// and delivery are scheduled from capped wall-distance counters.

namespace {

constexpr int kWinDepth = 12;
constexpr int kSlots = 12;
constexpr int GSZ = 5 + kWinDepth;

enum SF {
    S_T,
    S_DL,
    S_DR,
    S_PLAIN,
    S_PPREV,
    S_PROW,
    S_WLK_L_SYM,
    S_WLK_L_CNT,
    S_WLK_R_SYM,
    S_WLK_R_CNT,
    S_PARKED,
    S_G0,
    S_FIELDS = S_G0 + kSlots * GSZ
};

enum GF { G_SIDE, G_HOME, G_ROW, G_ST, G_DEP, G_WIN };

constexpr int32_t CS_DRIFT = 1;
constexpr int32_t CS_FROZEN = 2;
constexpr int32_t CS_DONE = 3;
constexpr int32_t CS_SENT = 4;    // delivered; kept as inert neighbour data
constexpr int32_t CS_SHADOW = 5;  // redundant copy of a neighbour column

struct Guest {
    int32_t side = -1;    // 0: from the left half (drifts right), 1: mirror
    int32_t home = -1;    // side 0: column index; side 1: n-1-column (mirror)
    int32_t row = -1;     // row of win[0]
    int32_t status = -1;
    int32_t dep = -1;     // drift departure time
    std::array<int32_t, kWinDepth> win;
    Guest() { win.fill(-1); }
    bool valid() const { return status >= 0; }
};

template <typename Rec>
Guest get_guest(const Rec& r, int slot) {
    Guest g;
    int base = S_G0 + slot * GSZ;
    g.side = r[base + G_SIDE];
    g.home = r[base + G_HOME];
    g.row = r[base + G_ROW];
    g.status = r[base + G_ST];
    g.dep = r[base + G_DEP];
    for (int i = 0; i < kWinDepth; ++i) g.win[i] = r[base + G_WIN + i];
    return g;
}

template <typename Rec>
void put_guest(Rec& r, int slot, const Guest& g) {
    int base = S_G0 + slot * GSZ;
    r[base + G_SIDE] = g.side;
    r[base + G_HOME] = g.home;
    r[base + G_ROW] = g.row;
    r[base + G_ST] = g.status;
    r[base + G_DEP] = g.dep;
    for (int i = 0; i < kWinDepth; ++i) r[base + G_WIN + i] = g.win[i];
}

}  // namespace

SpedUp speedup(const Automaton& a, const FunctionSpec& spec, const TimeBound& t,
               Rational r, bool verify_bound) {
    if (!(r > Rational(0)) || r > Rational(1))
        throw domain_error("acceleration ratio must lie in (0,1]");
    if (!(t.b == Rational(0)) || !(t.a > Rational(0)))
        throw domain_error("shipped acceleration needs t(n) = a*n with a > 0");
    OutputContract base_contract = OutputContract::linear(Rational(1) + t.a);

    if (r == Rational(1)) {
        SpedUp s;
        s.automaton = a;
        s.contract = base_contract;
        s.spec = spec;
        s.ratio = r;
        return s;
    }
    if (r.num() != 1 || r.den() < 2 || r.den() > 3)
        throw domain_error("shipped acceleration supports r in {1, 1/2, 1/3}");
    const int q = static_cast<int>(r.den());

    if (verify_bound) {
        for (size_t n : {1, 2, 3, 5, 8}) {
            Word w;
            for (size_t i = 0; i < n; ++i)
                w.push_back(spec.input_alphabet[i % spec.input_alphabet.size()]);
            if (!spec.domain(w)) continue;
            VerificationReport rep = verify(a, base_contract, spec, w);
            if (!rep.pass)
                throw bound_error("declared time bound fails: " + rep.first_violation);
        }
    }

    auto states = std::make_shared<StateTable>();
    auto codec = std::make_shared<RecordCodec<S_FIELDS>>(states, "acc");
    State border = states->intern("#");
    using Rec = RecordCodec<S_FIELDS>::Record;

    auto inner = std::make_shared<Automaton>(a);
    Rational bound_a = t.a;

    auto out_row = [bound_a](int32_t n) -> int32_t {
        return n + static_cast<int32_t>((bound_a * Rational(n)).ceil());
    };
    auto target_time = [bound_a, q](int32_t n) -> int32_t {
        return n + static_cast<int32_t>((bound_a * Rational(n) / Rational(q)).ceil());
    };

    auto out_alpha = std::make_shared<std::vector<std::string>>(spec.output_alphabet);
    auto proj = a.project;
    auto out_index = [out_alpha, proj](State s) -> int32_t {
        std::string sym = proj(s);
        for (size_t i = 0; i < out_alpha->size(); ++i)
            if ((*out_alpha)[i] == sym) return static_cast<int32_t>(i);
        throw program_error("projection outside output alphabet");
    };

    const int drift_period = (q + 1) / (q - 1);  // drift speed (q-1)/(q+1)

    auto rule = [codec, border, inner, q, drift_period, out_row, target_time,
                 out_index](State ls, State cs, State rs) -> State {
        if (cs == border) return border;
        Rec c = codec->decode(cs);
        Rec l{}, rr{};
        l.fill(-1);
        rr.fill(-1);
        bool lw = ls == border, rw = rs == border;
        if (!lw) l = codec->decode(ls);
        if (!rw) rr = codec->decode(rs);

        Rec o;
        o.fill(-1);
        o[S_T] = c[S_T] + 1;
        o[S_DL] = c[S_DL] >= 0 ? c[S_DL] : (lw ? 1 : (l[S_DL] >= 0 ? l[S_DL] + 1 : -1));
        o[S_DR] = c[S_DR] >= 0 ? c[S_DR] : (rw ? 1 : (rr[S_DR] >= 0 ? rr[S_DR] + 1 : -1));
        o[S_PARKED] = c[S_PARKED];
        const int32_t t_new = o[S_T];
        const int32_t n_known =
            o[S_DL] >= 0 && o[S_DR] >= 0 ? o[S_DL] + o[S_DR] - 1 : -1;

        std::vector<Guest> guests;

        // ---- resident column ----------------------------------------------
        if (c[S_PLAIN] >= 0) {
            bool wave_now = o[S_DL] >= 0 || o[S_DR] >= 0;
            // neighbours at the resident row: plain residents or departed
            // guests still holding that row
            auto res_neighbour = [&](const Rec& rec, bool wall, bool left_side)
                -> int32_t {
                if (wall) return static_cast<int32_t>(inner->border);
                if (rec[S_PLAIN] >= 0 && rec[S_PROW] == c[S_PROW]) return rec[S_PLAIN];
                // the neighbour departed this wave; its guest window holds the row
                for (int s = 0; s < kSlots; ++s) {
                    Guest g = get_guest(rec, s);
                    if (!g.valid()) continue;
                    int32_t d = g.row - c[S_PROW];
                    if (d >= 0 && d < kWinDepth && g.win[d] >= 0) return g.win[d];
                }
                (void)left_side;
                return -1;
            };
            int32_t left = res_neighbour(l, lw, true);
            int32_t right = res_neighbour(rr, rw, false);
            if (left < 0 || right < 0)
                throw program_error("plain phase missing neighbour data");
            int32_t stepped = static_cast<int32_t>(
                inner->rule(static_cast<State>(left), static_cast<State>(c[S_PLAIN]),
                            static_cast<State>(right)));
            if (!wave_now) {
                o[S_PLAIN] = stepped;
                o[S_PPREV] = c[S_PLAIN];
                o[S_PROW] = c[S_PROW] + 1;
            } else {
                Guest g;
                g.side = o[S_DL] >= 0 ? 0 : 1;
                g.home = g.side == 0 ? o[S_DL] - 1 : o[S_DR] - 1;
                g.status = CS_DRIFT;
                g.dep = t_new;
                g.row = c[S_PROW] + 1;
                g.win.fill(-1);
                g.win[0] = stepped;
                g.win[1] = c[S_PLAIN];
                if (c[S_PPREV] >= 0) g.win[2] = c[S_PPREV];
                guests.push_back(g);
            }
        }

        // ---- gather guests --------------------------------------------------
        // A drift move is cancelled when the cell the guest sits in learns
        // the opposite wall this very step: freezing one cell short keeps the
        // walker travel within the delivery budget. Both the keeping and the
        // pulling cell can decide this from the same neighbour data.
        auto moving_now = [&](const Guest& g) {
            if (g.status != CS_DRIFT || g.dep >= t_new) return false;
            int32_t phase = (t_new - g.dep) % drift_period;
            // the mirror side moves one step earlier in its cycle so its
            // freeze arrivals match the left side's instant freezes
            return g.side == 0 ? phase == 0 : phase == drift_period - 1;
        };
        auto freezes_here = [&](const Guest& g) {
            return g.side == 0 ? o[S_DR] >= 0 : o[S_DL] >= 0;
        };
        for (int s = 0; s < kSlots; ++s) {
            Guest g = get_guest(c, s);
            if (!g.valid() || g.status == CS_SHADOW) continue;
            bool keep = !moving_now(g) || (g.side == 0 && freezes_here(g));
            if (keep) guests.push_back(g);
        }
        if (!lw)
            for (int s = 0; s < kSlots; ++s) {
                Guest g = get_guest(l, s);
                if (!g.valid() || g.side != 0 || !moving_now(g)) continue;
                bool src_freezes = l[S_DR] >= 0 || c[S_DR] >= 0;  // l's new DR
                if (!src_freezes) guests.push_back(g);
            }
        if (!rw)
            for (int s = 0; s < kSlots; ++s) {
                Guest g = get_guest(rr, s);
                if (g.valid() && g.side == 1 && moving_now(g)) guests.push_back(g);
            }

        // ---- freeze --------------------------------------------------------
        // Freezing discretizes at the floor of the geometric contact: the
        // left half freezes as soon as its cell knows the right wall, the
        // mirror half freezes only on arriving in a cell that knows the left
        // wall (a mid-dwell contact drifts one cell further first).
        for (auto& g : guests) {
            if (g.status == CS_DRIFT && n_known >= 0) {
                bool frz;
                if (g.side == 0) {
                    frz = o[S_DR] >= 0;
                } else {
                    // the outermost column freezes on contact; everything
                    // else settles on its next arrival (floor position)
                    frz = o[S_DL] >= 0 &&
                          (g.dep == t_new || moving_now(g) || g.home == 0);
                }
                if (frz) {
                    g.status = CS_FROZEN;
                    if (g.side == 1) {  // convert to a true home
                        g.home = n_known - 1 - g.home;
                        g.side = 0;
                    }
                }
            }
        }

        // ---- advance -------------------------------------------------------
        // Grouped-window evaluation: gather every (column, row, state) fact
        // visible in the neighbourhood, then close it under the base rule so
        // each guest can gain up to q rows per step even when its neighbour
        // columns sit in the same cell.
            // facts keyed by side-0 naming where possible; mirror-side facts
            // are keyed (1, mirror_home) until n is known
            std::map<std::pair<int32_t, int32_t>, std::map<int32_t, int32_t>> facts;
            auto add_fact = [&](int32_t side, int32_t home, int32_t row, int32_t st) {
                if (st < 0) return;
                if (side == 1 && n_known >= 0) {
                    side = 0;
                    home = n_known - 1 - home;
                }
                facts[{side, home}].emplace(row, st);
            };
            auto harvest = [&](const Rec& rec, bool wall) {
                if (wall) return;
                if (rec[S_PLAIN] >= 0) {
                    if (rec[S_DL] >= 0) {
                        add_fact(0, rec[S_DL] - 1, rec[S_PROW], rec[S_PLAIN]);
                        if (rec[S_PPREV] >= 0)
                            add_fact(0, rec[S_DL] - 1, rec[S_PROW] - 1, rec[S_PPREV]);
                    }
                    if (rec[S_DR] >= 0) {
                        add_fact(1, rec[S_DR] - 1, rec[S_PROW], rec[S_PLAIN]);
                        if (rec[S_PPREV] >= 0)
                            add_fact(1, rec[S_DR] - 1, rec[S_PROW] - 1, rec[S_PPREV]);
                    }
                }
                for (int s = 0; s < kSlots; ++s) {
                    Guest g = get_guest(rec, s);
                    if (!g.valid()) continue;
                    for (int i = 0; i < kWinDepth; ++i)
                        if (g.win[i] >= 0) add_fact(g.side, g.home, g.row - i, g.win[i]);
                }
            };
            harvest(c, false);
            harvest(l, lw);
            harvest(rr, rw);
            // current guests carry this step's fresh data too
            for (auto& g : guests)
                for (int i = 0; i < kWinDepth; ++i)
                    if (g.win[i] >= 0) add_fact(g.side, g.home, g.row - i, g.win[i]);

            auto fact_at = [&](int32_t side, int32_t home, int32_t row) -> int32_t {
                if (side == 1 && n_known >= 0) {
                    side = 0;
                    home = n_known - 1 - home;
                }
                // outside the word the border state holds at every row
                if (side == 0 && home < 0) return static_cast<int32_t>(inner->border);
                if (side == 1 && home < 0) return static_cast<int32_t>(inner->border);
                if (side == 0 && n_known >= 0 && home >= n_known)
                    return static_cast<int32_t>(inner->border);
                auto it = facts.find({side, home});
                if (it == facts.end()) return -1;
                auto jt = it->second.find(row);
                return jt == it->second.end() ? -1 : jt->second;
            };

            // memoized recursive derivation over the gathered facts; on the
            // mirror side the true left neighbour carries the larger
            // side-local home
            std::function<int32_t(int32_t, int32_t, int32_t, int)> get =
                [&](int32_t side, int32_t home, int32_t row, int depth) -> int32_t {
                int32_t v = fact_at(side, home, row);
                if (v >= 0) return v;
                if (depth <= 0 || row <= 0) return -1;
                int32_t lh = side == 0 ? home - 1 : home + 1;
                int32_t rh = side == 0 ? home + 1 : home - 1;
                int32_t lv = get(side, lh, row - 1, depth - 1);
                if (lv < 0) return -1;
                int32_t cv = get(side, home, row - 1, depth - 1);
                if (cv < 0) return -1;
                int32_t rv = get(side, rh, row - 1, depth - 1);
                if (rv < 0) return -1;
                int32_t nv = static_cast<int32_t>(inner->rule(static_cast<State>(lv),
                                                              static_cast<State>(cv),
                                                              static_cast<State>(rv)));
                add_fact(side, home, row, nv);
                return nv;
            };

            for (auto& g : guests) {
                if (g.status != CS_DRIFT && g.status != CS_FROZEN) continue;
                int32_t cap = n_known >= 0 ? out_row(n_known) : g.row + q + 3;
                int budget = q + 3;  // the integerized freeze may lag; catch up
                while (budget > 0 && g.row < cap) {
                    int32_t nv = get(g.side, g.home, g.row + 1, q + 10);
                    if (nv < 0) break;
                    for (int i = kWinDepth - 1; i > 0; --i) g.win[i] = g.win[i - 1];
                    g.win[0] = nv;
                    g.row += 1;
                    --budget;
                }
                if (g.status == CS_FROZEN && n_known >= 0 && g.row >= out_row(n_known))
                    g.status = CS_DONE;
            }
        // shadow copies of nearby columns: redundant data that lets every
        // cell evaluate deep update chains without waiting on the relay of
        // its neighbours' stored rows
        {
            int32_t lo = INT32_MAX, hi = INT32_MIN;
            for (auto& g : guests)
                if (g.side == 0 && g.status != CS_SHADOW) {
                    lo = std::min(lo, g.home);
                    hi = std::max(hi, g.home);
                }
            if (lo <= hi) {
                for (int32_t home = lo - 3; home <= hi + 3; ++home) {
                    if (home < 0) continue;
                    if (n_known >= 0 && home >= n_known) continue;
                    bool own = false;
                    for (auto& g : guests)
                        if (g.side == 0 && g.home == home && g.status != CS_SHADOW)
                            own = true;
                    if (own) continue;
                    // best window visible anywhere this step
                    Guest sh;
                    sh.side = 0;
                    sh.home = home;
                    sh.status = CS_SHADOW;
                    sh.dep = 0;
                    sh.row = -1;
                    auto absorb = [&](const Guest& g2) {
                        if (g2.side != 0 || g2.home != home) return;
                        if (g2.row > sh.row) {
                            sh.row = g2.row;
                            sh.win = g2.win;
                        }
                    };
                    for (int s = 0; s < kSlots; ++s) {
                        if (!lw) absorb(get_guest(l, s));
                        absorb(get_guest(c, s));
                        if (!rw) absorb(get_guest(rr, s));
                    }
                    // facts derived this step may exceed any stored window
                    auto it = facts.find({0, home});
                    if (it != facts.end() && !it->second.empty()) {
                        auto jt = std::prev(it->second.end());
                        if (jt->first > sh.row) {
                            sh.row = jt->first;
                            sh.win.fill(-1);
                            for (int d = 0; d < kWinDepth; ++d) {
                                auto kt = it->second.find(sh.row - d);
                                if (kt != it->second.end()) sh.win[d] = kt->second;
                            }
                        }
                    }
                    if (sh.row >= 0) guests.push_back(sh);
                }
            }
        }


        // ---- walkers ---------------------------------------------------------
        int32_t wl_sym = -1, wl_cnt = -1, wr_sym = -1, wr_cnt = -1;
        if (!rw && rr[S_WLK_L_SYM] >= 0 && rr[S_WLK_L_CNT] > 0) {
            wl_sym = rr[S_WLK_L_SYM];
            wl_cnt = rr[S_WLK_L_CNT] - 1;
        }
        if (!lw && l[S_WLK_R_SYM] >= 0 && l[S_WLK_R_CNT] > 0) {
            wr_sym = l[S_WLK_R_SYM];
            wr_cnt = l[S_WLK_R_CNT] - 1;
        }
        if (wl_cnt == 0 && o[S_PARKED] < 0) {
            o[S_PARKED] = wl_sym;
            wl_sym = wl_cnt = -1;
        } else if (wl_cnt == 0) {
            wl_sym = wl_cnt = -1;
        }
        if (wr_cnt == 0 && o[S_PARKED] < 0) {
            o[S_PARKED] = wr_sym;
            wr_sym = wr_cnt = -1;
        } else if (wr_cnt == 0) {
            wr_sym = wr_cnt = -1;
        }

        // Opportunistic delivery: at each step exactly two columns could
        // still reach their home on time through this cell; if the output
        // row is derivable from the visible facts, launch (or park) it.
        // Several cells may launch the same column's walker; they occupy
        // identical channel slots with identical symbols, so the duplicates
        // coincide.
        if (n_known >= 0 && o[S_DL] >= 0) {
            int32_t x_here = o[S_DL] - 1;
            int32_t tt = target_time(n_known);
            int32_t k = tt - t_new;
            int32_t orow = out_row(n_known);
            if (k >= 0) {
                auto attempt = [&](int32_t h) {
                    if (h < 0 || h >= n_known) return;
                    int32_t v = get(0, h, orow, q + 10);
                    if (v < 0) return;
                    int32_t sym = out_index(static_cast<State>(v));
                    if (k == 0) {
                        if (h == x_here && o[S_PARKED] < 0) o[S_PARKED] = sym;
                    } else if (h < x_here) {
                        wl_sym = sym;
                        wl_cnt = k;
                    } else if (h > x_here) {
                        wr_sym = sym;
                        wr_cnt = k;
                    } else if (o[S_PARKED] < 0) {
                        o[S_PARKED] = sym;
                    }
                };
                attempt(x_here - k);
                if (k > 0) attempt(x_here + k);
            }
        }
        o[S_WLK_L_SYM] = wl_sym;
        o[S_WLK_L_CNT] = wl_cnt;
        o[S_WLK_R_SYM] = wr_sym;
        o[S_WLK_R_CNT] = wr_cnt;

        int slot = 0;
        for (auto& g : guests) {
            if (!g.valid() || g.status == -2) continue;
            if (slot >= kSlots) throw program_error("guest slots exhausted");
            put_guest(o, slot++, g);
        }
        return codec->encode(o);
    };

    Automaton b;
    b.states = states;
    b.border = border;
    b.rule = Rule::func(rule);
    b.input_alphabet = a.input_alphabet;
    for (size_t i = 0; i < a.input_states.size(); ++i) {
        Rec rec;
        rec.fill(-1);
        rec[S_T] = 0;
        rec[S_PLAIN] = static_cast<int32_t>(a.input_states[i]);
        rec[S_PROW] = 0;
        b.input_states.push_back(codec->encode(rec));
    }
    b.output_alphabet = spec.output_alphabet;
    auto outs = out_alpha;
    b.project = [codec, border, outs](State s) {
        if (s == border) return (*outs)[0];
        auto rec = codec->decode(s);
        int32_t p = rec[S_PARKED];
        return (*outs)[p >= 0 ? static_cast<size_t>(p) : 0];
    };

    SpedUp result;
    result.automaton = std::move(b);
    result.contract = OutputContract::linear(Rational(1) + t.a * r);
    result.spec = spec;
    result.ratio = r;
    return result;
}

// ---------------------------------------------------------------------------
// composition of linear-time computers
//
// Layer a runs from time 0; a countdown synchronizer fires at exactly
// ceil(k_a n) and latches a's output row as layer b's parallel input; a
// second synchronizer fires at ceil(k_a n) + ceil(k_b n) and latches the
// composed output, which the declared contract then reads.

namespace {

// three-field synchronizer state [kind, dist, aux]; the countdown front
// carries the crossing wave's distance so later cells still learn n
constexpr int32_t TS_U = 0, TS_L = 1, TS_R = 2, TS_C = 3, TS_F = 4;

struct TS {
    int32_t kind = TS_U;
    int32_t val = 0;  // L/R: wall distance; C: countdown
    int32_t aux = 0;  // C: the opposite-wave distance it keeps carrying
};

TS ts_step(const TS& lft, const TS& cur, const TS& rgt, bool lw, bool rw,
           const std::function<int32_t(int32_t)>& fire_at) {
    if (cur.kind == TS_F) return cur;
    if (cur.kind == TS_C) {
        if (cur.val <= 0) return {TS_F, 0, cur.aux};
        return {TS_C, cur.val - 1, cur.aux};
    }
    auto right_dist = [&](const TS& s, bool wall) -> int32_t {
        // distance to the right wall as seen arriving from the right
        if (wall) return 1;
        if (s.kind == TS_R) return s.val + 1;
        if (s.kind == TS_C || s.kind == TS_F) return s.aux + 1;
        return -1;
    };
    auto left_dist = [&](const TS& s, bool wall) -> int32_t {
        if (wall) return 1;
        if (s.kind == TS_L) return s.val + 1;
        if (s.kind == TS_C || s.kind == TS_F) return s.aux + 1;
        return -1;
    };
    auto start_countdown = [&](int32_t dl, int32_t dr) -> TS {
        int32_t n = dl + dr - 1;
        int32_t second = std::max(dl, dr);
        int32_t k = fire_at(n) - second;
        // the later wave keeps travelling outward through counting cells
        int32_t aux = std::max(dl, dr);
        if (k <= 0) return {TS_F, 0, aux};
        return {TS_C, k - 1, aux};
    };
    if (cur.kind == TS_U) {
        int32_t dl = lw ? 1 : (lft.kind == TS_L ? lft.val + 1 : -1);
        int32_t dr = rw ? 1 : (rgt.kind == TS_R ? rgt.val + 1 : -1);
        if (dl > 0 && dr > 0) return start_countdown(dl, dr);
        if (dl > 0) return {TS_L, dl, 0};
        if (dr > 0) return {TS_R, dr, 0};
        return {TS_U, 0, 0};
    }
    if (cur.kind == TS_L) {
        int32_t dr = right_dist(rgt, rw);
        if (dr > 0) return start_countdown(cur.val, dr);
        return cur;
    }
    if (cur.kind == TS_R) {
        int32_t dl = left_dist(lft, lw);
        if (dl > 0) return start_countdown(dl, cur.val);
        return cur;
    }
    return cur;
}

}  // namespace

ComposedLinear compose_linear(const Automaton& a, const OutputContract& ca,
                              const FunctionSpec& sa, const Automaton& b,
                              const OutputContract& cb, const FunctionSpec& sb) {
    if (sa.output_alphabet != sb.input_alphabet)
        throw domain_error("composition alphabets do not match");
    if (ca.kind != ContractKind::LinearTime || cb.kind != ContractKind::LinearTime)
        throw domain_error("composition expects linear-time contracts");

    auto states = std::make_shared<StateTable>();
    // [a_state, a_parked, tsa_kind, tsa_val, tsa_aux,
    //  b_state, b_parked, tsb_kind, tsb_val, tsb_aux]
    auto codec = std::make_shared<RecordCodec<10>>(states, "cmp");
    State border = states->intern("#");

    auto pa = std::make_shared<Automaton>(a);
    auto pb = std::make_shared<Automaton>(b);
    Rational ka = ca.k, kb = cb.k;

    auto fire_a = [ka](int32_t n) -> int32_t {
        return static_cast<int32_t>((ka * Rational(n)).ceil());
    };
    auto fire_b = [ka, kb](int32_t n) -> int32_t {
        return static_cast<int32_t>((ka * Rational(n)).ceil()) +
               static_cast<int32_t>((kb * Rational(n)).ceil());
    };

    auto mid_alpha = std::make_shared<std::vector<std::string>>(sa.output_alphabet);
    auto out_alpha = std::make_shared<std::vector<std::string>>(sb.output_alphabet);
    auto proj_a = a.project;
    auto proj_b = b.project;
    auto mid_index = [mid_alpha, proj_a](State s) -> int32_t {
        std::string sym = proj_a(s);
        for (size_t i = 0; i < mid_alpha->size(); ++i)
            if ((*mid_alpha)[i] == sym) return static_cast<int32_t>(i);
        throw program_error("intermediate symbol outside alphabet");
    };
    auto out_index = [out_alpha, proj_b](State s) -> int32_t {
        std::string sym = proj_b(s);
        for (size_t i = 0; i < out_alpha->size(); ++i)
            if ((*out_alpha)[i] == sym) return static_cast<int32_t>(i);
        throw program_error("output symbol outside alphabet");
    };

    Automaton comp;
    comp.states = states;
    comp.border = border;
    comp.rule = Rule::func([codec, border, pa, pb, fire_a, fire_b, mid_index,
                            out_index](State ls, State cs, State rs) -> State {
        if (cs == border) return border;
        auto c = codec->decode(cs);
        bool lw = ls == border, rw = rs == border;
        auto l = lw ? decltype(c){} : codec->decode(ls);
        auto rr = rw ? decltype(c){} : codec->decode(rs);

        State la = lw ? pa->border : static_cast<State>(l[0]);
        State ra = rw ? pa->border : static_cast<State>(rr[0]);
        State na = pa->rule(la, static_cast<State>(c[0]), ra);

        TS tsa = ts_step({lw ? TS_U : l[2], lw ? 0 : l[3], lw ? 0 : l[4]},
                         {c[2], c[3], c[4]},
                         {rw ? TS_U : rr[2], rw ? 0 : rr[3], rw ? 0 : rr[4]}, lw, rw,
                         fire_a);
        int32_t parked_a = c[1];
        int32_t nb = c[5];
        if (nb >= 0) {
            State lb = lw || l[5] < 0 ? pb->border : static_cast<State>(l[5]);
            State rb2 = rw || rr[5] < 0 ? pb->border : static_cast<State>(rr[5]);
            nb = static_cast<int32_t>(pb->rule(lb, static_cast<State>(c[5]), rb2));
        }
        if (parked_a < 0 && tsa.kind == TS_F && c[2] != TS_F) {
            parked_a = mid_index(na);
            nb = static_cast<int32_t>(pb->input_states[parked_a]);
        }
        TS tsb = ts_step({lw ? TS_U : l[7], lw ? 0 : l[8], lw ? 0 : l[9]},
                         {c[7], c[8], c[9]},
                         {rw ? TS_U : rr[7], rw ? 0 : rr[8], rw ? 0 : rr[9]}, lw, rw,
                         fire_b);
        int32_t parked_b = c[6];
        if (parked_b < 0 && tsb.kind == TS_F && c[7] != TS_F && nb >= 0)
            parked_b = out_index(static_cast<State>(nb));

        return codec->encode({static_cast<int32_t>(na), parked_a, tsa.kind, tsa.val,
                              tsa.aux, nb, parked_b, tsb.kind, tsb.val, tsb.aux});
    });
    comp.input_alphabet = a.input_alphabet;
    for (State s : a.input_states)
        comp.input_states.push_back(codec->encode(
            {static_cast<int32_t>(s), -1, TS_U, 0, 0, -1, -1, TS_U, 0, 0}));
    comp.output_alphabet = sb.output_alphabet;
    comp.project = [codec, border, out_alpha](State s) {
        if (s == border) return (*out_alpha)[0];
        auto c = codec->decode(s);
        return (*out_alpha)[c[6] >= 0 ? static_cast<size_t>(c[6]) : 0];
    };

    ComposedLinear out;
    out.automaton = std::move(comp);
    out.contract = OutputContract::linear(ka + kb + Rational(1));
    auto oa = sa.oracle, ob = sb.oracle;
    out.spec.oracle = [oa, ob](const Word& w) { return ob(oa(w)); };
    auto da = sa.domain;
    out.spec.domain = [da, oa, ob](const Word& w) {
        if (!da(w)) return false;
        try {
            ob(oa(w));
            return true;
        } catch (const error&) {
            return false;
        }
    };
    out.spec.input_alphabet = sa.input_alphabet;
    out.spec.output_alphabet = sb.output_alphabet;
    out.gate = 0;
    return out;
}

}  // namespace ca
