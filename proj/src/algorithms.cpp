#include "ca/algorithms.hpp"

#include <algorithm>
#include <cassert>

#include "ca/build.hpp"
#include "ca/encoding.hpp"

namespace ca {

namespace {

int symbol_index(const std::vector<std::string>& alphabet, const std::string& s) {
    for (size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == s) return static_cast<int>(i);
    return -1;
}

bool word_in_alphabet(const std::vector<std::string>& alphabet, const Word& w) {
    for (const auto& s : w)
        if (symbol_index(alphabet, s) < 0) return false;
    return !w.empty();
}

Word reverse_word(const Word& w) { return Word(w.rbegin(), w.rend()); }

}  // namespace

// ---------------------------------------------------------------------------
// mirror
//
// Channel R carries every symbol rightward, channel L leftward. The right
// border turns R into L, so the L channel of cell c at time t >= n-c holds
// symbol 2n-1-c-t; row n spells the reversal.

Construction mirror_sync(const std::vector<std::string>& alphabet) {
    const int A = static_cast<int>(alphabet.size());

    auto states = std::make_shared<StateTable>();
    auto codec = std::make_shared<RecordCodec<2>>(states, "m");  // [r, l], -1 = empty
    State border = states->intern("#");

    auto enc = [codec](int r, int l) {
        return codec->encode({static_cast<int32_t>(r), static_cast<int32_t>(l)});
    };

    Automaton data;
    data.states = states;
    data.border = border;
    data.rule = Rule::func([codec, border, enc](State l, State c, State r) -> State {
        if (c == border) return border;
        auto cc = codec->decode(c);
        int r2 = l == border ? -1 : codec->decode(l)[0];
        int l2 = r == border ? cc[0] : codec->decode(r)[1];
        return enc(r2, l2);
    });
    data.input_alphabet = alphabet;
    for (int i = 0; i < A; ++i) data.input_states.push_back(enc(i, i));
    data.output_alphabet = alphabet;
    auto alpha = std::make_shared<std::vector<std::string>>(alphabet);
    data.project = [codec, border, alpha](State s) {
        if (s == border) return (*alpha)[0];
        int l = codec->decode(s)[1];
        return (*alpha)[l < 0 ? 0 : l];
    };

    auto layer = std::make_shared<Automaton>(squad_layer());
    LayeredAutomaton layered = attach_layer(data, *layer, squad_quiescent_name());

    Construction c;
    c.name = "mirror";
    c.automaton = layered.automaton;
    c.contract = OutputContract::synchronous();
    c.spec.oracle = reverse_word;
    auto alpha2 = alphabet;
    c.spec.domain = [alpha2](const Word& w) { return word_in_alphabet(alpha2, w); };
    c.spec.input_alphabet = alphabet;
    c.spec.output_alphabet = alphabet;
    c.sync_layer = layer;
    c.sync_layer_part = layered.layer_part;
    return c;
}

// ---------------------------------------------------------------------------
// g(u1..un) = u_{n/2}..u_1 u_n..u_{n/2+1}
//
// Every symbol drifts toward each border at half speed; a two-step turn at
// the border sends it back at full speed. The returning stream from the left
// presents u_{n/2-1-i} exactly when the right border wave reaches cell i, and
// symmetrically for the ascending arm. The arriving second wave latches the
// passing symbol into the output field.

namespace {

// record layout for g
enum GF {
    G_PAR,     // global step parity
    G_DL,      // half-speed leftward drift symbol
    G_TL,      // left turn slot
    G_RR,      // returning rightward symbol
    G_DR,      // half-speed rightward drift
    G_TR,      // right turn slot
    G_RL,      // returning leftward symbol
    G_IL,      // left border wave seen (0/1)
    G_IR,      // right border wave seen (0/1)
    G_OUT,     // latched output symbol
    G_FIELDS
};

}  // namespace

Construction cross_mirror_g(const std::vector<std::string>& alphabet) {
    const int A = static_cast<int>(alphabet.size());

    auto states = std::make_shared<StateTable>();
    auto codec = std::make_shared<RecordCodec<G_FIELDS>>(states, "g");
    State border = states->intern("#");
    using Rec = RecordCodec<G_FIELDS>::Record;

    auto empty_rec = []() {
        Rec r;
        r.fill(-1);
        r[G_PAR] = 0;
        r[G_IL] = 0;
        r[G_IR] = 0;
        return r;
    };

    Automaton data;
    data.states = states;
    data.border = border;
    data.rule = Rule::func([codec, border, empty_rec](State ls, State cs, State rs) -> State {
        if (cs == border) return border;
        Rec c = codec->decode(cs);
        Rec l = ls == border ? Rec{} : codec->decode(ls);
        Rec r = rs == border ? Rec{} : codec->decode(rs);
        bool lw = ls == border, rw = rs == border;
        if (lw) l.fill(-1);
        if (rw) r.fill(-1);

        Rec o = empty_rec();
        o[G_PAR] = 1 - c[G_PAR];
        bool shift = o[G_PAR] == 0;  // drift channels move on even steps

        // half-speed drifts
        o[G_DL] = shift ? (rw ? -1 : r[G_DL]) : c[G_DL];
        o[G_DR] = shift ? (lw ? -1 : l[G_DR]) : c[G_DR];
        // border turns: on an odd step the drift value sitting at the wall
        // cell moves into the turn slot; on the next (even) step it is
        // emitted into the returning channel.
        o[G_TL] = -1;
        o[G_TR] = -1;
        if (lw) {
            if (!shift) {
                o[G_TL] = c[G_DL];
                o[G_DL] = -1;
            }
        }
        if (rw) {
            if (!shift) {
                o[G_TR] = c[G_DR];
                o[G_DR] = -1;
            }
        }
        // returning streams
        o[G_RR] = lw ? (shift ? c[G_TL] : -1) : l[G_RR];
        o[G_RL] = rw ? (shift ? c[G_TR] : -1) : r[G_RL];

        // border waves
        o[G_IL] = (lw || l[G_IL] == 1) ? 1 : 0;
        o[G_IR] = (rw || r[G_IR] == 1) ? 1 : 0;

        // latch at the second wave arrival (the strict site of this cell)
        o[G_OUT] = c[G_OUT];
        bool newL = o[G_IL] == 1 && c[G_IL] == 0;
        bool newR = o[G_IR] == 1 && c[G_IR] == 0;
        if (c[G_OUT] < 0) {
            if (newR && c[G_IL] == 1) o[G_OUT] = o[G_RR];  // descending arm
            else if (newL && c[G_IR] == 1) o[G_OUT] = o[G_RL];  // ascending arm
        }
        return codec->encode(o);
    });
    data.input_alphabet = alphabet;
    for (int i = 0; i < A; ++i) {
        Rec r;
        r.fill(-1);
        r[G_PAR] = 0;
        r[G_DL] = static_cast<int32_t>(i);
        r[G_DR] = static_cast<int32_t>(i);
        r[G_IL] = 0;
        r[G_IR] = 0;
        data.input_states.push_back(codec->encode(r));
    }
    data.output_alphabet = alphabet;
    auto alpha = std::make_shared<std::vector<std::string>>(alphabet);
    data.project = [codec, border, alpha](State s) {
        if (s == border) return (*alpha)[0];
        int out = codec->decode(s)[G_OUT];
        return (*alpha)[out < 0 ? 0 : out];
    };

    Construction c;
    c.name = "g";
    c.automaton = std::move(data);
    c.contract = OutputContract::strict();
    c.spec.oracle = [](const Word& w) {
        size_t n = w.size(), h = n / 2;
        Word out;
        for (size_t i = 0; i < h; ++i) out.push_back(w[h - 1 - i]);        // u_{n/2}..u_1
        for (size_t i = 0; i < h; ++i) out.push_back(w[n - 1 - i]);        // u_n..u_{n/2+1}
        return out;
    };
    auto alpha2 = alphabet;
    c.spec.domain = [alpha2](const Word& w) {
        return word_in_alphabet(alpha2, w) && w.size() % 2 == 0;
    };
    c.spec.input_alphabet = alphabet;
    c.spec.output_alphabet = alphabet;
    return c;
}

// ---------------------------------------------------------------------------
// h(b^n u_1..u_n) = u_n..u_1 b^n
//
// Symbols stream leftward at full speed. The boundary between the blank
// prefix and the payload is visible at time 1 and launches a half-speed
// reflector; where the reflector meets the stream, the symbol parks, which
// places u_k at cell n-1-k at time 2k+1.

namespace {

enum HF {
    H_S,       // leftward stream symbol
    H_REFL,    // reflector present
    H_PARK,    // parked output symbol
    H_WB,      // resident was blank
    H_PAR,     // step parity
    H_VIRGIN,  // time-0 flag (boundary detection happens once)
    H_FIELDS
};

}  // namespace

Construction reflect_h(const std::vector<std::string>& alphabet, const std::string& blank) {
    std::vector<std::string> in_alpha = alphabet;
    if (symbol_index(in_alpha, blank) < 0) in_alpha.push_back(blank);
    const int A = static_cast<int>(in_alpha.size());
    const int blank_ix = symbol_index(in_alpha, blank);

    auto states = std::make_shared<StateTable>();
    auto codec = std::make_shared<RecordCodec<H_FIELDS>>(states, "h");
    State border = states->intern("#");
    using Rec = RecordCodec<H_FIELDS>::Record;

    Automaton data;
    data.states = states;
    data.border = border;
    data.rule = Rule::func([codec, border, blank_ix](State ls, State cs, State rs) -> State {
        if (cs == border) return border;
        Rec c = codec->decode(cs);
        bool lw = ls == border, rw = rs == border;
        Rec l{}, r{};
        l.fill(-1);
        r.fill(-1);
        if (!lw) l = codec->decode(ls);
        if (!rw) r = codec->decode(rs);

        Rec o;
        o.fill(-1);
        o[H_WB] = c[H_WB];
        o[H_PAR] = 1 - c[H_PAR];
        o[H_VIRGIN] = 0;
        o[H_PARK] = c[H_PARK];

        // stream moves left every step
        int incoming = rw ? -1 : r[H_S];

        // reflector: born once at the blank/payload boundary; afterwards it
        // moves left on odd steps and rests on even ones.
        bool refl = false;
        if (c[H_VIRGIN] == 1) {
            refl = c[H_S] == blank_ix && !rw && r[H_S] >= 0 && r[H_S] != blank_ix;
        } else {
            bool odd_step = o[H_PAR] == 1;
            if (odd_step)
                refl = !rw && r[H_REFL] == 1;
            else
                refl = c[H_REFL] == 1;
        }
        o[H_REFL] = refl ? 1 : 0;

        // park when the reflector enters together with an arriving symbol
        bool refl_entering = refl && c[H_REFL] != 1;
        if (refl_entering && incoming >= 0 && o[H_PARK] < 0) {
            o[H_PARK] = static_cast<int32_t>(incoming);
            incoming = -1;
        }
        o[H_S] = static_cast<int32_t>(incoming);
        return codec->encode(o);
    });
    data.input_alphabet = in_alpha;
    for (int i = 0; i < A; ++i) {
        Rec rec;
        rec.fill(-1);
        rec[H_S] = static_cast<int32_t>(i);
        rec[H_REFL] = 0;
        rec[H_WB] = i == blank_ix ? 1 : 0;
        rec[H_PAR] = 0;
        rec[H_VIRGIN] = 1;
        data.input_states.push_back(codec->encode(rec));
    }
    data.output_alphabet = in_alpha;
    auto alpha = std::make_shared<std::vector<std::string>>(in_alpha);
    data.project = [codec, border, alpha, blank_ix](State s) {
        if (s == border) return (*alpha)[blank_ix];
        Rec rec = codec->decode(s);
        if (rec[H_WB] == 1 && rec[H_PARK] >= 0) return (*alpha)[rec[H_PARK]];
        return (*alpha)[blank_ix];
    };

    Construction c;
    c.name = "h";
    c.automaton = std::move(data);
    c.contract = OutputContract::strict();
    std::string blank_sym = blank;
    c.spec.oracle = [blank_sym](const Word& w) {
        size_t half = w.size() / 2;
        Word out;
        for (size_t i = 0; i < half; ++i) out.push_back(w[w.size() - 1 - i]);
        for (size_t i = 0; i < half; ++i) out.push_back(blank_sym);
        return out;
    };
    auto alpha2 = in_alpha;
    c.spec.domain = [alpha2, blank_sym](const Word& w) {
        if (!word_in_alphabet(alpha2, w) || w.size() % 2 != 0 || w.empty()) return false;
        size_t half = w.size() / 2;
        for (size_t i = 0; i < half; ++i)
            if (w[i] != blank_sym) return false;
        for (size_t i = half; i < w.size(); ++i)
            if (w[i] == blank_sym) return false;
        return true;
    };
    c.spec.input_alphabet = in_alpha;
    c.spec.output_alphabet = in_alpha;
    return c;
}

// ---------------------------------------------------------------------------
// f(u1..un) = u_{n/2+1}..u_n u_1..u_{n/2}
//
// Descending half: symbols stream leftward, park in pairs where the stream
// meets the left border wave, then creep back leftward at speed 1/3 (in two
// channels split by index parity) so that symbol n/2+i sits at cell i exactly
// when the right border wave arrives. The ascending half mirrors this.

namespace {

enum FF {
    F_SL,      // leftward stream
    F_SR,      // rightward stream
    F_P1, F_H1,   // first parked symbol (odd index) + hold counter
    F_P2, F_H2,   // second parked symbol (even index) + hold counter
    F_DO, F_CO,   // descending drift, odd channel + mod-3 counter
    F_DE, F_CE,   // descending drift, even channel
    F_Q1, F_K1,   // ascending first park + hold
    F_Q2, F_K2,   // ascending second park + hold
    F_EO, F_GO,   // ascending drift, "odd" (first-arrival) channel
    F_EE, F_GE,   // ascending drift, second channel
    F_IL,      // left wave distance mod 4, -1 unset
    F_IR,      // right wave distance mod 4, -1 unset
    F_OUT,
    F_FIELDS
};

}  // namespace

Construction rotate_half_f(const std::vector<std::string>& alphabet) {
    const int A = static_cast<int>(alphabet.size());

    auto states = std::make_shared<StateTable>();
    auto codec = std::make_shared<RecordCodec<F_FIELDS>>(states, "f");
    State border = states->intern("#");
    using Rec = RecordCodec<F_FIELDS>::Record;

    Automaton data;
    data.states = states;
    data.border = border;
    data.rule = Rule::func([codec, border](State ls, State cs, State rs) -> State {
        if (cs == border) return border;
        Rec c = codec->decode(cs);
        bool lw = ls == border, rw = rs == border;
        Rec l{}, r{};
        l.fill(-1);
        r.fill(-1);
        if (!lw) l = codec->decode(ls);
        if (!rw) r = codec->decode(rs);

        Rec o;
        o.fill(-1);
        o[F_OUT] = c[F_OUT];

        // border waves carrying distance mod 4
        o[F_IL] = lw ? 1 : (l[F_IL] >= 0 ? static_cast<int32_t>((l[F_IL] + 1) % 4)
                                         : c[F_IL]);
        if (c[F_IL] >= 0) o[F_IL] = c[F_IL];
        o[F_IR] = rw ? 1 : (r[F_IR] >= 0 ? static_cast<int32_t>((r[F_IR] + 1) % 4)
                                         : c[F_IR]);
        if (c[F_IR] >= 0) o[F_IR] = c[F_IR];
        bool newL = c[F_IL] < 0 && o[F_IL] >= 0;
        bool newR = c[F_IR] < 0 && o[F_IR] >= 0;

        // one machinery direction: stream, paired park with holds, 1/3 drift
        auto half = [&](bool mirror) {
            const int SY = mirror ? F_SR : F_SL;
            const int P1 = mirror ? F_Q1 : F_P1, H1 = mirror ? F_K1 : F_H1;
            const int P2 = mirror ? F_Q2 : F_P2, H2 = mirror ? F_K2 : F_H2;
            const int D1 = mirror ? F_EO : F_DO, C1 = mirror ? F_GO : F_CO;
            const int D2 = mirror ? F_EE : F_DE, C2 = mirror ? F_GE : F_CE;
            const int INFO = mirror ? F_IR : F_IL;
            const Rec& up = mirror ? l : r;    // upstream neighbour
            bool up_wall = mirror ? lw : rw;

            // drift channels: a symbol rests three steps per cell (counter
            // 0,1,2), then hops to the next cell downstream.
            auto advance_drift = [&](int d, int cnt) {
                int sym = -1, k = -1;
                if (!up_wall && up[d] >= 0 && up[cnt] == 2) {
                    sym = up[d];
                    k = 0;
                } else if (c[d] >= 0 && c[cnt] < 2) {
                    sym = c[d];
                    k = c[cnt] + 1;
                }
                o[d] = static_cast<int32_t>(sym);
                o[cnt] = static_cast<int32_t>(k);
            };
            advance_drift(D1, C1);
            advance_drift(D2, C2);

            // parked holds tick down; at zero the symbol enters its drift
            auto release = [&](int p, int h, int d, int cnt) {
                if (c[p] < 0) return;
                int left = c[h] - 1;
                if (left > 0) {
                    o[p] = c[p];
                    o[h] = static_cast<int32_t>(left);
                } else if (o[d] < 0) {
                    o[d] = c[p];
                    o[cnt] = 0;
                } else {
                    o[p] = c[p];  // drift slot busy; retry next step
                    o[h] = 0;
                }
            };
            release(P1, H1, D1, C1);
            release(P2, H2, D2, C2);

            // stream moves one cell per step; it parks at informed cells
            int arriving = up_wall ? -1 : up[SY];
            if (arriving >= 0 && o[INFO] >= 0) {
                if (o[P1] < 0 && c[P1] < 0) {
                    o[P1] = static_cast<int32_t>(arriving);
                    o[H1] = 1;
                } else if (o[P2] < 0 && c[P2] < 0) {
                    o[P2] = static_cast<int32_t>(arriving);
                    o[H2] = 2;
                }
                arriving = -1;
            }
            o[SY] = static_cast<int32_t>(arriving);
        };
        half(false);
        half(true);

        // --- output latch at the second wave ---------------------------
        if (c[F_OUT] < 0 && o[F_IL] >= 0 && o[F_IR] >= 0 && (newL || newR)) {
            int i_par = (o[F_IL] + 1) % 2;             // parity of cell index
            int n_mod4 = (o[F_IL] + o[F_IR] + 3) % 4;  // (dL + dR - 1) mod 4
            int half_par = n_mod4 / 2;                 // parity of n/2
            int j_par = (i_par + half_par) % 2;        // parity of wanted index
            if (newR && !newL) {
                o[F_OUT] = j_par == 1 ? o[F_DO] : o[F_DE];
            } else if (newL && !newR) {
                o[F_OUT] = j_par == 0 ? o[F_EO] : o[F_EE];
            }
        }
        return codec->encode(o);
    });
    data.input_alphabet = alphabet;
    for (int i = 0; i < A; ++i) {
        Rec rec;
        rec.fill(-1);
        rec[F_SL] = static_cast<int32_t>(i);
        rec[F_SR] = static_cast<int32_t>(i);
        data.input_states.push_back(codec->encode(rec));
    }
    data.output_alphabet = alphabet;
    auto alpha = std::make_shared<std::vector<std::string>>(alphabet);
    data.project = [codec, border, alpha](State s) {
        if (s == border) return (*alpha)[0];
        int out = codec->decode(s)[F_OUT];
        return (*alpha)[out < 0 ? 0 : out];
    };

    Construction c;
    c.name = "f";
    c.automaton = std::move(data);
    c.contract = OutputContract::strict();
    c.spec.oracle = [](const Word& w) {
        size_t h = w.size() / 2;
        Word out;
        for (size_t i = 0; i < w.size(); ++i) out.push_back(w[(i + h) % w.size()]);
        return out;
    };
    auto alpha2 = alphabet;
    c.spec.domain = [alpha2](const Word& w) {
        return word_in_alphabet(alpha2, w) && w.size() % 2 == 0;
    };
    c.spec.input_alphabet = alphabet;
    c.spec.output_alphabet = alphabet;
    return c;
}

// ---------------------------------------------------------------------------
// recognizer: first symbol = last symbol

Recognizer first_equals_last_recognizer(const std::vector<std::string>& alphabet) {
    const int A = static_cast<int>(alphabet.size());

    auto states = std::make_shared<StateTable>();
    auto codec = std::make_shared<RecordCodec<2>>(states, "r");  // [resident, from_right]
    State border = states->intern("#");

    Automaton a;
    a.states = states;
    a.border = border;
    a.rule = Rule::func([codec, border](State ls, State cs, State rs) -> State {
        (void)ls;
        if (cs == border) return border;
        auto c = codec->decode(cs);
        int fr = rs == border ? c[0] : codec->decode(rs)[1];
        return codec->encode({c[0], static_cast<int32_t>(fr)});
    });
    a.input_alphabet = alphabet;
    for (int i = 0; i < A; ++i)
        a.input_states.push_back(codec->encode({static_cast<int32_t>(i), -1}));
    a.output_alphabet = {"0", "1"};
    a.project = [codec, border](State s) {
        if (s == border) return std::string("0");
        auto r = codec->decode(s);
        return r[1] >= 0 && r[0] == r[1] ? std::string("1") : std::string("0");
    };

    Recognizer rec;
    rec.name = "first-equals-last";
    rec.automaton = std::move(a);
    auto pcodec = codec;
    State b = border;
    rec.accepting = [pcodec, b](State s) {
        if (s == b) return false;
        auto r = pcodec->decode(s);
        return r[1] >= 0 && r[0] == r[1];
    };
    rec.member = [](const Word& w) { return !w.empty() && w.front() == w.back(); };
    return rec;
}

Construction recognizer_to_function(const Recognizer& r, bool real_time, Rational k) {
    // leftmost-cell flag layer
    Automaton flag = make_dense_automaton(
        {"u", "E", "I", "#"}, "#",
        [](const std::string& l, const std::string& c, const std::string&) -> std::string {
            if (c == "#") return "#";
            if (c == "u") return l == "#" ? "E" : "I";
            return c;
        },
        {"u"}, {"0", "1"}, [](const std::string& s) { return s == "E" ? "1" : "0"; });

    auto states = std::make_shared<StateTable>();
    auto pr = std::make_shared<Automaton>(r.automaton);
    auto pf = std::make_shared<Automaton>(flag);
    auto pairs = std::make_shared<std::vector<std::pair<State, State>>>();
    auto mu = std::make_shared<std::mutex>();
    auto enc = [states, pr, pf, pairs, mu](State x, State y) {
        State id = states->intern(pr->name(x) + "/" + pf->name(y));
        std::lock_guard<std::mutex> lock(*mu);
        if (id >= pairs->size()) pairs->resize(id + 1, {0, 0});
        (*pairs)[id] = {x, y};
        return id;
    };
    auto dec = [pairs, mu](State s) {
        std::lock_guard<std::mutex> lock(*mu);
        return (*pairs)[s];
    };

    State fu = *flag.states->find("u");
    State fE = *flag.states->find("E");

    Automaton a;
    a.states = states;
    a.border = enc(r.automaton.border, flag.border);
    a.rule = Rule::func([pr, pf, enc, dec](State l, State c, State rr) {
        auto [lr, lf] = dec(l);
        auto [cr, cf] = dec(c);
        auto [rrr, rf] = dec(rr);
        return enc(pr->rule(lr, cr, rrr), pf->rule(lf, cf, rf));
    });
    a.input_alphabet = r.automaton.input_alphabet;
    for (State s : r.automaton.input_states) a.input_states.push_back(enc(s, fu));
    a.output_alphabet = {"0", "1"};
    auto accepting = r.accepting;
    a.project = [dec, accepting, fE](State s) {
        auto [rs, fs] = dec(s);
        return fs == fE && accepting(rs) ? std::string("1") : std::string("0");
    };

    Construction c;
    c.name = "indicator(" + r.name + ")";
    c.automaton = std::move(a);
    c.contract = real_time ? OutputContract::strict() : OutputContract::linear(k);
    auto member = r.member;
    c.spec.oracle = [member](const Word& w) {
        Word out(w.size(), "0");
        if (member(w)) out[0] = "1";
        return out;
    };
    auto alpha = r.automaton.input_alphabet;
    c.spec.domain = [alpha](const Word& w) { return word_in_alphabet(alpha, w); };
    c.spec.input_alphabet = alpha;
    c.spec.output_alphabet = {"0", "1"};
    return c;
}

// ---------------------------------------------------------------------------
// registry

namespace {

// deliberately wrong fixture: the identity automaton claimed as a mirror
Construction identity_as_mirror(const std::vector<std::string>& alphabet) {
    Construction c;
    c.name = "identity-as-mirror";
    c.automaton = identity_automaton(alphabet);
    c.contract = OutputContract::synchronous();
    c.spec.oracle = reverse_word;
    auto alpha = alphabet;
    c.spec.domain = [alpha](const Word& w) { return word_in_alphabet(alpha, w); };
    c.spec.input_alphabet = alphabet;
    c.spec.output_alphabet = alphabet;
    return c;
}

}  // namespace

std::vector<std::string> construction_names() {
    return {"mirror", "f", "g", "h", "indicator", "identity-as-mirror"};
}

Construction construction_by_name(const std::string& name,
                                  const std::vector<std::string>& alphabet) {
    if (name == "mirror") return mirror_sync(alphabet);
    if (name == "f") return rotate_half_f(alphabet);
    if (name == "g") return cross_mirror_g(alphabet);
    if (name == "h") return reflect_h(alphabet);
    if (name == "indicator")
        return recognizer_to_function(first_equals_last_recognizer(alphabet), true);
    if (name == "identity-as-mirror") return identity_as_mirror(alphabet);
    throw domain_error("unknown algorithm: " + name);
}

}  // namespace ca
