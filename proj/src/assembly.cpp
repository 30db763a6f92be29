#include "ca/assembly.hpp"

#include <map>

#include <algorithm>
#include <cassert>
#include <sstream>

#include "ca/encoding.hpp"

namespace ca {

std::string MacroToken::str() const {
    std::string s = "(";
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(fields[i]);
    }
    return s + ")";
}

namespace {

std::string fields_str(const std::vector<Value>& f) {
    MacroToken t{f};
    return t.str();
}

// Agent payload tags used by reorder: a parked path is [TAG_PATH, s, e, len],
// a glue record is [TAG_REC, ref, end, vertex, offset]. The record means:
// the glued vertex sits `offset` places after `ref` walking toward `end`.
constexpr Value TAG_PATH = 0;
constexpr Value TAG_REC = 1;

struct Merge {
    std::vector<Value> merged;  // s, e, len
    Value ref, end, vertex, offset;
};

// merge two paths sharing exactly one endpoint
std::optional<Merge> merge_paths(const std::vector<Value>& parked,
                                 const std::vector<Value>& moving) {
    Value s1 = parked[0], e1 = parked[1], l1 = parked[2];
    Value s2 = moving[0], e2 = moving[1], l2 = moving[2];
    Merge m;
    if (e1 == s2) {
        m.merged = {s1, e2, l1 + l2};
        m.vertex = e1;
        m.offset = l1;
    } else if (e1 == e2) {
        m.merged = {s1, s2, l1 + l2};
        m.vertex = e1;
        m.offset = l1;
    } else if (s1 == s2) {
        m.merged = {e2, e1, l1 + l2};
        m.vertex = s1;
        m.offset = l2;
    } else if (s1 == e2) {
        m.merged = {s2, e1, l1 + l2};
        m.vertex = s1;
        m.offset = l2;
    } else {
        return std::nullopt;
    }
    m.ref = m.merged[0];
    m.end = m.merged[1];
    return m;
}

}  // namespace

AgentProgram sort_program(unsigned m) {
    AgentProgram p;
    p.kind = AgentProgram::Kind::Sort;
    p.name = "sort";
    p.arity = 1;
    p.bit_width = m;
    p.interact = [](std::vector<Value>& agent, const MacroToken& moving)
        -> std::optional<MacroToken> {
        if (moving.fields[0] < agent[0]) {
            MacroToken out{{agent[0]}};
            agent[0] = moving.fields[0];
            return out;
        }
        return moving;
    };
    return p;
}

AgentProgram path_reorder_program(unsigned m) {
    AgentProgram p;
    p.kind = AgentProgram::Kind::Reorder;
    p.name = "reorder";
    p.arity = 2;
    p.bit_width = m;
    p.interact = [](std::vector<Value>& agent, const MacroToken& moving)
        -> std::optional<MacroToken> {
        if (agent[0] == TAG_REC) return moving;  // records are inert
        std::vector<Value> parked(agent.begin() + 1, agent.begin() + 4);
        std::vector<Value> in = moving.fields;  // s, e, len
        auto m2 = merge_paths(parked, in);
        if (!m2) return moving;
        agent = {TAG_REC, m2->ref, m2->end, m2->vertex, m2->offset};
        return MacroToken{m2->merged};
    };
    return p;
}

AgentProgram components_program(unsigned m) {
    AgentProgram p;
    p.kind = AgentProgram::Kind::Components;
    p.name = "components";
    p.arity = 2;
    p.bit_width = m;
    p.interact = [](std::vector<Value>& agent, const MacroToken& moving)
        -> std::optional<MacroToken> {
        Value lo = std::min(agent[0], agent[1]);
        Value hi = std::max(agent[0], agent[1]);
        MacroToken out = moving;
        if (hi != lo)
            for (auto& v : out.fields)
                if (v == hi) v = lo;
        return out;
    };
    return p;
}

MacroResult macro_run(const AgentProgram& p, const std::vector<MacroToken>& tokens) {
    for (const auto& t : tokens) {
        if (t.fields.size() != p.arity)
            throw program_error("token arity mismatch for " + p.name);
        if (p.bit_width && p.bit_width < 64)
            for (Value v : t.fields)
                if (v >= (1ull << p.bit_width))
                    throw domain_error("token payload exceeds declared bit width");
    }
    MacroResult res;

    // agents: for sort/components the parked token; for reorder a tagged
    // path or glue record
    std::vector<std::vector<Value>> agents;
    auto park = [&](const MacroToken& t) {
        if (p.kind == AgentProgram::Kind::Reorder) {
            std::vector<Value> a = {TAG_PATH};
            a.insert(a.end(), t.fields.begin(), t.fields.end());
            agents.push_back(a);
        } else {
            agents.push_back(t.fields);
        }
    };

    for (const auto& tok : tokens) {
        MacroToken moving = tok;
        if (p.kind == AgentProgram::Kind::Reorder)
            moving.fields = {tok.fields[0], tok.fields[1], 1};  // edge = length-1 path
        bool absorbed = false;
        for (size_t k = 0; k < agents.size(); ++k) {
            MacroStep st;
            st.agent = k;
            st.agent_before = fields_str(agents[k]);
            st.token_in = moving.str();
            auto out = p.interact(agents[k], moving);
            st.agent_after = fields_str(agents[k]);
            if (st.agent_before != st.agent_after &&
                p.kind == AgentProgram::Kind::Reorder && agents[k][0] == TAG_REC)
                res.eliminated.push_back(agents[k][3]);
            if (!out) {
                absorbed = true;
                st.token_out = "-";
                res.trace.push_back(st);
                break;
            }
            moving = *out;
            st.token_out = moving.str();
            res.trace.push_back(st);
        }
        if (!absorbed) park(moving);
    }

    // finalization / second pass
    switch (p.kind) {
        case AgentProgram::Kind::Sort: {
            for (const auto& a : agents) res.output.push_back(a[0]);
            break;
        }
        case AgentProgram::Kind::Reorder: {
            // exactly one path agent must remain
            std::vector<Value> path;
            size_t paths = 0;
            for (const auto& a : agents)
                if (a[0] == TAG_PATH) {
                    ++paths;
                    path = a;
                }
            if (paths != 1)
                throw instance_error("edge list does not describe a single path");
            Value s = path[1], e = path[2], len = path[3];
            if (len != tokens.size() || s == e)
                throw instance_error("edge list does not describe a simple path");
            std::vector<Value> seq(len + 1, UINT64_MAX);
            seq[0] = s;
            seq[len] = e;
            // resolve glue records right to left; each waits for both ends
            // of its merged path, whose order fixes the offset direction
            for (size_t k = agents.size(); k-- > 0;) {
                if (agents[k][0] != TAG_REC) continue;
                Value ref = agents[k][1], end = agents[k][2];
                Value v = agents[k][3], off = agents[k][4];
                size_t ri = SIZE_MAX, ei = SIZE_MAX;
                for (size_t i = 0; i < seq.size(); ++i) {
                    if (seq[i] == ref) ri = i;
                    if (seq[i] == end) ei = i;
                }
                if (ri == SIZE_MAX || ei == SIZE_MAX)
                    throw instance_error("path reconstruction failed");
                size_t at;
                if (ri < ei) {
                    at = ri + off;
                } else {
                    if (off > ri) throw instance_error("path reconstruction failed");
                    at = ri - off;
                }
                if (at >= seq.size())
                    throw instance_error("path reconstruction failed");
                if (seq[at] != UINT64_MAX && seq[at] != v)
                    throw instance_error("path reconstruction conflict");
                seq[at] = v;
            }
            for (Value v : seq) {
                if (v == UINT64_MAX)
                    throw instance_error("path reconstruction incomplete");
                res.output.push_back(v);
            }
            break;
        }
        case AgentProgram::Kind::Components: {
            // resolve labels right to left: label(max) = label(min)
            std::map<Value, Value> label;
            auto resolve = [&](Value v) {
                auto it = label.find(v);
                return it == label.end() ? v : it->second;
            };
            for (size_t k = agents.size(); k-- > 0;) {
                Value lo = std::min(agents[k][0], agents[k][1]);
                Value hi = std::max(agents[k][0], agents[k][1]);
                label[hi] = resolve(lo);
                if (hi != lo) res.eliminated.push_back(hi);
            }
            for (const auto& t : tokens) {
                Value la = resolve(t.fields[0]);
                Value lb = resolve(t.fields[1]);
                if (la != lb) throw program_error("component labels disagree");
                res.output.push_back(la);
            }
            break;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// block encoding

namespace {

void append_block(Word& w, Value v, unsigned m) {
    for (unsigned b = m; b-- > 0;) w.push_back((v >> b) & 1 ? "1" : "0");
}

}  // namespace

Word encode_tokens(const AgentProgram& p, const std::vector<MacroToken>& tokens) {
    Word w;
    bool first = true;
    for (const auto& t : tokens) {
        for (Value v : t.fields) {
            if (!first) w.push_back("|");
            first = false;
            append_block(w, v, p.bit_width);
        }
    }
    return w;
}

std::vector<MacroToken> decode_tokens(const AgentProgram& p, const Word& w) {
    const unsigned m = p.bit_width;
    std::vector<Value> blocks;
    size_t i = 0;
    while (i < w.size()) {
        Value v = 0;
        for (unsigned b = 0; b < m; ++b, ++i) {
            if (i >= w.size() || (w[i] != "0" && w[i] != "1"))
                throw malformed_input_error("bad block encoding");
            v = (v << 1) | (w[i] == "1" ? 1 : 0);
        }
        blocks.push_back(v);
        if (i < w.size()) {
            if (w[i] != "|") throw malformed_input_error("missing block separator");
            ++i;
            if (i == w.size()) throw malformed_input_error("trailing separator");
        }
    }
    if (blocks.empty() || blocks.size() % p.arity != 0)
        throw malformed_input_error("block count does not match token arity");
    std::vector<MacroToken> tokens;
    for (size_t b = 0; b < blocks.size(); b += p.arity) {
        MacroToken t;
        for (unsigned f = 0; f < p.arity; ++f) t.fields.push_back(blocks[b + f]);
        tokens.push_back(std::move(t));
    }
    return tokens;
}

Word expected_output_word(const AgentProgram& p, const Word& input) {
    auto tokens = decode_tokens(p, input);
    MacroResult res = macro_run(p, tokens);
    const unsigned m = p.bit_width;
    size_t total_blocks = tokens.size() * p.arity;
    std::vector<Value> blocks;
    switch (p.kind) {
        case AgentProgram::Kind::Sort:
            blocks = res.output;
            break;
        case AgentProgram::Kind::Reorder:
            blocks = res.output;  // vertex sequence, then zero padding
            blocks.resize(total_blocks, 0);
            break;
        case AgentProgram::Kind::Components:
            for (Value v : res.output) {
                blocks.push_back(v);  // label written over both fields
                blocks.push_back(v);
            }
            break;
    }
    Word w;
    bool first = true;
    for (Value v : blocks) {
        if (!first) w.push_back("|");
        first = false;
        append_block(w, v, m);
    }
    return w;
}

// ---------------------------------------------------------------------------
// compiled conveyor
//
// Phase plan (all waves local, no global clocks):
//   assemble   block bits collapse into their head cell; a numbering wave
//              assigns block indices mod arity; field values hop to their
//              token head; the rightmost block flags the last token.
//   feed       assembled tokens drift to the left border and reflect into
//              the processing channel.
//   process    moving tokens interact with parked agents cell by cell; an
//              end marker trails the last token.
//   write back program-specific second pass delivers the result onto the
//              original block cells, most significant bit first.

namespace {

// record fields of the compiled conveyor CA
enum CF {
    C_RES,       // resident: 0/1 bit, 2 separator
    C_OUT,       // rewritten output bit, -1 until written
    C_HEAD,      // 1 if block head
    C_BIDX,      // block index mod arity, -1 until numbered
    C_NW,        // numbering wave payload (next bidx), -1 absent
    C_LASTB,     // last-block flag wave (leftward within the block)
    C_COLL,      // bit collection channel (leftward, killed at separators)
    C_ACC,       // head accumulator value
    C_CNT,       // bits still missing from the accumulator
    C_FV, C_FB, C_FL,   // field hop channel: value, bidx, last flag
    C_NEED,      // token head: next field index expected
    C_T0, C_T1, C_T2, C_TLAST,  // assembled token awaiting launch
    C_D0, C_D1, C_D2, C_DLAST,  // token drifting left
    C_P0, C_P1, C_P2, C_PLAST, C_PEND,  // processing channel (+ end marker)
    C_A0, C_A1, C_A2, C_A3, C_A4,  // parked agent (tagged for reorder)
    C_ASEEN,                       // reorder: placement index seen first
    C_WL0, C_WL1,    // writeback value drifting left (value, repeat)
    C_WR0, C_WR1,    // writeback value moving right (value, repeat)
    C_BL0, C_BL1,    // backward placements (vertex, index) moving left
    C_BR0, C_BR1,    // placements moving right with countdown
    C_PD0, C_PD1,    // pending injection for a leftward channel
    C_SER0, C_SER1,  // serializer walking right (value, bits left)
    C_RESW,          // components resolution wave (counts 0..2, -1 absent)
    C_ALAB,          // components: assigned label for this agent's min, -1
    C_WSW,           // rightward writeback sweep flag
    C_FIELDS
};

}  // namespace

Rational compiled_linear_factor(const AgentProgram& p) {
    switch (p.kind) {
        case AgentProgram::Kind::Sort: return Rational(14);
        case AgentProgram::Kind::Reorder: return Rational(18);
        case AgentProgram::Kind::Components: return Rational(22);
    }
    return Rational(22);
}

CompiledProgram compile_to_ca(const AgentProgram& p, unsigned m) {
    if (m == 0 || m > 12) throw program_error("block width out of range");
    AgentProgram prog = p;
    prog.bit_width = m;
    const unsigned arity = prog.arity;

    auto states = std::make_shared<StateTable>();
    auto codec = std::make_shared<RecordCodec<C_FIELDS>>(states, "asm");
    State border = states->intern("#");
    using Rec = RecordCodec<C_FIELDS>::Record;

    auto interact = prog.interact;
    auto kind = prog.kind;

    Automaton a;
    a.states = states;
    a.border = border;
    a.rule = Rule::func([codec, border, m, arity, interact, kind](State ls, State cs,
                                                                  State rs) -> State {
        if (cs == border) return border;
        Rec c = codec->decode(cs);
        Rec l{}, r{};
        l.fill(-1);
        r.fill(-1);
        bool lw = ls == border, rw = rs == border;
        if (!lw) l = codec->decode(ls);
        if (!rw) r = codec->decode(rs);

        Rec o;
        o.fill(-1);
        o[C_RES] = c[C_RES];
        o[C_OUT] = c[C_OUT];
        o[C_HEAD] = c[C_HEAD];
        o[C_BIDX] = c[C_BIDX];
        o[C_ACC] = c[C_ACC];
        o[C_CNT] = c[C_CNT];
        o[C_NEED] = c[C_NEED];
        o[C_ALAB] = c[C_ALAB];
        bool sep = c[C_RES] == 2;

        // ---- assembly ---------------------------------------------------
        if (c[C_HEAD] < 0) {
            // first step: identify heads, start collection bookkeeping
            bool head = !sep && (lw || l[C_RES] == 2);
            o[C_HEAD] = head ? 1 : 0;
            if (head) {
                o[C_ACC] = c[C_COLL];  // own bit is the most significant
                o[C_CNT] = static_cast<int32_t>(m - 1);
                if (lw) {
                    o[C_BIDX] = 0;
                    o[C_NEED] = 1;
                    if (arity == 1) o[C_NW] = -1;  // numbering done implicitly
                }
            }
            if (lw) o[C_NW] = static_cast<int32_t>(1 % arity);
            // last-block wave starts at the rightmost cell
            if (rw) o[C_LASTB] = 1;
            // collection channel shifts left, separators kill it
            o[C_COLL] = (!rw && r[C_RES] != 2) ? r[C_COLL] : static_cast<int32_t>(-1);
            return codec->encode(o);
        }

        // numbering wave moves right, assigning block indices at heads
        if (l[C_NW] >= 0) {
            if (o[C_HEAD] == 1 && o[C_BIDX] < 0) {
                o[C_BIDX] = l[C_NW];
                if (l[C_NW] == 0) o[C_NEED] = 1;
                o[C_NW] = static_cast<int32_t>((l[C_NW] + 1) % arity);
            } else {
                o[C_NW] = l[C_NW];
            }
        }

        // last-block flag travels left to its head
        if (c[C_LASTB] != 1 && !rw && r[C_LASTB] == 1 && r[C_RES] != 2 && !sep)
            o[C_LASTB] = 1;
        else if (c[C_LASTB] == 1)
            o[C_LASTB] = 1;

        // bit collection: the channel flows left one cell per step and is
        // absorbed bit by bit at the block head
        int incoming_bit = (!rw && r[C_RES] != 2) ? r[C_COLL] : -1;
        if (o[C_HEAD] == 1 && c[C_CNT] > 0 && c[C_COLL] >= 0) {
            o[C_ACC] = static_cast<int32_t>(c[C_ACC] * 2 + c[C_COLL]);
            o[C_CNT] = static_cast<int32_t>(c[C_CNT] - 1);
        }
        o[C_COLL] = static_cast<int32_t>(sep ? -1 : incoming_bit);

        // completed non-token heads ship their value leftward to the token
        // head (field channel hops one cell per step, passing through cells)
        int fv = -1, fb = -1, fl = -1;
        if (!rw && r[C_FV] >= 0) {
            fv = r[C_FV];
            fb = r[C_FB];
            fl = r[C_FL];
        }
        bool head_done = o[C_HEAD] == 1 && o[C_CNT] == 0 && o[C_BIDX] >= 0;
        bool is_token_head = head_done && o[C_BIDX] == 0;
        if (head_done && o[C_BIDX] > 0 && o[C_ACC] >= 0 && fv < 0) {
            // ship once; the accumulator is cleared by the launch
            fv = o[C_ACC];
            fb = o[C_BIDX];
            fl = o[C_LASTB] == 1 ? 1 : 0;
            o[C_ACC] = -1;
        }
        // token heads capture their fields in order
        o[C_T0] = c[C_T0];
        o[C_T1] = c[C_T1];
        o[C_T2] = c[C_T2];
        o[C_TLAST] = c[C_TLAST];
        if (is_token_head && c[C_T0] < 0 && o[C_ACC] >= 0) {
            o[C_T0] = o[C_ACC];
            o[C_ACC] = -1;
            if (o[C_LASTB] == 1) o[C_TLAST] = 1;
            if (arity == 1) o[C_NEED] = static_cast<int32_t>(arity);  // complete
        }
        if (o[C_T0] >= 0 && fv >= 0 && o[C_NEED] >= 1 && fb == o[C_NEED] &&
            o[C_NEED] < static_cast<int>(arity)) {
            if (o[C_NEED] == 1) o[C_T1] = static_cast<int32_t>(fv);
            if (o[C_NEED] == 2) o[C_T2] = static_cast<int32_t>(fv);
            if (fl == 1) o[C_TLAST] = 1;
            o[C_NEED] = static_cast<int32_t>(o[C_NEED] + 1);
            fv = fb = fl = -1;
        }
        o[C_FV] = static_cast<int32_t>(fv);
        o[C_FB] = static_cast<int32_t>(fb);
        o[C_FL] = static_cast<int32_t>(fl);

        // completed tokens launch into the left drift channel
        int d0 = -1, d1 = -1, d2 = -1, dl = -1;
        if (!rw && r[C_D0] >= 0) {
            d0 = r[C_D0];
            d1 = r[C_D1];
            d2 = r[C_D2];
            dl = r[C_DLAST];
        }
        if (o[C_T0] >= 0 && o[C_NEED] == static_cast<int>(arity) && d0 < 0) {
            d0 = o[C_T0];
            d1 = o[C_T1];
            d2 = o[C_T2];
            dl = o[C_TLAST];
            o[C_T0] = o[C_T1] = o[C_T2] = o[C_TLAST] = -1;
            o[C_NEED] = -1;
        }

        // ---- processing channel ----------------------------------------
        // tokens reflected at the border move right and meet parked agents
        int p0 = -1, p1 = -1, p2 = -1, plast = -1, pend = -1;
        if (lw) {
            // the border cell turns the drift channel around
            if (c[C_D0] >= 0) {
                p0 = c[C_D0];
                p1 = c[C_D1];
                p2 = c[C_D2];
                if (kind == AgentProgram::Kind::Reorder && p2 < 0)
                    p2 = 1;  // an edge enters as a length-1 path
                plast = c[C_DLAST];
            } else if (c[C_PEND] == -2) {
                pend = 0;  // queued end marker enters after the last token
            }
        } else {
            p0 = l[C_P0];
            p1 = l[C_P1];
            p2 = l[C_P2];
            plast = l[C_PLAST];
            pend = l[C_PEND] >= 0 ? l[C_PEND] : -1;
        }
        o[C_D0] = static_cast<int32_t>(d0);
        o[C_D1] = static_cast<int32_t>(d1);
        o[C_D2] = static_cast<int32_t>(d2);
        o[C_DLAST] = static_cast<int32_t>(dl);
        // border: after reflecting the last token, queue the end marker
        if (lw) {
            if (c[C_D0] >= 0 && c[C_DLAST] == 1)
                o[C_PEND] = -2;  // emit end marker next step
        }

        // agent slots
        o[C_A0] = c[C_A0];
        o[C_A1] = c[C_A1];
        o[C_A2] = c[C_A2];
        o[C_A3] = c[C_A3];
        o[C_A4] = c[C_A4];
        o[C_ASEEN] = c[C_ASEEN];

        bool has_agent = c[C_A0] >= 0;
        if (p0 >= 0) {
            // build the moving token
            MacroToken moving;
            if (kind == AgentProgram::Kind::Reorder)
                moving.fields = {static_cast<Value>(p0), static_cast<Value>(p1),
                                 static_cast<Value>(p2)};
            else if (arity == 2)
                moving.fields = {static_cast<Value>(p0), static_cast<Value>(p1)};
            else
                moving.fields = {static_cast<Value>(p0)};
            if (!has_agent) {
                // park here
                if (kind == AgentProgram::Kind::Reorder) {
                    o[C_A0] = static_cast<int32_t>(TAG_PATH);
                    o[C_A1] = static_cast<int32_t>(moving.fields[0]);
                    o[C_A2] = static_cast<int32_t>(moving.fields[1]);
                    o[C_A3] = static_cast<int32_t>(moving.fields[2]);
                } else {
                    o[C_A0] = static_cast<int32_t>(moving.fields[0]);
                    o[C_A1] = arity == 2 ? static_cast<int32_t>(moving.fields[1])
                                         : static_cast<int32_t>(-1);
                }
                p0 = p1 = p2 = plast = -1;
            } else {
                std::vector<Value> agent;
                if (kind == AgentProgram::Kind::Reorder)
                    agent = {static_cast<Value>(c[C_A0]), static_cast<Value>(c[C_A1]),
                             static_cast<Value>(c[C_A2]), static_cast<Value>(c[C_A3])};
                else if (arity == 2)
                    agent = {static_cast<Value>(c[C_A0]), static_cast<Value>(c[C_A1])};
                else
                    agent = {static_cast<Value>(c[C_A0])};
                std::vector<Value> before = agent;
                auto out = interact(agent, moving);
                if (agent != before) {
                    if (kind == AgentProgram::Kind::Reorder) {
                        o[C_A0] = static_cast<int32_t>(agent[0]);
                        o[C_A1] = static_cast<int32_t>(agent[1]);
                        o[C_A2] = static_cast<int32_t>(agent[2]);
                        o[C_A3] = static_cast<int32_t>(agent[3]);
                        o[C_A4] = agent.size() > 4 ? static_cast<int32_t>(agent[4])
                                                   : static_cast<int32_t>(-1);
                    } else {
                        o[C_A0] = static_cast<int32_t>(agent[0]);
                        if (arity == 2) o[C_A1] = static_cast<int32_t>(agent[1]);
                    }
                }
                if (out) {
                    p0 = static_cast<int32_t>(out->fields[0]);
                    p1 = out->fields.size() > 1 ? static_cast<int32_t>(out->fields[1]) : -1;
                    p2 = out->fields.size() > 2 ? static_cast<int32_t>(out->fields[2]) : -1;
                } else {
                    p0 = p1 = p2 = plast = -1;
                }
            }
        }
        o[C_P0] = static_cast<int32_t>(p0);
        o[C_P1] = static_cast<int32_t>(p1);
        o[C_P2] = static_cast<int32_t>(p2);
        o[C_PLAST] = static_cast<int32_t>(plast);
        if (o[C_PEND] != -2) o[C_PEND] = static_cast<int32_t>(pend);

        // ---- finalization and writeback ---------------------------------
        bool end_here = pend >= 0;

        // reorder pads unused blocks with zeros
        if (kind == AgentProgram::Kind::Reorder && end_here && !sep && o[C_OUT] < 0)
            o[C_OUT] = 0;

        // leftward writeback channel with pending injection
        int wl0 = -1, wl1 = -1;
        if (!rw && r[C_WL0] >= 0) {
            wl0 = r[C_WL0];
            wl1 = r[C_WL1];
        }
        int bl0 = -1, bl1 = -1;
        if (!rw && r[C_BL0] >= 0) {
            bl0 = r[C_BL0];
            bl1 = r[C_BL1];
        }
        o[C_PD0] = c[C_PD0];
        o[C_PD1] = c[C_PD1];

        switch (kind) {
            case AgentProgram::Kind::Sort:
                if (end_here && has_agent && c[C_A0] >= 0 && wl0 < 0) {
                    wl0 = c[C_A0];
                    wl1 = 1;  // written into one block
                    o[C_A0] = -1;
                }
                break;
            case AgentProgram::Kind::Reorder:
                if (end_here && has_agent && c[C_A0] == TAG_PATH) {
                    // the surviving path emits its two known placements
                    o[C_PD0] = c[C_A1];  // (start, 0) queued first
                    o[C_PD1] = 0;
                    o[C_A0] = static_cast<int32_t>(TAG_REC);
                    o[C_A1] = -2;  // sentinel: second placement still owed
                    o[C_A2] = c[C_A2];
                    o[C_A3] = c[C_A3];
                }
                if (c[C_A0] == TAG_REC && c[C_A1] == -2 && o[C_PD0] < 0) {
                    o[C_PD0] = c[C_A2];  // (end, len)
                    o[C_PD1] = c[C_A3];
                    o[C_A1] = -3;
                }
                // glue records watch for both endpoints of their merged
                // path; the order of the two indices orients the offset
                if (c[C_A0] == TAG_REC && c[C_A1] >= 0 && bl0 >= 0) {
                    int32_t ri = -1, ei = -1;
                    bool seen_ref = c[C_ASEEN] >= 0 && c[C_ASEEN] % 2 == 0;
                    int32_t idx0 = c[C_ASEEN] >= 0 ? c[C_ASEEN] / 2 - 1 : -1;
                    if (c[C_ASEEN] < 0) {
                        if (bl0 == c[C_A1])
                            o[C_ASEEN] = static_cast<int32_t>(2 * (bl1 + 1));
                        else if (bl0 == c[C_A2])
                            o[C_ASEEN] = static_cast<int32_t>(2 * (bl1 + 1) + 1);
                    } else if (seen_ref && bl0 == c[C_A2]) {
                        ri = idx0;
                        ei = bl1;
                    } else if (!seen_ref && bl0 == c[C_A1]) {
                        ei = idx0;
                        ri = bl1;
                    }
                    if (ri >= 0 && ei >= 0) {
                        // completed: stash the target index, inject below
                        o[C_ASEEN] = ri < ei ? ri + c[C_A4] : ri - c[C_A4];
                        o[C_A1] = -5;
                    }
                }
                if (c[C_A0] == TAG_REC && c[C_A1] == -5 && o[C_PD0] < 0) {
                    o[C_PD0] = c[C_A3];
                    o[C_PD1] = c[C_ASEEN];
                    o[C_A1] = -4;  // done
                }
                break;
            case AgentProgram::Kind::Components:
                // resolution wave: born at the right border from the end
                // marker, moves left one cell every three steps
                if (end_here && rw) o[C_RESW] = 0;
                if (c[C_RESW] >= 0) {
                    if (c[C_RESW] < 2) o[C_RESW] = static_cast<int32_t>(c[C_RESW] + 1);
                }
                if (!rw && r[C_RESW] == 2) o[C_RESW] = 0;
                // assignments flow left; agents remember the label of their
                // smaller vertex
                if (bl0 >= 0 && has_agent && c[C_ALAB] < 0 &&
                    static_cast<Value>(bl0) ==
                        std::min(static_cast<Value>(c[C_A0]), static_cast<Value>(c[C_A1])))
                    o[C_ALAB] = static_cast<int32_t>(bl1);
                // on wave arrival: resolve and emit the assignment for the
                // larger vertex
                if (has_agent && c[C_RESW] < 0 && o[C_RESW] == 0 && c[C_A2] < 0) {
                    Value lo = std::min(static_cast<Value>(c[C_A0]),
                                        static_cast<Value>(c[C_A1]));
                    Value hi = std::max(static_cast<Value>(c[C_A0]),
                                        static_cast<Value>(c[C_A1]));
                    int label = o[C_ALAB] >= 0 ? o[C_ALAB] : static_cast<int>(lo);
                    o[C_A2] = static_cast<int32_t>(label);  // resolved label parked
                    if (hi != lo) {
                        o[C_PD0] = static_cast<int32_t>(hi);
                        o[C_PD1] = static_cast<int32_t>(label);
                    }
                }
                // the wave reflects at the left border into a writeback sweep
                if (lw && c[C_RESW] >= 0 && c[C_RESW] == 2) o[C_WSW] = 1;
                if (!lw && l[C_WSW] == 1) o[C_WSW] = 1;
                if (c[C_WSW] == 1) o[C_WSW] = -1;
                if (o[C_WSW] == 1 && c[C_A2] >= 0 && wl0 < 0 && c[C_A3] < 0) {
                    wl0 = c[C_A2];
                    wl1 = 2;  // label written into both blocks of the edge
                    o[C_A3] = 1;
                }
                break;
        }

        // pending placements inject into the leftward channel when free
        if (o[C_PD0] >= 0 && bl0 < 0) {
            bl0 = o[C_PD0];
            bl1 = o[C_PD1];
            o[C_PD0] = o[C_PD1] = -1;
        }
        o[C_WL0] = static_cast<int32_t>(wl0);
        o[C_WL1] = static_cast<int32_t>(wl1);
        o[C_BL0] = static_cast<int32_t>(bl0);
        o[C_BL1] = static_cast<int32_t>(bl1);

        // border turns for the rightward return channels; only reorder's
        // placements come back, components' assignments die at the wall
        int wr0 = -1, wr1 = -1, br0 = -1, br1 = -1;
        if (lw) {
            if (c[C_WL0] >= 0) {
                wr0 = c[C_WL0];
                wr1 = c[C_WL1];
            }
            if (c[C_BL0] >= 0 && kind == AgentProgram::Kind::Reorder) {
                br0 = c[C_BL0];
                br1 = c[C_BL1];
            }
        } else {
            wr0 = l[C_WR0];
            wr1 = l[C_WR1];
            br0 = l[C_BR0];
            br1 = l[C_BR1];
        }

        // rightward writeback: drop at free block heads
        o[C_SER0] = -1;
        o[C_SER1] = -1;
        // continue an in-flight serializer first
        if (!lw && l[C_SER0] >= 0 && l[C_SER1] > 0 && !sep) {
            int bits_left = l[C_SER1];
            o[C_OUT] = static_cast<int32_t>((l[C_SER0] >> (bits_left - 1)) & 1);
            if (bits_left > 1) {
                o[C_SER0] = l[C_SER0];
                o[C_SER1] = static_cast<int32_t>(bits_left - 1);
            }
        }
        auto start_serializer = [&](int value) {
            // writes this block: own bit now, the rest walk right
            o[C_OUT] = static_cast<int32_t>(m >= 1 ? ((value >> (m - 1)) & 1) : 0);
            if (m > 1) {
                o[C_SER0] = static_cast<int32_t>(value);
                o[C_SER1] = static_cast<int32_t>(m - 1);
            }
        };
        // a head is free until it captures a writeback value (marked -9)
        if (wr0 >= 0 && o[C_HEAD] == 1 && o[C_NEED] != -9 && o[C_SER0] < 0) {
            start_serializer(wr0);
            o[C_NEED] = -9;
            if (wr1 > 1) {
                wr1 -= 1;  // label repeats into the next block
            } else {
                wr0 = wr1 = -1;
            }
        }
        if (br0 >= 0 && o[C_HEAD] == 1) {
            if (br1 == 0) {
                if (o[C_NEED] != -9 && o[C_SER0] < 0) {
                    start_serializer(br0);
                    o[C_NEED] = -9;
                }
                br0 = br1 = -1;
            } else {
                br1 -= 1;
            }
        }
        o[C_WR0] = static_cast<int32_t>(wr0);
        o[C_WR1] = static_cast<int32_t>(wr1);
        o[C_BR0] = static_cast<int32_t>(br0);
        o[C_BR1] = static_cast<int32_t>(br1);

        return codec->encode(o);
    });

    a.input_alphabet = {"0", "1", "|"};
    for (int i = 0; i < 3; ++i) {
        Rec rec;
        rec.fill(-1);
        rec[C_RES] = static_cast<int32_t>(i);
        rec[C_COLL] = i < 2 ? static_cast<int32_t>(i) : static_cast<int32_t>(-1);
        a.input_states.push_back(codec->encode(rec));
    }
    a.output_alphabet = {"0", "1", "|"};
    a.project = [codec, border](State s) {
        if (s == border) return std::string("|");
        Rec rec = codec->decode(s);
        if (rec[C_RES] == 2) return std::string("|");
        int out = rec[C_OUT] >= 0 ? rec[C_OUT] : rec[C_RES];
        return std::string(out ? "1" : "0");
    };

    CompiledProgram cp;
    cp.program = prog;
    cp.automaton = std::move(a);
    cp.contract = OutputContract::linear(compiled_linear_factor(prog));
    AgentProgram oracle_prog = prog;
    cp.spec.oracle = [oracle_prog](const Word& w) {
        return expected_output_word(oracle_prog, w);
    };
    cp.spec.domain = [oracle_prog](const Word& w) {
        try {
            expected_output_word(oracle_prog, w);
            return true;
        } catch (const error&) {
            return false;
        }
    };
    cp.spec.input_alphabet = {"0", "1", "|"};
    cp.spec.output_alphabet = {"0", "1", "|"};
    return cp;
}

}  // namespace ca
