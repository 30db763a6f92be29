#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ca/core.hpp"
#include "ca/timing.hpp"

namespace ca {

// ---------------------------------------------------------------------------
// macro level: an agent chain processing a token stream

using Value = uint64_t;

struct MacroToken {
    std::vector<Value> fields;  // [v] value, [a,b] edge, [s,e,len] path triplet
    std::string str() const;
};

// Programmable agent behaviour: what happens when a moving token reaches an
// occupied agent. The driver parks tokens at the first empty agent.
struct AgentProgram {
    enum class Kind { Sort, Reorder, Components };
    Kind kind = Kind::Sort;
    std::string name;
    unsigned arity = 1;      // fields per token
    unsigned bit_width = 0;  // declared m; all payloads < 2^m

    // interaction: (agent fields, moving token) -> (agent fields, token passed on)
    // The driver calls this for every occupied, non-finalized agent the token
    // passes; an empty optional means the token was absorbed.
    std::function<std::optional<MacroToken>(std::vector<Value>& agent,
                                            const MacroToken& moving)>
        interact;
};

struct MacroStep {
    size_t agent = 0;            // chain position involved
    std::string agent_before;
    std::string agent_after;
    std::string token_in;
    std::string token_out;
};

struct MacroResult {
    std::vector<Value> output;
    std::vector<MacroStep> trace;
    // vertices removed from the flow, one per merging agent (reorder and
    // components invariants)
    std::vector<Value> eliminated;
};

AgentProgram sort_program(unsigned m);
AgentProgram path_reorder_program(unsigned m);
AgentProgram components_program(unsigned m);

MacroResult macro_run(const AgentProgram& p, const std::vector<MacroToken>& tokens);

// ---------------------------------------------------------------------------
// block encoding: m-bit MSB-first blocks separated by '|'

Word encode_tokens(const AgentProgram& p, const std::vector<MacroToken>& tokens);
std::vector<MacroToken> decode_tokens(const AgentProgram& p, const Word& w);

// the word the compiled CA must show at its output row
Word expected_output_word(const AgentProgram& p, const Word& input);

// ---------------------------------------------------------------------------
// compilation to a CA over block-coded words

struct CompiledProgram {
    AgentProgram program;
    Automaton automaton;
    OutputContract contract;  // linear time, factor declared by the compiler
    FunctionSpec spec;        // oracle = macro_run over the block encoding
};

CompiledProgram compile_to_ca(const AgentProgram& p, unsigned m);

// declared linear factor of the compiled conveyor
Rational compiled_linear_factor(const AgentProgram& p);

}  // namespace ca
