#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ca/core.hpp"
#include "ca/timing.hpp"

namespace ca {

// A CA construction bundled with its timing contract and the pure function it
// is supposed to compute.
struct Construction {
    std::string name;
    Automaton automaton;
    OutputContract contract;
    FunctionSpec spec;

    // set when the automaton carries a synchronization layer (mirror)
    std::shared_ptr<Automaton> sync_layer;
    std::function<State(State)> sync_layer_part;
};

// Mirror in synchronous real time: every symbol travels to the right border,
// reflects, and rides back; at time n the reflected channel of cell i holds
// symbol n-1-i. Ships with a synchronization layer that fires at time n.
Construction mirror_sync(const std::vector<std::string>& alphabet);

// f(u1..un) = u_{n/2+1}..u_n u_1..u_{n/2} in strict real time (even n).
Construction rotate_half_f(const std::vector<std::string>& alphabet);

// g(u1..un) = u_{n/2}..u_1 u_n..u_{n/2+1} in strict real time (even n).
Construction cross_mirror_g(const std::vector<std::string>& alphabet);

// h(b^n u_1..u_n) = u_n..u_1 b^n in strict real time; `blank` is the padding
// input symbol.
Construction reflect_h(const std::vector<std::string>& alphabet,
                       const std::string& blank = "-");

// ---------------------------------------------------------------------------
// recognizers and their functional lift

struct Recognizer {
    std::string name;
    Automaton automaton;
    std::function<bool(State)> accepting;       // decision state at cell 0
    std::function<bool(const Word&)> member;    // language oracle
};

// Real-time recognizer for { w : first symbol = last symbol }.
Recognizer first_equals_last_recognizer(const std::vector<std::string>& alphabet);

// Lifts a recognizer to the indicator-prefix function 1 0^{n-1} / 0^n.
// real_time = true yields a strict contract, otherwise linear with factor k.
Construction recognizer_to_function(const Recognizer& r, bool real_time,
                                    Rational k = Rational(2));

// Named registry used by the CLI: mirror, f, g, h, indicator, identity-as-mirror.
std::vector<std::string> construction_names();
Construction construction_by_name(const std::string& name,
                                  const std::vector<std::string>& alphabet);

}  // namespace ca
