#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ca/core.hpp"

namespace ca {

// Builds an enumerated dense automaton. The transition function is evaluated
// over every state triple at construction time, so partial rules fail here
// rather than mid-simulation.
Automaton make_dense_automaton(
    const std::vector<std::string>& state_names, const std::string& border,
    const std::function<std::string(const std::string&, const std::string&,
                                    const std::string&)>& rule,
    const std::vector<std::string>& input_alphabet,
    const std::vector<std::string>& output_alphabet,
    const std::function<std::string(const std::string&)>& projection);

// Function-backed automaton over an open state universe. States are interned
// lazily by the rule closure; `project` must be total over every state the
// rule can produce.
Automaton make_func_automaton(
    std::shared_ptr<StateTable> states, const std::string& border,
    std::function<State(State, State, State)> rule,
    const std::vector<std::string>& input_alphabet,
    const std::vector<State>& input_states,
    const std::vector<std::string>& output_alphabet,
    std::function<std::string(State)> project);

// Simple rules used as fixtures: every cell copies itself / a neighbour.
Automaton identity_automaton(const std::vector<std::string>& alphabet);
Automaton copy_left_automaton(const std::vector<std::string>& alphabet);
Automaton copy_right_automaton(const std::vector<std::string>& alphabet);

}  // namespace ca
