#include "ca/build.hpp"

#include <algorithm>

namespace ca {

Automaton make_dense_automaton(
    const std::vector<std::string>& state_names, const std::string& border,
    const std::function<std::string(const std::string&, const std::string&,
                                    const std::string&)>& rule,
    const std::vector<std::string>& input_alphabet,
    const std::vector<std::string>& output_alphabet,
    const std::function<std::string(const std::string&)>& projection) {
    Automaton a;
    a.states = std::make_shared<StateTable>();
    for (const auto& nm : state_names) a.states->intern(nm);
    size_t n = a.states->size();
    if (n != state_names.size()) throw program_error("duplicate state names");

    auto bid = a.states->find(border);
    if (!bid) throw program_error("border state missing from state set");
    a.border = *bid;

    std::vector<State> table(n * n * n);
    for (State l = 0; l < n; ++l)
        for (State c = 0; c < n; ++c)
            for (State r = 0; r < n; ++r) {
                std::string out = rule(state_names[l], state_names[c], state_names[r]);
                auto id = a.states->find(out);
                if (!id)
                    throw program_error("rule produced unknown state: " + out);
                table[(static_cast<size_t>(l) * n + c) * n + r] = *id;
            }
    size_t bi = (static_cast<size_t>(a.border) * n + a.border) * n + a.border;
    if (table[bi] != a.border)
        throw program_error("border state must map (#,#,#) -> #");
    a.rule = Rule::dense(n, std::move(table));

    a.input_alphabet = input_alphabet;
    for (const auto& sym : input_alphabet) {
        auto id = a.states->find(sym);
        if (!id) throw program_error("input symbol is not a state: " + sym);
        if (*id == a.border) throw program_error("border cannot be an input symbol");
        a.input_states.push_back(*id);
    }
    a.output_alphabet = output_alphabet;

    auto proj = std::make_shared<std::vector<std::string>>();
    proj->reserve(n);
    for (const auto& nm : state_names) proj->push_back(projection(nm));
    a.project = [proj](State s) {
        if (s >= proj->size()) throw malformed_input_error("state outside projection");
        return (*proj)[s];
    };
    return a;
}

Automaton make_func_automaton(
    std::shared_ptr<StateTable> states, const std::string& border,
    std::function<State(State, State, State)> rule,
    const std::vector<std::string>& input_alphabet,
    const std::vector<State>& input_states,
    const std::vector<std::string>& output_alphabet,
    std::function<std::string(State)> project) {
    Automaton a;
    a.states = std::move(states);
    a.border = a.states->intern(border);
    a.rule = Rule::func(std::move(rule));
    a.input_alphabet = input_alphabet;
    a.input_states = input_states;
    a.output_alphabet = output_alphabet;
    a.project = std::move(project);
    return a;
}

namespace {

Automaton neighbour_rule(const std::vector<std::string>& alphabet, int pick) {
    std::vector<std::string> states = alphabet;
    states.push_back("#");
    return make_dense_automaton(
        states, "#",
        [pick](const std::string& l, const std::string& c, const std::string& r) {
            return pick < 0 ? l : (pick > 0 ? r : c);
        },
        alphabet, alphabet,
        [](const std::string& s) { return s; });
}

}  // namespace

Automaton identity_automaton(const std::vector<std::string>& alphabet) {
    return neighbour_rule(alphabet, 0);
}
Automaton copy_left_automaton(const std::vector<std::string>& alphabet) {
    return neighbour_rule(alphabet, -1);
}
Automaton copy_right_automaton(const std::vector<std::string>& alphabet) {
    return neighbour_rule(alphabet, 1);
}

}  // namespace ca
