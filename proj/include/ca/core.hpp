#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace ca {

// ---------------------------------------------------------------------------
// errors

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct domain_error : error {
    using error::error;
};
struct malformed_input_error : error {
    using error::error;
};
struct trace_error : error {
    using error::error;
};
struct program_error : error {
    using error::error;
};
struct instance_error : error {
    using error::error;
};
struct budget_error : error {
    using error::error;
};
struct bound_error : error {
    using error::error;
};

// ---------------------------------------------------------------------------
// states and words

using State = uint32_t;

// A word over some symbol alphabet. Symbols are strings so that block-coded
// alphabets (assembly line) and plain letters share one representation.
using Word = std::vector<std::string>;

Word word_from_string(const std::string& s);   // one char per symbol
std::string word_to_string(const Word& w);     // concatenation

// Growable interner mapping state names to ids. Constructions with large
// structured state spaces intern states on demand from inside their rule
// closure; the table is locked so finished automata can be shared.
class StateTable {
  public:
    State intern(const std::string& name);
    std::optional<State> find(const std::string& name) const;
    const std::string& name(State s) const;
    size_t size() const;

  private:
    mutable std::mutex mu_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, State> index_;
};

// Total transition map over state triples. Either a dense table (small
// enumerated automata; exportable) or a function (layered constructions).
class Rule {
  public:
    static Rule dense(size_t n_states, std::vector<State> table);
    static Rule func(std::function<State(State, State, State)> fn);

    State operator()(State l, State c, State r) const;
    bool is_dense() const { return table_ != nullptr; }
    size_t dense_states() const { return n_states_; }
    const std::vector<State>& table() const;

  private:
    std::shared_ptr<const std::vector<State>> table_;
    size_t n_states_ = 0;
    std::function<State(State, State, State)> fn_;
};

// ---------------------------------------------------------------------------
// automaton

struct Automaton {
    std::shared_ptr<StateTable> states;
    State border = 0;
    Rule rule;
    std::vector<std::string> input_alphabet;  // symbol names, no '#'
    std::vector<State> input_states;          // parallel to input_alphabet
    std::vector<std::string> output_alphabet;
    std::function<std::string(State)> project;  // total over states

    State input_state(const std::string& symbol) const;
    std::string name(State s) const { return states->name(s); }
};

using Configuration = std::vector<State>;

struct SpaceTimeDiagram {
    size_t width = 0;
    std::vector<Configuration> rows;  // rows[t], t = 0..T

    size_t steps() const { return rows.empty() ? 0 : rows.size() - 1; }
    const Configuration& row(size_t t) const;
};

// One synchronous update. Cells outside 0..n-1 read as the border state.
Configuration step(const Automaton& a, const Configuration& c);

Configuration initial_configuration(const Automaton& a, const Word& w);

// Parallel input, T steps, T+1 rows.
SpaceTimeDiagram run(const Automaton& a, const Word& w, size_t T);

// Checks rows[t+1] == step(rows[t]) for all t.
bool recompute_diagram(const Automaton& a, const SpaceTimeDiagram& d);

// Cartesian product; both inputs are fed the same word.
Automaton product(const Automaton& a, const Automaton& b);
std::string product_label(const std::string& a, const std::string& b);

// True iff the diagrams of w and w' (differing exactly at cell j) agree at
// every site outside the light cone of j, up to time T.
bool dependency_cone_check(const Automaton& a, const Word& w, size_t j,
                           const Word& w2, size_t T);

// ---------------------------------------------------------------------------
// grouping (q cells x q steps per macro cell)

struct GroupedAutomaton {
    Automaton automaton;
    unsigned q = 1;
    std::function<std::vector<State>(State)> unpack;           // macro -> q base states
    std::function<State(std::span<const State>)> pack;         // q base states -> macro
    std::function<State(std::span<const State>, unsigned)> pack_partial;
    std::function<unsigned(State)> unpack_valid;
};

GroupedAutomaton group_automaton(const Automaton& base, unsigned q);
Configuration group_configuration(const GroupedAutomaton& g, const Configuration& base);
Configuration ungroup_configuration(const GroupedAutomaton& g, const Configuration& macro,
                                    size_t base_width);

// ---------------------------------------------------------------------------
// import/export

std::string diagram_to_json(const Automaton& a, const SpaceTimeDiagram& d);
std::string diagram_to_text(const Automaton& a, const SpaceTimeDiagram& d);

std::string automaton_to_json(const Automaton& a);   // dense rules only
Automaton automaton_from_json(const std::string& text);

}  // namespace ca
